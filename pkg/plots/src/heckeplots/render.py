"""Figure rendering plus machine-readable sidecars.

Each plot writes ``<image>.data.json`` holding exactly the numbers that
were drawn, at full double precision, so tests compare data rather than
pixels.  The image format follows the output extension (.svg or .png).
"""

from __future__ import annotations

import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .frame import ScanFrame, SchemaError


def _check_extension(path: str) -> None:
    ext = os.path.splitext(path)[1].lower()
    if ext not in (".svg", ".png"):
        raise SchemaError(f"unsupported image extension {ext!r}; use .svg or .png")


def _write_sidecar(image_path: str, payload: dict) -> str:
    sidecar = image_path + ".data.json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return sidecar


def plot_ratio(csv_path: str, image_path: str) -> str:
    """Ratio S2/M0 against X on a log axis, with the error envelope band."""
    _check_extension(image_path)
    frame = ScanFrame.read(csv_path)
    if len(frame) < 2:
        raise SchemaError(f"{csv_path}: need at least 2 rows, found {len(frame)}")
    xs = frame.column("X")
    ratio = frame.column("ratio_s2_m0")
    env = frame.column("err_envelope_theta")

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.set_xscale("log")
    ax.axhline(1.0, color="0.4", lw=0.8, ls="--", label="ratio 1")
    ax.fill_between(
        xs,
        [1.0 - e for e in env],
        [1.0 + e for e in env],
        color="tab:blue",
        alpha=0.15,
        label="error envelope",
    )
    ax.plot(xs, ratio, "o-", color="tab:blue", label="S2 / M0")
    ax.set_xlabel("X")
    ax.set_ylabel("S2 / M0")
    ax.set_title("Convergence of the character sum to its main term")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(image_path)
    plt.close(fig)

    _write_sidecar(
        image_path,
        {
            "kind": "ratio",
            "source_csv": os.path.abspath(csv_path),
            "X": xs,
            "ratio_s2_m0": ratio,
            "err_envelope_theta": env,
            "reference": 1.0,
        },
    )
    return image_path


def plot_candidates(csv_path: str, image_path: str) -> str:
    """Closed-form candidate values against the exact M0, per scan row."""
    _check_extension(image_path)
    frame = ScanFrame.read(csv_path)
    if len(frame) < 1:
        raise SchemaError(f"{csv_path}: need at least 1 row")
    xs = frame.column("X")
    m0 = frame.column("m0")
    paper = frame.column("cand_paper_pointwise")
    mellin = frame.column("cand_mellin")

    import numpy as np

    idx = np.arange(len(xs))
    width = 0.27
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.bar(idx - width, m0, width, label="M0 (exact zero-frequency term)", color="0.3")
    ax.bar(idx, mellin, width, label="Mellin-value candidate", color="tab:green")
    ax.bar(idx + width, paper, width, label="pointwise-value candidate", color="tab:red")
    ax.set_xticks(idx)
    ax.set_xticklabels([f"{x:g}" for x in xs], fontsize=8)
    ax.set_xlabel("X")
    ax.set_ylabel("main-term value")
    ax.set_title("Main-term candidates against the exact M0")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(image_path)
    plt.close(fig)

    _write_sidecar(
        image_path,
        {
            "kind": "candidates",
            "source_csv": os.path.abspath(csv_path),
            "X": xs,
            "m0": m0,
            "cand_mellin": mellin,
            "cand_paper_pointwise": paper,
        },
    )
    return image_path
