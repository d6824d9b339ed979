"""Command line front end.

Subcommands: ``symbol`` (residue symbols), ``s2`` (one character-sum
evaluation), ``scan`` (an (X, Y) grid written as CSV for the plotting
tools) and ``verify`` (the built-in property suites).

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource/work-budget error.  Flags override values from an optional
flat key=value config file; the resolved configuration is embedded in
JSON reports and written next to scan CSVs as ``<out>.meta.json``.
``HECKE_THREADS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
import time
from typing import Optional

from . import reporting
from .charsum import (
    TruncationPolicy,
    WorkBudgetExceeded,
    error_envelope,
    run_s2,
)
from .gint import GaussianInt
from .smooth import SmoothWeight
from .suites import run_suite
from .symbols import quadratic_symbol, quartic_symbol

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    pass


def _parse_gaussian(text: str) -> GaussianInt:
    try:
        re_, im_ = text.split(",")
        return GaussianInt(int(re_), int(im_))
    except Exception as exc:
        raise UsageError(f"expected 're,im' integers, got {text!r}") from exc


def _parse_support(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(","))
    except Exception as exc:
        raise UsageError(f"expected 'lo,hi' floats, got {text!r}") from exc
    return lo, hi


def load_config_file(path: str) -> dict[str, str]:
    """Flat key=value file; blank lines and '#' comments ignored."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"bad config line: {raw.rstrip()}")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _resolve(args: argparse.Namespace, key: str, default, cast):
    """Flag value if given, else config-file value, else default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    cfg = getattr(args, "_config", {})
    if key in cfg:
        return cast(cfg[key])
    return default


def _default_threads() -> int:
    return max(1, int(os.environ.get("HECKE_THREADS", "1")))


def _weights(args) -> tuple[SmoothWeight, SmoothWeight]:
    phi_sup = _resolve(args, "phi_support", (0.0, 1.0), _parse_support)
    w_sup = _resolve(args, "w_support", (0.0, 1.0), _parse_support)
    phi_amp = _resolve(args, "phi_amplitude", 1.0, float)
    w_amp = _resolve(args, "w_amplitude", 1.0, float)
    if isinstance(phi_sup, str):
        phi_sup = _parse_support(phi_sup)
    if isinstance(w_sup, str):
        w_sup = _parse_support(w_sup)
    return (
        SmoothWeight(support=phi_sup, amplitude=float(phi_amp)),
        SmoothWeight(support=w_sup, amplitude=float(w_amp)),
    )


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(
        eps_tail=_resolve(args, "eps_tail", 1e-10, float),
        work_budget=int(_resolve(args, "work_budget", 400_000_000, float)),
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override")
    p.add_argument("--phi-support", dest="phi_support", help="Phi support 'lo,hi'")
    p.add_argument("--w-support", dest="w_support", help="W support 'lo,hi'")
    p.add_argument("--phi-amplitude", dest="phi_amplitude", type=float)
    p.add_argument("--w-amplitude", dest="w_amplitude", type=float)
    p.add_argument("--eps-tail", dest="eps_tail", type=float)
    p.add_argument("--work-budget", dest="work_budget", type=float)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument(
        "--zeta-prime-bound",
        dest="zeta_prime_bound",
        type=float,
        help="Euler-product sieve bound for zeta_K (default 1e8)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heckesum",
        description="Smoothed quadratic character sums over Z[i]",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbol", help="print quartic and quadratic residue symbols")
    p.add_argument("--a", required=True, help="numerator 're,im'")
    p.add_argument("--n", required=True, help="modulus 're,im' (odd norm)")

    p = sub.add_parser("s2", help="evaluate S2(X, Y) and write a JSON report")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--method", choices=("direct", "poisson", "both"), default="both")
    p.add_argument("--out", help="report path (stdout when omitted)")
    p.add_argument("--no-candidates", action="store_true")
    _add_common(p)

    p = sub.add_parser("scan", help="evaluate a geometric X grid, write CSV")
    p.add_argument("--x-grid", required=True, help="geometric grid 'start:stop:count'")
    p.add_argument("--y-rule", required=True, help="'fixed:V' or 'power:alpha'")
    p.add_argument("--method", choices=("direct", "poisson"), default="poisson")
    p.add_argument("--out", required=True, help="CSV output path")
    _add_common(p)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", choices=("gauss", "poisson", "series", "all"), required=True)
    p.add_argument("--out", help="JSON report path (stdout when omitted)")

    return ap


def _sym_str(v: complex) -> str:
    table = {1 + 0j: "1", -1 + 0j: "-1", 1j: "i", -1j: "-i", 0j: "0"}
    return table[complex(v)]


def cmd_symbol(args) -> int:
    a = _parse_gaussian(args.a)
    n = _parse_gaussian(args.n)
    if n.is_zero() or n.norm() % 2 == 0:
        print("error: modulus must have odd norm", file=sys.stderr)
        return EXIT_USAGE
    q4 = quartic_symbol(a, n)
    q2 = quadratic_symbol(a, n)
    print(f"quartic  ({a} / {n})_4 = {_sym_str(q4)}")
    print(f"quadratic ({a} / {n})  = {q2}")
    return EXIT_OK


def cmd_s2(args) -> int:
    phi, w = _weights(args)
    threads = args.threads if args.threads is not None else _default_threads()
    report = run_s2(
        args.x,
        args.y,
        phi,
        w,
        policy=_policy(args),
        method=args.method,
        threads=threads,
        with_candidates=not args.no_candidates,
        zeta_prime_bound=int(_resolve(args, "zeta_prime_bound", 10**8, float)),
    )
    text = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report.discrepancy is not None:
        scale = max(abs(report.s2_direct), 1e-300)
        print(
            f"discrepancy |direct - poisson| = {report.discrepancy:.6e}"
            f" (relative {report.discrepancy / scale:.6e})",
            file=sys.stderr,
        )
    return EXIT_OK


def _parse_grid(text: str) -> list[float]:
    try:
        start_s, stop_s, count_s = text.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except Exception as exc:
        raise UsageError(f"bad grid spec {text!r}; expected 'start:stop:count'") from exc
    if count < 1 or start <= 0 or stop < start:
        raise UsageError(f"bad grid spec {text!r}")
    if count == 1:
        return [start]
    ratio = (stop / start) ** (1.0 / (count - 1))
    return [start * ratio**j for j in range(count)]


def _y_for(rule: str, x: float) -> float:
    kind, _, value = rule.partition(":")
    if kind == "fixed":
        return float(value)
    if kind == "power":
        return x ** float(value)
    raise UsageError(f"bad y-rule {rule!r}; expected 'fixed:V' or 'power:alpha'")


def cmd_scan(args) -> int:
    xs = _parse_grid(args.x_grid)
    phi, w = _weights(args)
    policy = _policy(args)
    threads = args.threads if args.threads is not None else _default_threads()
    zeta_bound = int(_resolve(args, "zeta_prime_bound", 10**8, float))
    meta = {
        "x_grid": args.x_grid,
        "y_rule": args.y_rule,
        "method": args.method,
        "phi": phi.to_dict(),
        "w": w.to_dict(),
        "policy": policy.to_dict(),
        "threads": threads,
        "zeta_prime_bound": zeta_bound,
        "columns": list(reporting.SCAN_COLUMNS),
    }
    with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
        fh.write(reporting.stable_json(meta))
    fh = open(args.out, "w", encoding="utf-8")
    try:
        fh.write(reporting.SCAN_HEADER + "\n")
        fh.flush()
        for x in xs:
            y = _y_for(args.y_rule, x)
            t0 = time.perf_counter()
            report = run_s2(
                x,
                y,
                phi,
                w,
                policy=policy,
                method=args.method,
                threads=threads,
                with_candidates=True,
                zeta_prime_bound=zeta_bound,
            )
            seconds = time.perf_counter() - t0
            s2 = report.s2_poisson if report.s2_poisson is not None else report.s2_direct
            m0 = report.m0
            cands = report.candidates
            row = {
                "X": x,
                "Y": y,
                "s2": s2,
                "m0": m0,
                "cand_paper_pointwise": cands["paper_pointwise"],
                "cand_mellin": cands["mellin_variant"],
                "ratio_s2_m0": s2 / m0 if m0 else math.inf,
                "err_envelope_theta": error_envelope(x, y),
                "seconds": seconds,
                "terms": int(
                    report.counts.get("poisson_terms")
                    or report.counts.get("direct_terms")
                    or 0
                ),
            }
            fh.write(reporting.scan_row_text(row) + "\n")
            fh.flush()
    except KeyboardInterrupt:
        print("interrupted; partial results flushed", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    finally:
        fh.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite)
    text = reporting.stable_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in report["checks"]:
        status = "pass" if c["passed"] else "FAIL"
        print(f"[{status}] {c['suite']}/{c['name']}: {c['detail']}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAIL


_COORD_FLAGS = ("--a", "--n")


def _glue_coordinate_flags(argv: list[str]) -> list[str]:
    """Join '--a -1,2' into '--a=-1,2' so argparse accepts negative parts."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _COORD_FLAGS and i + 1 < len(argv):
            nxt = argv[i + 1]
            if re.fullmatch(r"-?\d+,-?\d+", nxt):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_coordinate_flags(list(argv)))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg_path = getattr(args, "config", None)
        args._config = load_config_file(cfg_path) if cfg_path else {}
    except (OSError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "symbol":
            return cmd_symbol(args)
        if args.command == "s2":
            return cmd_s2(args)
        if args.command == "scan":
            return cmd_scan(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise UsageError(f"unknown command {args.command!r}")
    except WorkBudgetExceeded as exc:
        print(f"error: {exc}; use --method poisson", file=sys.stderr)
        return EXIT_BUDGET
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
