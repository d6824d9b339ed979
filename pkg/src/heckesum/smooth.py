"""Compactly supported C-infinity test weights and their transforms.

The only weight family is the standard bump

    value(t) = amplitude * exp(-(b-a)^2 / ((t-a)(b-t)))   on (a, b),

zero outside, so the peak value is amplitude * e^-4 at the midpoint.

The radial Fourier-type transform used by the dual character sum is

    Wi(t) = integral over R^2 of cos(2*pi*t*y) W(x^2+y^2) dx dy,

evaluated here in polar coordinates.  The angular integral of
cos(z*sin(theta)) over a quarter turn is (pi/2) J0(z) (Bessel's
integral), which collapses the polar double integral to

    Wi(t) = 2*pi * integral_0^inf J0(2*pi*t*u) W(u^2) u du,

a single oscillatory integral handled with quarter-wavelength panels
and fixed-order Gauss-Legendre rules.  The test suite checks this
evaluation against the literal nested polar quadrature and against a
2-D Cartesian quadrature of the defining integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from numpy.polynomial import chebyshev
from scipy.special import j0


class QuadratureError(RuntimeError):
    """Raised when an adaptive rule cannot reach its tolerance."""


@dataclass(frozen=True)
class SmoothWeight:
    """A scaled-translated standard bump with support (a, b), 0 <= a < b."""

    kind: str = "standard_bump"
    support: tuple[float, float] = (0.0, 1.0)
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if self.kind != "standard_bump":
            raise ValueError(f"unknown weight kind {self.kind!r}")
        a, b = self.support
        if not (0.0 <= a < b):
            raise ValueError("support must satisfy 0 <= a < b")

    def __call__(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        a, b = self.support
        scale = (b - a) ** 2
        if np.ndim(t) == 0:
            tf = float(t)
            if tf <= a or tf >= b:
                return 0.0
            return self.amplitude * math.exp(-scale / ((tf - a) * (b - tf)))
        arr = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(arr)
        inside = (arr > a) & (arr < b)
        ta = arr[inside] - a
        tb = b - arr[inside]
        with np.errstate(under="ignore"):
            out[inside] = self.amplitude * np.exp(-scale / (ta * tb))
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "support_lo": self.support[0],
            "support_hi": self.support[1],
            "amplitude": self.amplitude,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SmoothWeight":
        return cls(
            kind=d.get("kind", "standard_bump"),
            support=(float(d["support_lo"]), float(d["support_hi"])),
            amplitude=float(d.get("amplitude", 1.0)),
        )


# ---------------------------------------------------------------------------
# Quadrature engines
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gl_nodes(k: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(k)


def _gl_apply(f: Callable, a: float, b: float, k: int):
    x, w = _gl_nodes(k)
    half = 0.5 * (b - a)
    vals = f(0.5 * (a + b) + half * x)
    return half * np.sum(w * vals)


def adaptive_gl(f: Callable, a: float, b: float, tol: float, max_depth: int = 48):
    """Deterministic adaptive Gauss-Legendre to absolute tolerance tol.

    f must accept numpy arrays; complex integrands are fine.
    """

    def rec(lo: float, hi: float, budget: float, depth: int):
        coarse = _gl_apply(f, lo, hi, 15)
        fine = _gl_apply(f, lo, hi, 25)
        if abs(fine - coarse) <= budget:
            return fine
        if depth >= max_depth:
            raise QuadratureError(
                f"panel budget exceeded on [{lo}, {hi}] (residual {abs(fine - coarse):.3e})"
            )
        mid = 0.5 * (lo + hi)
        return rec(lo, mid, 0.5 * budget, depth + 1) + rec(mid, hi, 0.5 * budget, depth + 1)

    return rec(a, b, tol, 0)


def integral(weight: SmoothWeight) -> float:
    """Total mass of the weight, to absolute tolerance 1e-12."""
    a, b = weight.support
    return float(adaptive_gl(weight, a, b, 1e-12).real)


def mellin(weight: SmoothWeight, s: complex) -> complex:
    """Mellin transform integral of weight(t) t^(s-1) dt; mellin(w, 1) = integral(w)."""
    s = complex(s)
    if s.real <= 0:
        raise ValueError("mellin requires Re s > 0")
    a, b = weight.support

    def f(t):
        return weight(t) * np.power(t.astype(np.complex128), s - 1.0)

    return complex(adaptive_gl(f, max(a, 0.0), b, 1e-12))


def _osc_panels(u0: float, u1: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights covering [u0, u1] with panels well under a quarter wavelength.

    The base panel count resolves the bump's endpoint behaviour; the
    t-proportional term keeps panels below 1/(5t), a fifth of the
    oscillation wavelength of J0(2*pi*t*u) in u.
    """
    n_panels = max(24, int(math.ceil(5.0 * max(t, 0.0) * (u1 - u0))))
    edges = np.linspace(u0, u1, n_panels + 1)
    x, w = _gl_nodes(16)
    half = 0.5 * (edges[1] - edges[0])
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mids[:, None] + half * x[None, :]).ravel()
    weights = np.tile(w * half, n_panels)
    return nodes, weights


def w_tilde(weight: SmoothWeight, t: float) -> float:
    """The radial transform Wi(t) for t >= 0 (real by construction)."""
    if t < 0:
        raise ValueError("w_tilde requires t >= 0")
    a, b = weight.support
    u0, u1 = math.sqrt(a), math.sqrt(b)
    nodes, wts = _osc_panels(u0, u1, t)
    vals = j0((2.0 * math.pi * t) * nodes) * weight(nodes * nodes) * nodes
    return 2.0 * math.pi * float(np.dot(wts, vals))


_DECAY_GRID = np.geomspace(1.0, 1.0e4, 257)
_DECAY_RUN = 8  # consecutive grid samples that must sit below eps


@lru_cache(maxsize=64)
def _decay_scan(weight: SmoothWeight) -> np.ndarray:
    return np.array([abs(w_tilde(weight, float(t))) for t in _DECAY_GRID])


def decay_threshold(weight: SmoothWeight, eps: float) -> float:
    """Smallest grid t with |Wi| <= eps (and staying below over the next
    few samples, to ride out oscillation dips), times a safety factor 2."""
    if eps < 1e-14:
        raise ValueError("eps below supported resolution 1e-14")
    vals = _decay_scan(weight)
    n = len(vals)
    for i in range(n):
        j = min(n, i + 1 + _DECAY_RUN)
        if np.all(vals[i:j] <= eps):
            return 2.0 * float(_DECAY_GRID[i])
    raise QuadratureError(f"no decay threshold below eps={eps} within the scan grid")


class TransformTable:
    """Chebyshev interpolant of Wi on [0, t_max] for vectorised lookups.

    Wi is entire of exponential type 2*pi*sqrt(b), so Chebyshev
    coefficients decay superexponentially once the degree passes
    pi*sqrt(b)*t_max; the constructor adds margin and then verifies the
    interpolant against direct quadrature at deterministic probe points.
    """

    def __init__(self, weight: SmoothWeight, t_max: float, probe_tol: float = 2e-12):
        self.weight = weight
        self.t_max = float(max(t_max, 1.0))
        _, b = weight.support
        deg = int(math.ceil(math.pi * math.sqrt(b) * self.t_max)) + 80

        def g(x: np.ndarray) -> np.ndarray:
            ts = 0.5 * (np.asarray(x) + 1.0) * self.t_max
            return np.array([w_tilde(weight, float(t)) for t in ts])

        self.coef = chebyshev.chebinterpolate(g, deg)
        xs = chebyshev.chebpts1(deg + 1)
        self.grid = np.sort(0.5 * (xs + 1.0) * self.t_max)
        self.values = np.array([0.0])  # filled below from the probe pass
        probes = self.t_max * (np.arange(17) + 0.5) / 17.0
        got = self(probes)
        want = np.array([w_tilde(weight, float(t)) for t in probes])
        err = float(np.max(np.abs(got - want)))
        if err > probe_tol:
            raise QuadratureError(f"transform table probe error {err:.3e} > {probe_tol}")
        self.values = self(self.grid)

    def __call__(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        arr = np.asarray(t, dtype=np.float64)
        if arr.size and (arr.min() < -1e-12 or arr.max() > self.t_max * (1 + 1e-12)):
            raise ValueError("lookup outside the tabulated range")
        out = chebyshev.chebval(2.0 * arr / self.t_max - 1.0, self.coef)
        if np.ndim(t) == 0:
            return float(out)
        return out
