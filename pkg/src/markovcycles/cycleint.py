"""Cycle integrals of modular functions along closed T/V cycles.

Two independent routes compute the same value:

* `arc_integral` integrates f(z) * sum_i (1/(z-w_i) - 1/(z-conj w_i)) over
  the unit-circle arc between the sixth roots of unity, entirely in
  complex128 (the poles stay at least sqrt(3)/2 away from the arc).
* `segment_integral` follows the raw definition -sqrt(D) sum_i of
  f(z)/Q_w(z) over the straight segments between z_i = A_0^-1..A_i^-1 rho^2.
  The late segments of long cycles hug the real axis, so this route runs in
  mpmath at a precision chosen from the exact segment heights.

Normalising by the geodesic length 2 log(epsilon) gives the value the
convergence and interlacing statements are about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import kernels
from .contfrac import PeriodicCF, parse_cf, value_of
from .exact import QuadSurd
from .geodesic import CycleData, tv_cycle
from .modfun import ModularFunctionSpec

__all__ = [
    "QuadratureRule",
    "CycleValue",
    "QuadratureError",
    "SegmentHeightError",
    "arc_integral",
    "segment_integral",
    "normalized_value",
    "DEFAULT_NODES",
]

DEFAULT_NODES = 64
FLOAT_DIGITS = 30  # decimal digits requested for surd -> float conversion

_T_MAT = (1, 1, 0, 1)
_V_MAT = (1, 0, 1, 1)


class QuadratureError(RuntimeError):
    """Quadrature refinement error estimate exceeded the requested tolerance."""


class SegmentHeightError(ValueError):
    """A path segment drops below the configured minimum height."""


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights must have equal length")
        if abs(float(np.sum(self.weights)) - 2.0) > 1e-13:
            raise ValueError("weights of a [-1,1] rule must sum to 2")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @classmethod
    def gauss_legendre(cls, n: int) -> "QuadratureRule":
        if n < 2:
            raise ValueError("need at least 2 nodes")
        return _gauss_legendre_cached(n)


@lru_cache(maxsize=None)
def _gauss_legendre_cached(n: int) -> QuadratureRule:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights)


@dataclass(frozen=True)
class CycleValue:
    """One computed value f(w) with its normalisation and diagnostics."""

    raw: complex
    length: float
    normalized: complex
    nodes: int
    err_estimate: float

    def to_dict(self) -> dict:
        return {
            "raw_re": self.raw.real,
            "raw_im": self.raw.imag,
            "length": self.length,
            "nor_re": self.normalized.real,
            "nor_im": self.normalized.imag,
            "err_estimate": self.err_estimate,
        }


@lru_cache(maxsize=512)
def _pole_arrays(cycle: CycleData, digits: int = FLOAT_DIGITS) -> tuple[np.ndarray, np.ndarray]:
    """Float positions of the cycle elements and their conjugates."""
    w = np.array([float(e.to_decimal(digits)) for e in cycle.elements])
    wt = np.array([float(c.to_decimal(digits)) for c in cycle.conjugates])
    w.setflags(write=False)
    wt.setflags(write=False)
    return w, wt


def _arc_raw(f: ModularFunctionSpec, w: np.ndarray, wt: np.ndarray, rule: QuadratureRule) -> complex:
    theta = np.pi / 2 + (np.pi / 6) * rule.nodes
    z = np.exp(1j * theta)
    pole_sum = kernels.pole_pair_sums(np.ascontiguousarray(z), w, wt)
    fv = np.asarray(f.evaluator(z), dtype=np.complex128)
    integrand = fv * pole_sum * 1j * z
    return complex(np.sum(rule.weights * integrand) * (np.pi / 6))


def arc_integral(
    f: ModularFunctionSpec,
    cycle: CycleData,
    rule: QuadratureRule | None = None,
    tol: float | None = None,
    digits: int = FLOAT_DIGITS,
) -> CycleValue:
    """f(w) via the arc representation; error estimated by node refinement."""
    if digits < 15:
        raise ValueError("surd conversion needs at least 15 digits")
    rule = rule or QuadratureRule.gauss_legendre(DEFAULT_NODES)
    w, wt = _pole_arrays(cycle, digits)
    raw = _arc_raw(f, w, wt, rule)
    refined = _arc_raw(f, w, wt, QuadratureRule.gauss_legendre(rule.n + 32))
    err = abs(raw - refined)
    if tol is not None and err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3e} above tolerance {tol:.3e}")
    length = cycle.length
    return CycleValue(raw, length, raw / length, rule.n, err)


def _prefix_matrices(cycle: CycleData) -> list[tuple[int, int, int, int]]:
    mats = [(1, 0, 0, 1)]
    a, b, c, d = mats[0]
    for letter in cycle.word:
        la, lb, lc, ld = _T_MAT if letter == "T" else _V_MAT
        a, b, c, d = a * la + b * lc, a * lb + b * ld, c * la + d * lc, c * lb + d * ld
        mats.append((a, b, c, d))
    return mats


@lru_cache(maxsize=64)
def _gauss_legendre_mp(n: int, prec: int):
    """Gauss-Legendre nodes/weights refined to the given binary precision."""
    seeds, _ = np.polynomial.legendre.leggauss(n)
    with mpmath.workprec(prec + 30):
        nodes, weights = [], []
        steps = max(3, int(math.log2((prec + 30) / 40.0)) + 3)
        for seed in seeds:
            x = mpmath.mpf(float(seed))
            for _ in range(steps):
                p_prev, p = mpmath.mpf(1), x
                for k in range(2, n + 1):
                    p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
                dp = n * (x * p - p_prev) / (x * x - 1)
                x = x - p / dp
            p_prev, p = mpmath.mpf(1), x
            for k in range(2, n + 1):
                p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
            dp = n * (x * p - p_prev) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def _segment_raw(
    f: ModularFunctionSpec,
    cycle: CycleData,
    form: tuple[int, int, int],
    mats: list[tuple[int, int, int, int]],
    n_nodes: int,
) -> complex:
    fa, fb, fc = form
    disc = fb * fb - 4 * fa * fc
    nodes, weights = _gauss_legendre_mp(n_nodes, mpmath.mp.prec)
    rho2 = mpmath.mpc(mpmath.mpf(-1) / 2, mpmath.sqrt(3) / 2)
    points = [(a * rho2 + b) / (c * rho2 + d) for a, b, c, d in mats]
    if f.mp_evaluator is not None:
        fmp = f.mp_evaluator
    else:
        fmp = lambda zz: mpmath.mpc(f.evaluator(complex(zz)))  # noqa: E731
    total = mpmath.mpc(0)
    for z0, z1 in zip(points, points[1:]):
        mid = (z0 + z1) / 2
        half = (z1 - z0) / 2
        acc = mpmath.mpc(0)
        for x, wgt in zip(nodes, weights):
            zz = mid + half * x
            acc += wgt * fmp(zz) / ((fa * zz + fb) * zz + fc)
        total += acc * half
    return complex(-mpmath.sqrt(disc) * total)


def segment_integral(
    f: ModularFunctionSpec,
    cycle: CycleData,
    rule: QuadratureRule | None = None,
    tol: float | None = None,
    min_height: float = 0.0,
) -> CycleValue:
    """f(w) from the straight-segment path z_0 = rho^2, ..., z_l = A_w rho^2.

    The working precision follows the exact heights Im(z_i) =
    (sqrt(3)/2) / (c^2 - c d + d^2) of the segment endpoints, which sink
    like 1/trace^2; with `min_height` > 0 a path dipping lower is rejected
    instead.
    """
    rule = rule or QuadratureRule.gauss_legendre(DEFAULT_NODES)
    mats = _prefix_matrices(cycle)
    height_dens = [c * c - c * d + d * d for _, _, c, d in mats]
    lowest = math.sqrt(3) / 2 / max(height_dens)
    if min_height > 0.0 and lowest < min_height:
        raise SegmentHeightError(
            f"segment endpoint at height {lowest:.3e} below the configured "
            f"minimum {min_height:.3e}"
        )
    form = cycle.base.minimal_form()
    dps = 40 + len(str(max(height_dens)))
    with mpmath.workdps(dps):
        raw = _segment_raw(f, cycle, form, mats, rule.n)
        coarse = _segment_raw(f, cycle, form, mats, min(16, rule.n))
    err = abs(raw - coarse)
    if tol is not None and err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3e} above tolerance {tol:.3e}")
    length = cycle.length
    return CycleValue(raw, length, raw / length, rule.n, err)


def normalized_value(
    f: ModularFunctionSpec,
    target: QuadSurd | PeriodicCF | CycleData | str,
    rule: QuadratureRule | None = None,
    tol: float | None = None,
    digits: int = FLOAT_DIGITS,
) -> CycleValue:
    """Expand / walk / integrate in one call.

    Accepts a surd, a continued fraction (object or literal), or a finished
    cycle.  Rotated continued fractions are fine: the walk is allowed to
    slide onto the closed cycle first, which does not change the value.
    """
    if isinstance(target, str):
        target = parse_cf(target)
    if isinstance(target, PeriodicCF):
        target = value_of(target)
    if isinstance(target, QuadSurd):
        target = tv_cycle(target, allow_transient=True)
    if not isinstance(target, CycleData):
        raise TypeError(f"cannot compute a value from {type(target).__name__}")
    return arc_integral(f, target, rule=rule, tol=tol, digits=digits)
