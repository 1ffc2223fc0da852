"""Modular function evaluation on the upper half-plane.

The Klein j-invariant is computed from the Eisenstein series E4, E6 with a
tolerance-driven q-series truncation.  The fast evaluator works in complex128
and only promises convergence down to moderate heights; the mpmath evaluator
first reduces its argument into the fundamental domain and therefore works at
any height, which the segment-path integrals need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from . import kernels

__all__ = [
    "ModularFunctionSpec",
    "QSeriesError",
    "eval_j",
    "eval_j_mp",
    "eval_const_one",
    "j_function",
    "one_function",
    "builtin_function",
    "max_on_arc",
    "arc_points",
    "divisor_sums",
    "DEFAULT_Q_TOL",
    "TERM_CAP",
]

DEFAULT_Q_TOL = 1e-18
TERM_CAP = 200


class QSeriesError(ValueError):
    """The q-series cannot reach the requested tolerance for this input."""


@lru_cache(maxsize=None)
def divisor_sums(power: int, count: int = TERM_CAP + 56) -> tuple[int, ...]:
    """(sigma_power(1), ..., sigma_power(count)) by sieving."""
    sums = [0] * (count + 1)
    for d in range(1, count + 1):
        dp = d**power
        for n in range(d, count + 1, d):
            sums[n] += dp
    return tuple(sums[1:])


@lru_cache(maxsize=None)
def _sigma_arrays(count: int = TERM_CAP + 56) -> tuple[np.ndarray, np.ndarray]:
    s3 = np.array(divisor_sums(3, count), dtype=np.float64)
    s5 = np.array(divisor_sums(5, count), dtype=np.float64)
    return s3, s5


def _terms_needed(q_abs: float, tol: float) -> int:
    """Terms to sum so the next term of 504 sigma5(n) q^n drops below tol."""
    if q_abs >= 1.0:
        raise QSeriesError("q-series diverges: |q| >= 1 (point on or below the real axis?)")
    _, s5 = _sigma_arrays()
    qn = q_abs
    for n in range(1, TERM_CAP + 1):
        qn *= q_abs
        if 504.0 * s5[n] * qn < tol:
            return n
    raise QSeriesError(
        f"tolerance {tol} not reachable within {TERM_CAP} q-series terms (|q| = {q_abs:.4g}); "
        "the point lies too far below the arc"
    )


def eval_j(z, q_tol: float = DEFAULT_Q_TOL):
    """Klein j at one point or an array of points with Im(z) > 0.

    j = 1728 E4^3 / (E4^3 - E6^2) with E4, E6 truncated once the next term
    falls below q_tol (cap 200 terms).
    """
    arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(arr.imag <= 0):
        raise ValueError("j is only evaluated for Im(z) > 0")
    q = np.exp(2j * np.pi * arr)
    nterms = _terms_needed(float(np.max(np.abs(q))), q_tol)
    s3, s5 = _sigma_arrays()
    e4, e6 = kernels.eisenstein_pair(np.ascontiguousarray(q), s3, s5, nterms)
    e4cubed = e4**3
    values = 1728.0 * e4cubed / (e4cubed - e6**2)
    return values if np.ndim(z) else complex(values[0])


def discriminant_delta(z, q_tol: float = DEFAULT_Q_TOL):
    """(E4^3 - E6^2) / 1728: the normalised cusp form, exposed for tests."""
    arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    q = np.exp(2j * np.pi * arr)
    nterms = _terms_needed(float(np.max(np.abs(q))), q_tol)
    s3, s5 = _sigma_arrays()
    e4, e6 = kernels.eisenstein_pair(np.ascontiguousarray(q), s3, s5, nterms)
    values = (e4**3 - e6**2) / 1728.0
    return values if np.ndim(z) else complex(values[0])


def eval_const_one(z):
    """The constant modular function 1."""
    if np.ndim(z):
        return np.ones(np.shape(z), dtype=np.complex128)
    return 1.0 + 0.0j


def _reduce_to_fundamental(z: mpmath.mpc) -> mpmath.mpc:
    """Translate / invert z into |Re| <= 1/2, |z| >= 1 (modular reduction).

    Points that land within rounding distance of the boundary circle count
    as reduced: inverting there alternates between the two reflections
    forever (vertical path legs at half-integer real parts do hit the
    boundary exactly).
    """
    boundary = 1 - 16 * mpmath.mp.eps
    for _ in range(100_000):
        z = z - mpmath.nint(mpmath.re(z))
        if mpmath.re(z) ** 2 + mpmath.im(z) ** 2 < boundary:
            z = -1 / z
        else:
            return z
    raise RuntimeError("fundamental-domain reduction did not terminate")


def eval_j_mp(z: mpmath.mpc) -> mpmath.mpc:
    """j at any height, at the current mpmath precision.

    Reduces into the fundamental domain first, so |q| <= exp(-pi sqrt 3)
    and the series length only depends on the working precision.
    """
    if mpmath.im(z) <= 0:
        raise ValueError("j is only evaluated for Im(z) > 0")
    z = _reduce_to_fundamental(mpmath.mpc(z))
    if mpmath.im(z) > 1e6:
        # deep cusp neighbourhood: |j| ~ exp(2 pi Im) overwhelms any finite
        # exponent budget; geodesic neighbourhoods never reduce this high
        raise QSeriesError("point reduces into a cusp neighbourhood; j overflows")
    q = mpmath.exp(2j * mpmath.pi * z)
    nterms = int(mpmath.mp.dps * math.log(10) / (math.pi * math.sqrt(3.0))) + 12
    s3 = divisor_sums(3, max(nterms, 64))
    s5 = divisor_sums(5, max(nterms, 64))
    qn = mpmath.mpc(1)
    e4 = mpmath.mpc(1)
    e6 = mpmath.mpc(1)
    for n in range(nterms):
        qn *= q
        e4 += 240 * s3[n] * qn
        e6 -= 504 * s5[n] * qn
    e4cubed = e4**3
    return 1728 * e4cubed / (e4cubed - e6**2)


@dataclass(frozen=True)
class ModularFunctionSpec:
    """A modular function with a fast vectorised evaluator and (optionally)
    an arbitrary-precision evaluator usable anywhere in the half-plane."""

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    mp_evaluator: Callable[[mpmath.mpc], mpmath.mpc] | None = None
    q_tol: float = DEFAULT_Q_TOL

    def __call__(self, z):
        return self.evaluator(z)


def j_function(q_tol: float = DEFAULT_Q_TOL) -> ModularFunctionSpec:
    return ModularFunctionSpec(
        name="j",
        evaluator=lambda z: eval_j(z, q_tol),
        mp_evaluator=eval_j_mp,
        q_tol=q_tol,
    )


def one_function() -> ModularFunctionSpec:
    return ModularFunctionSpec(
        name="one",
        evaluator=eval_const_one,
        mp_evaluator=lambda z: mpmath.mpc(1),
    )


def builtin_function(name: str, q_tol: float = DEFAULT_Q_TOL) -> ModularFunctionSpec:
    if name == "j":
        return j_function(q_tol)
    if name in ("one", "1"):
        return one_function()
    raise ValueError(f"unknown modular function {name!r} (builtins: j, one)")


def arc_points(samples: int) -> np.ndarray:
    """Chebyshev-distributed points on the arc from rho to rho^2."""
    k = np.arange(samples)
    theta = np.pi / 2 + (np.pi / 6) * np.cos((2 * k + 1) * np.pi / (2 * samples))
    return np.exp(1j * theta)


def max_on_arc(f: ModularFunctionSpec, samples: int = 256) -> float:
    """Upper estimate of max |f| on the arc: sampled max times a 1% margin.

    The endpoints and the midpoint z = i are always sampled alongside the
    Chebyshev nodes, so coarse grids already see the peak of |j|.
    """
    if samples < 16:
        raise ValueError("need at least 16 sample points")
    theta = np.concatenate(
        [np.array([np.pi / 3, np.pi / 2, 2 * np.pi / 3]), np.angle(arc_points(samples))]
    )
    values = np.abs(f.evaluator(np.exp(1j * theta)))
    return float(values.max()) * 1.01
