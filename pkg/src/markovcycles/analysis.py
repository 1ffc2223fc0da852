"""Branch scans and numerical verification of the convergence, explicit-bound
and interlacing statements.

A scan walks one branch, computing the value, length and normalised value at
each step; the check functions grade the scan against the statements, with
the explicit delta bounds evaluated exactly as printed
(80 pi / 3 prefactor, contraction ratio lambda = (2/(1+sqrt 5))^2).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .contfrac import COINCIDE_RATIO, format_cf, value_of
from .cycleint import QuadratureRule, arc_integral
from .geodesic import tv_cycle
from .markov import Branch, LEFT
from .modfun import ModularFunctionSpec, max_on_arc

__all__ = [
    "LAMBDA",
    "BoundParameters",
    "ScanRecord",
    "BranchScan",
    "delta1",
    "delta2",
    "branch_scan",
    "check_convergence",
    "check_growth_bound",
    "check_step_bound",
    "check_interlacing",
]

LAMBDA = COINCIDE_RATIO  # (2 / (1 + sqrt 5))**2 = 0.381966...
_PREFACTOR = 80.0 * math.pi / 3.0
UNINFORMATIVE_FACTOR = 100.0  # a bound above 100 max|f| says nothing useful


@dataclass(frozen=True)
class BoundParameters:
    """Parameters of the explicit error bounds."""

    r: int
    N: int
    ratio: float = LAMBDA


def delta1(r: int, N: int) -> float:
    """(80 pi/3) (2 + r(N+1)) lambda^(rN-1): bound for f(w_n) - n f(w_0) - K."""
    if r < 1 or N < 1:
        raise ValueError("delta1 needs r >= 1 and N >= 1")
    return _PREFACTOR * (2 + r * (N + 1)) * LAMBDA ** (r * N - 1)


def delta2(n: int, r: int) -> float:
    """(80 pi/3) (n+2) r lambda^(rn-1): bound for f(w_{n+1}) - f(w_n) - f(w_0)."""
    if r < 1 or n < 1:
        raise ValueError("delta2 needs n >= 1 and r >= 1")
    return _PREFACTOR * (n + 2) * r * LAMBDA ** (r * n - 1)


@dataclass(frozen=True)
class ScanRecord:
    """Values attached to w_n on a branch."""

    n: int
    markov_number: int
    cf: str
    length: float
    raw: complex
    normalized: complex
    err_estimate: float
    delta_to_base: float  # |f_nor(w_n) - f_nor(w_0)|

    @property
    def log_epsilon(self) -> float:
        return self.length / 2.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "markov_number": self.markov_number,
            "cf": self.cf,
            "length": self.length,
            "f_re": self.raw.real,
            "f_im": self.raw.imag,
            "fnor_re": self.normalized.real,
            "fnor_im": self.normalized.imag,
            "err_estimate": self.err_estimate,
            "delta_to_w0": self.delta_to_base,
        }


@dataclass(frozen=True)
class BranchScan:
    """Records for n = 0..n_max on one branch, plus the bound ingredients."""

    branch: str
    orientation_left: bool
    is_extremal: bool  # leftmost or rightmost branch
    function: str
    r: int
    max_abs_f: float
    records: tuple[ScanRecord, ...]
    # the fixed predecessor ordering should give Im f(w) > 0 for f = j;
    # a violation is surfaced here instead of silently reordering
    orientation_flags: tuple[int, ...] = ()

    @property
    def n_max(self) -> int:
        return len(self.records) - 1

    @property
    def bounds_applicable(self) -> bool:
        """The printed deltas cover left branches other than the leftmost."""
        return self.orientation_left and not self.is_extremal

    def record(self, n: int) -> ScanRecord:
        return self.records[n]

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "function": self.function,
            "r": self.r,
            "max_abs_f": self.max_abs_f,
            "orientation_flags": list(self.orientation_flags),
            "records": [rec.to_dict() for rec in self.records],
        }


def _thread_count() -> int:
    value = os.environ.get("MARKOV_CYCLES_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def branch_scan(
    f: ModularFunctionSpec,
    branch: Branch,
    n_max: int,
    rule: QuadratureRule | None = None,
    threads: int | None = None,
) -> BranchScan:
    """Walk w_0..w_n_max of the branch and record everything the checks need."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    threads = _thread_count() if threads is None else max(1, threads)

    def compute(n: int):
        cf = branch.quadratic(n)
        cycle = tv_cycle(value_of(cf))
        return n, cf, arc_integral(f, cycle, rule=rule), cycle

    indices = range(n_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(compute, indices))
    else:
        results = [compute(n) for n in indices]

    base_normalized = results[0][2].normalized
    records = []
    for n, cf, value, cycle in results:
        trace = cycle.trace
        if trace % 3 != 0:
            raise ArithmeticError("cycle trace of a Markov quadratic must be 3m")
        records.append(
            ScanRecord(
                n=n,
                markov_number=trace // 3,
                cf=format_cf(cf),
                length=value.length,
                raw=value.raw,
                normalized=value.normalized,
                err_estimate=value.err_estimate,
                delta_to_base=abs(value.normalized - base_normalized),
            )
        )
    flagged = ()
    if f.name == "j":
        flagged = tuple(rec.n for rec in records if rec.raw.imag <= 0)
    return BranchScan(
        branch=branch.descriptor(),
        orientation_left=branch.orientation == LEFT,
        is_extremal=branch.is_leftmost or branch.is_rightmost,
        function=f.name,
        r=branch.r,
        max_abs_f=max_on_arc(f),
        records=tuple(records),
        orientation_flags=flagged,
    )


def _noise_floor(scan: BranchScan) -> float:
    return 10.0 * max(
        rec.err_estimate / rec.length if rec.length else rec.err_estimate
        for rec in scan.records
    )


@dataclass(frozen=True)
class ConvergenceReport:
    passed: bool
    trivial: bool
    monotone_from: int | None
    halving_checks: tuple[tuple[int, int, float], ...]  # (n, 2n, d_2n / d_n)
    deltas: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "trivial": self.trivial,
            "monotone_from": self.monotone_from,
            "halving_checks": [list(h) for h in self.halving_checks],
            "deltas": list(self.deltas),
        }


def check_convergence(
    scan: BranchScan,
    monotone_by: int = 3,
    halving_factor: float = 1.0 / 1.6,
) -> ConvergenceReport:
    """d_n = |f_nor(w_n) - f_nor(w_0)| must decrease strictly from some
    n0 <= monotone_by on, and d_2n <= halving_factor * d_n for doublings
    with n >= 3 (the asymptotic ratio is 1/2; on the slowest branch, where
    the predecessor period has a single entry, d_4/d_2 still sits at 0.66)."""
    if scan.n_max < 4:
        raise ValueError("convergence check needs a scan of depth >= 4")
    deltas = [rec.delta_to_base for rec in scan.records[1:]]  # d_1 .. d_max
    floor = _noise_floor(scan)
    if all(d <= floor for d in deltas):
        return ConvergenceReport(True, True, None, (), tuple(deltas))

    monotone_from = None
    for start in range(1, scan.n_max):
        tail = deltas[start - 1 :]
        if all(a > b for a, b in zip(tail, tail[1:])):
            monotone_from = start
            break
    halvings = []
    ok_halving = True
    for n in range(3, scan.n_max // 2 + 1):
        ratio = deltas[2 * n - 1] / deltas[n - 1]
        halvings.append((n, 2 * n, ratio))
        ok_halving = ok_halving and ratio <= halving_factor
    passed = monotone_from is not None and monotone_from <= monotone_by and ok_halving
    return ConvergenceReport(passed, False, monotone_from, tuple(halvings), tuple(deltas))


@dataclass(frozen=True)
class BoundReport:
    passed: bool
    applicable: bool
    uninformative: bool
    bound_name: str
    params: BoundParameters
    worst_ratio: float  # max over n of deviation / bound
    deviations: tuple[tuple[int, float, float], ...]  # (n, deviation, bound)
    log_unit_passed: bool
    log_unit_deviations: tuple[tuple[int, float, float], ...]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "applicable": self.applicable,
            "uninformative": self.uninformative,
            "bound": self.bound_name,
            "r": self.params.r,
            "N": self.params.N,
            "worst_ratio": self.worst_ratio,
            "deviations": [list(d) for d in self.deviations],
            "log_unit_passed": self.log_unit_passed,
            "log_unit_deviations": [list(d) for d in self.log_unit_deviations],
        }


def check_growth_bound(scan: BranchScan, N: int) -> BoundReport:
    """|f(w_n) - n f(w_0) - K| <= 2 delta1(r, N) max|f| for N < n <= n_max,
    with K estimated as f(w_N) - N f(w_0) (hence the doubled bound), plus the
    same statement for log(epsilon) with bound 2 delta1 (the f = 1 case)."""
    params = BoundParameters(scan.r, N)
    if not scan.bounds_applicable:
        return BoundReport(True, False, False, "delta1", params, 0.0, (), True, ())
    if not 1 <= N < scan.n_max:
        raise ValueError("need 1 <= N < n_max")
    bound_value = 2.0 * delta1(scan.r, N) * scan.max_abs_f
    base = scan.record(0)
    k_hat = scan.record(N).raw - N * base.raw
    k_hat_log = scan.record(N).log_epsilon - N * base.log_epsilon
    deviations = []
    log_unit = []
    for n in range(N + 1, scan.n_max + 1):
        rec = scan.record(n)
        deviations.append((n, abs(rec.raw - n * base.raw - k_hat), bound_value))
        log_unit.append(
            (
                n,
                abs(rec.log_epsilon - n * base.log_epsilon - k_hat_log),
                2.0 * delta1(scan.r, N),
            )
        )
    passed = all(dev <= b for _, dev, b in deviations)
    log_unit_ok = all(dev <= b for _, dev, b in log_unit)
    worst = max((dev / b for _, dev, b in deviations), default=0.0)
    uninformative = 2.0 * delta1(scan.r, N) >= UNINFORMATIVE_FACTOR
    return BoundReport(
        passed, True, uninformative, "delta1", params, worst,
        tuple(deviations), log_unit_ok, tuple(log_unit),
    )


def check_step_bound(scan: BranchScan) -> BoundReport:
    """|f(w_{n+1}) - f(w_n) - f(w_0)| <= delta2(n, r) max|f| for 1 <= n < n_max,
    plus |log eps_{n+1} - log eps_n - log eps_0| <= delta2(n, r)."""
    params = BoundParameters(scan.r, 0)
    if not scan.bounds_applicable:
        return BoundReport(True, False, False, "delta2", params, 0.0, (), True, ())
    base = scan.record(0)
    deviations = []
    log_unit = []
    for n in range(1, scan.n_max):
        bound_value = delta2(n, scan.r) * scan.max_abs_f
        rec, nxt = scan.record(n), scan.record(n + 1)
        deviations.append((n, abs(nxt.raw - rec.raw - base.raw), bound_value))
        log_unit.append(
            (
                n,
                abs(nxt.log_epsilon - rec.log_epsilon - base.log_epsilon),
                delta2(n, scan.r),
            )
        )
    passed = all(dev <= b for _, dev, b in deviations)
    log_unit_ok = all(dev <= b for _, dev, b in log_unit)
    worst = max((dev / b for _, dev, b in deviations), default=0.0)
    uninformative = delta2(1, scan.r) >= UNINFORMATIVE_FACTOR
    return BoundReport(
        passed, True, uninformative, "delta2", params, worst,
        tuple(deviations), log_unit_ok, tuple(log_unit),
    )


@dataclass(frozen=True)
class InterlacingReport:
    passed: bool
    trivial: bool
    holds_from: int | None  # least N with strict interlacing N <= n < n_max
    ties: tuple[int, ...]
    side_re: int  # +1: values above the limit, -1: below, 0: mixed/tied
    side_im: int
    margin: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "trivial": self.trivial,
            "holds_from": self.holds_from,
            "ties": list(self.ties),
            "side_re": self.side_re,
            "side_im": self.side_im,
            "margin": self.margin,
        }


def _strictly_between(lo_ref: float, mid: float, hi_ref: float, margin: float) -> bool:
    lo, hi = min(lo_ref, hi_ref), max(lo_ref, hi_ref)
    return lo + margin < mid < hi - margin


def check_interlacing(scan: BranchScan, required_by: int | None = None) -> InterlacingReport:
    """Is Re/Im of f_nor(w_{n+1}) strictly between f_nor(w_0) and f_nor(w_n)?

    Strictness margin: 10x the quadrature error estimate.  Ties (any of the
    three values closer than the margin) are recorded, not graded.
    """
    if scan.n_max < 3:
        raise ValueError("interlacing check needs a scan of depth >= 3")
    margin = _noise_floor(scan)
    base = scan.record(0).normalized
    verdicts: dict[int, bool] = {}
    ties = []
    for n in range(1, scan.n_max):
        cur = scan.record(n).normalized
        nxt = scan.record(n + 1).normalized
        spans = (
            abs(cur.real - base.real), abs(nxt.real - base.real), abs(nxt.real - cur.real),
            abs(cur.imag - base.imag), abs(nxt.imag - base.imag), abs(nxt.imag - cur.imag),
        )
        if min(spans) <= margin:
            ties.append(n)
            continue
        verdicts[n] = _strictly_between(base.real, nxt.real, cur.real, margin) and (
            _strictly_between(base.imag, nxt.imag, cur.imag, margin)
        )
    if not verdicts and ties:
        return InterlacingReport(True, True, None, tuple(ties), 0, 0, margin)
    holds_from = None
    for start in sorted(verdicts):
        if all(v for n, v in verdicts.items() if n >= start):
            holds_from = start
            break
    passed = holds_from is not None and (required_by is None or holds_from <= required_by)

    def side(part) -> int:
        signs = {
            (part(scan.record(n).normalized) > part(base)) - (part(scan.record(n).normalized) < part(base))
            for n in range(max(holds_from or 1, 1), scan.n_max + 1)
        }
        return signs.pop() if len(signs) == 1 else 0

    return InterlacingReport(
        passed,
        False,
        holds_from,
        tuple(ties),
        side(lambda z: z.real),
        side(lambda z: z.imag),
        margin,
    )
