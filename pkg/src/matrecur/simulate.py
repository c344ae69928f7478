"""Direct iteration, the multiplicity log-norm surrogate, and trend checks."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .errors import BudgetExceeded, ZeroNormInput
from .matrix import NormKind, kron, matmul, norm
from .multiplicity import profiles_upto
from .stability import (
    Kind,
    RecurrenceSpec,
    Verdict,
    VERDICT_TOL,
    analyze,
    overall_verdict,
)

DEFAULT_ENTRY_BUDGET = 10**6
OVERFLOW_LIMIT = 1e300
SLOPE_THRESHOLD = 1e-6


class Mode(str, enum.Enum):
    DIRECT = "direct"
    SURROGATE = "surrogate"


@dataclass
class Step:
    n: int
    rows: Optional[int]
    cols: Optional[int]
    norm_value: Optional[float]
    log_norm: Optional[float]


@dataclass
class Trajectory:
    steps: list[Step]
    mode: Mode
    n_max: int
    truncated_at: Optional[int] = None
    reason: Optional[str] = None

    def log_norms(self) -> list[Optional[float]]:
        return [s.log_norm for s in self.steps]

    def to_csv(self) -> str:
        """CSV with header ``n,rows,cols,norm,log_norm``; NA past truncation."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "rows", "cols", "norm", "log_norm"])
        na = "NA"
        for s in self.steps:
            w.writerow([
                s.n,
                na if s.rows is None else s.rows,
                na if s.cols is None else s.cols,
                na if s.norm_value is None else repr(s.norm_value),
                na if s.log_norm is None else repr(s.log_norm),
            ])
        last = self.steps[-1].n if self.steps else -1
        for n in range(last + 1, self.n_max + 1):
            w.writerow([n, na, na, na, na])
        return buf.getvalue()


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


def _safe_exp(x: float) -> Optional[float]:
    if x == -math.inf:
        return 0.0
    if x > 709.0:
        return None
    return math.exp(x)


def _record(n: int, X: np.ndarray, kind: NormKind) -> Step:
    v = norm(X, kind)
    return Step(n, X.shape[0], X.shape[1], v, _log(v))


def iterate(
    spec: RecurrenceSpec,
    n_max: int,
    entry_budget: int = DEFAULT_ENTRY_BUDGET,
    kind: NormKind = NormKind.FROBENIUS,
) -> Trajectory:
    """Compute A_0..A_{n_max} literally and record the norm of each.

    Stops early (``truncated_at``) when a Kronecker result would exceed
    ``entry_budget`` entries or an entry passes 1e300.
    """
    S = spec.S
    if n_max < S.j:
        raise ValueError(f"n_max must be >= j = {S.j}")
    if entry_budget < max(a.size for a in spec.initials):
        raise BudgetExceeded("entry_budget is smaller than an initial matrix")
    kind = NormKind(kind)
    mats = list(spec.initials)
    steps = [_record(n, mats[n], kind) for n in range(S.j)]
    for n in range(S.j, n_max + 1):
        factors = [mats[n - l] for l in spec.order]
        if spec.kind is Kind.KRONECKER:
            rows, cols = spec.B.shape
            for F in factors:
                rows *= F.shape[0]
                cols *= F.shape[1]
            if rows * cols > entry_budget:
                return Trajectory(steps, Mode.DIRECT, n_max, n, f"entry budget {entry_budget} exceeded ({rows}x{cols})")
        with np.errstate(over="ignore", invalid="ignore"):
            X = _next_value(spec, factors, entry_budget)
            big = float(np.max(np.abs(X)))
        if not math.isfinite(big) or big > OVERFLOW_LIMIT:
            return Trajectory(steps, Mode.DIRECT, n_max, n, "numeric overflow (entry magnitude above 1e300)")
        mats.append(X)
        mats[n - S.j] = None  # only the last j values are needed
        steps.append(_record(n, X, kind))
    return Trajectory(steps, Mode.DIRECT, n_max)


def _next_value(spec: RecurrenceSpec, factors: list, entry_budget: int) -> np.ndarray:
    if spec.kind is Kind.KRONECKER:
        X = spec.B
        for F in factors:
            X = kron(X, F, max_entries=entry_budget)
        return X
    X = factors[0]
    for F in factors[1:]:
        X = matmul(X, F)
    # a 1x1 B next to larger initials acts as a scalar
    return spec.B[0, 0] * X if spec.B.shape == (1, 1) else matmul(spec.B, X)


def _dim(base: int, counts: Sequence[int], sizes: Sequence[int], b_count: int) -> Optional[int]:
    if base == 1 and all(s == 1 for s in sizes):
        return 1
    log2 = b_count * math.log2(base) + sum(c * math.log2(s) for c, s in zip(counts, sizes))
    if log2 >= 63:
        return None
    out = base**b_count
    for c, s in zip(counts, sizes):
        out *= s**c
    return out


def surrogate(
    spec: RecurrenceSpec,
    n_max: int,
    kind: NormKind = NormKind.FROBENIUS,
    log_norms: Optional[tuple] = None,
) -> Trajectory:
    """log ||A_n|| bound #B_n log||B|| + sum_k #A_{k,n} log||A_k|| for n = 0..n_max.

    Exact for Kronecker recurrences and for scalars, an upper bound for
    matrix products.  Sums are carried in extended precision so that exact
    cancellations survive; ``log_norms`` = (log||B||, [log||A_k||]) may be
    passed as high-precision values in place of the float norms.
    """
    kind = NormKind(kind)
    if log_norms is None:
        b, a = spec.norms(kind)
        if b <= 0.0 or any(x <= 0.0 for x in a):
            raise ZeroNormInput("surrogate needs every factor norm to be positive")
        log_b = mpmath.log(mpmath.mpf(b))
        log_a = [mpmath.log(mpmath.mpf(x)) for x in a]
    else:
        log_b, log_a = log_norms[0], list(log_norms[1])
    kron_mode = spec.kind is Kind.KRONECKER
    steps = []
    for prof in profiles_upto(spec.S, n_max):
        digits = max(len(str(c)) for c in (prof.b_count, *prof.counts)) + 30
        with mpmath.workdps(digits):
            L = prof.b_count * log_b
            for c, lg in zip(prof.counts, log_a):
                if c:
                    L += c * lg
            L = float(L)
        if kron_mode:
            rows = _dim(spec.B.shape[0], prof.counts, [x.shape[0] for x in spec.initials], prof.b_count)
            cols = _dim(spec.B.shape[1], prof.counts, [x.shape[1] for x in spec.initials], prof.b_count)
        else:
            rows, cols = spec.initials[0].shape
        steps.append(Step(prof.n, rows, cols, _safe_exp(L), L))
    return Trajectory(steps, Mode.SURROGATE, n_max)


def _slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 2:
        return 0.0
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def trend_slopes(traj: Trajectory, m: int) -> list[float]:
    """Least-squares slopes over the last quarter, one per residue class mod m."""
    window = math.ceil(traj.n_max / 4)
    start = traj.n_max - window + 1
    out = []
    for r in range(m):
        pts = [(s.n, s.log_norm) for s in traj.steps if s.n >= start and s.n % m == r and s.log_norm is not None]
        if len(pts) < 2:
            # short runs: fall back to the last few points of the class
            pts = [(s.n, s.log_norm) for s in traj.steps if s.n % m == r and s.log_norm is not None][-2:]
        out.append(_slope([p[0] for p in pts], [p[1] for p in pts]))
    return out


def classify_trend(slopes: Sequence[float], threshold: float = SLOPE_THRESHOLD) -> str:
    if all(s < -threshold for s in slopes):
        return "decreasing"
    if all(s > threshold for s in slopes):
        return "increasing"
    if all(abs(s) <= threshold for s in slopes):
        return "flat"
    return "mixed"


_EXPECTED_TREND = {
    Verdict.CONVERGES: "decreasing",
    Verdict.DIVERGES: "increasing",
    Verdict.MARGINAL: "flat",
}


@dataclass
class NormCheck:
    norm: NormKind
    verdict: Verdict
    slopes: list[float]
    trend: str
    # None when the verdict is inconclusive (nothing to check against)
    consistent: Optional[bool]
    direct_steps: int = 0
    direct_ok: Optional[bool] = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "norm": self.norm.value,
            "verdict": self.verdict.value,
            "slopes": self.slopes,
            "trend": self.trend,
            "consistent": self.consistent,
            "direct_steps": self.direct_steps,
            "direct_ok": self.direct_ok,
            "note": self.note,
        }


@dataclass
class Agreement:
    overall_verdict: Verdict
    checks: list[NormCheck] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """False only when some trend contradicts an analytic verdict."""
        return all(c.consistent is not False and c.direct_ok is not False for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "overall_verdict": self.overall_verdict.value,
            "consistent": self.consistent,
            "per_norm": [c.to_dict() for c in self.checks],
        }


def verify(
    spec: RecurrenceSpec,
    n_max: int = 60,
    kinds: Sequence[NormKind] = (NormKind.FROBENIUS, NormKind.OPERATOR),
    tol: float = VERDICT_TOL,
    entry_budget: int = 10**5,
    direct_steps: int = 30,
) -> Agreement:
    """Check each analytic verdict against the trend of the surrogate trajectory.

    A short direct run (up to ``direct_steps``) is also compared with the
    surrogate: it must stay below it for products and match it for Kronecker
    recurrences.
    """
    reports = analyze(spec, kinds, tol)
    agreement = Agreement(overall_verdict(reports))
    for rep in reports:
        traj = surrogate(spec, n_max, rep.norm_kind)
        slopes = trend_slopes(traj, spec.S.m)
        trend = classify_trend(slopes)
        expected = _EXPECTED_TREND.get(rep.verdict)
        check = NormCheck(rep.norm_kind, rep.verdict, slopes, trend, None if expected is None else trend == expected)
        if expected is None:
            check.note = "analytically inconclusive, empirical trend only"
        direct = iterate(spec, min(n_max, max(direct_steps, spec.S.j)), entry_budget, rep.norm_kind)
        check.direct_steps = len(direct.steps)
        check.direct_ok = _direct_matches(direct, traj, spec.kind)
        agreement.checks.append(check)
    return agreement


def _direct_matches(direct: Trajectory, surr: Trajectory, kind: Kind) -> bool:
    for d, s in zip(direct.steps, surr.steps):
        if d.log_norm is None or d.log_norm == -math.inf:
            continue
        if kind is Kind.KRONECKER:
            if abs(d.log_norm - s.log_norm) > 1e-8:
                return False
        elif d.log_norm > s.log_norm + 1e-6:
            return False
    return True
