"""Convergence margin, Kronecker divergence ratio and the scalar classifier."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .errors import (
    DimensionMismatch,
    NotConsecutive,
    NotScalar,
    SingletonSet,
    ZeroNormInput,
)
from .matrix import NormKind, as_matrix, norm
from .multiplicity import b_multiplicity, multiplicity
from .snacci import IndexSet, make_index_set, reduce_set, snacci_constant, snacci_terms

VERDICT_TOL = 1e-9


class Kind(str, enum.Enum):
    PRODUCT = "product"
    KRONECKER = "kronecker"


class Verdict(str, enum.Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    MARGINAL = "marginal"
    INCONCLUSIVE = "inconclusive"


# certified verdicts first
_VERDICT_RANK = [Verdict.CONVERGES, Verdict.DIVERGES, Verdict.MARGINAL, Verdict.INCONCLUSIVE]


class ScalarVerdict(str, enum.Enum):
    CONVERGES_TO_ZERO = "converges_to_zero"
    DIVERGES = "diverges"
    BOUNDED_MARGINAL = "bounded_marginal"
    TRIVIAL_CLOSED_FORM = "trivial_closed_form"


class RecurrenceSpec:
    """A_n = B * prod(A_{n-l} for l in order), or the same with Kronecker products.

    ``order`` is a permutation of S giving the factor order, leftmost first;
    B is always leftmost.  A 1x1 B next to larger square initials acts as a
    scalar.
    """

    def __init__(self, kind, S, B, initials, order=None):
        self.kind = Kind(kind)
        self.S = S if isinstance(S, IndexSet) else make_index_set(S)
        self.B = as_matrix(B)
        self.initials = tuple(as_matrix(a) for a in initials)
        self.order = tuple(self.S) if order is None else tuple(int(l) for l in order)
        if sorted(self.order) != list(self.S):
            raise ValueError(f"order {list(self.order)} is not a permutation of S = {self.S}")
        if len(self.initials) != self.S.j:
            raise DimensionMismatch(f"need {self.S.j} initial matrices (max of S), got {len(self.initials)}")
        if self.kind is Kind.PRODUCT:
            shape = self.initials[0].shape
            if shape[0] != shape[1]:
                raise DimensionMismatch(f"initials[0] must be square, got {shape}")
            for k, a in enumerate(self.initials):
                if a.shape != shape:
                    raise DimensionMismatch(f"initials[{k}] has shape {a.shape}, expected {shape}")
            if self.B.shape not in (shape, (1, 1)):
                raise DimensionMismatch(f"B has shape {self.B.shape}, expected {shape} or 1x1")

    @property
    def is_scalar(self) -> bool:
        return self.B.shape == (1, 1) and all(a.shape == (1, 1) for a in self.initials)

    def norms(self, kind: NormKind) -> tuple[float, list[float]]:
        return norm(self.B, kind), [norm(a, kind) for a in self.initials]

    def __eq__(self, other):
        if not isinstance(other, RecurrenceSpec):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.S == other.S
            and self.order == other.order
            and np.array_equal(self.B, other.B)
            and len(self.initials) == len(other.initials)
            and all(np.array_equal(a, b) for a, b in zip(self.initials, other.initials))
        )

    def __repr__(self):
        return f"RecurrenceSpec(kind={self.kind.value}, S={self.S}, order={list(self.order)})"


def _lambda(S: IndexSet, b_norm: float) -> int:
    return 0 if b_norm >= 1.0 else S.m - 1


def margin_from_norms(S: IndexSet, b_norm: float, a_norms: Sequence[float]) -> float:
    """Convergence margin from the factor norms; negative certifies A_n -> 0."""
    if len(S) < 2:
        raise SingletonSet(f"margin undefined for singleton {S}")
    if b_norm <= 0.0 or any(a <= 0.0 for a in a_norms):
        raise ZeroNormInput("a factor has zero norm; the margin is undefined (simulate instead)")
    j, m = S.j, S.m
    phi = snacci_constant(reduce_set(S))
    lam = _lambda(S, b_norm)
    total = phi ** (-(j + lam) / m + 1) / (phi - 1.0) * math.log(b_norm)
    for k, a in enumerate(a_norms):
        weight = sum(phi ** ((-k - l) / m) for l in S if l >= j - k)
        total += math.log(a) * weight
    return total


def stability_margin(spec: RecurrenceSpec, kind: NormKind = NormKind.FROBENIUS) -> float:
    b, a = spec.norms(kind)
    return margin_from_norms(spec.S, b, a)


def _log_kron_ratio(S: IndexSet, b_norm: float, a_norms: Sequence[float]) -> float:
    if not S.is_consecutive() or S.j < 2:
        raise NotConsecutive(f"divergence criterion needs S = {{1..j}} with j > 1, got {S}")
    if b_norm <= 0.0 or any(a <= 0.0 for a in a_norms):
        raise ZeroNormInput("a factor has zero norm; the divergence ratio is undefined")
    phi = snacci_constant(S)
    return math.log(b_norm) + sum((1.0 - phi ** (-k - 1)) * math.log(a) for k, a in enumerate(a_norms))


def kron_ratio_from_norms(S: IndexSet, b_norm: float, a_norms: Sequence[float]) -> float:
    try:
        return math.exp(_log_kron_ratio(S, b_norm, a_norms))
    except OverflowError:
        return math.inf


def kron_divergence_ratio(spec: RecurrenceSpec, kind: NormKind = NormKind.FROBENIUS) -> float:
    """||B|| * prod ||A_k||**(1 - phi_j**(-k-1)); above 1 certifies divergence."""
    if spec.kind is not Kind.KRONECKER and not spec.is_scalar:
        raise NotConsecutive("divergence criterion applies to Kronecker (or scalar) recurrences only")
    b, a = spec.norms(kind)
    return kron_ratio_from_norms(spec.S, b, a)


@dataclass
class StabilityReport:
    norm_kind: NormKind
    phi_reduced: float
    m: int
    lam: int
    margin: float
    kron_ratio: Optional[float]
    verdict: Verdict

    def to_dict(self) -> dict:
        d = {
            "norm": self.norm_kind.value,
            "margin": self.margin,
            "lambda": self.lam,
            "m": self.m,
            "phi_reduced": self.phi_reduced,
            "verdict": self.verdict.value,
        }
        if self.kron_ratio is not None:
            d["kron_ratio"] = self.kron_ratio
        return d


def _divergence_applies(spec: RecurrenceSpec) -> bool:
    # a product of 1x1 matrices is also their Kronecker product
    return spec.S.is_consecutive() and spec.S.j > 1 and (spec.kind is Kind.KRONECKER or spec.is_scalar)


def _report(spec: RecurrenceSpec, kind: NormKind, tol: float) -> StabilityReport:
    b, a = spec.norms(kind)
    margin = margin_from_norms(spec.S, b, a)
    ratio = None
    log_ratio = None
    if _divergence_applies(spec):
        log_ratio = _log_kron_ratio(spec.S, b, a)
        ratio = kron_ratio_from_norms(spec.S, b, a)

    if margin < -tol:
        verdict = Verdict.CONVERGES
    elif ratio is not None and ratio > 1.0 + tol:
        verdict = Verdict.DIVERGES
    elif abs(margin) <= tol or (log_ratio is not None and abs(ratio - 1.0) <= tol):
        verdict = Verdict.MARGINAL
    else:
        verdict = Verdict.INCONCLUSIVE
    return StabilityReport(
        norm_kind=kind,
        phi_reduced=snacci_constant(reduce_set(spec.S)),
        m=spec.S.m,
        lam=_lambda(spec.S, b),
        margin=margin,
        kron_ratio=ratio,
        verdict=verdict,
    )


def analyze(
    spec: RecurrenceSpec,
    kinds: Sequence[NormKind] = (NormKind.FROBENIUS, NormKind.OPERATOR),
    tol: float = VERDICT_TOL,
) -> list[StabilityReport]:
    return [_report(spec, NormKind(k), tol) for k in kinds]


def overall_verdict(reports: Sequence[StabilityReport]) -> Verdict:
    """Best verdict across norms; one certifying norm is enough."""
    return min((r.verdict for r in reports), key=_VERDICT_RANK.index)


@dataclass
class ScalarClassification:
    verdict: ScalarVerdict
    # for the trivial closed form: how a_0 * b**n behaves
    closed_form: Optional[ScalarVerdict] = None
    # per residue class mod m: (n, L_n, L_{n+m}) at the probe index
    probes: list = field(default_factory=list)

    def __str__(self):
        if self.closed_form is not None:
            return f"{self.verdict.value} ({self.closed_form.value})"
        return self.verdict.value


def _combine(verdicts: Sequence[ScalarVerdict]) -> ScalarVerdict:
    if ScalarVerdict.DIVERGES in verdicts:
        return ScalarVerdict.DIVERGES
    if all(v is ScalarVerdict.CONVERGES_TO_ZERO for v in verdicts):
        return ScalarVerdict.CONVERGES_TO_ZERO
    return ScalarVerdict.BOUNDED_MARGINAL


def _closed_form_verdict(spec: RecurrenceSpec) -> ScalarVerdict:
    # S = {s}: a_{qs+r} = a_r * b**q, one geometric sequence per residue r
    b = abs(complex(spec.B[0, 0]))
    per_class = []
    for a in spec.initials:
        a = abs(complex(a[0, 0]))
        if a == 0.0 or b < 1.0:
            per_class.append(ScalarVerdict.CONVERGES_TO_ZERO)
        elif b > 1.0:
            per_class.append(ScalarVerdict.DIVERGES)
        else:
            per_class.append(ScalarVerdict.BOUNDED_MARGINAL)
    return _combine(per_class)


def classify_scalar(
    spec: RecurrenceSpec,
    periods: int = 200,
    log_magnitudes: Optional[tuple] = None,
    tol: float = VERDICT_TOL,
) -> ScalarClassification:
    """Decide the fate of a 1x1 recurrence from exact multiplicities.

    L_n = #B_n log|b| + sum_k #A_{k,n} log|a_k| is evaluated in extended
    precision at n = periods*m + r and n + m for every residue r.  A class
    whose L_n is a vanishing fraction (<= tol) of its total log mass, or
    that does not grow by the asymptotic factor phi_{S/m} per period, is
    bounded; otherwise the sign of L decides.  ``log_magnitudes`` may supply
    (log|b|, [log|a_k|]) as high-precision numbers to bypass float rounding
    of the entries.
    """
    if not spec.is_scalar:
        raise NotScalar("classify_scalar needs 1x1 B and initials")
    S = spec.S
    if len(S) == 1:
        return ScalarClassification(ScalarVerdict.TRIVIAL_CLOSED_FORM, _closed_form_verdict(spec))

    b_abs = abs(complex(spec.B[0, 0]))
    a_abs = [abs(complex(a[0, 0])) for a in spec.initials]
    if log_magnitudes is None:
        log_b = None if b_abs == 0.0 else mpmath.log(mpmath.mpf(b_abs))
        log_a = [None if x == 0.0 else mpmath.log(mpmath.mpf(x)) for x in a_abs]
    else:
        log_b = log_magnitudes[0]
        log_a = list(log_magnitudes[1])

    m = S.m
    growth = snacci_constant(reduce_set(S))
    threshold = 1.0 + (growth - 1.0) / 2.0
    n0 = periods * m
    terms = snacci_terms(S, n0 + 2 * m + S.j + 1)
    per_class = []
    probes = []
    for r in range(m):
        n = n0 + r
        values = []
        zero_hit = False
        for nn in (n, n + m):
            mb = b_multiplicity(S, nn, terms)
            ma = [multiplicity(S, k, nn, terms) for k in range(S.j)]
            if (log_b is None and mb > 0) or any(la is None and c > 0 for la, c in zip(log_a, ma)):
                zero_hit = True
                break
            digits = max(len(str(x)) for x in [mb, *ma]) + 40
            with mpmath.workdps(digits):
                L = mpmath.mpf(0)
                mass = mpmath.mpf(0)
                pairs = [(mb, log_b)] + list(zip(ma, log_a))
                for count, lg in pairs:
                    if count:
                        L += count * lg
                        mass += count * abs(lg)
                values.append((L, mass))
        if zero_hit:
            per_class.append(ScalarVerdict.CONVERGES_TO_ZERO)
            probes.append((n, "-inf", "-inf"))
            continue
        (L0, mass0), (L1, mass1) = values
        probes.append((n, float(L0), float(L1)))
        if mass1 == 0 or abs(L1) <= tol * mass1:
            per_class.append(ScalarVerdict.BOUNDED_MARGINAL)
        elif L0 * L1 > 0 and abs(L1) >= threshold * abs(L0):
            per_class.append(ScalarVerdict.CONVERGES_TO_ZERO if L1 < 0 else ScalarVerdict.DIVERGES)
        else:
            per_class.append(ScalarVerdict.BOUNDED_MARGINAL)
    return ScalarClassification(_combine(per_class), probes=probes)
