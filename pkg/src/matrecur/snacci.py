"""S-nacci sequences, constants and coefficients.

For a finite set S of positive integers with j = max(S) the S-nacci sequence
is F_n = sum(F_{n-l} for l in S) with F_0 = ... = F_{j-2} = 0 and
F_{j-1} = 1.  S = {1, 2} gives the Fibonacci numbers, S = {1, ..., k} the
k-nacci numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional

from .errors import EmptySet, IndexOutOfRange, NonPositiveEntry, PeriodicSet, SingletonSet

ROOT_TOL = 1e-12


@dataclass(frozen=True)
class IndexSet:
    """Sorted set of distinct positive integers with its max ``j`` and gcd ``m``."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if not self.elements:
            raise EmptySet("index set must be nonempty")
        if any(l < 1 for l in self.elements):
            raise NonPositiveEntry(f"index set entries must be >= 1, got {list(self.elements)}")
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("elements must be strictly increasing; use make_index_set")

    @property
    def j(self) -> int:
        return self.elements[-1]

    @property
    def m(self) -> int:
        return reduce(math.gcd, self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        return item in self.elements

    def is_consecutive(self) -> bool:
        return self.elements == tuple(range(1, self.j + 1))

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"


def make_index_set(raw: Iterable[int]) -> IndexSet:
    raw = list(raw)
    if not raw:
        raise EmptySet("index set must be nonempty")
    for x in raw:
        if isinstance(x, bool) or int(x) != x:
            raise NonPositiveEntry(f"index set entries must be positive integers, got {x!r}")
        if x < 1:
            raise NonPositiveEntry(f"index set entries must be >= 1, got {x!r}")
    return IndexSet(tuple(sorted({int(x) for x in raw})))


def reduce_set(S: IndexSet) -> IndexSet:
    """Return S/m, i.e. every element divided by the gcd."""
    m = S.m
    return IndexSet(tuple(l // m for l in S))


def snacci_terms(S: IndexSet, count: int) -> list[int]:
    """Exact terms F_0 .. F_{count-1}."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    j = S.j
    terms = [0] * count
    for n in range(min(count, j)):
        terms[n] = 1 if n == j - 1 else 0
    for n in range(j, count):
        terms[n] = sum(terms[n - l] for l in S)
    return terms


def snacci_term(S: IndexSet, n: int, _cache: Optional[list[int]] = None) -> int:
    """F_n, with F at a negative index defined as 0."""
    if n < 0:
        return 0
    terms = _cache if _cache is not None and len(_cache) > n else snacci_terms(S, n + 1)
    return terms[n]


def _char_fn(S: IndexSet, x: float) -> float:
    return sum(x ** -l for l in S)


def snacci_constant(S: IndexSet, tol: float = ROOT_TOL) -> float:
    """Unique root phi > 1 of sum(phi**-l for l in S) == 1.

    The left side is strictly decreasing on (1, 2] with value |S| >= 2 at 1
    and below 1 at 2, so bisection always brackets the root.
    """
    if len(S) < 2:
        raise SingletonSet(f"S-nacci constant is degenerate for singleton {S}")
    lo, hi = 1.0, 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _char_fn(S, mid) > 1.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        f = _char_fn(S, x) - 1.0
        df = -sum(l * x ** (-l - 1) for l in S)
        step = f / df
        if not math.isfinite(step):
            break
        x -= step
    return x


def _gen_derivative(S: IndexSet, z: float) -> float:
    # G(z) = sum z**l, so G'(z) = sum l z**(l-1)
    return sum(l * z ** (l - 1) for l in S)


def snacci_coefficient(S: IndexSet) -> float:
    """Leading constant c with F_n ~ c * phi**n (gcd(S) must be 1)."""
    if S.m != 1:
        raise PeriodicSet(f"{S} has modulus {S.m}; reduce it first")
    phi = snacci_constant(S)
    return phi ** (2 - S.j) / _gen_derivative(S, 1.0 / phi)


def log_asymptotic_estimate(S: IndexSet, n: int) -> float:
    if S.m != 1:
        raise PeriodicSet(f"{S} has modulus {S.m}; reduce it first")
    return math.log(snacci_coefficient(S)) + n * math.log(snacci_constant(S))


def asymptotic_estimate(S: IndexSet, n: int) -> float:
    """c_S * phi_S**n, evaluated through logs; ``inf`` past float range."""
    log_val = log_asymptotic_estimate(S, n)
    try:
        return math.exp(log_val)
    except OverflowError:
        return math.inf


def companion_matrix(S: IndexSet) -> list[list[int]]:
    j = S.j
    Q = [[0] * j for _ in range(j)]
    for col in range(j):
        Q[0][col] = 1 if (col + 1) in S else 0
    for row in range(1, j):
        Q[row][row - 1] = 1
    return Q


def companion_power_entry(S: IndexSet, n: int, a: int, b: int) -> int:
    """Entry (a, b) (1-based) of Q**n via the closed form, valid for n >= j."""
    j = S.j
    if not (1 <= a <= j and 1 <= b <= j):
        raise IndexOutOfRange(f"entry ({a}, {b}) outside 1..{j}")
    if n < j:
        raise IndexOutOfRange(f"closed form needs n >= j = {j}, got n = {n}")
    terms = snacci_terms(S, n + 2 * j)
    return sum(snacci_term(S, n + j - 1 + b - a - l, terms) for l in S if l >= b)


@dataclass(frozen=True)
class SNacciProfile:
    set: IndexSet
    phi: float
    c: Optional[float]
    terms: tuple[int, ...]


def snacci_profile(S: IndexSet, count: int) -> SNacciProfile:
    phi = snacci_constant(S)
    c = snacci_coefficient(S) if S.m == 1 else None
    return SNacciProfile(S, phi, c, tuple(snacci_terms(S, count)))
