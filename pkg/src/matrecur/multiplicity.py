"""How often each initial value and the constant B occur in the expanded A_n.

In A_n = B * prod(A_{n-l} for l in S) every A_n with n >= j unfolds into a
word over the letters B, A_0, ..., A_{j-1}.  The counts follow the S-nacci
recurrence and have a closed form in the S-nacci numbers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceeded, IndexOutOfRange, SingletonSet
from .snacci import (
    IndexSet,
    reduce_set,
    snacci_coefficient,
    snacci_constant,
    snacci_term,
    snacci_terms,
)

DEFAULT_WORD_BUDGET = 10**6


def _check_k(S: IndexSet, k: int) -> None:
    if not 0 <= k < S.j:
        raise IndexOutOfRange(f"initial index k={k} outside 0..{S.j - 1}")


def multiplicity(S: IndexSet, k: int, n: int, _terms: Optional[list[int]] = None) -> int:
    """Number of occurrences of A_k in A_n."""
    _check_k(S, k)
    if n < 0:
        raise IndexOutOfRange(f"n must be nonnegative, got {n}")
    j = S.j
    if n < j:
        return 1 if n == k else 0
    terms = _terms if _terms is not None and len(_terms) >= n + j else snacci_terms(S, n + j)
    return sum(snacci_term(S, n + j - 1 - k - l, terms) for l in S if l >= j - k)


def b_multiplicity(S: IndexSet, n: int, _terms: Optional[list[int]] = None) -> int:
    """Number of occurrences of B in A_n: F_0 + ... + F_{n-1}."""
    if n <= 0:
        return 0
    terms = _terms if _terms is not None and len(_terms) >= n else snacci_terms(S, n)
    return sum(terms[:n])


def b_multiplicity_leading(S: IndexSet, n: int) -> float:
    """Leading term c/(phi - 1) * phi**floor(n/m) of the B count, phi = phi_{S/m}.

    Diagnostic only; the constant and decaying remainders are dropped.
    """
    if len(S) < 2:
        raise SingletonSet(f"leading term undefined for singleton {S}")
    R = reduce_set(S)
    phi = snacci_constant(R)
    c = snacci_coefficient(R)
    log_val = math.log(c / (phi - 1.0)) + (n // S.m) * math.log(phi)
    try:
        return math.exp(log_val)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class MultiplicityProfile:
    set: IndexSet
    n: int
    counts: tuple[int, ...]
    b_count: int


def multiplicity_profile(S: IndexSet, n: int) -> MultiplicityProfile:
    terms = snacci_terms(S, n + S.j)
    counts = tuple(multiplicity(S, k, n, terms) for k in range(S.j))
    return MultiplicityProfile(S, n, counts, b_multiplicity(S, n, terms))


def profiles_upto(S: IndexSet, n_max: int) -> list[MultiplicityProfile]:
    """Profiles for n = 0..n_max sharing one table of S-nacci numbers."""
    terms = snacci_terms(S, n_max + S.j + 1)
    out = []
    b_total = 0
    for n in range(n_max + 1):
        counts = tuple(multiplicity(S, k, n, terms) for k in range(S.j))
        out.append(MultiplicityProfile(S, n, counts, b_total))
        b_total += terms[n]
    return out


def letter(k: int) -> str:
    return f"A_{k}"


B_LETTER = "B"


@dataclass(frozen=True)
class Word:
    letters: tuple[str, ...]

    def __len__(self):
        return len(self.letters)

    def counts(self) -> Counter:
        return Counter(self.letters)

    def compact(self) -> str:
        """Run-length form, e.g. ``A_1 A_0 A_1^2 A_0``."""
        parts = []
        i = 0
        while i < len(self.letters):
            run = 1
            while i + run < len(self.letters) and self.letters[i + run] == self.letters[i]:
                run += 1
            parts.append(self.letters[i] if run == 1 else f"{self.letters[i]}^{run}")
            i += run
        return " ".join(parts)


def expand_word(
    S: IndexSet,
    n: int,
    order: Optional[Sequence[int]] = None,
    include_B: bool = False,
    budget: int = DEFAULT_WORD_BUDGET,
) -> Word:
    """Fully unfold A_n into its letters.

    ``order`` lists the elements of S in multiplication order, leftmost first
    (ascending by default, so A_n = A_{n-1} A_{n-2} for S = {1, 2}).  B, when
    included, is the leftmost letter of every unfolded factor.
    """
    order = tuple(S) if order is None else tuple(order)
    if sorted(order) != list(S):
        raise ValueError(f"order {list(order)} is not a permutation of {S}")
    prof = multiplicity_profile(S, n)
    length = sum(prof.counts) + (prof.b_count if include_B else 0)
    if length > budget:
        raise BudgetExceeded(f"word for n={n} has {length} letters, budget is {budget}")

    memo: dict[int, tuple[str, ...]] = {}
    head = (B_LETTER,) if include_B else ()
    # bottom-up so recursion depth stays flat
    for i in range(n + 1):
        if i < S.j:
            memo[i] = (letter(i),)
        else:
            memo[i] = head + tuple(x for l in order for x in memo[i - l])
    return Word(memo[n])
