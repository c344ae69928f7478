"""Independent reference computations used by the tests.

None of these call into matrecur; each recomputes a quantity by a different
route (power-series division, repeated exact matrix products, direct
recurrence iteration, polynomial root finding).
"""

import numpy as np


def series_terms(S, count):
    """Coefficients of z**(j-1) / (1 - sum z**l) by truncated power-series division."""
    j = max(S)
    num = [0] * count
    if j - 1 < count:
        num[j - 1] = 1
    den = [0] * count
    den[0] = 1
    for l in S:
        if l < count:
            den[l] -= 1
    out = [0] * count
    for k in range(count):
        acc = num[k] - sum(den[i] * out[k - i] for i in range(1, k + 1))
        out[k] = acc // den[0]
    return out


def exact_matmul(X, Y):
    return [[sum(X[i][t] * Y[t][c] for t in range(len(Y))) for c in range(len(Y[0]))] for i in range(len(X))]


def exact_matpow(Q, n):
    size = len(Q)
    R = [[int(i == c) for c in range(size)] for i in range(size)]
    for _ in range(n):
        R = exact_matmul(R, Q)
    return R


def companion_by_definition(S):
    j = max(S)
    Q = [[0] * j for _ in range(j)]
    for c in range(j):
        Q[0][c] = int(c + 1 in S)
    for r in range(1, j):
        Q[r][r - 1] = 1
    return Q


def recurrence_counts(S, n_max):
    """#A_{k,n} and #B_n by iterating the count recurrences from unit initial data."""
    j = max(S)
    counts = [[int(k == n) for k in range(j)] for n in range(j)]
    b = [0] * j
    for n in range(j, n_max + 1):
        counts.append([sum(counts[n - l][k] for l in S) for k in range(j)])
        b.append(1 + sum(b[n - l] for l in S))
    return counts, b


def dominant_root(S):
    """Largest real root of x**j - sum x**(j-l), via numpy's companion eigenvalues."""
    j = max(S)
    coeffs = [0.0] * (j + 1)
    coeffs[0] = 1.0
    for l in S:
        coeffs[l] -= 1.0
    roots = np.roots(coeffs)
    return max(r.real for r in roots if abs(r.imag) < 1e-9)


def fibonacci(count):
    out = [0, 1]
    while len(out) < count:
        out.append(out[-1] + out[-2])
    return out[:count]
