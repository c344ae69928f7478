"""Dense complex matrices: product, Kronecker product and the two norms.

Matrices are plain 2-D ``numpy`` arrays of dtype complex128.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, SizeOverflow

POWER_TOL = 1e-12
POWER_MAX_ITER = 10_000
SQUARE_EVERY = 64
KRON_MAX_ENTRIES = 10**8


class NormKind(str, enum.Enum):
    FROBENIUS = "frobenius"
    OPERATOR = "operator"


def as_matrix(x) -> np.ndarray:
    """Coerce a scalar or nested sequence into a finite complex 2-D array."""
    arr = np.array(x, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if X.shape[1] != Y.shape[0]:
        raise DimensionMismatch(f"cannot multiply {X.shape} by {Y.shape}")
    return X @ Y


def kron(X: np.ndarray, Y: np.ndarray, max_entries: int = KRON_MAX_ENTRIES) -> np.ndarray:
    rows = X.shape[0] * Y.shape[0]
    cols = X.shape[1] * Y.shape[1]
    if rows * cols > max_entries:
        raise SizeOverflow(f"Kronecker product would have {rows}x{cols} entries (budget {max_entries})")
    return np.kron(X, Y)


def _normalized(X: np.ndarray):
    """Return (Z, e) with X = Z * 2**e and max |Z| in [0.5, 1); None if X is 0 or non-finite."""
    peak = float(np.max(np.abs(X))) if X.size else 0.0
    if peak == 0.0 or not math.isfinite(peak):
        return None, peak
    # power-of-two scaling is exact, also for subnormal entries
    e = math.frexp(peak)[1]
    Z = np.ldexp(X.real, -e) + 1j * np.ldexp(X.imag, -e)
    return Z, e


def frobenius_norm(X: np.ndarray) -> float:
    Z, e = _normalized(X)
    if Z is None:
        return e
    return math.ldexp(math.sqrt(float(np.sum(Z.real**2 + Z.imag**2))), e)


def operator_norm(X: np.ndarray, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> float:
    """Largest singular value: sqrt of the top eigenvalue of X^H X by power iteration."""
    Z, e = _normalized(X)
    if Z is None:
        return e
    # the smaller Gram matrix has the same nonzero spectrum
    side = Z if Z.shape[1] <= Z.shape[0] else Z.conj().T
    M = side.conj().T @ side
    d = M.shape[0]
    # fixed-seed generic start: all-ones is an exact eigenvector of any Gram
    # matrix with constant row sums, which may not be the dominant one
    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    # W is the iteration matrix; it is squared when progress is slow so that a
    # near-tie between the top two eigenvalues still separates quickly
    W = M
    mu = float(np.vdot(v, M @ v).real)
    prev_delta = math.inf
    for it in range(1, max_iter + 1):
        w = W @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        mu_next = float(np.vdot(v, M @ v).real)
        delta = abs(mu_next - mu)
        # geometric tail estimate: remaining error ~ delta * q / (1 - q)
        q = min(delta / prev_delta, 0.999999) if prev_delta > 0 else 0.0
        if delta <= tol * mu_next and delta * q / (1.0 - q) <= tol * mu_next:
            # ||side v|| / ||v|| avoids the rounding of the squared Gram entries
            return math.ldexp(float(np.linalg.norm(side @ v) / np.linalg.norm(v)), e)
        mu, prev_delta = mu_next, delta
        if it % SQUARE_EVERY == 0:
            W = W @ W
            W = W / np.max(np.abs(W))
            prev_delta = math.inf
    raise ConvergenceFailure(f"power iteration did not converge in {max_iter} steps")


def norm(X: np.ndarray, kind: NormKind = NormKind.FROBENIUS) -> float:
    kind = NormKind(kind)
    if kind is NormKind.FROBENIUS:
        return frobenius_norm(X)
    return operator_norm(X)
