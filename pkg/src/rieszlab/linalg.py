"""Dense complex linear-algebra kernel for truncated Hilbert spaces.

Vectors are length-N complex ndarrays, operators are N x N complex
ndarrays.  The inner product is linear in the FIRST argument, so that the
rank-one tensor satisfies rank_one(x, y) @ xi == inner(xi, y) * x.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, SingularOperatorError

EPS = float(np.finfo(np.float64).eps)

#: Largest truncation dimension the dense kernel is meant to serve.
DENSE_DIM_LIMIT = 4096

#: Above this condition number, inversion switches from a direct solve to SVD.
SVD_KAPPA_SWITCH = 1e8


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-d vector, got shape {v.shape}")
    return v


def as_operator(T) -> np.ndarray:
    M = np.asarray(T, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {M.shape}")
    return M


def basis_vector(k: int, dim: int) -> np.ndarray:
    """Standard basis vector e_k of the dim-dimensional truncation."""
    e = np.zeros(dim, dtype=np.complex128)
    e[k] = 1.0
    return e


def inner(x, y) -> complex:
    """Inner product (x|y), linear in x and conjugate-linear in y."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    # np.vdot conjugates its first argument.
    return complex(np.vdot(y, x))


def norm(x) -> float:
    return float(np.linalg.norm(x))


def rank_one(x, y) -> np.ndarray:
    """Tensor x (x) conj(y): entries M_ij = x_i * conj(y_j)."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    return np.outer(x, y.conj())


def adjoint(T) -> np.ndarray:
    """Conjugate transpose; the Hilbert adjoint at finite truncation."""
    return np.asarray(T, dtype=np.complex128).conj().T.copy()


def singular_values(T) -> np.ndarray:
    return np.linalg.svd(as_operator(T), compute_uv=False)


def rank_tolerance(T, sigma: np.ndarray | None = None) -> float:
    """Numerical-rank cutoff N * eps * sigma_max(T)."""
    T = as_operator(T)
    if sigma is None:
        sigma = singular_values(T)
    smax = float(sigma[0]) if sigma.size else 0.0
    return T.shape[0] * EPS * smax


def condition_number(T) -> float:
    s = singular_values(T)
    if s.size == 0 or s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def solve_inverse(T) -> np.ndarray:
    """Inverse of T, with a singularity gate at the rank tolerance.

    Well-conditioned matrices go through a direct solve; once the condition
    number passes SVD_KAPPA_SWITCH the inverse is assembled from the SVD so
    that near-rank-deficiency stays diagnosable.

    Raises SingularOperatorError when sigma_min <= N * eps * sigma_max.
    """
    T = as_operator(T)
    n = T.shape[0]
    u, s, vh = np.linalg.svd(T)
    tol = n * EPS * (float(s[0]) if s.size else 0.0)
    smin = float(s[-1]) if s.size else 0.0
    if smin <= tol:
        raise SingularOperatorError(smin)
    kappa = float(s[0] / s[-1])
    if kappa > SVD_KAPPA_SWITCH:
        return (vh.conj().T * (1.0 / s)) @ u.conj().T
    return np.linalg.solve(T, np.eye(n, dtype=np.complex128))


def null_space(T) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel of T.

    A right-singular vector belongs to the kernel when its singular value is
    at or below the rank tolerance.  Returns [] for a trivial kernel.
    """
    T = as_operator(T)
    n = T.shape[0]
    _, s, vh = np.linalg.svd(T)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return [basis_vector(k, n) for k in range(n)]
    tol = n * EPS * smax
    kernel = [vh[i].conj() for i in range(n) if s[i] <= tol]
    return kernel


def max_abs(M) -> float:
    """Max-norm (largest entry modulus) of a matrix or vector."""
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def assert_finite(arr, what: str = "result") -> np.ndarray:
    arr = np.asarray(arr)
    if not np.all(np.isfinite(arr.view(np.float64) if arr.dtype == np.complex128 else arr)):
        raise FloatingPointError(f"{what} contains non-finite entries")
    return arr
