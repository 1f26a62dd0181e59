"""Generalized Riesz bases: constructing pairs and their duals.

A constructing pair is an ONB together with an invertible operator T; the
family it constructs has columns T e_k.  At finite truncation every matrix is
closed and everywhere defined, so the infinite-dimensional domain conditions
degenerate; the condition number and smallest singular value are recorded so
that sweeps can extrapolate which conditions would fail as N grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatchError
from .family import ONB, BiorthogonalPair, SequenceFamily, build_analysis, check_pairing

#: Action tolerance for T e_k == phi_k.
ACTION_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ConstructingPair:
    """(e, T) with T invertible at the rank tolerance."""

    onb: ONB
    T: np.ndarray
    kappa: float = field(init=False)
    sigma_min: float = field(init=False)

    def __post_init__(self):
        T = linalg.as_operator(self.T)
        if T.shape[0] != self.onb.dim:
            raise DimensionMismatchError("operator and ONB dimensions differ")
        sigma = linalg.singular_values(T)
        if sigma[-1] <= linalg.rank_tolerance(T, sigma):
            from .errors import SingularOperatorError

            raise SingularOperatorError(float(sigma[-1]))
        T.setflags(write=False)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "kappa", float(sigma[0] / sigma[-1]))
        object.__setattr__(self, "sigma_min", float(sigma[-1]))

    @classmethod
    def from_family(cls, phi: SequenceFamily, onb: ONB | None = None) -> "ConstructingPair":
        onb = onb if onb is not None else ONB.standard(phi.dim)
        return cls(onb=onb, T=build_analysis(phi, onb))

    @property
    def dim(self) -> int:
        return self.onb.dim


def constructed_family(cp: ConstructingPair) -> SequenceFamily:
    """The family {T e_k} of the constructing pair."""
    return SequenceFamily(cp.T @ cp.onb.columns)


def dual_family(cp: ConstructingPair) -> SequenceFamily:
    """Dual family psi_k = adjoint(inverse(T)) e_k; biorthogonal to {T e_k}."""
    dual = linalg.adjoint(linalg.solve_inverse(cp.T))
    return SequenceFamily(dual @ cp.onb.columns)


def dual_pair(cp: ConstructingPair) -> BiorthogonalPair:
    """Constructed family together with its dual, pairing-checked."""
    return check_pairing(constructed_family(cp), dual_family(cp),
                         tolerance=max(1e-10, cp.kappa * 1e-12 * cp.dim))


def domain_norm_identity(cp: ConstructingPair, x) -> tuple[float, float]:
    """Both sides of sum_k |(x|phi_k)|^2 == ||adjoint(T) x||^2.

    The left side is summed independently column by column; at square
    truncation the two agree to rounding.
    """
    x = linalg.as_vector(x)
    if x.shape[0] != cp.dim:
        raise DimensionMismatchError("probe vector has wrong length")
    phi = cp.T @ cp.onb.columns
    lhs = float(sum(abs(linalg.inner(x, phi[:, k])) ** 2 for k in range(cp.dim)))
    rhs = float(np.linalg.norm(linalg.adjoint(cp.T) @ x) ** 2)
    return lhs, rhs


def check_constructing(T, phi: SequenceFamily, onb: ONB | None = None,
                       tolerance: float = ACTION_TOLERANCE) -> bool:
    """True iff T is invertible and T e_{k+offset} == phi_k for every family column.

    Compares actions rather than matrices, so T may be supplied in any basis.
    """
    T = linalg.as_operator(T)
    if T.shape[0] != phi.dim:
        raise DimensionMismatchError("operator and family dimensions differ")
    sigma = linalg.singular_values(T)
    if sigma[-1] <= linalg.rank_tolerance(T, sigma):
        return False
    U = onb.columns if onb is not None else np.eye(phi.dim, dtype=np.complex128)
    for k in range(phi.n_padding, phi.size):
        idx = phi.index_offset + k
        if np.linalg.norm(T @ U[:, idx] - phi.coeffs[:, k]) > tolerance:
            return False
    return True
