"""Local projective measurement bases and non-selective dephasing channels."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DensityOperator,
    HERMITIAN_TOL,
    SubsystemDims,
    eig_hermitian,
    kron_all,
    partial_trace,
)

DEGENERACY_GAP = 1e-9


@dataclass(frozen=True)
class QubitBasisAngles:
    """Bloch parameterization of a single-qubit basis: theta in [0, pi), phi in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < math.pi:
            raise ValueError(f"theta must lie in [0, pi), got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")


@dataclass(frozen=True)
class LocalBasis:
    """Complete orthonormal rank-1 basis of one subsystem.

    Stored as a unitary whose columns are the basis vectors; the projector
    list is derived.  ``degenerate`` marks bases produced by the tie rule in
    :func:`reduced_eigenbasis`.
    """

    vectors: np.ndarray
    degenerate: bool = False

    def __post_init__(self) -> None:
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"basis vectors must form a square matrix, got {v.shape}")
        err = np.abs(v.conj().T @ v - np.eye(v.shape[0])).max()
        if err > HERMITIAN_TOL:
            raise ValueError(f"basis columns are not orthonormal (error {err:.3e})")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def projectors(self) -> list[np.ndarray]:
        return [np.outer(self.vectors[:, k], self.vectors[:, k].conj()) for k in range(self.dim)]


@dataclass(frozen=True)
class ProductBasis:
    """One LocalBasis per subsystem; drives the product dephasing channel."""

    locals: tuple[LocalBasis, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "locals", tuple(self.locals))
        if not self.locals:
            raise ValueError("product basis needs at least one local basis")

    @classmethod
    def uniform(cls, local: LocalBasis, n: int) -> "ProductBasis":
        return cls((local,) * n)

    def __len__(self) -> int:
        return len(self.locals)

    def unitary(self) -> np.ndarray:
        """Kronecker product of local basis matrices (columns = product vectors)."""
        return kron_all([b.vectors for b in self.locals])

    def check_dims(self, dims: SubsystemDims) -> None:
        if len(self.locals) != len(dims):
            raise ValueError(
                f"basis has {len(self.locals)} factors but state has {len(dims)} subsystems"
            )
        for k, (b, d) in enumerate(zip(self.locals, dims)):
            if b.dim != d:
                raise ValueError(f"basis factor {k} has dim {b.dim}, subsystem has dim {d}")


def qubit_unitary(theta: float, phi: float) -> np.ndarray:
    """2x2 unitary with columns |+>, |-> of the rotated qubit basis.

    |+> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
    |-> = -e^{-i phi} sin(theta/2)|0> + cos(theta/2)|1>
    """
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    return np.array(
        [[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]], dtype=complex
    )


def qubit_basis(angles: QubitBasisAngles) -> LocalBasis:
    """Projective qubit basis at the given Bloch angles."""
    return LocalBasis(qubit_unitary(angles.theta, angles.phi))


def sigma_z_basis() -> LocalBasis:
    return LocalBasis(np.eye(2, dtype=complex))


def sigma_x_basis() -> LocalBasis:
    return qubit_basis(QubitBasisAngles(theta=0.5 * math.pi, phi=0.0))


def computational_basis(d: int) -> LocalBasis:
    return LocalBasis(np.eye(d, dtype=complex))


def all_z(n: int) -> ProductBasis:
    return ProductBasis.uniform(sigma_z_basis(), n)


def all_x(n: int) -> ProductBasis:
    return ProductBasis.uniform(sigma_x_basis(), n)


def _dephase_matrix(m: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Kill off-diagonals of m in the basis given by u's columns."""
    d = np.real(np.einsum("ik,ij,jk->k", u.conj(), m, u))
    out = (u * d) @ u.conj().T
    return 0.5 * (out + out.conj().T)


def dephase(rho: DensityOperator, basis: ProductBasis) -> DensityOperator:
    """Non-selective product measurement: sum_k Pi_k rho Pi_k."""
    basis.check_dims(rho.dims)
    return DensityOperator(_dephase_matrix(rho.matrix, basis.unitary()), rho.dims)


def local_dephase(rho_j: DensityOperator, basis_j: LocalBasis) -> DensityOperator:
    """Single-subsystem dephasing: sum_j Pi^j rho Pi^j."""
    if rho_j.n_subsystems != 1:
        raise ValueError("local_dephase expects a single-subsystem operator")
    if basis_j.dim != rho_j.total_dim:
        raise ValueError(
            f"basis dim {basis_j.dim} does not match operator dim {rho_j.total_dim}"
        )
    return DensityOperator(_dephase_matrix(rho_j.matrix, basis_j.vectors), rho_j.dims)


def reduced_eigenbasis(rho: DensityOperator, j: int) -> LocalBasis:
    """Eigenbasis of the reduced operator on subsystem j.

    When the reduced spectrum is degenerate (adjacent gap below 1e-9) the
    eigenvectors are arbitrary, so this falls back to the computational
    basis and flags the result as degenerate.
    """
    rho_j = partial_trace(rho, [j])
    spec = eig_hermitian(rho_j)
    gaps = np.diff(spec.eigenvalues)
    if gaps.size and gaps.min() < DEGENERACY_GAP:
        return LocalBasis(np.eye(rho_j.total_dim, dtype=complex), degenerate=True)
    return LocalBasis(spec.eigenvectors)
