"""Dense linear algebra and entropy primitives for multi-subsystem density operators.

Index convention (used consistently by every module in this package): the
first subsystem varies slowest, i.e. ``kron(a, b)`` places ``a`` on
subsystem 0.  All entropies are in bits (log base 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

# Tolerance policy, shared across the package.
HERMITIAN_TOL = 1e-10     # max entrywise |m - m^dagger|
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-10        # eigenvalues in (EIG_FLOOR, 0) are clamped to 0; below is an error
KERNEL_EIG_TOL = 1e-12    # sigma eigenvalues below this belong to the kernel
KERNEL_MASS_TOL = 1e-9    # rho mass on sigma's kernel above this => infinite relative entropy
SPECTRUM_RECON_TOL = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class SubsystemDims:
    """Ordered local Hilbert-space dimensions of a composite system."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("need at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def qubits(cls, n: int) -> "SubsystemDims":
        if n < 1:
            raise ValueError("need at least one qubit")
        return cls((2,) * n)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, i: int) -> int:
        return self.dims[i]


def _as_dims(dims: "SubsystemDims | Iterable[int]") -> SubsystemDims:
    if isinstance(dims, SubsystemDims):
        return dims
    return SubsystemDims(tuple(dims))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive matrix over labeled subsystems.

    Validated on construction: Hermiticity and trace to 1e-10, minimum
    eigenvalue >= -1e-10.
    """

    matrix: np.ndarray
    dims: SubsystemDims

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        dims = _as_dims(self.dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if m.shape[0] != dims.total:
            raise ValueError(
                f"matrix side {m.shape[0]} does not match subsystem dims {dims.dims}"
            )
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max asymmetry {herm:.3e})")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr}")
        lo = np.linalg.eigvalsh(m).min()
        if lo < EIG_FLOOR:
            raise ValueError(f"matrix is not positive (min eigenvalue {lo:.3e})")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return self.dims.total


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def __post_init__(self) -> None:
        w = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.eigenvectors, dtype=complex)
        if np.any(np.diff(w) < 0):
            raise ValueError("eigenvalues must be ascending")
        if np.abs(v.conj().T @ v - np.eye(v.shape[1])).max() > 1e-8:
            raise ValueError("eigenvector columns are not orthonormal")
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)


def eig_hermitian(m: "np.ndarray | DensityOperator") -> Spectrum:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues)."""
    a = m.matrix if isinstance(m, DensityOperator) else np.asarray(m, dtype=complex)
    herm = np.abs(a - a.conj().T).max()
    if herm > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {herm:.3e})")
    w, v = np.linalg.eigh(a)
    recon_err = np.abs((v * w) @ v.conj().T - a).max()
    if recon_err > SPECTRUM_RECON_TOL:
        raise ValueError(f"eigendecomposition failed to reconstruct input ({recon_err:.3e})")
    return Spectrum(eigenvalues=w, eigenvectors=v)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; ``a`` acts on the slower-varying (first) factor."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def _validate_keep(keep: Sequence[int], n: int) -> list[int]:
    keep = [int(k) for k in keep]
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if len(set(keep)) != len(keep):
        raise ValueError(f"keep indices must be distinct, got {keep}")
    return keep


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a raw matrix; kept subsystems appear in ``keep`` order."""
    dims = [int(d) for d in dims]
    n = len(dims)
    keep = _validate_keep(keep, n)
    traced = [k for k in range(n) if k not in keep]
    t = np.asarray(m, dtype=complex).reshape(dims + dims)
    axes = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    t = np.transpose(t, axes)
    d_keep = int(np.prod([dims[k] for k in keep]))
    d_rest = int(np.prod([dims[k] for k in traced])) if traced else 1
    t = t.reshape(d_keep, d_rest, d_keep, d_rest)
    return np.einsum("aibi->ab", t)


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Reduced operator on the kept subsystems (in ``keep`` order); trace preserved."""
    out = partial_trace_matrix(rho.matrix, rho.dims.dims, keep)
    out = 0.5 * (out + out.conj().T)
    sub = SubsystemDims(tuple(rho.dims[k] for k in keep))
    return DensityOperator(out, sub)


def reduced_from_vector(
    psi: np.ndarray, dims: "SubsystemDims | Iterable[int]", keep: Sequence[int]
) -> DensityOperator:
    """Reduced density operator of a pure state without forming the full projector."""
    dims = _as_dims(dims)
    n = len(dims)
    keep = _validate_keep(keep, n)
    rest = [k for k in range(n) if k not in keep]
    v = np.asarray(psi, dtype=complex).reshape(dims.dims)
    v = np.transpose(v, keep + rest)
    d_keep = int(np.prod([dims[k] for k in keep]))
    a = v.reshape(d_keep, -1)
    out = a @ a.conj().T
    out = 0.5 * (out + out.conj().T)
    sub = SubsystemDims(tuple(dims[k] for k in keep))
    return DensityOperator(out, sub)


def _clamped_eigenvalues(m: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(m)
    if w.min() < EIG_FLOOR:
        raise ValueError(f"matrix is not positive (min eigenvalue {w.min():.3e})")
    return np.clip(w, 0.0, None)


def _as_hermitian_matrix(rho: "DensityOperator | np.ndarray") -> np.ndarray:
    if isinstance(rho, DensityOperator):
        return rho.matrix
    m = np.asarray(rho, dtype=complex)
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("input is not Hermitian")
    return m


def shannon_entropy(p: np.ndarray) -> float:
    """-sum p log2 p over nonnegative weights, with 0 log 0 := 0."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def von_neumann_entropy(rho: "DensityOperator | np.ndarray") -> float:
    """S(rho) = -Tr rho log2 rho, in bits."""
    m = _as_hermitian_matrix(rho)
    return shannon_entropy(_clamped_eigenvalues(m))


def relative_entropy(rho: "DensityOperator | np.ndarray", sigma: "DensityOperator | np.ndarray") -> float:
    """S(rho || sigma) = Tr(rho log2 rho - rho log2 sigma), in bits.

    Returns ``math.inf`` when rho has support on sigma's kernel (eigenvalues
    of sigma below 1e-12, rho mass above 1e-9).
    """
    a = _as_hermitian_matrix(rho)
    b = _as_hermitian_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    w_b, v_b = np.linalg.eigh(b)
    # weight of rho along each eigenvector of sigma
    q = np.clip(np.real(np.einsum("ik,ij,jk->k", v_b.conj(), a, v_b)), 0.0, None)
    kernel = w_b < KERNEL_EIG_TOL
    if q[kernel].sum() > KERNEL_MASS_TOL:
        return math.inf
    tr_rho_log_sigma = float((q[~kernel] * np.log2(w_b[~kernel])).sum())
    tr_rho_log_rho = -von_neumann_entropy(a)
    return tr_rho_log_rho - tr_rho_log_sigma
