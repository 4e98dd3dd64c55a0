"""Quantum Ashkin-Teller chain: two coupled transverse-field Ising chains.

Two spin-1/2 particles per site (sigma and tau), periodic boundaries.
Global qubit ordering is site-major with sigma before tau within a site:
(sigma_1, tau_1, sigma_2, tau_2, ...).  The global discord of small spin
groups in the ground state, scanned across the four-spin coupling, locates
the infinite-order critical point of the beta=1 line as a derivative
extremum.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import eigsh

from . import correlations
from .core import (
    DensityOperator,
    SIGMA_X,
    SIGMA_Z,
    SubsystemDims,
    eig_hermitian,
    reduced_from_vector,
)

DENSE_MAX_SITES = 6      # 4^6 = 4096 is the dense eigensolver budget
SPARSE_MAX_SITES = 8     # iterative solver budget (N = 16 spins)
DEGENERACY_GAP = 1e-9

GROUP_SITES = {"quartet": 2, "sextet": 3, "octet": 4}
PAIR_KINDS = ("same-site", "neighbor-sigma")
SCAN_STRATEGIES = ("fixed-z", "fixed-x", "reduced-eigenbasis")


@dataclass(frozen=True)
class ChainSpec:
    """Chain of ``sites`` sites (2*sites spins) with couplings (beta, delta, J)."""

    sites: int
    beta: float
    delta: float
    coupling: float = 1.0

    def __post_init__(self) -> None:
        if self.sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.sites}")

    @property
    def n_spins(self) -> int:
        return 2 * self.sites

    @property
    def dim(self) -> int:
        return 4**self.sites


@dataclass(frozen=True)
class SpinGroup:
    """Contiguous block of sites; quartet/sextet/octet = 2/3/4 sites worth of spin pairs."""

    kind: str
    anchor: int = 0

    def __post_init__(self) -> None:
        if self.kind not in GROUP_SITES:
            raise ValueError(f"kind must be one of {sorted(GROUP_SITES)}, got {self.kind!r}")

    @property
    def n_group_sites(self) -> int:
        return GROUP_SITES[self.kind]

    @property
    def n_spins(self) -> int:
        return 2 * self.n_group_sites

    def qubit_indices(self, sites: int) -> list[int]:
        """Global qubit indices, sigma block then tau block, sites wrapped mod chain length."""
        if self.n_group_sites > sites:
            raise ValueError(f"{self.kind} does not fit a chain of {sites} sites")
        members = [(self.anchor + i) % sites for i in range(self.n_group_sites)]
        return [2 * s for s in members] + [2 * s + 1 for s in members]


@dataclass(frozen=True)
class GroundState:
    energy: float
    vector: np.ndarray
    gap: float
    degenerate: bool


@dataclass(frozen=True)
class ScanResult:
    """Coupling sweep of a correlation measure plus its central-difference derivative."""

    deltas: np.ndarray
    gqd: np.ndarray
    derivative: np.ndarray
    basis: str
    chain: ChainSpec
    group: "SpinGroup | str"
    degenerate: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.deltas)
        if len(self.gqd) != n or len(self.degenerate) != n:
            raise ValueError("scan columns have inconsistent lengths")
        if len(self.derivative) != max(n - 2, 0):
            raise ValueError("derivative is defined on interior points only")


def _sparse_term(factors: dict[int, np.ndarray], n_spins: int) -> sparse.csr_matrix:
    out = sparse.identity(1, dtype=complex, format="csr")
    for k in range(n_spins):
        f = factors.get(k)
        local = sparse.csr_matrix(f) if f is not None else sparse.identity(2, dtype=complex, format="csr")
        out = sparse.kron(out, local, format="csr")
    return out


def build_hamiltonian_sparse(spec: ChainSpec) -> sparse.csr_matrix:
    """Sparse Ashkin-Teller Hamiltonian for up to 8 sites (16 spins)."""
    if spec.sites > SPARSE_MAX_SITES:
        raise ValueError(f"chains beyond {SPARSE_MAX_SITES} sites are out of budget")
    n = spec.n_spins
    j, beta, delta = spec.coupling, spec.beta, spec.delta
    h = sparse.csr_matrix((spec.dim, spec.dim), dtype=complex)
    for site in range(spec.sites):
        s, t = 2 * site, 2 * site + 1
        s_next = 2 * ((site + 1) % spec.sites)
        t_next = s_next + 1
        h = h - j * _sparse_term({s: SIGMA_X}, n)
        h = h - j * _sparse_term({t: SIGMA_X}, n)
        h = h - j * delta * _sparse_term({s: SIGMA_X, t: SIGMA_X}, n)
        h = h - j * beta * _sparse_term({s: SIGMA_Z, s_next: SIGMA_Z}, n)
        h = h - j * beta * _sparse_term({t: SIGMA_Z, t_next: SIGMA_Z}, n)
        h = h - j * beta * delta * _sparse_term(
            {s: SIGMA_Z, s_next: SIGMA_Z, t: SIGMA_Z, t_next: SIGMA_Z}, n
        )
    return h.tocsr()


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Dense Hamiltonian matrix of dimension 4^sites; sites <= 6."""
    if spec.sites > DENSE_MAX_SITES:
        raise ValueError(
            f"dense build supports at most {DENSE_MAX_SITES} sites, got {spec.sites}; "
            "use the sparse builder and an iterative solver"
        )
    return build_hamiltonian_sparse(spec).toarray()


def _parity_sparse(sites: int) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    n = 2 * sites
    p1 = _sparse_term({2 * s: SIGMA_X for s in range(sites)}, n)
    p2 = _sparse_term({2 * s + 1: SIGMA_X for s in range(sites)}, n)
    return p1, p2


def parity_operators(sites: int) -> tuple[np.ndarray, np.ndarray]:
    """The two parity involutions: sigma^x on every sigma spin, and on every tau spin."""
    if sites > DENSE_MAX_SITES:
        raise ValueError(f"dense parity operators support at most {DENSE_MAX_SITES} sites")
    p1, p2 = _parity_sparse(sites)
    return p1.toarray(), p2.toarray()


def ground_state(h: np.ndarray) -> GroundState:
    """Lowest eigenpair of a dense Hermitian matrix, with a degeneracy flag."""
    spec = eig_hermitian(h)
    e = spec.eigenvalues
    gap = float(e[1] - e[0]) if len(e) > 1 else np.inf
    return GroundState(
        energy=float(e[0]),
        vector=spec.eigenvectors[:, 0],
        gap=gap,
        degenerate=gap < DEGENERACY_GAP,
    )


def _project_q0(block: np.ndarray, p1, p2) -> np.ndarray:
    """Pick a (+1, +1) parity vector inside a degenerate eigenspace (columns of block)."""
    w = block
    for parity in (p1, p2):
        a = w.conj().T @ (parity @ w)
        vals, vecs = np.linalg.eigh(a)
        sel = vals > 1.0 - 1e-6
        if not sel.any():
            return block[:, 0]
        w = w @ vecs[:, sel]
    v = w[:, 0]
    return v / np.linalg.norm(v)


def _ground_vector(spec: ChainSpec, iterative: bool) -> tuple[np.ndarray, bool]:
    """Ground state vector with the degenerate case resolved into the Q=0 sector."""
    if iterative:
        h = build_hamiltonian_sparse(spec)
        k = min(6, spec.dim - 1)
        v0 = np.full(spec.dim, 1.0 / np.sqrt(spec.dim))
        vals, vecs = eigsh(h, k=k, which="SA", v0=v0)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    else:
        h = build_hamiltonian(spec)
        s = eig_hermitian(h)
        vals, vecs = s.eigenvalues, s.eigenvectors
    gap = float(vals[1] - vals[0])
    degenerate = gap < DEGENERACY_GAP
    if not degenerate:
        return vecs[:, 0], False
    sel = vals - vals[0] < DEGENERACY_GAP
    p1, p2 = _parity_sparse(spec.sites)
    return _project_q0(vecs[:, sel], p1, p2), True


def reduce_to_group(gs_vector: np.ndarray, spec: ChainSpec, group: SpinGroup) -> DensityOperator:
    """Reduced density operator of the ground state on the group's spins."""
    keep = group.qubit_indices(spec.sites)
    return reduced_from_vector(gs_vector, SubsystemDims.qubits(spec.n_spins), keep)


def central_difference(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        return np.empty(0)
    return (y[2:] - y[:-2]) / (x[2:] - x[:-2])


def zero_crossings(
    x: np.ndarray, d: np.ndarray, lo: float | None = None, hi: float | None = None
) -> list[float]:
    """Linearly interpolated sign changes of d over grid x, optionally windowed."""
    roots: list[float] = []
    for i in range(len(d) - 1):
        a, b = d[i], d[i + 1]
        if a == 0.0:
            roots.append(float(x[i]))
        elif a * b < 0.0:
            roots.append(float(x[i] - a * (x[i + 1] - x[i]) / (b - a)))
    if d.size and d[-1] == 0.0:
        roots.append(float(x[-1]))
    if lo is not None:
        roots = [r for r in roots if r > lo]
    if hi is not None:
        roots = [r for r in roots if r < hi]
    return roots


def default_delta_grid(
    start: float = 0.2,
    stop: float = 1.8,
    step: float = 0.05,
    fine_step: float = 0.01,
    fine_lo: float = 0.85,
    fine_hi: float = 1.15,
) -> np.ndarray:
    """Coupling grid: coarse over [start, stop], refined around the critical point."""
    if step <= 0 or stop < start:
        raise ValueError("empty coupling range")
    coarse = np.arange(start, stop + 0.5 * step, step)
    if fine_step >= step:  # no refinement requested
        return np.unique(np.round(coarse, 10))
    fine = np.arange(fine_lo, fine_hi + 0.5 * fine_step, fine_step)
    fine = fine[(fine >= start) & (fine <= stop)]
    return np.unique(np.round(np.concatenate([coarse, fine]), 10))


def _map_ordered(worker, items, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, items))
    return [worker(item) for item in items]


def gqd_scan(
    template: ChainSpec,
    deltas: Sequence[float],
    group: SpinGroup,
    strategy: str,
    iterative: bool = False,
    threads: int = 1,
) -> ScanResult:
    """Global discord of a spin group across the coupling grid, at a fixed basis strategy."""
    if strategy not in SCAN_STRATEGIES:
        raise ValueError(f"scan strategy must be one of {SCAN_STRATEGIES}, got {strategy!r}")
    deltas = np.asarray(list(deltas), dtype=float)
    if deltas.size == 0:
        raise ValueError("empty coupling grid")
    group.qubit_indices(template.sites)  # validate group against chain size now

    def worker(delta: float) -> tuple[float, bool]:
        spec = replace(template, delta=float(delta))
        vector, degenerate = _ground_vector(spec, iterative)
        rho = reduce_to_group(vector, spec, group)
        value = correlations.gqd(rho, strategy=strategy).value
        return value, degenerate

    rows = _map_ordered(worker, deltas, threads)
    values = np.array([r[0] for r in rows])
    flags = np.array([r[1] for r in rows], dtype=bool)
    return ScanResult(
        deltas=deltas,
        gqd=values,
        derivative=central_difference(deltas, values),
        basis=strategy,
        chain=template,
        group=group,
        degenerate=flags,
    )


def pair_qubits(kind: str) -> list[int]:
    if kind == "same-site":
        return [0, 1]          # sigma_1, tau_1
    if kind == "neighbor-sigma":
        return [0, 2]          # sigma_1, sigma_2
    raise ValueError(f"pair kind must be one of {PAIR_KINDS}, got {kind!r}")


def pairwise_discord_scan(
    template: ChainSpec,
    deltas: Sequence[float],
    pair_kind: str,
    config: "correlations.OptimizerConfig | None" = None,
    iterative: bool = False,
    threads: int = 1,
) -> ScanResult:
    """Asymmetric discord of a spin pair across the coupling grid."""
    keep = pair_qubits(pair_kind)
    deltas = np.asarray(list(deltas), dtype=float)
    if deltas.size == 0:
        raise ValueError("empty coupling grid")

    def worker(delta: float) -> tuple[float, bool]:
        spec = replace(template, delta=float(delta))
        vector, degenerate = _ground_vector(spec, iterative)
        rho = reduced_from_vector(vector, SubsystemDims.qubits(spec.n_spins), keep)
        return correlations.discord_asymmetric(rho, config), degenerate

    rows = _map_ordered(worker, deltas, threads)
    values = np.array([r[0] for r in rows])
    flags = np.array([r[1] for r in rows], dtype=bool)
    return ScanResult(
        deltas=deltas,
        gqd=values,
        derivative=central_difference(deltas, values),
        basis="minimize",
        chain=template,
        group=pair_kind,
        degenerate=flags,
    )
