"""Oracle states: GHZ, Werner-GHZ with closed-form global discord, Bell/Werner, random states."""
from __future__ import annotations

import numpy as np

from .core import (
    DensityOperator,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SubsystemDims,
    kron_all,
    shannon_entropy,
)

_MU_ONE_EPS = 1e-15  # (1-mu) log2 (1-mu) is a removable singularity at mu=1


def _check_mu(mu: float) -> float:
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mixing parameter must lie in [0, 1], got {mu}")
    return mu


def _xlog2(x: float) -> float:
    return float(x) * float(np.log2(x)) if x > _MU_ONE_EPS else 0.0


def ghz(n: int) -> DensityOperator:
    """Projector onto (|0...0> + |1...1>)/sqrt(2) on n qubits."""
    if n < 2:
        raise ValueError(f"GHZ state needs at least 2 qubits, got {n}")
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1.0 / np.sqrt(2.0)
    return DensityOperator(np.outer(v, v.conj()), SubsystemDims.qubits(n))


def bell() -> DensityOperator:
    """The |Phi+> = (|00> + |11>)/sqrt(2) projector."""
    return ghz(2)


def werner(mu: float) -> DensityOperator:
    """Two-qubit Werner state (1-mu)/4 * I + mu |Phi+><Phi+|."""
    mu = _check_mu(mu)
    m = (1.0 - mu) / 4.0 * np.eye(4, dtype=complex) + mu * bell().matrix
    return DensityOperator(m, SubsystemDims.qubits(2))


def _werner_ghz_pauli(mu: float) -> np.ndarray:
    """Pauli-expansion form of the Werner-GHZ state, used as a construction self-check."""
    terms = [
        (+1.0, (SIGMA_Z, SIGMA_Z, np.eye(2))),
        (+1.0, (SIGMA_Z, np.eye(2), SIGMA_Z)),
        (+1.0, (np.eye(2), SIGMA_Z, SIGMA_Z)),
        (+1.0, (SIGMA_X, SIGMA_X, SIGMA_X)),
        (-1.0, (SIGMA_X, SIGMA_Y, SIGMA_Y)),
        (-1.0, (SIGMA_Y, SIGMA_X, SIGMA_Y)),
        (-1.0, (SIGMA_Y, SIGMA_Y, SIGMA_X)),
    ]
    m = np.eye(8, dtype=complex) / 8.0
    for sign, ops in terms:
        m += sign * mu / 8.0 * kron_all(ops)
    return m


def werner_ghz(mu: float) -> DensityOperator:
    """Three-qubit Werner-GHZ state (1-mu)/8 * I + mu |GHZ><GHZ|.

    Built both from the convex-mixture form and from its Pauli expansion;
    the two must agree entrywise to 1e-12.
    """
    mu = _check_mu(mu)
    m = (1.0 - mu) / 8.0 * np.eye(8, dtype=complex) + mu * ghz(3).matrix
    diff = np.abs(m - _werner_ghz_pauli(mu)).max()
    if diff > 1e-12:
        raise RuntimeError(f"Werner-GHZ construction self-check failed (diff {diff:.3e})")
    return DensityOperator(m, SubsystemDims.qubits(3))


def werner_ghz_gqd_analytic(mu: float) -> float:
    """Closed-form global discord of the Werner-GHZ state, in bits.

    -1/4 (1+3mu) log2(1+3mu) + 1/8 (1-mu) log2(1-mu) + 1/8 (1+7mu) log2(1+7mu)
    """
    mu = _check_mu(mu)
    return (
        -0.25 * _xlog2(1.0 + 3.0 * mu)
        + 0.125 * _xlog2(1.0 - mu)
        + 0.125 * _xlog2(1.0 + 7.0 * mu)
    )


def werner_ghz_entropy_analytic(mu: float) -> float:
    """Closed-form S(rho) of the Werner-GHZ state: 3 - 7/8 (1-mu)log2(1-mu) - 1/8 (1+7mu)log2(1+7mu)."""
    mu = _check_mu(mu)
    return 3.0 - 0.875 * _xlog2(1.0 - mu) - 0.125 * _xlog2(1.0 + 7.0 * mu)


def werner_ghz_dephased_entropy_analytic(mu: float) -> float:
    """Closed-form S(Phi(rho)) after the all-z measurement: 3 - 3/4 (1-mu)log2(1-mu) - 1/4 (1+3mu)log2(1+3mu)."""
    mu = _check_mu(mu)
    return 3.0 - 0.75 * _xlog2(1.0 - mu) - 0.25 * _xlog2(1.0 + 3.0 * mu)


def ghz_dephased_spectrum(theta2: float, theta3: float) -> np.ndarray:
    """Eigenvalues of the dephased 3-qubit GHZ state at angles (0, theta2, theta3), phases 0.

    Four doubly degenerate values, returned in pair order; they sum to 1.
    """
    c2, s2 = np.cos(0.5 * theta2) ** 2, np.sin(0.5 * theta2) ** 2
    c3, s3 = np.cos(0.5 * theta3) ** 2, np.sin(0.5 * theta3) ** 2
    l1 = 0.5 * c2 * c3
    l2 = 0.5 * c2 * s3
    l3 = 0.5 * s2 * c3
    l4 = 0.5 * s2 * s3
    return np.array([l1, l2, l3, l4, l4, l3, l2, l1])


def ghz_surface(n_theta2: int, n_theta3: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Entropy of the dephased GHZ spectrum over a (theta2, theta3) grid.

    Angles are sampled on [0, pi) including the 0 endpoint, so the boundary
    minimum at (0, 0) is on the grid.  Returns (theta2s, theta3s, values)
    with values[i, j] at (theta2s[i], theta3s[j]).
    """
    if n_theta3 is None:
        n_theta3 = n_theta2
    if n_theta2 < 2 or n_theta3 < 2:
        raise ValueError("grid needs at least 2 points per axis")
    t2 = np.linspace(0.0, np.pi, n_theta2, endpoint=False)
    t3 = np.linspace(0.0, np.pi, n_theta3, endpoint=False)
    values = np.empty((n_theta2, n_theta3))
    for i, a in enumerate(t2):
        for j, b in enumerate(t3):
            values[i, j] = shannon_entropy(ghz_dephased_spectrum(a, b))
    return t2, t3, values


def random_density(
    dims: "SubsystemDims | tuple[int, ...] | list[int]", rank: int | None = None, seed: int = 0
) -> DensityOperator:
    """Seeded random state rho = G G^dagger / Tr(G G^dagger), G complex Gaussian total x rank."""
    if not isinstance(dims, SubsystemDims):
        dims = SubsystemDims(tuple(dims))
    total = dims.total
    if rank is None:
        rank = total
    if not 1 <= rank <= total:
        raise ValueError(f"rank must lie in [1, {total}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((total, rank)) + 1j * rng.standard_normal((total, rank))
    m = g @ g.conj().T
    m /= m.trace().real
    return DensityOperator(m, dims)
