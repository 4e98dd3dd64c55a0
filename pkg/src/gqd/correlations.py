"""Discord-family correlation functionals.

Mutual information, measurement-conditional entropy, asymmetric and
symmetric bipartite discord, and the multipartite global discord

    S(rho || Phi(rho)) - sum_j S(rho_j || Phi_j(rho_j))

evaluated at a fixed product basis or minimized over all product bases.
Because Phi(rho) is diagonal in the measurement basis and dephasing
preserves that diagonal, each relative entropy reduces to an entropy
difference S(Phi(.)) - S(.), which is how values are computed here.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from . import measurement
from .core import (
    DensityOperator,
    partial_trace_matrix,
    shannon_entropy,
    von_neumann_entropy,
)
from .measurement import LocalBasis, ProductBasis, QubitBasisAngles, qubit_basis, qubit_unitary

STRATEGIES = ("fixed-z", "fixed-x", "reduced-eigenbasis", "minimize")

_P_FLOOR = 1e-14  # measurement outcomes below this probability contribute nothing


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the product-basis minimization.

    The coarse stage walks a per-qubit (theta, phi) grid — enumerated in full
    when the product grid is small enough, otherwise sampled (seeded) — and
    the best points seed simplex refinements in an unconstrained angle space.
    """

    grid_points: int = 9
    multistarts: int = 8
    tol: float = 1e-8
    max_evaluations: int = 200_000
    seed: int = 0
    coarse_budget: int = 6561

    def __post_init__(self) -> None:
        if self.grid_points < 5:
            raise ValueError("grid_points must be >= 5")
        if self.multistarts < 8:
            raise ValueError("multistarts must be >= 8")
        if self.tol <= 0 or self.max_evaluations <= 0:
            raise ValueError("tol and max_evaluations must be positive")
        if self.coarse_budget < self.multistarts:
            raise ValueError("coarse_budget must cover at least the multistarts")


@dataclass(frozen=True)
class GqdResult:
    value: float
    basis: ProductBasis
    strategy: str
    converged: bool
    evaluations: int

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.value < -1e-9:
            raise ValueError(f"global discord must be non-negative, got {self.value}")


def _diag_in_basis(m: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Diagonal of u^dagger m u, clipped to nonnegative reals."""
    return np.clip(np.real(((u.conj().T @ m) * u.T).sum(axis=1)), 0.0, None)


def _kron_fast(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ra, ca = a.shape
    rb, cb = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)


def _entropy_hermitian(m: np.ndarray) -> float:
    if m.shape == (2, 2):
        half = 0.5 * float(np.real(m[0, 0] + m[1, 1]))
        radius = math.sqrt(
            0.25 * float(np.real(m[0, 0] - m[1, 1])) ** 2 + abs(m[0, 1]) ** 2
        )
        return shannon_entropy(np.clip([half - radius, half + radius], 0.0, None))
    return shannon_entropy(np.clip(np.linalg.eigvalsh(m), 0.0, None))


class _GqdContext:
    """Per-state precomputation so basis sweeps only pay for the basis change."""

    def __init__(self, rho: DensityOperator):
        self.matrix = rho.matrix
        self.dims = rho.dims
        self.entropy = von_neumann_entropy(rho)
        n = len(rho.dims)
        self.reduced = [partial_trace_matrix(self.matrix, rho.dims.dims, [j]) for j in range(n)]
        self.reduced_entropy = [_entropy_hermitian(r) for r in self.reduced]

    def value_unitaries(self, unitaries: Sequence[np.ndarray]) -> float:
        u_full = unitaries[0]
        for u in unitaries[1:]:
            u_full = _kron_fast(u_full, u)
        value = shannon_entropy(_diag_in_basis(self.matrix, u_full)) - self.entropy
        for u, r, s in zip(unitaries, self.reduced, self.reduced_entropy):
            value -= shannon_entropy(_diag_in_basis(r, u)) - s
        return value

    def value_angles(self, x: np.ndarray) -> float:
        us = [qubit_unitary(x[2 * j], x[2 * j + 1]) for j in range(len(x) // 2)]
        return self.value_unitaries(us)


def gqd_at_basis(rho: DensityOperator, basis: ProductBasis) -> float:
    """Global discord integrand at one fixed product basis, in bits."""
    basis.check_dims(rho.dims)
    return _GqdContext(rho).value_unitaries([b.vectors for b in basis.locals])


def mutual_information(rho: DensityOperator, cut: Sequence[int]) -> float:
    """I = S(A) + S(B) - S(AB) for the bipartition (cut, complement)."""
    n = rho.n_subsystems
    a = sorted(set(int(k) for k in cut))
    if not a or len(a) == len(rho.dims) or any(k < 0 or k >= n for k in a):
        raise ValueError(f"cut {list(cut)} does not split {n} subsystems into two nonempty groups")
    b = [k for k in range(n) if k not in a]
    s_a = _entropy_hermitian(partial_trace_matrix(rho.matrix, rho.dims.dims, a))
    s_b = _entropy_hermitian(partial_trace_matrix(rho.matrix, rho.dims.dims, b))
    return s_a + s_b - von_neumann_entropy(rho)


def _conditional_entropy_tensor(t: np.ndarray, vectors: np.ndarray) -> float:
    """sum_j p_j S(rho_{A|j}) given rho reshaped to (dA, dB, dA, dB)."""
    total = 0.0
    for k in range(vectors.shape[1]):
        v = vectors[:, k]
        block = np.einsum("abcd,b,d->ac", t, v.conj(), v)
        p = float(np.real(np.trace(block)))
        if p < _P_FLOOR:
            continue
        total += p * _entropy_hermitian(block / p)
    return total


def measured_conditional_entropy(rho_ab: DensityOperator, basis_b: LocalBasis) -> float:
    """sum_j p_j S(rho_{A|j}) for a projective measurement on the last subsystem."""
    dims = rho_ab.dims.dims
    if len(dims) < 2:
        raise ValueError("need at least two subsystems")
    d_b = dims[-1]
    if basis_b.dim != d_b:
        raise ValueError(f"basis dim {basis_b.dim} does not match measured subsystem dim {d_b}")
    d_a = rho_ab.total_dim // d_b
    t = rho_ab.matrix.reshape(d_a, d_b, d_a, d_b)
    return _conditional_entropy_tensor(t, basis_b.vectors)


def _canonical_angles(x: np.ndarray) -> list[tuple[float, float]]:
    """Map refined angles back into theta in [0, pi), phi in [0, 2*pi).

    The basis at (theta + pi, phi) is the same unordered basis with the two
    vectors swapped, so theta is reduced modulo pi after a 2*pi wrap.
    """
    two_pi = 2.0 * math.pi
    out = []
    for k in range(0, len(x), 2):
        t = float(x[k]) % two_pi
        if t >= math.pi:
            t -= math.pi
        p = float(x[k + 1]) % two_pi
        if p >= two_pi:
            p = 0.0
        out.append((t, p))
    return out


def _minimize_over_angles(
    objective: Callable[[np.ndarray], float],
    n_pairs: int,
    config: OptimizerConfig,
    seeds: Sequence[np.ndarray] = (),
) -> tuple[float, np.ndarray, int, bool]:
    """Coarse grid + multistart Nelder-Mead over n_pairs (theta, phi) pairs.

    Returns (best value, best angles, evaluations, converged).  Deterministic
    for a fixed config: enumeration order is fixed and the sampled fallback
    uses the config seed.
    """
    evaluations = 0
    exhausted = False
    best_value = math.inf
    best_x: np.ndarray | None = None

    def tracked(x: np.ndarray) -> float:
        nonlocal evaluations, best_value, best_x
        evaluations += 1
        v = objective(x)
        if v < best_value:
            best_value = v
            best_x = np.array(x, dtype=float)
        return v

    thetas = np.linspace(0.0, math.pi, config.grid_points, endpoint=False)
    phis = np.linspace(0.0, 2.0 * math.pi, config.grid_points, endpoint=False)
    pairs = [(t, p) for t in thetas for p in phis]
    n_combo = len(pairs)

    candidates: list[np.ndarray] = [np.asarray(s, dtype=float) for s in seeds]
    if n_combo**n_pairs <= config.coarse_budget:
        for combo in itertools.product(range(n_combo), repeat=n_pairs):
            candidates.append(np.array([c for k in combo for c in pairs[k]]))
    else:
        rng = np.random.default_rng(config.seed)
        idx = rng.integers(0, n_combo, size=(config.coarse_budget, n_pairs))
        for row in idx:
            candidates.append(np.array([c for k in row for c in pairs[k]]))

    scored: list[tuple[float, int, np.ndarray]] = []
    for order, x in enumerate(candidates):
        if evaluations >= config.max_evaluations:
            exhausted = True
            break
        scored.append((tracked(x), order, x))

    scored.sort(key=lambda item: (item[0], item[1]))
    starts: list[np.ndarray] = []
    seen: set[tuple[float, ...]] = set()
    for _, _, x in scored:
        key = tuple(np.round(x, 12))
        if key in seen:
            continue
        seen.add(key)
        starts.append(x)
        if len(starts) == config.multistarts:
            break

    refined_ok = True
    for x0 in starts:
        budget = config.max_evaluations - evaluations
        if budget <= 0:
            exhausted = True
            break
        res = _scipy_minimize(
            tracked,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-7,
                "fatol": config.tol,
                "maxfev": budget,
                "maxiter": max(10 * budget, 1000),
            },
        )
        if not res.success:
            refined_ok = False
            if evaluations >= config.max_evaluations:
                exhausted = True
                break

    if best_x is None:
        raise RuntimeError("optimizer evaluated no candidate (budget too small)")
    return best_value, best_x, evaluations, (not exhausted) and refined_ok


def _angles_of_qubit_column(v: np.ndarray) -> tuple[float, float]:
    """Bloch angles of the basis containing the given qubit vector."""
    a, b = complex(v[0]), complex(v[1])
    if abs(a) < 1e-12 or abs(b) < 1e-12:
        return 0.0, 0.0
    theta = 2.0 * math.atan2(abs(b), abs(a))
    phi = (np.angle(b) - np.angle(a)) % (2.0 * math.pi)
    if theta >= math.pi:
        return 0.0, 0.0
    return theta, phi


def _require_qubits(rho: DensityOperator, what: str) -> None:
    if any(d != 2 for d in rho.dims):
        raise ValueError(f"{what} requires qubit subsystems, got dims {rho.dims.dims}")


def _strategy_basis(rho: DensityOperator, strategy: str) -> ProductBasis:
    n = rho.n_subsystems
    if strategy == "fixed-z":
        return ProductBasis(tuple(measurement.computational_basis(d) for d in rho.dims))
    if strategy == "fixed-x":
        _require_qubits(rho, "fixed-x strategy")
        return measurement.all_x(n)
    if strategy == "reduced-eigenbasis":
        return ProductBasis(tuple(measurement.reduced_eigenbasis(rho, j) for j in range(n)))
    raise ValueError(f"unknown fixed strategy {strategy!r}")


def _structured_seeds(rho: DensityOperator) -> list[np.ndarray]:
    """All-z, all-x, all-y, and the reduced-eigenbasis angles."""
    n = rho.n_subsystems
    half_pi = 0.5 * math.pi
    seeds = [
        np.zeros(2 * n),
        np.array([half_pi, 0.0] * n),
        np.array([half_pi, half_pi] * n),
    ]
    reduced = []
    for j in range(n):
        local = measurement.reduced_eigenbasis(rho, j)
        reduced.extend(_angles_of_qubit_column(local.vectors[:, 0]))
    seeds.append(np.array(reduced))
    return seeds


def gqd(
    rho: DensityOperator,
    strategy: str = "minimize",
    config: OptimizerConfig | None = None,
) -> GqdResult:
    """Global quantum discord of a multipartite state.

    ``minimize`` searches over per-qubit projective bases (two angles per
    qubit); the fixed strategies evaluate a single prescribed basis, and
    ``reduced-eigenbasis`` measures each subsystem in the eigenbasis of its
    reduced operator.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if rho.n_subsystems < 2:
        raise ValueError("global discord needs at least two subsystems")

    if strategy != "minimize":
        basis = _strategy_basis(rho, strategy)
        value = gqd_at_basis(rho, basis)
        return GqdResult(value=value, basis=basis, strategy=strategy,
                         converged=True, evaluations=1)

    _require_qubits(rho, "minimize strategy")
    config = config or OptimizerConfig()
    ctx = _GqdContext(rho)
    value, x, evaluations, converged = _minimize_over_angles(
        ctx.value_angles, rho.n_subsystems, config, seeds=_structured_seeds(rho)
    )
    basis = ProductBasis(
        tuple(qubit_basis(QubitBasisAngles(t, p)) for t, p in _canonical_angles(x))
    )
    return GqdResult(value=value, basis=basis, strategy="minimize",
                     converged=converged, evaluations=evaluations)


def discord_asymmetric(rho_ab: DensityOperator, config: OptimizerConfig | None = None) -> float:
    """Bipartite quantum discord with the measurement on the last subsystem.

    Minimizes I - [S(A) - S(AB|{Pi_B})] over projective qubit bases on B.
    """
    dims = rho_ab.dims.dims
    if len(dims) < 2 or dims[-1] != 2:
        raise ValueError("the measured subsystem must be a qubit")
    config = config or OptimizerConfig()

    d_b = dims[-1]
    d_a = rho_ab.total_dim // d_b
    t = rho_ab.matrix.reshape(d_a, d_b, d_a, d_b)
    info = mutual_information(rho_ab, cut=range(len(dims) - 1))
    s_a = _entropy_hermitian(np.einsum("abcb->ac", t))

    def objective(x: np.ndarray) -> float:
        u = qubit_unitary(x[0], x[1])
        return info - s_a + _conditional_entropy_tensor(t, u)

    half_pi = 0.5 * math.pi
    seeds = [np.array([0.0, 0.0]), np.array([half_pi, 0.0]), np.array([half_pi, half_pi])]
    value, _, _, _ = _minimize_over_angles(objective, 1, config, seeds=seeds)
    return value


def symmetric_discord(rho_ab: DensityOperator, config: OptimizerConfig | None = None) -> float:
    """Two-qubit symmetric discord: min over product bases of I(rho) - I(Phi(rho)).

    Every evaluated basis is cross-checked against the relative-entropy form
    (the two must agree to 1e-9), so this runs both routes throughout.
    """
    dims = rho_ab.dims.dims
    if len(dims) != 2 or any(d != 2 for d in dims):
        raise ValueError("symmetric discord is implemented for two qubits")
    config = config or OptimizerConfig()

    m = rho_ab.matrix
    ctx = _GqdContext(rho_ab)
    info = mutual_information(rho_ab, cut=[0])

    def objective(x: np.ndarray) -> float:
        u1 = qubit_unitary(x[0], x[1])
        u2 = qubit_unitary(x[2], x[3])
        relative_form = ctx.value_unitaries([u1, u2])
        u = _kron_fast(u1, u2)
        p = _diag_in_basis(m, u)
        dephased = ((u * p) @ u.conj().T).reshape(2, 2, 2, 2)
        s_a = _entropy_hermitian(np.einsum("abcb->ac", dephased))
        s_b = _entropy_hermitian(np.einsum("abad->bd", dephased))
        loss_form = info - (s_a + s_b - shannon_entropy(p))
        if abs(loss_form - relative_form) > 1e-9:
            raise RuntimeError(
                "correlation-loss and relative-entropy forms disagree "
                f"({loss_form} vs {relative_form})"
            )
        return loss_form

    value, _, _, _ = _minimize_over_angles(
        objective, 2, config, seeds=_structured_seeds(rho_ab)
    )
    return value
