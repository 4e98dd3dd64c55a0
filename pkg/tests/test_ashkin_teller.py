import numpy as np
import pytest

from gqd.ashkin_teller import (
    ChainSpec,
    ScanResult,
    SpinGroup,
    _ground_vector,
    build_hamiltonian,
    build_hamiltonian_sparse,
    central_difference,
    default_delta_grid,
    gqd_scan,
    ground_state,
    pair_qubits,
    pairwise_discord_scan,
    parity_operators,
    reduce_to_group,
    zero_crossings,
)
from gqd.core import SubsystemDims, eig_hermitian, kron, reduced_from_vector
from gqd.measurement import all_x, dephase
from gqd.states import random_density

CRITICAL = ChainSpec(sites=3, beta=1.0, delta=1.0)


def swap_sigma_tau(h, sites):
    """Permute qubits (sigma_j <-> tau_j) in the site-major layout."""
    n = 2 * sites
    perm = []
    for j in range(sites):
        perm += [2 * j + 1, 2 * j]
    t = h.reshape([2] * (2 * n))
    t = np.transpose(t, perm + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


class TestHamiltonian:
    def test_decoupled_transverse_fields(self):
        # beta = delta = 0: four independent spins, ground energy -4J
        h = build_hamiltonian(ChainSpec(sites=2, beta=0.0, delta=0.0))
        energies = np.linalg.eigvalsh(h)
        assert abs(energies[0] + 4.0) <= 1e-12
        assert np.abs(energies - np.round(energies)).max() <= 1e-12
        assert set(np.round(energies).astype(int)) == {-4, -2, 0, 2, 4}

    def test_hermitian(self):
        h = build_hamiltonian(CRITICAL)
        assert np.abs(h - h.conj().T).max() <= 1e-12

    @pytest.mark.parametrize("sites", [2, 3])
    def test_commutes_with_parities(self, sites):
        h = build_hamiltonian(ChainSpec(sites=sites, beta=1.0, delta=0.7))
        p1, p2 = parity_operators(sites)
        assert np.abs(h @ p1 - p1 @ h).max() <= 1e-10
        assert np.abs(h @ p2 - p2 @ h).max() <= 1e-10

    def test_spectrum_symmetric_under_sigma_tau_swap(self):
        h = build_hamiltonian(ChainSpec(sites=2, beta=1.0, delta=1.0))
        swapped = swap_sigma_tau(h, 2)
        a = eig_hermitian(h).eigenvalues
        b = eig_hermitian(swapped).eigenvalues
        assert np.abs(a - b).max() <= 1e-10

    def test_sparse_matches_dense(self):
        spec = ChainSpec(sites=3, beta=0.8, delta=1.3)
        assert np.abs(build_hamiltonian_sparse(spec).toarray() - build_hamiltonian(spec)).max() == 0.0

    def test_dense_budget(self):
        with pytest.raises(ValueError, match="dense"):
            build_hamiltonian(ChainSpec(sites=7, beta=1.0, delta=1.0))

    def test_chain_needs_two_sites(self):
        with pytest.raises(ValueError):
            ChainSpec(sites=1, beta=1.0, delta=1.0)


class TestParityOperators:
    def test_involution_traceless_hermitian(self):
        p1, p2 = parity_operators(2)
        for p in (p1, p2):
            assert np.abs(p @ p - np.eye(16)).max() <= 1e-12
            assert abs(p.trace()) <= 1e-12
            assert np.abs(p - p.conj().T).max() <= 1e-12

    @pytest.mark.parametrize("sites", [2, 3])
    def test_ground_state_in_q0_sector(self, sites):
        h = build_hamiltonian(ChainSpec(sites=sites, beta=1.0, delta=1.0))
        gs = ground_state(h)
        p1, p2 = parity_operators(sites)
        v = gs.vector
        assert abs(np.real(v.conj() @ p1 @ v) - 1.0) <= 1e-9
        assert abs(np.real(v.conj() @ p2 @ v) - 1.0) <= 1e-9

    @pytest.mark.parametrize("sites", [2, 3])
    def test_q1_q3_sectors_degenerate(self, sites):
        h = build_hamiltonian(ChainSpec(sites=sites, beta=1.0, delta=1.0))
        p1, p2 = parity_operators(sites)
        dim = h.shape[0]

        def sector_minimum(s1, s2):
            proj = (np.eye(dim) + s1 * p1) @ (np.eye(dim) + s2 * p2) / 4.0
            w, u = np.linalg.eigh(proj)
            cols = u[:, w > 0.5]
            return np.linalg.eigvalsh(cols.conj().T @ h @ cols)[0]

        e_q1 = sector_minimum(+1, -1)
        e_q3 = sector_minimum(-1, +1)
        assert abs(e_q1 - e_q3) <= 1e-9


class TestGroundState:
    def test_residual_and_energy(self):
        h = build_hamiltonian(ChainSpec(sites=2, beta=1.0, delta=1.0))
        gs = ground_state(h)
        assert np.linalg.norm(h @ gs.vector - gs.energy * gs.vector) <= 1e-9
        assert abs(gs.energy - np.linalg.eigvalsh(h).min()) <= 1e-12
        assert not gs.degenerate

    def test_energy_monotone_in_beta(self):
        previous = np.inf
        for beta in (0.0, 0.5, 1.0, 1.5, 2.0):
            h = build_hamiltonian(ChainSpec(sites=2, beta=beta, delta=1.0))
            energy = ground_state(h).energy
            assert energy <= previous + 1e-12
            previous = energy

    def test_iterative_matches_dense(self):
        spec = ChainSpec(sites=2, beta=1.0, delta=0.9)
        dense_vec, dense_flag = _ground_vector(spec, iterative=False)
        sparse_vec, sparse_flag = _ground_vector(spec, iterative=True)
        assert dense_flag == sparse_flag == False  # noqa: E712
        overlap = abs(np.vdot(dense_vec, sparse_vec))
        assert abs(overlap - 1.0) <= 1e-8


class TestSpinGroup:
    def test_quartet_indices(self):
        group = SpinGroup("quartet", anchor=0)
        assert group.qubit_indices(3) == [0, 2, 1, 3]

    def test_wraps_periodically(self):
        group = SpinGroup("sextet", anchor=2)
        assert group.qubit_indices(3) == [4, 0, 2, 5, 1, 3]

    def test_group_too_large(self):
        with pytest.raises(ValueError):
            SpinGroup("octet").qubit_indices(3)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            SpinGroup("quintet")

    def test_pair_qubits(self):
        assert pair_qubits("same-site") == [0, 1]
        assert pair_qubits("neighbor-sigma") == [0, 2]
        with pytest.raises(ValueError):
            pair_qubits("diagonal")


class TestReduceToGroup:
    def test_valid_density_operator(self):
        vec, _ = _ground_vector(CRITICAL, iterative=False)
        rho = reduce_to_group(vec, CRITICAL, SpinGroup("quartet"))
        assert rho.dims.dims == (2, 2, 2, 2)
        assert abs(rho.matrix.trace() - 1.0) <= 1e-12

    def test_translation_invariance(self):
        vec, _ = _ground_vector(CRITICAL, iterative=False)
        spectra = []
        for anchor in range(3):
            rho = reduce_to_group(vec, CRITICAL, SpinGroup("quartet", anchor=anchor))
            spectra.append(np.sort(np.linalg.eigvalsh(rho.matrix)))
        assert np.abs(spectra[0] - spectra[1]).max() <= 1e-9
        assert np.abs(spectra[0] - spectra[2]).max() <= 1e-9

    def test_same_site_pair_diagonal_in_x_basis(self):
        # at beta = 1 the sigma_j/tau_j pair is classical in the sigma-x product basis
        for delta in (0.4, 1.0, 1.6):
            spec = ChainSpec(sites=3, beta=1.0, delta=delta)
            vec, _ = _ground_vector(spec, iterative=False)
            rho = reduced_from_vector(vec, SubsystemDims.qubits(6), pair_qubits("same-site"))
            dephased = dephase(rho, all_x(2))
            assert np.abs(dephased.matrix - rho.matrix).max() <= 1e-9

    def test_single_spin_reduced_states_x_diagonal(self):
        spec = ChainSpec(sites=3, beta=1.0, delta=0.7)
        vec, _ = _ground_vector(spec, iterative=False)
        x_vectors = all_x(1).locals[0].vectors
        for q in range(6):
            rho = reduced_from_vector(vec, SubsystemDims.qubits(6), [q])
            in_x = x_vectors.conj().T @ rho.matrix @ x_vectors
            assert np.abs(in_x - np.diag(np.diag(in_x))).max() <= 1e-9


class TestScans:
    def test_quartet_x_basis_detects_critical_point(self):
        deltas = np.round(np.arange(0.81, 1.20, 0.02), 10)
        result = gqd_scan(CRITICAL, deltas, SpinGroup("quartet"), "fixed-x")
        interior = result.deltas[1:-1]
        crossings = zero_crossings(interior, result.derivative, lo=0.85, hi=1.15)
        assert len(crossings) == 1
        assert 0.9 < crossings[0] < 1.1
        assert (result.gqd >= -1e-9).all()

    def test_quartet_z_basis_sees_nothing(self):
        deltas = np.round(np.arange(0.81, 1.20, 0.02), 10)
        result = gqd_scan(CRITICAL, deltas, SpinGroup("quartet"), "fixed-z")
        assert (result.gqd > 0).all()
        interior = result.deltas[1:-1]
        assert zero_crossings(interior, result.derivative, lo=0.85, hi=1.15) == []

    def test_scan_result_shapes(self):
        deltas = [0.8, 1.0, 1.2]
        result = gqd_scan(CRITICAL, deltas, SpinGroup("quartet"), "fixed-x")
        assert len(result.gqd) == 3
        assert len(result.derivative) == 1
        assert not result.degenerate.any()

    def test_crossing_stable_under_grid_refinement(self):
        group = SpinGroup("quartet")

        def locate(step):
            deltas = np.round(np.arange(0.85, 1.15 + step / 2, step), 10)
            res = gqd_scan(CRITICAL, deltas, group, "fixed-x")
            roots = zero_crossings(res.deltas[1:-1], res.derivative)
            assert len(roots) == 1
            return roots[0]

        coarse, fine = locate(0.04), locate(0.02)
        assert abs(coarse - fine) < 0.02

    def test_invalid_strategy(self):
        with pytest.raises(ValueError):
            gqd_scan(CRITICAL, [0.9, 1.0], SpinGroup("quartet"), "minimize")

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            gqd_scan(CRITICAL, [], SpinGroup("quartet"), "fixed-x")

    def test_threads_match_serial(self):
        deltas = [0.9, 1.0, 1.1]
        serial = gqd_scan(CRITICAL, deltas, SpinGroup("quartet"), "fixed-x", threads=1)
        threaded = gqd_scan(CRITICAL, deltas, SpinGroup("quartet"), "fixed-x", threads=3)
        assert np.array_equal(serial.gqd, threaded.gqd)


class TestPairwiseScans:
    def test_same_site_discord_vanishes(self):
        deltas = [0.2, 0.8, 1.0, 1.4, 1.8]
        result = pairwise_discord_scan(CRITICAL, deltas, "same-site")
        assert np.abs(result.gqd).max() <= 1e-8

    def test_neighbor_pair_positive_no_extremum(self):
        deltas = np.round(np.arange(0.85, 1.16, 0.05), 10)
        result = pairwise_discord_scan(CRITICAL, deltas, "neighbor-sigma")
        assert (result.gqd > 1e-3).all()
        interior = result.deltas[1:-1]
        assert zero_crossings(interior, result.derivative, lo=0.9, hi=1.1) == []


class TestHelpers:
    def test_central_difference(self):
        x = np.array([0.0, 1.0, 2.0, 3.0])
        y = x**2
        assert np.allclose(central_difference(x, y), [2.0, 4.0])

    def test_zero_crossings_interpolation(self):
        x = np.array([0.0, 1.0, 2.0])
        d = np.array([1.0, -1.0, -2.0])
        assert zero_crossings(x, d) == [0.5]
        assert zero_crossings(x, d, lo=0.6) == []

    def test_default_delta_grid(self):
        grid = default_delta_grid()
        assert grid[0] == 0.2 and grid[-1] == 1.8
        assert np.all(np.diff(grid) > 0)
        fine = grid[(grid >= 0.85) & (grid <= 1.15)]
        assert np.allclose(np.diff(fine), 0.01)

    def test_default_delta_grid_rejects_bad_range(self):
        with pytest.raises(ValueError):
            default_delta_grid(start=1.0, stop=0.5)


class TestScanResultValidation:
    def test_inconsistent_lengths(self):
        with pytest.raises(ValueError):
            ScanResult(
                deltas=np.array([1.0, 2.0]),
                gqd=np.array([0.1]),
                derivative=np.empty(0),
                basis="fixed-x",
                chain=CRITICAL,
                group=SpinGroup("quartet"),
                degenerate=np.array([False, False]),
            )
