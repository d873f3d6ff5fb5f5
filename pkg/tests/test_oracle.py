import logging
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entlifepy.entlifeTypes import (
    BipartitionCut, DephasingAxis, Graph, GraphBasisIndex, LatticeKind, PauliLetter, PauliString, ZPattern,
)
from entlifepy.errors import DomainError, ResourceError, ValidationError
from entlifepy.ghz_analysis import equal_partition, ghz_spectrum, lower_bound_M, ppt_positive
from entlifepy.graph_core import (
    SQRT2_MINUS_1, correlation_operator, make_lattice, pauli_to_zpattern, reduced_pair_state,
)
from entlifepy.noise_model import depolarizing_channel, noise_from_p
from entlifepy.oracle import SIGN_TOL, DensityMatrixOracle
from entlifepy.suites import get_suite

pytestmark = pytest.mark.oracle


def first_k(k):
    return BipartitionCut(frozenset(range(k)))


def zpattern_string(n, support):
    return PauliString("".join("Z" if v in support else "I" for v in range(n)))


# ===================================================================
# STATES AND CHANNELS
# ===================================================================

@pytest.mark.parametrize("kind, dims", [
    (LatticeKind.Linear, (4,)), (LatticeKind.Star, (4,)), (LatticeKind.Ring, (5,)), (LatticeKind.Grid2D, (2, 3)),
])
def test_graph_state_stabilizers(oracle, kind, dims):
    g = make_lattice(kind, dims)
    rho = oracle.build_graph_state(g)
    assert rho.invariant_violations() == []
    assert float(np.trace(rho.entries @ rho.entries).real) == pytest.approx(1.0, abs=1e-12)
    for j in range(g.n):
        assert oracle.expectation(rho, correlation_operator(g, j)) == pytest.approx(1.0, abs=1e-12)


def test_single_edge_is_maximally_entangled(oracle):
    rho = oracle.build_graph_state(make_lattice(LatticeKind.Linear, (2,)))
    assert oracle.min_pt_eigenvalue(rho, first_k(1)) == pytest.approx(-0.5, abs=1e-12)


def test_product_state_is_ppt(oracle):
    rho = oracle.build_graph_state(Graph(n=2, edges=frozenset()))
    assert oracle.min_pt_eigenvalue(rho, first_k(1)) >= -SIGN_TOL


def test_noiseless_channel_is_identity(oracle, rng):
    rho = oracle.random_density_matrix(3, rng)
    out = oracle.apply_channel(rho, 1.0)
    assert np.allclose(out.entries, rho.entries, atol=1e-15)


def test_depolarizing_keeps_state_valid(oracle, rng):
    rho = oracle.apply_channel(oracle.random_density_matrix(3, rng), noise_from_p(0.3))
    assert rho.invariant_violations() == []


def test_pauli_channel_matches_depolarizing_per_site(oracle, rng):
    np_ = noise_from_p(0.45)
    rho = oracle.random_density_matrix(2, rng)
    via_channels = oracle.apply_channel(rho, depolarizing_channel(np_, n=2, site=0))
    via_channels = oracle.apply_channel(via_channels, depolarizing_channel(np_, n=2, site=1))
    assert np.allclose(via_channels.entries, oracle.apply_channel(rho, np_).entries, atol=1e-14)


def test_channel_identity(oracle):
    for p in (0.05, 0.5, 0.93):
        assert oracle.channel_identity_check(noise_from_p(p), samples=10, seed=7) < 1e-12


def test_local_unitary_covariance(oracle, rng):
    rho = oracle.random_density_matrix(3, rng)
    assert oracle.local_unitary_covariance(rho, noise_from_p(0.6), seed=3) < 1e-12


def test_dephasing_rejects_bad_input(oracle):
    rho = oracle.build_ghz_state(2)
    with pytest.raises(DomainError):
        oracle.apply_dephasing(rho, DephasingAxis.Z, 1.5, 0)
    with pytest.raises(DomainError):
        oracle.apply_dephasing(rho, DephasingAxis.Z, 0.5, 2)


def test_size_cap():
    small = DensityMatrixOracle(max_qubits=4)
    with pytest.raises(ResourceError):
        small.build_ghz_state(5)
    with pytest.raises(ResourceError):
        DensityMatrixOracle(max_qubits=50).build_ghz_state(11)


@pytest.mark.parametrize("kind, dims", [(LatticeKind.Linear, (6,)), (LatticeKind.Star, (5,)), (LatticeKind.Ring, (8,))])
def test_pauli_equals_zpattern_on_graph_state(oracle, kind, dims):
    g = make_lattice(kind, dims)
    rho = oracle.build_graph_state(g)
    for j in range(g.n):
        for letter in ("X", "Y", "Z"):
            direct = oracle.apply_pauli(rho, PauliString.single(g.n, j, PauliLetter(letter)))
            pattern = pauli_to_zpattern(g, j, letter)
            via_z = oracle.apply_pauli(rho, zpattern_string(g.n, pattern.support))
            assert np.allclose(direct.entries, via_z.entries, atol=1e-12)


@pytest.mark.parametrize("kind, dims", [
    (LatticeKind.Linear, (4,)), (LatticeKind.Star, (4,)), (LatticeKind.Ring, (5,)), (LatticeKind.Grid2D, (2, 3)),
])
def test_zpattern_flips_graph_basis_index(oracle, kind, dims):
    g = make_lattice(kind, dims)
    assert oracle.graph_basis_index(oracle.build_graph_state(g), g) == GraphBasisIndex.zero(g.n)

    start = GraphBasisIndex(tuple(j % 2 for j in range(g.n)))
    shifted = oracle.build_graph_state(g, start)
    assert oracle.graph_basis_index(shifted, g) == start
    for support in (frozenset(), frozenset({0}), frozenset({0, g.n - 1}), frozenset(range(g.n))):
        rho = oracle.apply_pauli(shifted, zpattern_string(g.n, support))
        assert oracle.graph_basis_index(rho, g) == start.flipped(ZPattern(support))


def test_graph_basis_index_rejects_other_states(oracle):
    g = make_lattice(LatticeKind.Linear, (3,))
    with pytest.raises(ValidationError, match="not a graph-basis state"):
        oracle.graph_basis_index(oracle.build_ghz_state(3), g)
    with pytest.raises(ValidationError):
        oracle.build_graph_state(g, GraphBasisIndex.zero(4))
    with pytest.raises(ValidationError):
        GraphBasisIndex((0, 2))
    with pytest.raises(ValidationError):
        GraphBasisIndex.zero(3).flipped(ZPattern(frozenset({3})))


@given(
    st.integers(2, 4).flatmap(lambda n: st.tuples(
        st.just(n), st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))),
    st.integers(0, 2 ** 32 - 1),
)
def test_cut_and_complement_share_min_pt_eigenvalue(n_and_side, seed):
    n, side = n_and_side
    dense = DensityMatrixOracle(max_qubits=4)
    rho = dense.random_density_matrix(n, np.random.default_rng(seed))
    cut = BipartitionCut(frozenset(side))
    assert dense.min_pt_eigenvalue(rho, cut) == pytest.approx(
        dense.min_pt_eigenvalue(rho, cut.complement(n)), abs=1e-12)


# ===================================================================
# GHZ
# ===================================================================

def test_ghz_coefficients_n3(oracle):
    rho = oracle.apply_channel(oracle.build_ghz_state(3), 0.5)
    coeffs = oracle.ghz_coefficients(rho)
    assert coeffs.max_offdiag < 1e-12
    assert coeffs.by_weight(1, "+") == pytest.approx([0.09375, 0.09375], abs=1e-12)
    assert coeffs.by_weight(1, "-") == pytest.approx([0.09375, 0.09375], abs=1e-12)
    assert coeffs.values[("00", "+")] == pytest.approx(0.28125, abs=1e-12)
    assert coeffs.values[("00", "-")] == pytest.approx(0.15625, abs=1e-12)
    assert math.fsum(coeffs.values.values()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("N, p", [(4, 0.3), (5, 0.7), (6, 0.95)])
def test_ghz_coefficients_match_spectrum(oracle, N, p):
    coeffs = oracle.ghz_coefficients(oracle.apply_channel(oracle.build_ghz_state(N), p))
    spectrum = ghz_spectrum(N, noise_from_p(p))
    for k in range(1, N):
        for value in coeffs.by_weight(k, "+") + coeffs.by_weight(k, "-"):
            assert value == pytest.approx(spectrum.lambda_k(k), abs=1e-12)
    assert coeffs.values[("0" * (N - 1), "+")] == pytest.approx(spectrum.lambda0_plus, abs=1e-12)
    assert coeffs.values[("0" * (N - 1), "-")] == pytest.approx(spectrum.lambda0_minus, abs=1e-12)


def test_ghz_coefficients_need_two_qubits(oracle):
    with pytest.raises(DomainError):
        oracle.ghz_coefficients(oracle.build_ghz_state(1))


def test_bell_pair_ppt_boundary(oracle):
    rho = oracle.apply_channel(oracle.build_ghz_state(2), 3 ** -0.5)
    assert oracle.min_pt_eigenvalue(rho, first_k(1)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("N", range(2, 9))
def test_pt_sign_agrees_with_analytic_criterion(oracle, N):
    ghz = oracle.build_ghz_state(N)
    for p in np.linspace(0.02, 0.98, 50):
        np_ = noise_from_p(float(p))
        rho = oracle.apply_channel(ghz, np_)
        for k in range(1, N):
            min_eig = oracle.min_pt_eigenvalue(rho, first_k(k))
            if abs(min_eig) < 1e-9:
                continue
            assert (min_eig >= -SIGN_TOL) == ppt_positive(N, np_, k), (N, float(p), k)


def test_equal_partition_below_lower_bound_is_npt_on_every_cut(oracle):
    np_ = noise_from_p(0.9)
    assert lower_bound_M(np_).value >= 3
    partition = equal_partition(6, 3)
    rho = oracle.apply_channel(oracle.build_ghz_state(6), np_)
    cuts = oracle.partition_cuts(partition)
    assert len(cuts) == 3
    for cut in cuts:
        assert oracle.min_pt_eigenvalue(rho, cut) < -SIGN_TOL


def test_invalid_cut(oracle):
    rho = oracle.build_ghz_state(3)
    with pytest.raises(ValidationError):
        oracle.min_pt_eigenvalue(rho, BipartitionCut(frozenset({0, 1, 2})))
    with pytest.raises(ValidationError):
        oracle.min_pt_eigenvalue(rho, BipartitionCut(frozenset()))


# ===================================================================
# MEASUREMENT REDUCTION
# ===================================================================

def test_noiseless_linear4_reduces_to_edge_state(oracle):
    g = make_lattice(LatticeKind.Linear, (4,))
    reduced = oracle.measure_and_reduce(oracle.build_graph_state(g), (1, 2), g)
    assert oracle.pair_coefficients(reduced).q00 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kind, dims, p, pair", [
    (LatticeKind.Linear, (6,), 0.8, (2, 3)),
    (LatticeKind.Custom, [(0, 1), (1, 2), (0, 2)], 0.9, (0, 1)),
    (LatticeKind.Grid2D, (2, 3), 0.75, (1, 4)),
])
def test_measurement_reduction_matches_convolution(oracle, kind, dims, p, pair):
    g = make_lattice(kind, dims)
    np_ = noise_from_p(p)
    rho = oracle.apply_channel(oracle.build_graph_state(g), np_)
    analytic = reduced_pair_state(g, np_, *pair)

    dense = oracle.pair_coefficients(oracle.measure_and_reduce(rho, pair, g))
    assert dense.as_tuple() == pytest.approx(analytic.as_tuple(), abs=1e-10)

    branches = oracle.branch_states(rho, pair, g)
    assert len(branches) == 2 ** (g.n - 2)
    assert math.fsum(prob for _, prob, _ in branches) == pytest.approx(1.0, abs=1e-12)
    for _, _, branch in branches:
        assert oracle.pair_coefficients(branch).as_tuple() == pytest.approx(analytic.as_tuple(), abs=1e-10)


def test_triangle_closed_form_from_dense_state(oracle):
    g = make_lattice(LatticeKind.Custom, [(0, 1), (1, 2), (0, 2)])
    rho = oracle.apply_channel(oracle.build_graph_state(g), 0.9)
    q = oracle.pair_coefficients(oracle.measure_and_reduce(rho, (0, 1), g))
    assert q.q00 == pytest.approx((1 + 2 * 0.9 ** 3 + 0.9 ** 2) / 4, abs=1e-10)


def test_branch_states_reject_bad_pair(oracle):
    rho = oracle.build_ghz_state(3)
    with pytest.raises(DomainError):
        oracle.branch_states(rho, (1, 1))


# ===================================================================
# CHOI STATE
# ===================================================================

def test_choi_endpoints(oracle):
    assert oracle.choi_min_pt_eigenvalue(0.1) >= -SIGN_TOL
    assert oracle.choi_min_pt_eigenvalue(0.99) < -SIGN_TOL
    assert oracle.choi_state(0.5).invariant_violations() == []
    with pytest.raises(DomainError):
        oracle.choi_state(1.0)


def test_choi_suite_evaluates_single_points_without_scanning(oracle, caplog):
    with caplog.at_level(logging.WARNING):
        results = get_suite("choi").run(oracle)
    assert all(r.passed for r in results)
    assert "No PPT -> NPT crossing" not in caplog.text


def test_choi_crossing(oracle):
    step = 1e-3
    result = oracle.choi_pt_crossing(np.linspace(step, 1 - step, round(1 / step) - 1))
    assert result.found
    assert 0.40 <= result.crossing <= 0.43
    assert abs(result.crossing - SQRT2_MINUS_1) <= step
    assert result.bracket[0] <= SQRT2_MINUS_1 + SIGN_TOL


def test_choi_grid_validation(oracle):
    with pytest.raises(DomainError):
        oracle.choi_pt_crossing([])
    with pytest.raises(DomainError):
        oracle.choi_pt_crossing([0.5, 1.0])
