"""Eigensolver contracts, edge-state analytics and spectrum traces."""

import numpy as np
import pytest

from topochain import (
    NumericError,
    PhaseDomainError,
    analytic_edge_states,
    build_ssh,
    build_trimer,
    edge_weight,
    eigendecompose,
    instantaneous_spectrum,
    localization_length,
    optimized_schedule,
    pump_schedule,
    trimer_edge_states,
)
from topochain.models import ChainHamiltonian, Schedule, const
from topochain.spectra import coupling_ratio_norm_sq, trace_from_hamiltonians

from conftest import dense_eigvals, random_chain


def test_two_site_spectrum():
    s = eigendecompose(ChainHamiltonian(np.zeros(2), np.array([0.5])))
    assert np.allclose(s.eigenvalues, [-0.5, 0.5], atol=1e-15)


def test_14_site_ssh_midgap_pair():
    s = eigendecompose(build_ssh(7, 0.1, 1.0))
    magnitudes = np.sort(np.abs(s.eigenvalues))
    assert magnitudes[1] < 1e-6
    assert magnitudes[2] > 0.85


def test_four_site_eigenvalues_to_quartic_roots():
    a, b = 0.1, 1.0
    s = eigendecompose(build_ssh(2, a, b))
    e_sq = np.roots([1.0, -(2 * a * a + b * b), a**4])
    expected = np.sort(np.concatenate([-np.sqrt(e_sq), np.sqrt(e_sq)]))
    assert np.abs(s.eigenvalues - expected).max() < 1e-6


def test_eigendecompose_contracts(rng):
    for _ in range(60):
        h = random_chain(rng, max_sites=10)
        s = eigendecompose(h)
        assert np.all(np.diff(s.eigenvalues) >= -1e-14)
        norms = np.linalg.norm(s.eigenvectors, axis=0)
        assert np.abs(norms - 1.0).max() <= 1e-12
        scale = np.maximum(1.0, np.abs(s.eigenvalues))
        resid = np.abs(h.to_dense() @ s.eigenvectors - s.eigenvectors * s.eigenvalues)
        assert (resid.max(axis=0) <= 1e-10 * scale).all()
        gram = s.eigenvectors.T @ s.eigenvectors
        assert np.abs(gram - np.eye(h.n_sites)).max() <= 1e-10


def test_eigendecompose_matches_dense_oracle(rng):
    for _ in range(200):
        h = random_chain(rng, max_sites=8)
        vals = eigendecompose(h).eigenvalues
        assert np.abs(vals - dense_eigvals(h)).max() <= 1e-10


def test_sign_convention_deterministic(rng):
    h = random_chain(rng, max_sites=9)
    a = eigendecompose(h).eigenvectors
    b = eigendecompose(h).eigenvectors
    assert np.array_equal(a, b)
    lead = np.argmax(np.abs(a), axis=0)
    assert np.all(a[lead, np.arange(a.shape[1])] > 0)


def test_chiral_symmetry_of_zero_diagonal_chains(rng):
    for _ in range(60):
        h = random_chain(rng, max_sites=12, zero_diagonal=True)
        vals = eigendecompose(h).eigenvalues
        assert np.abs(vals + vals[::-1]).max() <= 1e-10


def test_eigendecompose_rejects_nonfinite():
    h = build_ssh(2, 0.1, 1.0)
    bad = ChainHamiltonian.__new__(ChainHamiltonian)
    object.__setattr__(bad, "diagonal", np.array([0.0, np.nan]))
    object.__setattr__(bad, "offdiagonal", np.array([1.0]))
    with pytest.raises(NumericError):
        eigendecompose(bad)
    assert eigendecompose(h)  # untouched path still fine


# -- analytic edge states ----------------------------------------------------


def test_edge_states_a_zero_limit():
    pair = analytic_edge_states(0.0, 1.0, 5)
    assert pair.xi_norm == 1.0
    assert np.array_equal(pair.left, np.eye(10)[0])
    assert np.array_equal(pair.right, np.eye(10)[9])


def test_edge_states_decay_and_support():
    pair = analytic_edge_states(0.1, 1.0, 7)
    assert abs(pair.xi_norm**2 - 0.99) < 1e-10
    assert np.all(pair.left[1::2] == 0.0)
    assert np.all(pair.right[0::2] == 0.0)
    amps = pair.left[0::2]
    assert np.allclose(amps[1:] / amps[:-1], -0.1, atol=1e-14)
    assert abs(np.linalg.norm(pair.left) - 1.0) < 1e-14


def test_edge_states_match_degenerate_subspace():
    s = eigendecompose(build_ssh(7, 0.1, 1.0))
    idx = np.argsort(np.abs(s.eigenvalues))[:2]
    sub = s.eigenvectors[:, idx]
    pair = analytic_edge_states(0.1, 1.0, 7)
    for sign in (1.0, -1.0):
        hybrid = (pair.left + sign * pair.right) / np.sqrt(2.0)
        overlap = np.linalg.norm(sub @ (sub.T @ hybrid)) ** 2
        assert overlap >= 1.0 - 1e-6


def test_edge_states_reject_trivial_phase():
    with pytest.raises(PhaseDomainError):
        analytic_edge_states(1.0, 1.0, 7)
    with pytest.raises(PhaseDomainError):
        analytic_edge_states(1.2, 1.0, 7)


def test_coupling_ratio_norm_limit():
    assert coupling_ratio_norm_sq(1.0, 7) == pytest.approx(1.0 / 7)
    assert coupling_ratio_norm_sq(0.0, 7) == 1.0


# -- trimer edge states -------------------------------------------------------


def test_trimer_edge_states_a_zero():
    st = trimer_edge_states(0.0, 1.0, 4)
    root2 = np.sqrt(2.0)
    expect_plus = np.zeros(12)
    expect_plus[0] = expect_plus[1] = 1 / root2
    assert np.array_equal(st.left_plus, expect_plus)
    expect_minus = np.zeros(12)
    expect_minus[0], expect_minus[1] = 1 / root2, -1 / root2
    assert np.array_equal(st.left_minus, expect_minus)


def test_trimer_edge_states_sublattice_support():
    st = trimer_edge_states(1.0, 2.0, 8)
    for state in (st.left_plus, st.left_minus):
        assert np.all(state[2::3] == 0.0)  # no C-site weight
    for state in (st.right_plus, st.right_minus):
        assert np.all(state[0::3] == 0.0)  # no A-site weight
    for state in st.all_states():
        assert abs(np.linalg.norm(state) - 1.0) < 1e-12


def test_trimer_edge_states_orthonormal_deep_in_phase():
    # exact cross overlaps <L+-|R+-> = +-Xi^2 lam^(L-1) L / 2 vanish only
    # for small lam; at lam = a/c = 0.01 they sit far below 1e-10
    st = trimer_edge_states(0.01, 1.0, 8)
    states = np.column_stack(st.all_states())
    gram = states.T @ states
    assert np.abs(gram - np.eye(4)).max() <= 1e-10


def test_trimer_hybrids_match_in_gap_subspaces():
    s = eigendecompose(build_trimer(8, 1.0, 1.0, 2.0, 0.0, 0.0, 0.0))
    st = trimer_edge_states(1.0, 2.0, 8)
    lower = s.eigenvectors[:, (s.eigenvalues > -1.1) & (s.eigenvalues < -0.9)]
    upper = s.eigenvectors[:, (s.eigenvalues > 0.9) & (s.eigenvalues < 1.1)]
    assert lower.shape[1] == 2 and upper.shape[1] == 2
    for sub, plus_family in ((upper, True), (lower, False)):
        left, right = (st.left_plus, st.right_plus) if plus_family else (st.left_minus, st.right_minus)
        for sign in (1.0, -1.0):
            hybrid = left + sign * right
            hybrid = hybrid / np.linalg.norm(hybrid)
            overlap = np.linalg.norm(sub @ (sub.T @ hybrid)) ** 2
            assert overlap >= 0.999


def test_trimer_edge_states_reject_trivial_phase():
    with pytest.raises(PhaseDomainError):
        trimer_edge_states(2.0, 1.0, 8)


# -- localization length -------------------------------------------------------


def test_localization_length_values():
    assert localization_length(0.1, 1.0) == pytest.approx(1.0 / np.log(10.0), rel=1e-12)
    assert localization_length(0.99, 1.0) > 99.0
    assert localization_length(0.0, 1.0) == 0.0
    with pytest.raises(PhaseDomainError):
        localization_length(1.0, 0.5)


def test_localization_length_matches_edge_decay():
    a, b, L = 0.3, 1.0, 9
    xi = localization_length(a, b)
    pair = analytic_edge_states(a, b, L)
    amps = np.abs(pair.left[0::2])
    j = np.arange(1, 2 * L, 2, dtype=float)
    predicted = amps[0] * np.exp(-(j - 1) / (2 * xi))
    assert np.abs(amps - predicted).max() <= 1e-12


# -- edge weight and traces -----------------------------------------------------


def test_edge_weight_basics():
    e1 = np.eye(14)[0]
    assert edge_weight(e1, 1) == 1.0
    uniform = np.full(14, 1 / np.sqrt(14))
    assert edge_weight(uniform, 1) == pytest.approx(2 / 14)
    assert edge_weight(uniform, 7) == pytest.approx(1.0)
    assert edge_weight(uniform, 10) == pytest.approx(1.0)  # windows overlap, count once


def test_edge_weight_analytic_left_state():
    pair = analytic_edge_states(0.1, 1.0, 7)
    # closed form: left-edge cells carry Xi^2*(1+0); the right tail adds
    # Xi^2 lam^(2(L-1)) ~ 1e-13
    assert edge_weight(pair.left, 2) == pytest.approx(0.99, abs=1e-10)


def test_instantaneous_spectrum_static_schedule():
    sch = Schedule("ssh", 10.0, {"a": const(0.1), "b": const(1.0)})
    trace = instantaneous_spectrum(sch, 7, 5)
    assert np.abs(trace.energies - trace.energies[0]).max() == 0.0
    assert trace.edge_flags[:, 6:8].all()


def test_instantaneous_spectrum_pump_degenerate_start():
    trace = instantaneous_spectrum(pump_schedule(100.0), 7, 51)
    start = trace.energies[0]
    mid = np.sort(np.abs(start))[:2]
    assert mid.max() < 1e-6
    assert trace.edge_flags[0].sum() == 2


def test_instantaneous_spectrum_optimized_gap_stays_open():
    trace = instantaneous_spectrum(optimized_schedule(100.0), 7, 101)
    followed = 7  # ascending index of the upper mid-gap branch for 14 sites
    gaps = []
    for i in range(trace.times.size):
        energies = trace.energies[i]
        others = [
            abs(energies[j] - energies[followed])
            for j in range(energies.size)
            if j != followed and not trace.edge_flags[i, j]
        ]
        gaps.append(min(others))
    assert min(gaps) > 0.0


def test_trace_from_hamiltonians_rejects_mixed_sizes():
    from topochain.errors import InvalidParameterError

    with pytest.raises(InvalidParameterError):
        trace_from_hamiltonians([0.0, 1.0], [build_ssh(2, 0.1, 1.0), build_ssh(3, 0.1, 1.0)], 2)
