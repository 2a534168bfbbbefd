"""Evolve-measure-repeat: fast contraction path vs the density-matrix loop."""

import numpy as np
import pytest

from logipure.codes import HeisenbergSpec, build_heisenberg_code, cardinal_state
from logipure.emr import (
    CALIBRATED_AUX_ENERGY,
    CHAIN_BENCHMARK,
    KEEP,
    RESET,
    RoundSpec,
    XYSetup,
    build_xy_setup,
    fast_trajectory,
    find_m_min,
    reproduce_table1,
    round_contraction,
    run_emr,
    thermal_ensemble,
)
from logipure.measurement import MeasurementSetting
from logipure.operators import SIGMA_Z, embed, gibbs, hermitian_eig, kron, kron_all

BETA = 0.1


def two_site_problem(j_2=0.3, gamma=0.4):
    spec = HeisenbergSpec(n_qubits=2)
    code = build_heisenberg_code(spec)
    setup = XYSetup(n_system=2, n_aux=1, j_2=j_2, gamma=gamma)
    h_tot = build_xy_setup(setup, spec)
    return code, h_tot


def test_fast_matches_reference_loop():
    code, h_tot = two_site_problem()
    target = cardinal_state(code, "z-")
    u = hermitian_eig(h_tot).unitary(1.0)
    ensemble = thermal_ensemble([code], BETA)
    rho0 = kron(gibbs(code.hamiltonian, BETA)[0], np.diag([1.0, 0.0]).astype(complex))
    settings = (MeasurementSetting(a=np.pi / 2, b=0.3, k=+1),)
    rounds = RoundSpec(duration=1.0, settings=settings)
    for policy in (KEEP, RESET):
        ref = run_emr(h_tot, rho0, rounds, target, 6, aq_reset=policy)
        fast = fast_trajectory(u, ensemble, settings, target, 6, aq_reset=policy)
        assert ref.n_rounds == fast.n_rounds == 6
        assert np.allclose(ref.fidelity, fast.fidelity, atol=1e-10)
        assert np.allclose(ref.p_round, fast.p_round, atol=1e-10)
        assert np.allclose(ref.p_cumulative, fast.p_cumulative, atol=1e-10)


def test_policies_coincide_at_poles():
    """a=0, k=+1 leaves the auxiliary qubit in |0>, so keep == reset."""
    code, h_tot = two_site_problem(j_2=1.0, gamma=1.0)
    target = cardinal_state(code, "z+")
    u = hermitian_eig(h_tot).unitary(1.0)
    ensemble = thermal_ensemble([code], BETA)
    settings = (MeasurementSetting(a=0.0, b=0.0, k=+1),)
    keep = fast_trajectory(u, ensemble, settings, target, 10, aq_reset=KEEP)
    reset = fast_trajectory(u, ensemble, settings, target, 10, aq_reset=RESET)
    assert np.allclose(keep.fidelity, reset.fidelity, atol=1e-12)
    assert np.allclose(keep.p_cumulative, reset.p_cumulative, atol=1e-12)


def test_policies_differ_off_pole():
    code, h_tot = two_site_problem()
    target = cardinal_state(code, "x+")
    u = hermitian_eig(h_tot).unitary(1.0)
    ensemble = thermal_ensemble([code], BETA)
    settings = (MeasurementSetting(a=np.pi / 2, b=0.0, k=+1),)
    keep = fast_trajectory(u, ensemble, settings, target, 8, aq_reset=KEEP)
    reset = fast_trajectory(u, ensemble, settings, target, 8, aq_reset=RESET)
    assert np.max(np.abs(keep.fidelity - reset.fidelity)) > 1e-6


def test_cumulative_is_product_of_rounds():
    code, h_tot = two_site_problem()
    target = cardinal_state(code, "z-")
    u = hermitian_eig(h_tot).unitary(1.0)
    traj = fast_trajectory(
        u, thermal_ensemble([code], BETA), (MeasurementSetting(a=0.0),), target, 12
    )
    assert np.allclose(np.cumprod(traj.p_round), traj.p_cumulative, rtol=1e-12)
    assert traj.n_rounds == 12
    rows = traj.csv_rows()
    assert rows[0] == "round,f,p_round,p_cumulative"
    assert len(rows) == 13
    assert rows[1].startswith("1,")


def test_find_m_min_edges():
    code, h_tot = two_site_problem(j_2=0.0, gamma=0.0)
    target = cardinal_state(code, "z-")
    u = hermitian_eig(h_tot).unitary(1.0)
    traj = fast_trajectory(
        u, thermal_ensemble([code], BETA), (MeasurementSetting(a=0.0),), target, 30
    )
    m = find_m_min(traj, 0.66)
    assert m is not None and traj.fidelity[m - 1] >= 0.66
    if m > 1:
        assert traj.fidelity[m - 2] < 0.66
    assert find_m_min(traj, 1.0 - 1e-6) is not None  # this row purifies fully
    # an impossible threshold on a short window
    assert find_m_min(traj, 0.999999, max_rounds=1) is None
    with pytest.raises(ValueError):
        find_m_min(traj, 0.0)
    with pytest.raises(ValueError):
        find_m_min(traj, 1.5)


def test_thermal_ensemble_factorization():
    code = build_heisenberg_code(HeisenbergSpec(n_qubits=2))
    rho1 = gibbs(code.hamiltonian, 0.7)[0]
    v = thermal_ensemble([code], 0.7)
    assert np.allclose(v @ v.conj().T, rho1, atol=1e-12)
    v2 = thermal_ensemble([code, code], 0.7)
    assert np.allclose(v2 @ v2.conj().T, kron_all([rho1, rho1]), atol=1e-12)


def test_round_contraction_against_dense():
    rng = np.random.default_rng(5)
    d_s = 4
    h = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = h + h.conj().T
    u = hermitian_eig(h).unitary(0.6)
    s = MeasurementSetting(a=1.2, b=0.4, k=-1)
    chi = np.array([0.6, 0.8], dtype=complex)
    k_op = round_contraction(u, d_s, (s,), chi)
    psi_out = s.state()
    dense = np.kron(np.eye(d_s), psi_out.conj()[None, :]) @ u @ np.kron(np.eye(d_s), chi[:, None])
    assert np.allclose(k_op, dense, atol=1e-12)
    with pytest.raises(ValueError):
        round_contraction(u, 3, (s,), chi)


def test_magnetization_conserved_iff_isotropic():
    spec = HeisenbergSpec(n_qubits=2)
    sz_tot = sum(embed(SIGMA_Z, 3, [q]) for q in range(3))
    h_iso = build_xy_setup(XYSetup(n_system=2, j_2=0.7, gamma=0.0), spec)
    assert np.max(np.abs(h_iso @ sz_tot - sz_tot @ h_iso)) < 1e-12
    h_aniso = build_xy_setup(XYSetup(n_system=2, j_2=0.7, gamma=0.5), spec)
    assert np.max(np.abs(h_aniso @ sz_tot - sz_tot @ h_aniso)) > 1e-6


def test_xy_setup_structure():
    spec = HeisenbergSpec(n_qubits=2)
    code = build_heisenberg_code(spec)
    # decoupled: chain plus the auxiliary splitting only
    h0 = build_xy_setup(XYSetup(n_system=2, j_1=0.0, j_2=0.0, aux_energy=2.5), spec)
    expected = kron(code.hamiltonian, np.eye(2)) + 2.5 * embed(
        np.diag([0.0, 1.0]).astype(complex), 3, [2]
    )
    assert np.allclose(h0, expected, atol=1e-12)
    # resonance default equals passing the gap explicitly
    h_none = build_xy_setup(XYSetup(n_system=2), spec)
    h_gap = build_xy_setup(XYSetup(n_system=2, aux_energy=code.gap), spec)
    assert np.allclose(h_none, h_gap, atol=1e-14)
    h = build_xy_setup(XYSetup(n_system=2, n_aux=1, j_2=0.3, gamma=0.2), spec)
    assert h.shape == (8, 8)
    assert np.allclose(h, h.conj().T, atol=1e-12)


def test_truncation_when_decoupled():
    """With no coupling, the AQ never leaves |0>: postselecting |1> dies at once."""
    spec = HeisenbergSpec(n_qubits=2)
    code = build_heisenberg_code(spec)
    h_tot = build_xy_setup(XYSetup(n_system=2, j_1=0.0, j_2=0.0), spec)
    u = hermitian_eig(h_tot).unitary(1.0)
    traj = fast_trajectory(
        u,
        thermal_ensemble([code], BETA),
        (MeasurementSetting(a=np.pi, k=+1),),
        cardinal_state(code, "z+"),
        10,
    )
    assert traj.truncated
    assert traj.n_rounds == 0
    assert "below" in traj.reason


def test_validation_errors():
    spec = HeisenbergSpec(n_qubits=2)
    with pytest.raises(ValueError):
        XYSetup(n_system=2, n_aux=0)
    with pytest.raises(ValueError):
        XYSetup(n_system=2, gamma=1.5)
    with pytest.raises(ValueError):
        XYSetup(n_system=2, n_aux=1, attachments=((0, 2),))
    with pytest.raises(ValueError):
        XYSetup(n_system=4, n_aux=2, attachments=((0, 1), (2, 3)))  # not consecutive
    with pytest.raises(ValueError):
        XYSetup(n_system=2, aux_energy=-1.0)
    with pytest.raises(ValueError):
        XYSetup(n_system=2, n_aux=2)  # attachment (1, 2) runs off the chain
    with pytest.raises(ValueError):
        build_xy_setup(XYSetup(n_system=4), HeisenbergSpec(n_qubits=2))
    with pytest.raises(ValueError):
        RoundSpec(duration=0.0, settings=(MeasurementSetting(a=0.0),))
    with pytest.raises(ValueError):
        RoundSpec(duration=1.0, settings=())
    with pytest.raises(ValueError):
        RoundSpec(duration=1.0, settings=(MeasurementSetting(a=0.0),), outcomes=((+1, -1),))
    code = build_heisenberg_code(spec)
    h_tot = build_xy_setup(XYSetup(n_system=2), spec)
    rho0 = kron(gibbs(code.hamiltonian, BETA)[0], np.diag([1.0, 0.0]).astype(complex))
    rounds = RoundSpec(duration=1.0, settings=(MeasurementSetting(a=0.0),))
    target = cardinal_state(code, "z-")
    with pytest.raises(ValueError):
        run_emr(h_tot, rho0, rounds, target, 0)
    with pytest.raises(ValueError):
        run_emr(h_tot, rho0, rounds, target, 5, aq_reset="discard")
    u = hermitian_eig(h_tot).unitary(1.0)
    with pytest.raises(ValueError):
        fast_trajectory(u, thermal_ensemble([code], BETA), rounds.settings, target, 5, aq_reset="discard")


def test_reproduce_first_row():
    report = reproduce_table1(rows=[1])
    params = report["parameters"]
    assert params["aux_energy"] == CALIBRATED_AUX_ENERGY
    assert params["aux_energy_policy"] == "calibrated"
    assert len(report["rows"]) == 1
    row = report["rows"][0]
    assert row["printed_target"] == "z+"
    assert {c["cardinal"] for c in row["candidates"]} == {"z+", "z-"}
    matched = row["matched"]
    # the printed z+ row purifies the polarized state, z- in this convention
    assert matched["cardinal"] == "z-"
    assert matched["m_min_066"] == row["reference"]["m_min_066"] == 4
    assert abs(row["deltas"]["p_066"]) <= 0.005
    assert abs(row["deltas"]["p_090"]) <= 0.005
    assert matched["max_fidelity"] > 1.0 - 1e-6


def test_reproduce_explicit_energy():
    report = reproduce_table1(rows=[1], aux_energy=1.0, max_rounds=50)
    assert report["parameters"]["aux_energy"] == 1.0
    assert report["parameters"]["aux_energy_policy"] == "explicit"


def test_benchmark_table_shape():
    assert len(CHAIN_BENCHMARK) == 12
    assert [r.n_sites for r in CHAIN_BENCHMARK] == [2] * 6 + [4, 4, 6, 6, 8, 8]
    assert all(len(r.settings) == (1 if r.n_sites == 2 else 2) for r in CHAIN_BENCHMARK)
    assert CHAIN_BENCHMARK[5].note  # the corrected-angle row carries its note
