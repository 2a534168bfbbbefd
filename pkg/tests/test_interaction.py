"""Engineered couplings, total Hamiltonian assembly, Pauli decomposition."""

import numpy as np
import pytest

from logipure.codes import HeisenbergSpec, LogicalTarget, build_heisenberg_code, build_repetition_code
from logipure.interaction import (
    AuxiliarySpec,
    InteractionSpec,
    aux_hamiltonian,
    build_interaction,
    build_total,
    compare_term_lists,
    es_superposition,
    es_uniform_state,
    joint_target_state,
    pauli_decompose,
    pauli_reconstruct,
    system_hamiltonian,
    three_qubit_coupling_reference,
)
from logipure.operators import KET_0, KET_1, kron, pauli_operator


def rep_code():
    return build_repetition_code(1.0)


def test_rank_one_action():
    code = rep_code()
    target = LogicalTarget(0.7, 1.1)
    spec = InteractionSpec(coupling=0.9, targets=(target,))
    h = build_interaction([code], spec)
    assert h.shape == (16, 16)
    assert np.allclose(h, h.conj().T, atol=1e-12)

    psi = joint_target_state([code], (target,))
    phi = es_uniform_state([code])
    # the coupling sends |Phi, 0_A> to g |Psi, 1_A> and nothing else
    assert np.allclose(h @ kron(phi, KET_0), 0.9 * kron(psi, KET_1), atol=1e-12)
    assert np.allclose(h @ kron(psi, KET_1), 0.9 * kron(phi, KET_0), atol=1e-12)
    # logical states orthogonal to |Psi> are left alone
    other = joint_target_state([code], (LogicalTarget(np.pi - 0.7, 1.1 + np.pi),))
    assert np.allclose(h @ kron(other, KET_0), 0.0, atol=1e-12)


def test_es_states():
    code = rep_code()
    phi = es_uniform_state([code])
    assert abs(np.linalg.norm(phi) - 1.0) < 1e-12
    amps = np.zeros(6)
    amps[2] = 1.0
    phi2 = es_superposition([code], (amps,))
    assert abs(np.linalg.norm(phi2) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        es_superposition([code], (np.ones(4) / 2.0,))  # wrong count
    with pytest.raises(ValueError):
        InteractionSpec(coupling=1.0, es_amplitudes=(np.ones(6),))  # not normalized


def test_targeted_variant_scales_uniformly():
    code = rep_code()
    target = LogicalTarget(0.0, 0.0)
    spec = InteractionSpec(coupling=0.5, targets=(target,), variant="targeted")
    h = build_interaction([code], spec)
    psi1 = kron(joint_target_state([code], (target,)), KET_1)
    # every excited basis state couples to |Psi, 1_A> with element exactly g
    for v in code.es_basis:
        assert abs(np.vdot(psi1, h @ kron(v, KET_0)) - 0.5) < 1e-12
    with pytest.raises(ValueError):
        amps = np.zeros(6)
        amps[0] = 1.0
        build_interaction(
            [code],
            InteractionSpec(coupling=0.5, targets=(target,), variant="targeted", es_amplitudes=(amps,)),
        )


def test_ground_prep_variant():
    h_single = np.diag([0.0, 1.0, 1.0, 2.0]).astype(complex)
    from logipure.codes import code_from_hamiltonian

    host = code_from_hamiltonian(h_single)
    spec = InteractionSpec(coupling=1.0, variant="ground-prep")
    h = build_interaction([host], spec)
    psi = host.ls_basis[0]
    phi = es_uniform_state([host])
    assert np.allclose(h @ kron(phi, KET_0), kron(psi, KET_1), atol=1e-12)
    with pytest.raises(ValueError):
        build_interaction([rep_code()], spec)  # two-fold ground manifold
    with pytest.raises(ValueError):
        build_interaction(
            [host],
            InteractionSpec(coupling=1.0, targets=(LogicalTarget(0, 0),), variant="ground-prep"),
        )


def test_build_total_structure():
    code = rep_code()
    spec = InteractionSpec(coupling=1.0, targets=(LogicalTarget(0.0, 0.0),))
    h_sa = build_interaction([code], spec)
    aux = AuxiliarySpec(count=1, energy=4.0)
    h_tot = build_total([code], h_sa, aux)
    assert h_tot.shape == (16, 16)
    want = kron(code.hamiltonian, np.eye(2)) + kron(np.eye(8), aux_hamiltonian(aux)) + h_sa
    assert np.allclose(h_tot, want, atol=1e-12)
    # auxiliary ground energy is exactly zero: acting on |000, 0_A> gives the coupling only
    ground = kron(code.ls_basis[0], KET_0)
    assert np.allclose(h_tot @ ground, h_sa @ ground, atol=1e-12)
    with pytest.raises(ValueError):
        build_total([code], h_sa[:8, :8], aux)


def test_system_hamiltonian_two_codes():
    code = rep_code()
    h = system_hamiltonian([code, code])
    want = kron(code.hamiltonian, np.eye(8)) + kron(np.eye(8), code.hamiltonian)
    assert np.allclose(h, want, atol=1e-12)


def test_aux_hamiltonian_two_qubits():
    aux = AuxiliarySpec(count=2, energy=3.0)
    h = aux_hamiltonian(aux)
    assert np.allclose(np.diag(h), [0.0, 3.0, 3.0, 6.0], atol=1e-12)


def test_pauli_decompose_roundtrip():
    rng = np.random.default_rng(17)
    for n in (2, 3):
        dim = 2**n
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = (m + m.conj().T) / 2
        terms = pauli_decompose(h, cutoff=0.0)
        assert len(terms) == 4**n
        assert np.allclose(pauli_reconstruct(terms), h, atol=1e-12)
        # hermitian input gives real coefficients
        assert max(abs(t.coefficient.imag) for t in terms) < 1e-12
        # lexicographic I < X < Y < Z output order
        letters = [t.letters for t in terms]
        assert letters == sorted(letters)


def test_pauli_decompose_known_operator():
    h = 0.25 * pauli_operator("XY") - 1.5 * pauli_operator("ZI")
    terms = {t.letters: t.coefficient for t in pauli_decompose(h)}
    assert set(terms) == {"XY", "ZI"}
    assert abs(terms["XY"] - 0.25) < 1e-14
    assert abs(terms["ZI"] + 1.5) < 1e-14


def test_three_qubit_reference_matches_decomposition():
    code = rep_code()
    for theta, phi in ((0.0, 0.0), (np.pi / 3, 1.1), (np.pi, 0.3)):
        spec = InteractionSpec(coupling=1.0, targets=(LogicalTarget(theta, phi),))
        h = build_interaction([code], spec)
        computed = pauli_decompose(h)
        reference = three_qubit_coupling_reference(theta, phi, 1.0)
        report = compare_term_lists(computed, reference)
        assert report["agree"], report
        assert report["max_delta"] < 1e-12
        assert report["n_computed"] == report["n_reference"]


def test_reference_term_count_at_poles():
    # at theta=0, phi=0 half the canonical terms vanish (zeta_- = 0)
    assert len(three_qubit_coupling_reference(0.0, 0.0, 1.0)) == 48
    assert len(three_qubit_coupling_reference(np.pi / 3, 0.9, 1.0)) == 96
