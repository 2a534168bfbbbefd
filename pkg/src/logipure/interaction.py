"""Engineered system-auxiliary couplings and Pauli-string decompositions.

The purification protocol drives a resonant exchange between a chosen
logical state |Psi_S> of the system and the uniform first-excited-state
superposition |Phi_S>, conditioned on flipping one auxiliary qubit:

    H_SA = g |Psi_S><Phi_S| (x) |1_A><0_A| + h.c.

Three flavors are built here: the rank-one form above, a targeted form
that couples |Psi_S> to every first-excited basis state with equal
strength, and a ground-preparation form for hosts with a unique ground
state.  The module also provides exact Pauli-string decompositions of
arbitrary register operators, plus an independently derived closed-form
expansion of the three-qubit rank-one coupling used as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .codes import CodeModel, LogicalTarget, logical_state
from .operators import (
    KET_0,
    KET_1,
    PAULI_MATRICES,
    PauliString,
    kron,
    kron_all,
    pauli_operator,
    require_hermitian,
)

RANK_ONE = "rank-one"
TARGETED = "targeted"
GROUND_PREP = "ground-prep"
VARIANTS = (RANK_ONE, TARGETED, GROUND_PREP)

# Coefficients smaller than this are dropped from decompositions.
COEFF_CUTOFF = 1e-12


@dataclass(frozen=True)
class InteractionSpec:
    """Parameters of the engineered coupling.

    ``targets`` holds one :class:`LogicalTarget` per code (ignored by the
    ground-preparation variant, which always addresses the unique ground
    state).  ``es_amplitudes`` optionally replaces the uniform
    excited-state superposition of each code with custom amplitudes;
    each array must be normalized to unit 2-norm.
    """

    coupling: float
    targets: tuple[LogicalTarget, ...] = ()
    es_amplitudes: tuple[np.ndarray, ...] | None = None
    variant: str = RANK_ONE

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.es_amplitudes is not None:
            for amps in self.es_amplitudes:
                nrm = np.linalg.norm(np.asarray(amps))
                if abs(nrm - 1.0) > 1e-12:
                    raise ValueError(f"excited-state amplitudes have norm {nrm!r}, expected 1")


@dataclass(frozen=True)
class AuxiliarySpec:
    """Auxiliary register: ``count`` qubits, each with splitting ``energy``.

    Each auxiliary qubit carries energy ``E_A |1><1|``, i.e. the zero
    point sits at the auxiliary ground state |0_A>.  The closed-form
    spectral expressions in :mod:`logipure.thermal` assume exactly this
    zero point.
    """

    count: int = 1
    energy: float = 0.0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"need at least one auxiliary qubit, got {self.count}")
        if self.energy < 0:
            raise ValueError(f"auxiliary energy must be >= 0, got {self.energy}")


def es_uniform_state(codes: list[CodeModel]) -> np.ndarray:
    """Product over codes of the uniform first-excited superposition.

    For each code this is (1/sqrt(d_i)) sum_mu |mu_i> over its excited
    manifold basis.
    """
    return es_superposition(codes, None)


def es_superposition(codes: list[CodeModel], amplitudes: tuple[np.ndarray, ...] | None) -> np.ndarray:
    """Excited-state superposition with given (or uniform) amplitudes per code."""
    if not codes:
        raise ValueError("need at least one code")
    if amplitudes is not None and len(amplitudes) != len(codes):
        raise ValueError("need one amplitude vector per code")
    factors = []
    for i, code in enumerate(codes):
        d = code.es_degeneracy
        if amplitudes is None:
            amps = np.full(d, 1.0 / np.sqrt(d), dtype=complex)
        else:
            amps = np.asarray(amplitudes[i], dtype=complex).reshape(-1)
            if amps.shape[0] != d:
                raise ValueError(
                    f"code {i} has {d} excited basis states but {amps.shape[0]} amplitudes"
                )
        factors.append(sum(a * v for a, v in zip(amps, code.es_basis)))
    return kron_all(factors) if len(factors) > 1 else factors[0]


def joint_target_state(codes: list[CodeModel], targets: tuple[LogicalTarget, ...]) -> np.ndarray:
    """Product of per-code logical target states."""
    if len(targets) != len(codes):
        raise ValueError(f"{len(codes)} codes but {len(targets)} targets")
    factors = [logical_state(c, t) for c, t in zip(codes, targets)]
    return kron_all(factors) if len(factors) > 1 else factors[0]


def system_hamiltonian(codes: list[CodeModel]) -> np.ndarray:
    """Sum of per-code Hamiltonians, each identity-padded to the joint register."""
    dims = [c.dimension for c in codes]
    total = int(np.prod(dims))
    h = np.zeros((total, total), dtype=complex)
    for i, code in enumerate(codes):
        left = int(np.prod(dims[:i])) if i else 1
        right = int(np.prod(dims[i + 1 :])) if i + 1 < len(dims) else 1
        h += kron_all([np.eye(left), code.hamiltonian, np.eye(right)])
    return h


def aux_hamiltonian(aux: AuxiliarySpec) -> np.ndarray:
    """sum_j E_A |1><1|_j on the auxiliary register (ground energy exactly 0)."""
    single = aux.energy * np.outer(KET_1, KET_1.conj())
    dim = 2**aux.count
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(aux.count):
        left = 2**j
        right = 2 ** (aux.count - j - 1)
        h += kron_all([np.eye(left), single, np.eye(right)])
    return h


def build_interaction(codes: list[CodeModel], spec: InteractionSpec) -> np.ndarray:
    """Engineered coupling on (joint system) x (one auxiliary qubit).

    rank-one:    g |Psi><Phi| (x) |1><0| + h.c. with |Phi> the (possibly
                 re-weighted) excited superposition.
    targeted:    couples |Psi> to every excited product basis state with
                 matrix element g; equivalent to the rank-one form with
                 the coupling scaled by sqrt(prod d_i).
    ground-prep: rank-one form with |Psi> the unique joint ground state;
                 requires every host to have a non-degenerate ground
                 manifold.
    """
    g = spec.coupling
    if spec.variant == GROUND_PREP:
        if spec.targets:
            raise ValueError("ground-prep variant addresses the ground state; no targets allowed")
        for i, code in enumerate(codes):
            if len(code.ls_basis) != 1:
                raise ValueError(
                    f"host {i} has a {len(code.ls_basis)}-fold degenerate ground manifold; "
                    "ground-prep needs a unique ground state"
                )
        factors = [c.ls_basis[0] for c in codes]
        psi = kron_all(factors) if len(factors) > 1 else factors[0]
    else:
        psi = joint_target_state(codes, spec.targets)

    phi = es_superposition(codes, spec.es_amplitudes)
    if spec.variant == TARGETED:
        if spec.es_amplitudes is not None:
            raise ValueError("targeted variant fixes the excited amplitudes; do not pass any")
        phi = phi * np.sqrt(float(np.prod([c.es_degeneracy for c in codes])))

    flip = np.outer(KET_1, KET_0.conj())
    half = g * kron(np.outer(psi, phi.conj()), flip)
    return half + half.conj().T


def build_total(codes: list[CodeModel], interaction: np.ndarray, aux: AuxiliarySpec) -> np.ndarray:
    """H_tot = H_S + H_A + H_SA on (joint system) x (auxiliary register).

    ``interaction`` acts on the system plus the *first* auxiliary qubit;
    remaining auxiliary qubits are identity-padded.
    """
    d_s = int(np.prod([c.dimension for c in codes]))
    interaction = require_hermitian(interaction, "interaction")
    if interaction.shape[0] != 2 * d_s:
        raise ValueError(
            f"interaction dimension {interaction.shape[0]} does not match system {d_s} x one AQ"
        )
    d_a = 2**aux.count
    h = kron(system_hamiltonian(codes), np.eye(d_a))
    h += kron(np.eye(d_s), aux_hamiltonian(aux))
    h += kron(interaction, np.eye(d_a // 2))
    return h


def pauli_decompose(h: np.ndarray, cutoff: float = COEFF_CUTOFF) -> list[PauliString]:
    """Exact Pauli-string expansion of an operator on a qubit register.

    Returns the strings with coefficients ``Tr(P H) / 2^n``, dropping
    those below ``cutoff`` in magnitude, ordered lexicographically in
    I < X < Y < Z.  The expansion is exact for any matrix; hermiticity
    is not required (coefficients are complex).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    dim = h.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")

    letters = "IXYZ"
    # m[p, a, b] = P_p[a, b]; the coefficient tensor is
    # C[p_0..p_{n-1}] = (1/2^n) sum_{a, b} prod_k m[p_k, a_k, b_k] H[b, a].
    m = np.stack([PAULI_MATRICES[c] for c in letters])
    t = h.reshape([2] * (2 * n))
    axes = [f"b{k}" for k in range(n)] + [f"a{k}" for k in range(n)]
    for k in range(n):
        ai, bi = axes.index(f"a{k}"), axes.index(f"b{k}")
        t = np.tensordot(m, t, axes=([1, 2], [ai, bi]))
        axes = [f"p{k}"] + [x for x in axes if x not in (f"a{k}", f"b{k}")]
    order = [axes.index(f"p{k}") for k in range(n)]
    coeffs = np.transpose(t, order) / dim

    out = []
    flat = coeffs.reshape(-1)
    for idx in range(flat.shape[0]):
        c = flat[idx]
        if abs(c) <= cutoff:
            continue
        digits = np.unravel_index(idx, coeffs.shape)
        out.append(PauliString("".join(letters[d] for d in digits), complex(c)))
    return out


def pauli_reconstruct(terms: list[PauliString]) -> np.ndarray:
    """Sum of coefficient-weighted Pauli strings as a dense matrix."""
    if not terms:
        raise ValueError("nothing to reconstruct")
    n = terms[0].n_qubits
    if any(t.n_qubits != n for t in terms):
        raise ValueError("terms act on different register sizes")
    h = np.zeros((2**n, 2**n), dtype=complex)
    for t in terms:
        h += pauli_operator(t)
    return h


def three_qubit_coupling_reference(theta: float, phi: float, coupling: float) -> dict[str, complex]:
    """Hand-derived Pauli expansion of the three-qubit rank-one coupling.

    Obtained by expanding g |Psi><Phi| (x) |1><0| + h.c. in projector
    algebra for the three-qubit repetition code, independently of
    :func:`pauli_decompose`.  Keys are four-letter strings (three system
    qubits then the auxiliary); values are the coefficients.  Serves as
    the cross-check oracle for the decomposition pipeline.
    """
    zp = np.cos(theta / 2) + np.cos(phi) * np.sin(theta / 2)
    zm = np.cos(theta / 2) - np.cos(phi) * np.sin(theta / 2)
    sp = np.sin(theta / 2) * np.sin(phi)
    unit = coupling / (8.0 * np.sqrt(6.0))
    terms: dict[str, complex] = {}

    def add(sites: dict[int, str], c: float):
        if abs(c) < 1e-15:
            return
        word = "".join(sites.get(q, "I") for q in range(4))
        terms[word] = terms.get(word, 0.0) + c * unit

    for j in range(3):
        a, b = (j + 1) % 3, (j + 2) % 3
        add({a: "X", b: "X", 3: "X"}, zp)
        add({a: "Y", b: "Y", 3: "X"}, -zp)
        add({j: "Z", a: "X", b: "X", 3: "X"}, -zm)
        add({j: "Z", a: "Y", b: "Y", 3: "X"}, zm)
        add({a: "X", b: "Y", 3: "Y"}, zm)
        add({a: "Y", b: "X", 3: "Y"}, zm)
        add({j: "Z", a: "X", b: "Y", 3: "Y"}, -zp)
        add({j: "Z", a: "Y", b: "X", 3: "Y"}, -zp)
        add({j: "X", 3: "X"}, zp)
        add({j: "Y", a: "Z", 3: "Y"}, -zp)
        add({j: "Y", b: "Z", 3: "Y"}, -zp)
        add({j: "X", a: "Z", b: "Z", 3: "X"}, zp)
        add({j: "Y", 3: "Y"}, zm)
        add({j: "X", a: "Z", 3: "X"}, -zm)
        add({j: "X", b: "Z", 3: "X"}, -zm)
        add({j: "Y", a: "Z", b: "Z", 3: "Y"}, zm)
        for with_z in (False, True):
            head = {j: "Z"} if with_z else {}
            add({**head, a: "X", b: "X", 3: "Y"}, -sp)
            add({**head, a: "X", b: "Y", 3: "X"}, -sp)
            add({**head, a: "Y", b: "X", 3: "X"}, -sp)
            add({**head, a: "Y", b: "Y", 3: "Y"}, sp)
        for first, last in (("X", "Y"), ("Y", "X")):
            for za, zb in product((False, True), repeat=2):
                sites = {j: first, 3: last}
                if za:
                    sites[a] = "Z"
                if zb:
                    sites[b] = "Z"
                add(sites, -sp)
    return {k: v for k, v in terms.items() if abs(v) > 1e-15}


def compare_term_lists(
    computed: list[PauliString], reference: dict[str, complex], atol: float = 1e-10
) -> dict:
    """Term-by-term comparison of a decomposition against a reference.

    Returns a report with the worst coefficient deviation and the list of
    disagreeing strings; nothing is raised, so callers can surface
    discrepancies instead of masking them.
    """
    comp = {t.letters: t.coefficient for t in computed}
    words = sorted(set(comp) | set(reference))
    mismatches = []
    worst = 0.0
    for w in words:
        delta = abs(comp.get(w, 0.0) - reference.get(w, 0.0))
        worst = max(worst, delta)
        if delta > atol:
            mismatches.append(
                {
                    "pauli_string": w,
                    "computed": complex(comp.get(w, 0.0)),
                    "reference": complex(reference.get(w, 0.0)),
                }
            )
    return {
        "n_computed": len(comp),
        "n_reference": len(reference),
        "max_delta": worst,
        "mismatches": mismatches,
        "agree": not mismatches,
    }
