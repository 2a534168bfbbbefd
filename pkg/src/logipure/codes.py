"""Logical-qubit hosts: stabilizer codes and Heisenberg spin chains.

A :class:`CodeModel` is a many-body system whose ground manifold hosts a
logical qubit: a gapped Hamiltonian with its ground energy shifted to
zero, the (usually two-fold degenerate) ground-space basis, and the
first excited manifold.  Builders are provided for stabilizer-code
Hamiltonians, the three-qubit repetition code, and ferromagnetic
Heisenberg chains with a polarizing field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .operators import (
    PauliString,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    basis_state,
    embed,
    hermitian_eig,
    pauli_operator,
    require_hermitian,
)

# Residual tolerance for "is an eigenstate" checks at construction time.
RESIDUAL_TOL = 1e-9
# Default eigenvalue-cluster tolerance, relative to the spectral radius.
CLUSTER_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralSplit:
    """Eigenvalue clusters of a gapped Hamiltonian.

    ``ls_basis`` spans the ground cluster (shifted to zero energy),
    ``es_basis`` the first excited cluster.  ``degeneracies`` lists every
    cluster size in energy order.
    """

    ls_basis: tuple[np.ndarray, ...]
    es_basis: tuple[np.ndarray, ...]
    gap: float
    degeneracies: tuple[int, ...]
    ground_energy: float


@dataclass(frozen=True)
class CodeModel:
    """A gapped system hosting logical information in its ground manifold.

    ``ls_basis`` holds one state (ground-state-preparation hosts) or two
    (logical-qubit codes, ordered as ``(|0_S>, |1_S>)``).  ``es_basis``
    spans the first excited manifold at energy ``gap``.  ``hamiltonian``
    already includes the ``ground_offset`` constant that places the
    ground manifold at exactly zero energy.
    """

    n_qubits: int
    hamiltonian: np.ndarray
    ls_basis: tuple[np.ndarray, ...]
    es_basis: tuple[np.ndarray, ...]
    gap: float
    ground_offset: float = 0.0

    def __post_init__(self):
        h = self.hamiltonian
        if h.shape != (self.dimension, self.dimension):
            raise ValueError(
                f"hamiltonian shape {h.shape} does not match {self.n_qubits} qubits"
            )
        if not 1 <= len(self.ls_basis) <= 2:
            raise ValueError(f"ground manifold must hold 1 or 2 states, got {len(self.ls_basis)}")
        if self.gap <= 0:
            raise ValueError(f"gap must be positive, got {self.gap}")
        for v in self.ls_basis:
            if np.linalg.norm(h @ v) > RESIDUAL_TOL:
                raise ValueError("ground basis state is not a zero-energy eigenstate")
        for v in self.es_basis:
            if np.linalg.norm(h @ v - self.gap * v) > RESIDUAL_TOL * max(1.0, self.gap):
                raise ValueError("excited basis state is not an eigenstate at the gap energy")
        allv = np.column_stack(self.ls_basis + self.es_basis)
        gram = allv.conj().T @ allv
        if np.max(np.abs(gram - np.eye(gram.shape[0]))) > 1e-10:
            raise ValueError("ground/excited bases are not orthonormal")

    @property
    def dimension(self) -> int:
        return 2**self.n_qubits

    @property
    def es_degeneracy(self) -> int:
        return len(self.es_basis)

    @property
    def is_logical_qubit(self) -> bool:
        return len(self.ls_basis) == 2


@dataclass(frozen=True)
class LogicalTarget:
    """Bloch angles of a logical state cos(t/2)|0_S> + e^{i p} sin(t/2)|1_S>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi <= 2 * np.pi:
            raise ValueError(f"phi must lie in [0, 2 pi], got {self.phi}")


@dataclass(frozen=True)
class HeisenbergSpec:
    """Chain parameters: size, exchange, and the polarizing field.

    The field follows a fixed rule (J_S for the two-site chain, 2 J_S
    otherwise); that rule makes the one-magnon state exactly degenerate
    with the polarized state.  Passing an explicit ``field`` that breaks
    the rule raises.
    """

    n_qubits: int
    exchange: float = 1.0
    field: float | None = None

    def __post_init__(self):
        if self.n_qubits < 2 or self.n_qubits % 2:
            raise ValueError(f"chain length must be even and >= 2, got {self.n_qubits}")
        if self.exchange <= 0:
            raise ValueError(f"exchange must be positive, got {self.exchange}")
        rule = self.exchange if self.n_qubits == 2 else 2.0 * self.exchange
        if self.field is None:
            object.__setattr__(self, "field", rule)
        elif abs(self.field - rule) > 1e-12 * max(1.0, rule):
            raise ValueError(
                f"field {self.field} breaks the degeneracy rule (expected {rule}); "
                "the ground manifold would not host a logical qubit"
            )


def spectral_split(h: np.ndarray, tol: float | None = None) -> SpectralSplit:
    """Cluster the spectrum of ``h`` into degenerate manifolds.

    ``tol`` is the absolute clustering tolerance; by default it is
    ``1e-8`` times the spectral radius.  Raises when only one cluster
    exists or when the ground gap is below ``10 * tol`` (unresolvable).
    For diagonal ``h`` the returned bases are computational-basis
    vectors ordered by index, which keeps downstream state labels
    deterministic.
    """
    h = require_hermitian(h, "hamiltonian")
    dim = h.shape[0]
    diagonal = np.max(np.abs(h - np.diag(np.diag(h)))) <= 1e-14 * max(1.0, np.max(np.abs(h)))
    if diagonal:
        w = np.real(np.diag(h)).copy()
        order = np.argsort(w, kind="stable")
        w = w[order]
        vecs = [basis_vec(dim, int(i)) for i in order]
    else:
        spec = hermitian_eig(h)
        w = spec.eigenvalues
        vecs = [spec.eigenvectors[:, i] for i in range(dim)]

    scale = float(np.max(np.abs(w)))
    if tol is None:
        tol = CLUSTER_RTOL * scale
    if scale == 0.0 or tol <= 0:
        raise ValueError("flat spectrum: no gap to split on")

    clusters: list[list[int]] = [[0]]
    for i in range(1, dim):
        if w[i] - w[clusters[-1][0]] <= tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    if len(clusters) < 2:
        raise ValueError("spectrum forms a single degenerate cluster: no gap")

    e0 = float(np.mean(w[clusters[0]]))
    e1 = float(np.mean(w[clusters[1]]))
    gap = e1 - e0
    if gap < 10 * tol:
        raise ValueError(f"gap {gap:.3e} below 10x cluster tolerance {tol:.3e}: unresolvable split")

    return SpectralSplit(
        ls_basis=tuple(vecs[i] for i in clusters[0]),
        es_basis=tuple(vecs[i] for i in clusters[1]),
        gap=gap,
        degeneracies=tuple(len(c) for c in clusters),
        ground_energy=e0,
    )


def basis_vec(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def build_stabilizer_code(stabilizers: list[PauliString | str], strength: float = 1.0) -> CodeModel:
    """Code Hamiltonian ``-J sum_i S_i + const`` with a two-fold ground manifold.

    The stabilizers must mutually commute and square to the identity.
    The constant shift places the ground (code-space) energy at exactly
    zero; for a consistent stabilizer set it equals ``len(stabilizers) * J``.
    """
    if strength <= 0:
        raise ValueError(f"coupling must be positive, got {strength}")
    if not stabilizers:
        raise ValueError("need at least one stabilizer")
    strings = [s if isinstance(s, PauliString) else PauliString(s) for s in stabilizers]
    n = strings[0].n_qubits
    if any(s.n_qubits != n for s in strings):
        raise ValueError("stabilizers act on different register sizes")
    mats = [pauli_operator(s) for s in strings]
    for i, a in enumerate(mats):
        if np.max(np.abs(a @ a - np.eye(2**n))) > 1e-12:
            raise ValueError(f"stabilizer {strings[i].letters!r} does not square to identity")
        for j in range(i):
            if np.max(np.abs(a @ mats[j] - mats[j] @ a)) > 1e-12:
                raise ValueError(
                    f"stabilizers {strings[j].letters!r} and {strings[i].letters!r} do not commute"
                )

    h0 = -strength * sum(mats)
    split0 = spectral_split(h0)
    h = h0 - split0.ground_energy * np.eye(2**n)
    split = spectral_split(h)
    if len(split.ls_basis) != 2:
        raise ValueError(
            f"ground manifold is {len(split.ls_basis)}-fold degenerate; "
            "a single logical qubit needs exactly 2 ground states"
        )
    return CodeModel(
        n_qubits=n,
        hamiltonian=h,
        ls_basis=split.ls_basis,
        es_basis=split.es_basis,
        gap=split.gap,
        ground_offset=-split0.ground_energy,
    )


def build_repetition_code(j_s: float = 1.0) -> CodeModel:
    """Three-qubit bit-flip code: all-pairs ZZ couplings, gap 4 J_S.

    Ground basis is (|000>, |111>); all six single- and double-flip
    states sit together at the gap energy.
    """
    return build_stabilizer_code(["ZZI", "IZZ", "ZIZ"], j_s)


def build_heisenberg_code(spec: HeisenbergSpec) -> CodeModel:
    """Ferromagnetic Heisenberg ring with a polarizing field.

    H = (J/4) sum_s sigma_s . sigma_{s+1} + (h/2) sum_s sigma^z_s - E_g,
    periodic boundaries (a single bond for the two-site chain).  With the
    field rule of :class:`HeisenbergSpec` the polarized state |0...0> and
    the staggered one-magnon state are exactly degenerate at zero energy
    and form the logical basis.
    """
    n = spec.n_qubits
    j, h_field = spec.exchange, spec.field
    dim = 2**n
    bonds = [(0, 1)] if n == 2 else [(s, (s + 1) % n) for s in range(n)]

    h0 = np.zeros((dim, dim), dtype=complex)
    for s, sp in bonds:
        for pauli in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            h0 += (j / 4.0) * embed(np.kron(pauli, pauli), n, [s, sp])
    for s in range(n):
        h0 += (h_field / 2.0) * embed(SIGMA_Z, n, [s])

    e_g = float(np.linalg.eigvalsh(h0)[0])
    ham = h0 - e_g * np.eye(dim)

    split = spectral_split(ham)
    if len(split.ls_basis) != 2:
        raise ValueError(
            f"chain ground manifold is {len(split.ls_basis)}-fold degenerate; "
            "field/exchange convention is broken"
        )

    zero = basis_state(n, 0)
    one = np.zeros(dim, dtype=complex)
    for s in range(n):
        one[1 << (n - 1 - s)] = (-1.0) ** s / np.sqrt(n)
    for v, name in ((zero, "|0...0>"), (one, "one-magnon state")):
        if np.linalg.norm(ham @ v) > RESIDUAL_TOL * max(1.0, j):
            raise ValueError(f"{name} is not a zero-energy eigenstate: convention is broken")

    return CodeModel(
        n_qubits=n,
        hamiltonian=ham,
        ls_basis=(zero, one),
        es_basis=split.es_basis,
        gap=split.gap,
        ground_offset=-e_g,
    )


def code_from_hamiltonian(h: np.ndarray, tol: float | None = None) -> CodeModel:
    """Wrap an arbitrary gapped qubit-register Hamiltonian as a host.

    The ground manifold may hold one state (a ground-preparation host)
    or two (a logical qubit); anything larger is rejected.
    """
    h = require_hermitian(h, "hamiltonian")
    dim = h.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")
    split = spectral_split(h, tol)
    ham = h - split.ground_energy * np.eye(dim)
    # re-split so stored basis residuals are checked against the shifted matrix
    split = spectral_split(ham, tol)
    if len(split.ls_basis) > 2:
        raise ValueError(f"ground manifold is {len(split.ls_basis)}-fold degenerate")
    return CodeModel(
        n_qubits=n,
        hamiltonian=ham,
        ls_basis=split.ls_basis,
        es_basis=split.es_basis,
        gap=split.gap,
        ground_offset=float(-split.ground_energy),
    )


def logical_state(code: CodeModel, target: LogicalTarget) -> np.ndarray:
    """cos(theta/2)|0_S> + e^{i phi} sin(theta/2)|1_S>."""
    if not code.is_logical_qubit:
        raise ValueError("host has a single ground state: no logical qubit to rotate")
    zero, one = code.ls_basis
    return np.cos(target.theta / 2) * zero + np.exp(1j * target.phi) * np.sin(target.theta / 2) * one


# Bloch angles of the six cardinal logical states.  theta=0 points at
# |0_S>, which is the Z = -1 eigenstate under the logical Z below.
CARDINAL_ANGLES: dict[str, tuple[float, float]] = {
    "z+": (np.pi, 0.0),
    "z-": (0.0, 0.0),
    "x+": (np.pi / 2, 0.0),
    "x-": (np.pi / 2, np.pi),
    "y+": (np.pi / 2, np.pi / 2),
    "y-": (np.pi / 2, 3 * np.pi / 2),
}


def cardinal_state(code: CodeModel, label: str) -> np.ndarray:
    """Logical state at one of the six Bloch cardinal points ('z+', 'x-', ...)."""
    try:
        theta, phi = CARDINAL_ANGLES[label]
    except KeyError:
        raise ValueError(f"unknown cardinal label {label!r}") from None
    return logical_state(code, LogicalTarget(theta, phi))


def logical_operators(code: CodeModel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Logical (X, Y, Z) embedded in the full space.

    Z = |1_S><1_S| - |0_S><0_S| so |0_S> is the logical ground state;
    X = |0_S><1_S| + |1_S><0_S|; Y chosen so XY = iZ on the code space.
    """
    if not code.is_logical_qubit:
        raise ValueError("host has a single ground state: no logical operators")
    zero, one = code.ls_basis
    p01 = np.outer(zero, one.conj())
    p10 = np.outer(one, zero.conj())
    x = p01 + p10
    y = 1j * p01 - 1j * p10
    z = np.outer(one, one.conj()) - np.outer(zero, zero.conj())
    return x, y, z


def code_from_json(doc: str | dict) -> CodeModel:
    """Build a code from a JSON document.

    Two forms are accepted::

        {"type": "stabilizer", "stabilizers": ["ZZI", "IZZ", "ZIZ"], "J": 1.0}
        {"type": "heisenberg", "n": 4, "J": 1.0}

    ``J`` defaults to 1.0 in both.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ValueError("code document must be a JSON object")
    kind = doc.get("type")
    j = float(doc.get("J", 1.0))
    if kind == "stabilizer":
        stabs = doc.get("stabilizers")
        if not stabs:
            raise ValueError("stabilizer document needs a non-empty 'stabilizers' list")
        return build_stabilizer_code(list(stabs), j)
    if kind == "heisenberg":
        if "n" not in doc:
            raise ValueError("heisenberg document needs 'n'")
        return build_heisenberg_code(HeisenbergSpec(n_qubits=int(doc["n"]), exchange=j))
    raise ValueError(f"unknown code type {kind!r}")
