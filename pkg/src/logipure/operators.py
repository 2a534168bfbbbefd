"""Dense operator algebra for multi-qubit registers.

Conventions used throughout the package:

* Qubit 0 is the *leftmost* tensor factor, i.e. the most significant bit
  of the computational-basis index.  ``kron(A, B)`` therefore puts ``A``
  on the lower-numbered qubits.
* ``|0>`` is the sigma-z eigenstate with eigenvalue -1, so a local field
  ``(E/2) * sigma_z`` makes ``|0>`` the single-qubit ground state.  With
  this choice ``sigma_y`` picks up a sign relative to the usual textbook
  matrix; the algebra ``sigma_x sigma_y = i sigma_z`` is preserved.

All operators are dense complex numpy arrays.  The largest registers
handled by the package have 10 qubits, for which dense linear algebra is
both exact and fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

# Relative tolerance for input validation (hermiticity, trace checks).
VALIDATION_TOL = 1e-12
# Absolute tolerance for postconditions on computed states.
POST_TOL = 1e-10
# Most negative eigenvalue a matrix may have and still count as positive
# semidefinite for validation purposes.
EIG_FLOOR = -1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

PAULI_MATRICES = {
    "I": IDENTITY_2,
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
}

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Pauli operators with a weight.

    ``letters`` is a string over the alphabet I/X/Y/Z; position ``i``
    acts on qubit ``i``.  ``coefficient`` multiplies the whole product.
    """

    letters: str
    coefficient: complex = 1.0

    def __post_init__(self):
        if not self.letters:
            raise ValueError("empty Pauli string")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"unknown Pauli letters: {sorted(bad)}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return sum(1 for c in self.letters if c != "I")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        """Time-evolution operator exp(-i H t) assembled from the spectrum."""
        phases = np.exp(-1j * self.eigenvalues * t)
        return (self.eigenvectors * phases) @ self.eigenvectors.conj().T

    def reconstruct(self) -> np.ndarray:
        """V diag(w) V^dagger; equals the decomposed matrix up to roundoff."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with ``a`` on the lower-numbered (leftmost) qubits."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    mats = [np.asarray(o, dtype=complex) for o in ops]
    if not mats:
        raise ValueError("kron_all needs at least one operator")
    return reduce(np.kron, mats)


def pauli_operator(pauli: PauliString | str) -> np.ndarray:
    """Dense matrix of a Pauli string on ``len(letters)`` qubits."""
    if isinstance(pauli, str):
        pauli = PauliString(pauli)
    mat = kron_all(PAULI_MATRICES[c] for c in pauli.letters)
    if pauli.coefficient != 1.0:
        mat = pauli.coefficient * mat
    return mat


def require_hermitian(h: np.ndarray, name: str = "matrix", tol: float = VALIDATION_TOL) -> np.ndarray:
    """Validate hermiticity relative to the matrix scale; return as complex array."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"{name} must be square, got shape {h.shape}")
    scale = max(np.max(np.abs(h)), 1.0)
    asym = np.max(np.abs(h - h.conj().T))
    if asym > tol * scale:
        raise ValueError(f"{name} is not hermitian: max |H - H^dag| = {asym:.3e}")
    return h


def require_density(rho: np.ndarray, name: str = "state") -> np.ndarray:
    """Validate a density matrix: hermitian, unit trace, positive semidefinite."""
    rho = require_hermitian(rho, name)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > VALIDATION_TOL * max(1.0, abs(tr)):
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    wmin = np.linalg.eigvalsh(rho)[0]
    if wmin < EIG_FLOOR:
        raise ValueError(f"{name} has negative eigenvalue {wmin:.3e}")
    return rho


def hermitian_eig(h: np.ndarray) -> SpectralDecomposition:
    """Full spectral decomposition of a hermitian matrix.

    Eigenvalues come back sorted ascending with orthonormal eigenvector
    columns, so degenerate subspaces are represented by an arbitrary but
    orthonormal basis.
    """
    h = require_hermitian(h, "hamiltonian")
    w, v = np.linalg.eigh(h)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def evolve(
    h: np.ndarray,
    t: float,
    rho: np.ndarray,
    spectral: SpectralDecomposition | None = None,
) -> np.ndarray:
    """Unitary evolution ``exp(-iHt) rho exp(+iHt)``.

    Pass a precomputed ``spectral`` decomposition of the same ``h`` when
    sweeping many times against one Hamiltonian; the eigensolve is the
    expensive step and is reused verbatim.
    """
    if spectral is None:
        spectral = hermitian_eig(h)
    u = spectral.unitary(t)
    rho = np.asarray(rho, dtype=complex)
    out = u @ rho @ u.conj().T
    out = 0.5 * (out + out.conj().T)  # scrub roundoff asymmetry
    return out


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` are the subsystem dimensions in tensor order; ``keep`` holds
    the (sorted) indices of the subsystems to retain.  The result lives on
    the kept subsystems in their original relative order.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    n = len(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"state of shape {rho.shape} does not match dims {dims}")
    keep = sorted(keep)
    if keep and (keep[0] < 0 or keep[-1] >= n):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if len(set(keep)) != len(keep):
        raise ValueError("duplicate subsystem index in keep")

    tensor = rho.reshape(dims + dims)
    # Trace out the discarded subsystems from highest index down so the
    # remaining axis numbering stays valid.
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + tensor.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return tensor.reshape(d_keep, d_keep)


def gibbs(h: np.ndarray, beta: float, spectral: SpectralDecomposition | None = None) -> tuple[np.ndarray, float]:
    """Thermal state ``exp(-beta H)/Z`` and the partition function ``Z``.

    Computed spectrally with the ground energy factored out, so very cold
    temperatures do not overflow: weights are ``exp(-beta (E_k - E_0))``.
    The returned ``Z`` is the conventional ``sum_k exp(-beta E_k)``.
    """
    if beta < 0:
        raise ValueError(f"inverse temperature must be >= 0, got {beta}")
    if spectral is None:
        spectral = hermitian_eig(h)
    w = spectral.eigenvalues
    shifted = np.exp(-beta * (w - w[0]))
    norm = float(shifted.sum())
    v = spectral.eigenvectors
    rho = (v * (shifted / norm)) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    z = norm * float(np.exp(-beta * w[0])) if beta * abs(w[0]) < 700 else float("inf")
    return rho, z


def fidelity_pure(rho: np.ndarray, psi: np.ndarray) -> float:
    """Fidelity ``<psi| rho |psi>`` of a state against a pure target.

    ``psi`` must be normalized; ``rho`` may be any density matrix.  The
    result is clipped to [0, 1] only to absorb roundoff at the 1e-10
    level; a larger excursion raises.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"target state norm {nrm!r} is not 1")
    rho = np.asarray(rho, dtype=complex)
    val = float(np.real(psi.conj() @ rho @ psi))
    if val < -POST_TOL or val > 1.0 + POST_TOL:
        raise ValueError(f"fidelity {val!r} outside [0, 1] beyond tolerance")
    return min(max(val, 0.0), 1.0)


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    """Computational-basis ket |index> on ``n_qubits`` qubits."""
    dim = 2**n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def embed(op: np.ndarray, n_qubits: int, sites: Sequence[int]) -> np.ndarray:
    """Embed an operator acting on ``sites`` into an ``n_qubits`` register.

    ``op`` must act on ``len(sites)`` qubits in the order listed; the
    sites need not be adjacent.
    """
    sites = list(sites)
    k = len(sites)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {op.shape} does not act on {k} qubits")
    if len(set(sites)) != k or any(s < 0 or s >= n_qubits for s in sites):
        raise ValueError(f"bad site list {sites} for {n_qubits} qubits")
    full = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    tensor = full.reshape([2] * (2 * n_qubits))
    op_tensor = op.reshape([2] * (2 * k))
    rest = [q for q in range(n_qubits) if q not in sites]
    eye = np.eye(2 ** len(rest), dtype=complex).reshape([2] * (2 * len(rest)))
    # place op axes at their sites, identity axes elsewhere
    src = np.tensordot(op_tensor, eye, axes=0)
    # current axis order: op rows, op cols, eye rows, eye cols
    perm_rows = [None] * n_qubits
    for axis, q in enumerate(sites):
        perm_rows[q] = axis
    for axis, q in enumerate(rest):
        perm_rows[q] = 2 * k + axis
    perm_cols = [p + k if p < 2 * k else p + len(rest) for p in perm_rows]
    tensor[...] = src.transpose(perm_rows + perm_cols)
    return full
