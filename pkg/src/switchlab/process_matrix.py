"""Process-matrix backend for the entangled-control switch.

The switch is encoded as a process matrix W on seven qubit spaces,

    [bob, alice1_in, alice1_out, alice2_in, alice2_out,
     control_future, target_future]

(128 x 128), and probabilities come from a generalized Born rule: local
projectors on bob / control_future, transposed Choi operators for the two
agents' instrument branches, identity on the discarded target_future.
This is an independent route to the same statistics as the Kraus backend
in `kraus`; agreement of the two is checked by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .instruments import alice_instrument, bob_basis, charlie_basis
from .kraus import NoiseParams, ProbabilityTable, werner_state
from .linalg import I2, bell_phi_plus, dephase_subsystem, tensor

#: Order of the tensor factors of W (one qubit each).
SPACES = (
    "bob",
    "alice1_in",
    "alice1_out",
    "alice2_in",
    "alice2_out",
    "control_future",
    "target_future",
)
DIM = 2 ** len(SPACES)

#: Validation tolerance for Hermiticity / positivity of W.
W_ATOL = 1e-9


@dataclass(frozen=True)
class ProcessMatrix:
    """A Hermitian, positive-semidefinite operator on the seven spaces."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (DIM, DIM):
            raise ValueError(f"process matrix must be {DIM}x{DIM}, got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > W_ATOL:
            raise ValueError(f"process matrix is not Hermitian within {W_ATOL}")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < -W_ATOL:
            raise ValueError(f"process matrix has negative eigenvalue {eigs.min():.3e}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@lru_cache(maxsize=1)
def _routing_isometry() -> np.ndarray:
    """Map from [bob, control] to the seven spaces, shape (128, 4).

    The column for (beta, gamma) is |beta>_bob tensor the wire vector that
    routes the target |0> through the agents in the order selected by
    gamma (gamma = 0: alice1 first) and records gamma in control_future:

        gamma = 0: alice1_in = |0>, alice2_in = alice1_out,
                   target_future = alice2_out
        gamma = 1: alice2_in = |0>, alice1_in = alice2_out,
                   target_future = alice1_out

    Columns are mutually orthogonal with squared norm 4, so
    V^dagger V = 4 I.
    """
    v = np.zeros((DIM, 4), dtype=complex)
    for beta, gamma in product((0, 1), repeat=2):
        column = np.zeros((2,) * 7)
        for i1, o1, i2, o2, ft in product((0, 1), repeat=5):
            if gamma == 0:
                routed = i1 == 0 and i2 == o1 and ft == o2
            else:
                routed = i2 == 0 and i1 == o2 and ft == o1
            if routed:
                column[beta, i1, o1, i2, o2, gamma, ft] = 1.0
        v[:, 2 * beta + gamma] = column.reshape(DIM)
    v.setflags(write=False)
    return v


def build_w(eta: float, epsilon: float) -> ProcessMatrix:
    """Process matrix of the noisy switch experiment.

    eta sets the Werner visibility of the [bob, control] resource,
    epsilon interpolates between the coherent switch (1) and the equal
    mixture of the two fixed orders, each still correlated with Bob (0).
    """
    params = NoiseParams(eta, epsilon)  # validates ranges
    rho = werner_state(params.eta).matrix
    if params.epsilon != 1.0:
        dephased = dephase_subsystem(rho, (2, 2), which=1)
        rho = params.epsilon * rho + (1.0 - params.epsilon) * dephased
    v = _routing_isometry()
    return ProcessMatrix(v @ rho @ v.conj().T)


def build_w_switch(eta: float) -> ProcessMatrix:
    """Coherent-switch process matrix with Werner visibility eta."""
    return build_w(eta, 1.0)


def mix_w(epsilon: float) -> ProcessMatrix:
    """Convex mixture of the ideal switch with the two causally ordered
    processes: epsilon W_switch + (1 - epsilon)/2 (W_12 + W_21)."""
    return build_w(1.0, epsilon)


def choi_of_kraus(k: np.ndarray) -> np.ndarray:
    """Choi operator |K>><<K| of a single-qubit Kraus branch, shape (4, 4).

    |K>> = sum_i |i> (x) K|i> with the input index as the slower factor.
    """
    k = np.asarray(k, dtype=complex)
    if k.shape != (2, 2):
        raise ValueError(f"Kraus operator must be 2x2, got {k.shape}")
    vec = k.T.reshape(4)
    return np.outer(vec, vec.conj())


def born_rule(
    w: ProcessMatrix,
    bob: np.ndarray,
    alice1: np.ndarray,
    alice2: np.ndarray,
    charlie: np.ndarray,
) -> float:
    """Probability Tr[W (bob (x) alice1^T (x) alice2^T (x) charlie (x) I)].

    bob and charlie are 2x2 effects on the bob / control_future spaces,
    alice1 and alice2 are 4x4 Choi operators of instrument branches; the
    discarded target_future is contracted with the identity.
    """
    bob = np.asarray(bob, dtype=complex)
    charlie = np.asarray(charlie, dtype=complex)
    alice1 = np.asarray(alice1, dtype=complex)
    alice2 = np.asarray(alice2, dtype=complex)
    if bob.shape != (2, 2) or charlie.shape != (2, 2):
        raise ValueError("bob and charlie effects must be 2x2")
    if alice1.shape != (4, 4) or alice2.shape != (4, 4):
        raise ValueError("alice1 and alice2 Choi operators must be 4x4")
    effect = tensor(bob, alice1.T, alice2.T, charlie, I2)
    return float(np.einsum("ij,ji->", w.matrix, effect).real)


@lru_cache(maxsize=1)
def _effect_stack() -> np.ndarray:
    """All 256 Born-rule effects, ordered by (x1, x2, y, z, a1, a2, b, c).

    Every instrument here has real matrix elements, so the stack is stored
    as float64.
    """
    stack = np.zeros((256, DIM, DIM))
    n = 0
    for x1, x2, y, z, a1, a2, b, c in product((0, 1), repeat=8):
        effect = tensor(
            bob_basis(y).projector(b),
            choi_of_kraus(dict(alice_instrument(x1))[a1]).T,
            choi_of_kraus(dict(alice_instrument(x2))[a2]).T,
            charlie_basis(z).projector(c),
            I2,
        )
        stack[n] = effect.real
        n += 1
    stack.setflags(write=False)
    return stack


def behavior(noise: NoiseParams) -> ProbabilityTable:
    """Outcome statistics computed entirely through the Born rule.

    Same contract as `kraus.behavior`; the two backends must agree
    entrywise.
    """
    w = build_w(noise.eta, noise.epsilon)
    probs = np.einsum("ij,nji->n", w.matrix, _effect_stack()).real
    return ProbabilityTable(probs.reshape((2,) * 8))


def switch_fidelity(w: ProcessMatrix) -> float:
    """Overlap of the trace-normalized W with the ideal switch process.

    The ideal process is pure; the fidelity is <w_ideal| W/Tr W |w_ideal>.
    """
    ideal = _routing_isometry() @ bell_phi_plus().amplitudes
    ideal = ideal / np.linalg.norm(ideal)
    return float((ideal.conj() @ w.matrix @ ideal).real / w.trace)


def write_w_csv(w: ProcessMatrix, path) -> None:
    """Dump W entrywise as CSV rows (row, col, re, im)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("row,col,re,im\n")
        for r in range(DIM):
            for c in range(DIM):
                entry = w.matrix[r, c]
                fh.write(f"{r},{c},{entry.real:.9g},{entry.imag:.9g}\n")
