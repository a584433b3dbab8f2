"""Kraus-operator simulation of the entangled-control switch experiment.

Bob holds one half of a two-qubit state whose other half is the control of
a quantum switch acting on a fresh target qubit |0>.  The two agents inside
the switch apply measure-and-reprepare instruments in an order dictated by
the control (control |0>: alice1 acts first), Charlie measures the control
after the switch, and the target is discarded.

Subsystem order throughout is [bob, control, target].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .instruments import alice_instrument, bob_basis, charlie_basis
from .linalg import (
    DensityMatrix,
    bell_phi_plus,
    dephase_subsystem,
    ket,
    ketbra,
    tensor,
)

#: Entries more negative than this are a numerical error, not roundoff.
PROB_FLOOR = -1e-12
#: Tolerance on each per-setting outcome distribution summing to 1.
SUM_ATOL = 1e-9


@dataclass(frozen=True)
class NoiseParams:
    """Noise point of the simulated experiment.

    eta is the visibility of the Werner state shared by Bob and the control;
    epsilon is the weight of the coherent switch against a control fully
    dephased before the switch (epsilon = 1: ideal switch, epsilon = 0:
    classical mixture of the two orders, correlated with Bob).
    """

    eta: float = 1.0
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta", "epsilon"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class ProbabilityTable:
    """Joint outcome distributions for all 16 setting combinations.

    probs has shape (2,)*8 indexed as [x1, x2, y, z, a1, a2, b, c]: the
    first four axes are the settings of alice1, alice2, Bob and Charlie,
    the last four the corresponding outcomes.  Each setting block sums
    to 1; tiny negative entries (above PROB_FLOOR) are clamped to zero.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.probs, dtype=float)
        if arr.shape != (2,) * 8:
            raise ValueError(f"probability table must have shape {(2,)*8}, got {arr.shape}")
        if arr.min() < PROB_FLOOR:
            raise ValueError(
                f"probability {arr.min():.3e} below the clamping floor {PROB_FLOOR}"
            )
        arr = np.where(arr < 0.0, 0.0, arr)
        sums = arr.sum(axis=(4, 5, 6, 7))
        if np.max(np.abs(sums - 1.0)) > SUM_ATOL:
            raise ValueError(
                f"per-setting outcome sums deviate from 1 by {np.max(np.abs(sums - 1.0)):.3e}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def setting(self, x1: int, x2: int, y: int, z: int) -> np.ndarray:
        """Outcome block p(a1, a2, b, c | x1, x2, y, z), shape (2, 2, 2, 2)."""
        return self.probs[x1, x2, y, z]

    def rows(self):
        """Yield (x1, x2, y, z, a1, a2, b, c, p) in lexicographic order."""
        for idx in product((0, 1), repeat=8):
            yield (*idx, float(self.probs[idx]))


def werner_state(eta: float) -> DensityMatrix:
    """Werner mixture eta |phi+><phi+| + (1 - eta) I/4 on [bob, control]."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    phi = bell_phi_plus().density().matrix
    return DensityMatrix(eta * phi + (1.0 - eta) * np.eye(4) / 4.0, (2, 2))


def switch_branch(k_first_setting: np.ndarray, k_second_setting: np.ndarray) -> np.ndarray:
    """Control-conditioned composition of two single-qubit Kraus operators.

    Returns the operator on [control, target] that applies the arguments in
    the order (first, second) when the control is |0> and in the reversed
    order when the control is |1>.  Here "first"/"second" refer to alice1's
    and alice2's branch respectively: control |0> routes the target through
    alice1 before alice2.
    """
    k1 = np.asarray(k_first_setting, dtype=complex)
    k2 = np.asarray(k_second_setting, dtype=complex)
    if k1.shape != (2, 2) or k2.shape != (2, 2):
        raise ValueError("switch branches must be single-qubit operators")
    return tensor(ketbra(0, 0), k2 @ k1) + tensor(ketbra(1, 1), k1 @ k2)


@lru_cache(maxsize=1)
def _branch_operators() -> np.ndarray:
    """Stack of I_bob (x) switch_branch over [x1, x2, a1, a2], shape (2,2,2,2,8,8)."""
    ops = np.zeros((2, 2, 2, 2, 8, 8), dtype=complex)
    eye_bob = np.eye(2, dtype=complex)
    for x1, x2 in product((0, 1), repeat=2):
        branches1 = dict(alice_instrument(x1))
        branches2 = dict(alice_instrument(x2))
        for a1, a2 in product((0, 1), repeat=2):
            ops[x1, x2, a1, a2] = tensor(eye_bob, switch_branch(branches1[a1], branches2[a2]))
    ops.setflags(write=False)
    return ops


@lru_cache(maxsize=1)
def _measurement_operators() -> np.ndarray:
    """Stack of P_b (x) P_c (x) I_target over [y, z, b, c], shape (2,2,2,2,8,8)."""
    ops = np.zeros((2, 2, 2, 2, 8, 8), dtype=complex)
    eye_target = np.eye(2, dtype=complex)
    for y, z, b, c in product((0, 1), repeat=4):
        ops[y, z, b, c] = tensor(
            bob_basis(y).projector(b), charlie_basis(z).projector(c), eye_target
        )
    ops.setflags(write=False)
    return ops


def input_state(noise: NoiseParams) -> np.ndarray:
    """Noisy [bob, control, target] state entering the switch, shape (8, 8).

    The Werner state supplies eta; epsilon interpolates between the intact
    control (epsilon = 1) and a control dephased in the computational basis
    before the switch (epsilon = 0).
    """
    rho = np.kron(werner_state(noise.eta).matrix, ketbra(0, 0))
    if noise.epsilon == 1.0:
        return rho
    dephased = dephase_subsystem(rho, (2, 2, 2), which=1)
    return noise.epsilon * rho + (1.0 - noise.epsilon) * dephased


def behavior(noise: NoiseParams) -> ProbabilityTable:
    """Full outcome statistics p(a1, a2, b, c | x1, x2, y, z) of the experiment.

    Each entry is Tr[(P_b (x) P_c (x) I) S rho S^dagger] with S the branch
    operator selected by (x1, x2, a1, a2).  Entries are computed
    independently, so the result is bitwise reproducible.
    """
    rho = input_state(noise)
    branch = _branch_operators()
    evolved = np.einsum("uvrsij,jk,uvrslk->uvrsil", branch, rho, branch.conj())
    meas = _measurement_operators()
    probs = np.einsum("uvrsij,yzbcji->uvyzrsbc", evolved, meas).real
    return ProbabilityTable(probs)
