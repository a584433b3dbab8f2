"""Setting-indexed instruments for the four parties.

The two agents inside the switch (here "alice1" and "alice2") each apply a
measure-and-reprepare instrument: read out the incoming qubit in the
computational basis, record the outcome, and send out |x> where x is the
party's setting.  Bob and Charlie perform projective qubit measurements.

Outcome 0 is always the +1-eigenvalue projector of the measured direction.
For Charlie the measured directions are (X+Z)/sqrt(2) for setting 0 and
(Z-X)/sqrt(2) for setting 1; this outcome labelling gives the two-point
correlators with Bob's Z/X bases the sign pattern that wins the CHSH game
on (|00>+|11>)/sqrt(2), which is what the third term of the inequality
counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import ATOL, I2, PAULI_X, PAULI_Z, ketbra

#: Kraus branches of a binary instrument: ((outcome, operator), ...).
Branches = tuple[tuple[int, np.ndarray], ...]


class Party(Enum):
    ALICE1 = "alice1"
    ALICE2 = "alice2"
    BOB = "bob"
    CHARLIE = "charlie"


@dataclass(frozen=True)
class MeasurementBasis:
    """A projective qubit measurement along a unit Bloch vector.

    Outcome 0 is the +1 eigenprojector (I + n.sigma)/2, outcome 1 the
    -1 eigenprojector.
    """

    bloch: tuple[float, float, float]

    def __post_init__(self) -> None:
        vec = np.asarray(self.bloch, dtype=float)
        if vec.shape != (3,):
            raise ValueError(f"Bloch vector must have 3 components, got {vec.shape}")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"Bloch vector norm {norm!r} is not 1")
        object.__setattr__(self, "bloch", tuple(float(v) for v in vec))

    def observable(self) -> np.ndarray:
        nx, ny, nz = self.bloch
        pauli_y = np.array([[0, -1j], [1j, 0]], dtype=complex)
        return nx * PAULI_X + ny * pauli_y + nz * PAULI_Z

    def projector(self, outcome: int) -> np.ndarray:
        """Projector onto the (+1 if outcome == 0 else -1) eigenspace."""
        if outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {outcome}")
        sign = 1.0 if outcome == 0 else -1.0
        return (I2 + sign * self.observable()) / 2.0

    def branches(self) -> Branches:
        return ((0, self.projector(0)), (1, self.projector(1)))


@dataclass(frozen=True)
class Instrument:
    """A party's instrument, one tuple of Kraus branches per binary setting."""

    party: Party
    branches_by_setting: tuple[Branches, Branches]

    def __post_init__(self) -> None:
        for setting, branches in enumerate(self.branches_by_setting):
            total = sum(k.conj().T @ k for _, k in branches)
            if np.max(np.abs(total - I2)) > ATOL:
                raise ValueError(
                    f"{self.party.value} setting {setting}: Kraus branches do not "
                    f"sum to the identity within {ATOL}"
                )

    def branches(self, setting: int) -> Branches:
        if setting not in (0, 1):
            raise ValueError(f"setting must be 0 or 1, got {setting}")
        return self.branches_by_setting[setting]


def alice_instrument(setting: int) -> Branches:
    """Measure-and-reprepare branches for an agent inside the switch.

    Branch for outcome a is |setting><a|: the incoming qubit is measured in
    the computational basis and the outgoing qubit is prepared in |setting>.
    Each branch has operator norm 1 and the branches sum to a CPTP map.
    """
    if setting not in (0, 1):
        raise ValueError(f"setting must be 0 or 1, got {setting}")
    return ((0, ketbra(setting, 0)), (1, ketbra(setting, 1)))


def bob_basis(setting: int) -> MeasurementBasis:
    """Bob measures Z for setting 0 and X for setting 1."""
    if setting not in (0, 1):
        raise ValueError(f"setting must be 0 or 1, got {setting}")
    return MeasurementBasis((0.0, 0.0, 1.0) if setting == 0 else (1.0, 0.0, 0.0))


def charlie_basis(setting: int) -> MeasurementBasis:
    """Charlie measures (X+Z)/sqrt(2) for setting 0 and (Z-X)/sqrt(2) for 1.

    Both settings measure along a diagonal of the X-Z plane; the outcome
    labelling for setting 1 is fixed by the CHSH sign convention described
    in the module docstring.
    """
    if setting not in (0, 1):
        raise ValueError(f"setting must be 0 or 1, got {setting}")
    s = 1.0 / np.sqrt(2.0)
    return MeasurementBasis((s, 0.0, s) if setting == 0 else (-s, 0.0, s))


def instrument_for(party: Party) -> Instrument:
    """Assemble the full two-setting instrument of a party."""
    if party in (Party.ALICE1, Party.ALICE2):
        per_setting = (alice_instrument(0), alice_instrument(1))
    elif party is Party.BOB:
        per_setting = (bob_basis(0).branches(), bob_basis(1).branches())
    else:
        per_setting = (charlie_basis(0).branches(), charlie_basis(1).branches())
    return Instrument(party, per_setting)
