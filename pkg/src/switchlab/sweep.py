"""Map laboratory-facing noise figures onto model parameters and sweep.

The lab reports the purity of the [bob, control] resource state and the
process fidelity of the switch; the model is parameterised by the Werner
visibility eta and the order-coherence weight epsilon.  This module
converts between the two and tabulates the inequality value over a grid.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .inequality import vbc_value
from .kraus import NoiseParams, behavior, werner_state
from .linalg import purity
from .process_matrix import mix_w, switch_fidelity

#: Default purity grid: 151 points from the maximally mixed resource to pure.
DEFAULT_PURITY_STEPS = 151
#: Default switch-fidelity values, matching the reported experiment.
DEFAULT_FIDELITIES = (1.0, 0.96, 0.92)

CSV_HEADER = "purity,eta,f_switch,epsilon,p1,p2,p3,total"


def purity_of_eta(eta: float) -> float:
    """Purity of the Werner resource: eta^2 + (1 - eta^2)/4."""
    return purity(werner_state(eta))


def eta_of_purity(value: float) -> float:
    """Werner visibility whose resource purity equals `value`.

    Inverts P = eta^2 + (1 - eta^2)/4 on eta in [0, 1]; the purity must
    lie in [1/4, 1].
    """
    if not 0.25 <= value <= 1.0:
        raise ValueError(f"purity must lie in [0.25, 1], got {value!r}")
    return math.sqrt((value - 0.25) / 0.75)


def fidelity_of_epsilon(epsilon: float) -> float:
    """Switch fidelity of the epsilon-mixture process."""
    return switch_fidelity(mix_w(epsilon))


def epsilon_of_fidelity(value: float) -> float:
    """Order-coherence weight whose process fidelity equals `value`.

    The map epsilon -> switch_fidelity(mix_w(epsilon)) is affine, so it is
    inverted from its two endpoint evaluations.
    """
    f0 = fidelity_of_epsilon(0.0)
    f1 = fidelity_of_epsilon(1.0)
    if not min(f0, f1) - 1e-12 <= value <= max(f0, f1) + 1e-12:
        raise ValueError(
            f"switch fidelity must lie in [{f0:.9g}, {f1:.9g}], got {value!r}"
        )
    epsilon = (value - f0) / (f1 - f0)
    return min(1.0, max(0.0, epsilon))


@dataclass(frozen=True)
class SweepRow:
    """One grid point: lab figures, model parameters, inequality terms."""

    purity: float
    eta: float
    f_switch: float
    epsilon: float
    p1: float
    p2: float
    p3: float
    total: float


def default_purity_grid() -> np.ndarray:
    return np.linspace(0.25, 1.0, DEFAULT_PURITY_STEPS)


def _row(purity_value: float, fidelity: float) -> SweepRow:
    eta = eta_of_purity(purity_value)
    epsilon = epsilon_of_fidelity(fidelity)
    value = vbc_value(behavior(NoiseParams(eta, epsilon)))
    return SweepRow(
        purity=float(purity_value),
        eta=eta,
        f_switch=float(fidelity),
        epsilon=epsilon,
        p1=value.p1,
        p2=value.p2,
        p3=value.p3,
        total=value.total,
    )


def sweep(
    purities: Iterable[float] | None = None,
    fidelities: Sequence[float] = DEFAULT_FIDELITIES,
    threads: int | None = None,
) -> list[SweepRow]:
    """Tabulate the inequality over a (purity, switch-fidelity) grid.

    Rows are sorted by (f_switch, purity).  The computation of each row is
    independent, so an optional thread pool only changes wall time, never
    values.
    """
    grid = default_purity_grid() if purities is None else np.asarray(list(purities), float)
    points = sorted((float(f), float(p)) for f in fidelities for p in grid)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda fp: _row(fp[1], fp[0]), points))
    else:
        rows = [_row(p, f) for f, p in points]
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], stream: TextIO) -> None:
    """Write sweep rows as CSV with 9 significant digits."""
    stream.write(CSV_HEADER + "\n")
    for row in rows:
        fields = (
            row.purity, row.eta, row.f_switch, row.epsilon,
            row.p1, row.p2, row.p3, row.total,
        )
        stream.write(",".join(f"{value:.9g}" for value in fields) + "\n")
