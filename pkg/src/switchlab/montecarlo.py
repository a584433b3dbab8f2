"""Finite-statistics simulation of the inequality measurement.

The experiment measures a fixed list of setting combinations, a fixed
number of shots per setting, and estimates the three inequality terms
from the observed frequencies.  Sampling uses numpy's default PCG64
generator; repetition r of a run with master seed s is seeded with the
sequence (s, r), so reports are reproducible shot-for-shot.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Sequence, TextIO

import numpy as np

from .inequality import CLASSICAL_BOUND, ScenarioValue
from .kraus import ProbabilityTable

logger = logging.getLogger(__name__)

#: Purposes a setting combination is measured for.  The x1 = x2 = 0, y = 0
#: combinations appear in both blocks and are measured separately.
SIGNAL = "signal"
CHSH = "chsh"


@dataclass(frozen=True)
class SettingRun:
    """One measured setting combination and the term block it serves."""

    purpose: str
    x1: int
    x2: int
    y: int
    z: int


def run_list() -> tuple[SettingRun, ...]:
    """The 12 measurement runs of one experiment.

    Eight runs at y = 0 over all (x1, x2, z) estimate the two
    setting-guessing terms; four runs at x1 = x2 = 0 over all (y, z)
    estimate the CHSH term.
    """
    signal = tuple(
        SettingRun(SIGNAL, x1, x2, 0, z) for x1, x2, z in product((0, 1), repeat=3)
    )
    chsh = tuple(SettingRun(CHSH, 0, 0, y, z) for y, z in product((0, 1), repeat=2))
    return signal + chsh


def _outcome_index(a1: int, a2: int, b: int, c: int) -> int:
    return 8 * a1 + 4 * a2 + 2 * b + c


@dataclass(frozen=True)
class CountsTable:
    """Observed outcome counts: one row per run, one column per outcome.

    counts[r, 8*a1 + 4*a2 + 2*b + c] is the number of shots of run r that
    produced outcomes (a1, a2, b, c).
    """

    runs: tuple[SettingRun, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.runs), 16):
            raise ValueError(
                f"counts must have shape ({len(self.runs)}, 16), got {counts.shape}"
            )
        if counts.min() < 0:
            raise ValueError("counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)


def sample_counts(
    table: ProbabilityTable, n_per_setting: int, seed
) -> CountsTable:
    """Draw n_per_setting shots for every run in run_list().

    Shots within a run are i.i.d. samples of the 16-outcome distribution
    of that run's settings, so the per-outcome counts are multinomial.
    `seed` is anything numpy's default_rng accepts (an int or a sequence).
    """
    if n_per_setting < 0:
        raise ValueError(f"n_per_setting must be >= 0, got {n_per_setting}")
    rng = np.random.default_rng(seed)
    runs = run_list()
    counts = np.zeros((len(runs), 16), dtype=np.int64)
    for r, run in enumerate(runs):
        outcome_probs = table.setting(run.x1, run.x2, run.y, run.z).reshape(16)
        # guard against clamping residue: renormalise exactly for sampling
        counts[r] = rng.multinomial(n_per_setting, outcome_probs / outcome_probs.sum())
    return CountsTable(runs, counts)


def estimate(counts: CountsTable) -> ScenarioValue:
    """Plug-in frequency estimate of the three inequality terms.

    A run with zero shots is degenerate: it contributes 0 to its term and
    a warning is logged.
    """
    p1 = p2 = p3 = 0.0
    n_signal = n_chsh = 0
    for run, row in zip(counts.runs, counts.counts):
        total = int(row.sum())
        if run.purpose == SIGNAL:
            n_signal += 1
        else:
            n_chsh += 1
        if total == 0:
            logger.warning("run %s has zero shots; contributing 0", run)
            continue
        if run.purpose == SIGNAL:
            hit1 = hit2 = 0
            for a1, a2, b, c in product((0, 1), repeat=4):
                shots = row[_outcome_index(a1, a2, b, c)]
                if b == 0 and a2 == run.x1:
                    hit1 += shots
                if b == 1 and a1 == run.x2:
                    hit2 += shots
            p1 += hit1 / total
            p2 += hit2 / total
        else:
            hit3 = sum(
                row[_outcome_index(a1, a2, b, c)]
                for a1, a2, b, c in product((0, 1), repeat=4)
                if b ^ c == run.y * run.z
            )
            p3 += hit3 / total
    return ScenarioValue(p1 / n_signal, p2 / n_signal, p3 / n_chsh)


@dataclass(frozen=True)
class McReport:
    """Summary of repeated finite-statistics experiments.

    per_rep holds one (p1, p2, p3, total) row per repetition; sigma values
    are sample standard deviations (ddof = 1) and z_score measures the
    violation of the classical bound in units of sigma.
    """

    n_per_setting: int
    reps: int
    seed: int
    mean_total: float
    sigma: float
    z_score: float
    term_means: tuple[float, float, float]
    term_sigmas: tuple[float, float, float]
    per_rep: np.ndarray


def report(
    table: ProbabilityTable,
    n_per_setting: int,
    reps: int,
    seed: int,
    threads: int | None = None,
) -> McReport:
    """Run `reps` independent simulated experiments and summarise them.

    Repetition r uses the derived seed (seed, r), so the report is
    reproducible and independent of how repetitions are scheduled.
    """
    if reps < 2:
        raise ValueError(f"reps must be >= 2 to estimate a spread, got {reps}")

    def one_rep(r: int) -> tuple[float, float, float, float]:
        value = estimate(sample_counts(table, n_per_setting, seed=[seed, r]))
        return value.p1, value.p2, value.p3, value.total

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_rep, range(reps)))
    else:
        rows = [one_rep(r) for r in range(reps)]
    per_rep = np.array(rows)

    means = per_rep.mean(axis=0)
    sigmas = per_rep.std(axis=0, ddof=1)
    bound = float(CLASSICAL_BOUND)
    z = (means[3] - bound) / sigmas[3] if sigmas[3] > 0 else np.inf
    return McReport(
        n_per_setting=n_per_setting,
        reps=reps,
        seed=seed,
        mean_total=float(means[3]),
        sigma=float(sigmas[3]),
        z_score=float(z),
        term_means=tuple(float(m) for m in means[:3]),
        term_sigmas=tuple(float(s) for s in sigmas[:3]),
        per_rep=per_rep,
    )


def write_reps_csv(rep_values: Sequence[Sequence[float]] | np.ndarray, stream: TextIO) -> None:
    """Write per-repetition term estimates as CSV rows (rep, p1, p2, p3, total)."""
    stream.write("rep,p1,p2,p3,total\n")
    for r, row in enumerate(np.asarray(rep_values, dtype=float)):
        p1, p2, p3, total = row
        stream.write(
            f"{r},{p1:.9g},{p2:.9g},{p3:.9g},{total:.9g}\n"
        )
