"""The four-party causal-order inequality and its classical bound.

The inequality bounds, over all causally ordered classical strategies, a
sum of three terms: two "guess the other agent's setting" terms for the
agents inside the switch (evaluated at Bob setting y = 0) and one CHSH-type
game between Bob and Charlie (evaluated at x1 = x2 = 0).  Classical bound:
7/4.  The entangled-control switch reaches (6 + sqrt(2))/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .kraus import ProbabilityTable

#: Largest value over classically ordered deterministic strategies.
CLASSICAL_BOUND = Fraction(7, 4)
#: Value of the ideal entangled-control switch.
QUANTUM_MAX = (6.0 + math.sqrt(2.0)) / 4.0


@dataclass(frozen=True)
class ScenarioValue:
    """The three estimated terms of the inequality and their sum."""

    p1: float
    p2: float
    p3: float

    @property
    def total(self) -> float:
        return self.p1 + self.p2 + self.p3


def term1(table: ProbabilityTable) -> float:
    """Mean of p(b = 0, a2 = x1 | x1, x2, y = 0, z) over the 8 (x1, x2, z)."""
    p = table.probs
    acc = 0.0
    for x1, x2, z in product((0, 1), repeat=3):
        block = p[x1, x2, 0, z]  # [a1, a2, b, c]
        acc += block[:, x1, 0, :].sum()
    return acc / 8.0


def term2(table: ProbabilityTable) -> float:
    """Mean of p(b = 1, a1 = x2 | x1, x2, y = 0, z) over the 8 (x1, x2, z)."""
    p = table.probs
    acc = 0.0
    for x1, x2, z in product((0, 1), repeat=3):
        block = p[x1, x2, 0, z]
        acc += block[x2, :, 1, :].sum()
    return acc / 8.0


def term3(table: ProbabilityTable) -> float:
    """Mean of p(b xor c = y z | x1 = x2 = 0, y, z) over the 4 (y, z)."""
    p = table.probs
    acc = 0.0
    for y, z in product((0, 1), repeat=2):
        block = p[0, 0, y, z]
        for b, c in product((0, 1), repeat=2):
            if b ^ c == y * z:
                acc += block[:, :, b, c].sum()
    return acc / 4.0


def vbc_value(table: ProbabilityTable) -> ScenarioValue:
    """All three terms of the inequality for one behavior."""
    return ScenarioValue(term1(table), term2(table), term3(table))


@dataclass(frozen=True)
class DeterministicStrategy:
    """A causally ordered deterministic strategy.

    order is 1 if alice1 acts before alice2 and 2 otherwise.  The first
    agent's outcome may depend only on her own setting; the second agent
    sees both settings.  Bob answers from y alone, Charlie from
    (x1, x2, z).  Truth tables are tuples over lexicographic inputs:
    bob[y], first_alice[x_first], second_alice[2*x1 + x2],
    charlie[4*x1 + 2*x2 + z].
    """

    order: int
    bob: tuple[int, int]
    first_alice: tuple[int, int]
    second_alice: tuple[int, int, int, int]
    charlie: tuple[int, int, int, int, int, int, int, int]

    def outcomes(self, x1: int, x2: int) -> tuple[int, int]:
        """(a1, a2) produced for settings (x1, x2)."""
        if self.order == 1:
            return self.first_alice[x1], self.second_alice[2 * x1 + x2]
        return self.second_alice[2 * x1 + x2], self.first_alice[x2]

    def value(self) -> tuple[Fraction, Fraction, Fraction]:
        """Exact (p1, p2, p3) of this strategy."""
        c1 = c2 = 0
        for x1, x2, _z in product((0, 1), repeat=3):
            a1, a2 = self.outcomes(x1, x2)
            c1 += int(self.bob[0] == 0 and a2 == x1)
            c2 += int(self.bob[0] == 1 and a1 == x2)
        c3 = sum(
            int((self.bob[y] ^ self.charlie[z]) == y * z)
            for y, z in product((0, 1), repeat=2)
        )
        return Fraction(c1, 8), Fraction(c2, 8), Fraction(c3, 4)

    def total(self) -> Fraction:
        return sum(self.value(), Fraction(0))

    def table(self) -> ProbabilityTable:
        """The deterministic behavior of this strategy."""
        probs = np.zeros((2,) * 8)
        for x1, x2, y, z in product((0, 1), repeat=4):
            a1, a2 = self.outcomes(x1, x2)
            probs[x1, x2, y, z, a1, a2, self.bob[y], self.charlie[4 * x1 + 2 * x2 + z]] = 1.0
        return ProbabilityTable(probs)


def format_strategy(strategy: DeterministicStrategy) -> str:
    """Render a strategy as truth tables over lexicographic inputs.

    Example: "order=1; b:01; a_first:00; a_second:0101; c:00110011".
    """
    def bits(values) -> str:
        return "".join(str(v) for v in values)

    return (
        f"order={strategy.order}; b:{bits(strategy.bob)}; "
        f"a_first:{bits(strategy.first_alice)}; "
        f"a_second:{bits(strategy.second_alice)}; c:{bits(strategy.charlie)}"
    )


def classical_bound() -> tuple[Fraction, list[DeterministicStrategy]]:
    """Maximum of the inequality over all deterministic ordered strategies.

    Exhaustively enumerates both orders, all Bob/first/second/Charlie truth
    tables (2 * 4 * 4 * 16 * 256 = 32768 strategies) in exact integer
    arithmetic and returns the maximum with every maximizing strategy.
    """
    pairs = tuple(product((0, 1), repeat=2))
    first_tables = pairs
    bob_tables = pairs
    second_tables = tuple(product((0, 1), repeat=4))
    charlie_tables = tuple(product((0, 1), repeat=8))

    # CHSH win count over (y, z) depends only on Bob's table and Charlie's
    # responses at x1 = x2 = 0 (charlie[0], charlie[1]).
    chsh_wins = {
        (bob, c00): sum(int((bob[y] ^ c00[z]) == y * z) for y, z in product((0, 1), repeat=2))
        for bob in bob_tables
        for c00 in pairs
    }

    best = -1  # numerator over a common denominator of 8
    maximizers: list[DeterministicStrategy] = []
    for order in (1, 2):
        for first in first_tables:
            for second in second_tables:
                s1 = s2 = 0
                for x1, x2 in pairs:
                    if order == 1:
                        a1, a2 = first[x1], second[2 * x1 + x2]
                    else:
                        a1, a2 = second[2 * x1 + x2], first[x2]
                    s1 += int(a2 == x1)
                    s2 += int(a1 == x2)
                for bob in bob_tables:
                    # settings count (x1, x2, z): the z axis doubles s1/s2
                    guess = 2 * (s1 if bob[0] == 0 else s2)
                    for charlie in charlie_tables:
                        numerator = guess + 2 * chsh_wins[bob, charlie[:2]]
                        if numerator < best:
                            continue
                        strategy = DeterministicStrategy(order, bob, first, second, charlie)
                        if numerator > best:
                            best = numerator
                            maximizers = [strategy]
                        else:
                            maximizers.append(strategy)
    return Fraction(best, 8), maximizers
