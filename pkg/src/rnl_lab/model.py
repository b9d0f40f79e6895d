"""Outcome labels, two-party joint distributions and conditional tables.

A joint distribution is stored as four explicit entries ``pp, pm, mp, mm``
where the first letter is particle 1's outcome and the second particle 2's
(``p`` = +1, ``m`` = -1).  All values are plain floats and every object is
immutable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import ValidationError

#: Tolerance for validating analytically produced probabilities.
TAU_P = 1e-9


class Outcome(enum.IntEnum):
    """Detector outcome of one particle: D_i(+1) or D_i(-1)."""

    PLUS = 1
    MINUS = -1

    def __neg__(self) -> "Outcome":
        return Outcome(-int(self))

    @property
    def symbol(self) -> str:
        return "+" if self is Outcome.PLUS else "-"

    @property
    def letter(self) -> str:
        return "p" if self is Outcome.PLUS else "m"

    @classmethod
    def parse(cls, text: str) -> "Outcome":
        if text in ("+", "+1", "p"):
            return cls.PLUS
        if text in ("-", "-1", "m"):
            return cls.MINUS
        raise ValueError(f"unknown outcome label {text!r}")


PLUS = Outcome.PLUS
MINUS = Outcome.MINUS
OUTCOMES: tuple[Outcome, Outcome] = (PLUS, MINUS)
#: Fixed outcome-pair order used for sampling and serialization.
PAIRS: tuple[tuple[Outcome, Outcome], ...] = (
    (PLUS, PLUS),
    (PLUS, MINUS),
    (MINUS, PLUS),
    (MINUS, MINUS),
)
PAIR_KEYS: tuple[str, ...] = ("pp", "pm", "mp", "mm")


def _key(sigma: Outcome, omega: Outcome) -> str:
    return Outcome(sigma).letter + Outcome(omega).letter


@dataclass(frozen=True)
class JointDistribution:
    """Coincidence probabilities P_{sigma omega} of a two-particle experiment."""

    pp: float
    pm: float
    mp: float
    mm: float

    def __getitem__(self, pair: tuple[Outcome, Outcome]) -> float:
        return getattr(self, _key(*pair))

    def items(self) -> Iterator[tuple[tuple[Outcome, Outcome], float]]:
        for pair in PAIRS:
            yield pair, self[pair]

    def values(self) -> tuple[float, float, float, float]:
        return (self.pp, self.pm, self.mp, self.mm)

    @classmethod
    def from_mapping(cls, m: Mapping[tuple[Outcome, Outcome], float]) -> "JointDistribution":
        return cls(*(float(m[pair]) for pair in PAIRS))

    @classmethod
    def uniform(cls) -> "JointDistribution":
        return cls(0.25, 0.25, 0.25, 0.25)

    def transposed(self) -> "JointDistribution":
        """Swap the roles of particle 1 and particle 2."""
        return JointDistribution(self.pp, self.mp, self.pm, self.mm)

    def relabeled(self) -> "JointDistribution":
        """Negate both parties' outcome labels."""
        return JointDistribution(self.mm, self.mp, self.pm, self.pp)

    def to_dict(self) -> dict[str, float]:
        return dict(zip(PAIR_KEYS, self.values()))

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "JointDistribution":
        extra = set(d) - set(PAIR_KEYS)
        if extra:
            raise ValidationError(f"unknown keys {sorted(extra)}")
        try:
            return cls(*(float(d[k]) for k in PAIR_KEYS))
        except KeyError as exc:
            raise ValidationError(f"missing key {exc.args[0]!r}") from None


@dataclass(frozen=True)
class Marginal:
    """Single-particle outcome probabilities."""

    plus: float
    minus: float

    def __getitem__(self, outcome: Outcome) -> float:
        return self.plus if outcome is PLUS else self.minus

    def as_tuple(self) -> tuple[float, float]:
        return (self.plus, self.minus)


@dataclass(frozen=True)
class ConditionalTable:
    """P(non-before outcome sigma' | partner's before outcome omega).

    Stored as ``c[(sigma', omega)]``.  ``degenerate`` lists the conditioning
    outcomes whose column was filled with (0.5, 0.5) because the conditioning
    event had zero probability.
    """

    pp: float
    pm: float
    mp: float
    mm: float
    degenerate: tuple[Outcome, ...] = ()

    def __getitem__(self, pair: tuple[Outcome, Outcome]) -> float:
        return getattr(self, _key(*pair))

    def values(self) -> tuple[float, float, float, float]:
        return (self.pp, self.pm, self.mp, self.mm)

    def column(self, omega: Outcome) -> tuple[float, float]:
        return (self[PLUS, omega], self[MINUS, omega])


def validate_distribution(j: JointDistribution, tol: float = TAU_P) -> list[str]:
    """Return one message per violated invariant; an empty list means valid."""
    problems = []
    for key, value in zip(PAIR_KEYS, j.values()):
        if not math.isfinite(value):
            problems.append(f"non-finite entry {key}={value!r}")
        elif value < -tol:
            problems.append(f"negative entry {key}={value!r} (tolerance {tol:g})")
        elif value > 1 + tol:
            problems.append(f"entry above one {key}={value!r} (tolerance {tol:g})")
    total = math.fsum(j.values())
    if math.isfinite(total) and abs(total - 1.0) > tol:
        problems.append(f"normalization violated: sum={total!r} (tolerance {tol:g})")
    return problems


def check_distribution(j: JointDistribution, tol: float = TAU_P) -> JointDistribution:
    problems = validate_distribution(j, tol)
    if problems:
        raise ValidationError("invalid joint distribution: " + "; ".join(problems), problems)
    return j


def validate_conditional(c: ConditionalTable, tol: float = TAU_P) -> list[str]:
    problems = []
    for key, value in zip(PAIR_KEYS, c.values()):
        if not (-tol <= value <= 1 + tol):
            problems.append(f"entry {key}={value!r} outside [0, 1] (tolerance {tol:g})")
    for omega in OUTCOMES:
        s = math.fsum(c.column(omega))
        if abs(s - 1.0) > tol:
            problems.append(f"column {omega.symbol} sums to {s!r} (tolerance {tol:g})")
    return problems


def correlation(j: JointDistribution) -> float:
    """E = sum over sigma, omega of sigma * omega * P_{sigma omega}."""
    check_distribution(j)
    return (j.pp + j.mm) - (j.pm + j.mp)


def marginal(j: JointDistribution, party: int) -> Marginal:
    check_distribution(j)
    if party == 1:
        return Marginal(j.pp + j.pm, j.mp + j.mm)
    if party == 2:
        return Marginal(j.pp + j.mp, j.pm + j.mm)
    raise ValueError(f"party must be 1 or 2, got {party!r}")


def total_value_probability(j: JointDistribution, sigma: Outcome) -> float:
    """Probability that the product of both outcomes equals ``sigma``."""
    check_distribution(j)
    if Outcome(sigma) is PLUS:
        return j.pp + j.mm
    return j.pm + j.mp
