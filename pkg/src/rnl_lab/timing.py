"""Relativistic ordering of the two beam-splitter impacts.

Geometry is one-dimensional: every event has a lab-frame time ``t`` (s), the
lab-frame position ``x`` (m) of its beam-splitter at the impact, and the
splitter's instantaneous velocity ``v`` (m/s) along the same axis.

The ordering of two events seen from an inertial frame moving at ``u`` is
the sign of ``gamma * ((t_a - t_b) - u (x_a - x_b) / c**2)``.  Since
``gamma > 0`` only the bracket is computed.  It is evaluated in exact
rational arithmetic on the given doubles, so the sign is never decided by
rounding, even right at the feasibility boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, SuperluminalError, UnsupportedConfigurationError

C = 299_792_458
"""Speed of light in vacuum, m/s (exact)."""

_C2 = Fraction(C * C)


@dataclass(frozen=True)
class PhysicalConstants:
    c: int = C


class MarkingMode(str, enum.Enum):
    """Whether pair sub-ensemble membership is knowable after the splitter."""

    U = "u"  # in principle unknowable
    D = "d"  # knowable


class ImpactClass(str, enum.Enum):
    BEFORE = "b"
    NON_BEFORE = "a"


class ExperimentLabel(NamedTuple):
    class1: ImpactClass
    class2: ImpactClass

    def __str__(self) -> str:
        return f"({self.class1.value},{self.class2.value})"

    @classmethod
    def parse(cls, text: str) -> "ExperimentLabel":
        body = text.strip().strip("()").replace(" ", "")
        first, second = body.split(",")
        return cls(ImpactClass(first), ImpactClass(second))


BB = ExperimentLabel(ImpactClass.BEFORE, ImpactClass.BEFORE)
AB = ExperimentLabel(ImpactClass.NON_BEFORE, ImpactClass.BEFORE)
BA = ExperimentLabel(ImpactClass.BEFORE, ImpactClass.NON_BEFORE)
AA = ExperimentLabel(ImpactClass.NON_BEFORE, ImpactClass.NON_BEFORE)
LABELS = (BB, AB, BA, AA)


def _check_velocity(v: float, what: str) -> None:
    if not math.isfinite(v):
        raise DomainError(f"{what} must be finite, got {v!r}")
    if abs(v) >= C:
        raise SuperluminalError(f"{what} |{v!r}| m/s is not below c = {C} m/s")


@dataclass(frozen=True)
class ImpactEvent:
    """Photon arrival at a beam-splitter, in lab coordinates."""

    t: float
    x: float
    v: float = 0.0

    def __post_init__(self) -> None:
        for name in ("t", "x"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"event {name} must be finite, got {value!r}")
        _check_velocity(self.v, "beam-splitter velocity")


@dataclass(frozen=True)
class SetupGeometry:
    event1: ImpactEvent
    event2: ImpactEvent
    marking1: MarkingMode = MarkingMode.U
    marking2: MarkingMode = MarkingMode.U

    @property
    def markings(self) -> tuple[MarkingMode, MarkingMode]:
        return (MarkingMode(self.marking1), MarkingMode(self.marking2))


def _gap_exact(own: ImpactEvent, other: ImpactEvent, frame_velocity: float) -> Fraction:
    _check_velocity(frame_velocity, "frame velocity")
    dt = Fraction(own.t) - Fraction(other.t)
    dx = Fraction(own.x) - Fraction(other.x)
    return dt - Fraction(frame_velocity) * dx / _C2


def simultaneity_gap(own: ImpactEvent, other: ImpactEvent, frame_velocity: float) -> float:
    """Time of ``own`` minus time of ``other`` as seen from a frame moving at
    ``frame_velocity``, without the Lorentz factor.

    Non-negative iff ``own`` does not precede ``other`` in that frame.  The
    result is the correctly rounded value of the exact expression.
    """
    return float(_gap_exact(own, other, frame_velocity))


def classify_impact(
    own: ImpactEvent,
    other: ImpactEvent,
    own_marking: MarkingMode,
    other_marking: MarkingMode,
) -> ImpactClass:
    """Classify ``own``'s impact using the ordering in its splitter's rest frame."""
    markings = {MarkingMode(own_marking), MarkingMode(other_marking)}
    if markings == {MarkingMode.D}:
        return ImpactClass.BEFORE
    if markings != {MarkingMode.U}:
        raise UnsupportedConfigurationError(
            "mixed u/d markings have no defined impact class; use (u,u) or (d,d)"
        )
    if _gap_exact(own, other, own.v) < 0:
        return ImpactClass.BEFORE
    return ImpactClass.NON_BEFORE


@dataclass(frozen=True)
class Classification:
    label: ExperimentLabel
    gap1: float  # particle 1 vs 2, in BS1's rest frame
    gap2: float  # particle 2 vs 1, in BS2's rest frame


def classify_experiment(setup: SetupGeometry) -> Classification:
    e1, e2 = setup.event1, setup.event2
    m1, m2 = setup.markings
    label = ExperimentLabel(
        classify_impact(e1, e2, m1, m2),
        classify_impact(e2, e1, m2, m1),
    )
    return Classification(
        label=label,
        gap1=simultaneity_gap(e1, e2, e1.v),
        gap2=simultaneity_gap(e2, e1, e2.v),
    )


def max_delay(V: float, L: float) -> float:
    """Largest lab delay of photon 1 that keeps the impact at a splitter
    approaching at speed ``V`` from distance ``L`` non-before: V L / c**2.

    The bound is strict; the returned value is its supremum.
    """
    if not (math.isfinite(V) and math.isfinite(L)):
        raise DomainError("V and L must be finite")
    if V < 0 or L < 0:
        raise DomainError(f"V and L must be non-negative, got V={V!r}, L={L!r}")
    if V >= C:
        raise SuperluminalError(f"V={V!r} m/s is not below c")
    return float(Fraction(V) * Fraction(L) / _C2)


@dataclass(frozen=True)
class FeasibilityRow:
    V: float
    L: float
    dt_max: float
    dt_safe: float


def _grid(start: float, stop: float, steps: int, what: str) -> list[float]:
    if steps < 1:
        raise DomainError(f"{what}: grid needs at least one point, got {steps}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise DomainError(f"{what}: range must be finite")
    if stop < start:
        raise DomainError(f"{what}: inverted range [{start!r}, {stop!r}]")
    if steps == 1:
        if start != stop:
            raise DomainError(f"{what}: a single-point grid needs start == stop")
        return [float(start)]
    step = (stop - start) / (steps - 1)
    return [start + i * step for i in range(steps - 1)] + [float(stop)]


def feasibility_sweep(
    v_range: tuple[float, float],
    l_range: tuple[float, float],
    v_steps: int = 1,
    l_steps: int = 1,
    safety_margin: float = 0.1,
) -> list[FeasibilityRow]:
    """Row-major (V outer, L inner) table of the maximal admissible delay.

    ``dt_safe`` shrinks ``dt_max`` by ``safety_margin`` so that planned delays
    stay clear of the measure-zero boundary.
    """
    if not 0 <= safety_margin < 1:
        raise DomainError(f"safety margin must lie in [0, 1), got {safety_margin!r}")
    vs = _grid(*v_range, v_steps, "V range")
    ls = _grid(*l_range, l_steps, "L range")
    if vs[0] < 0 or ls[0] < 0:
        raise DomainError("V and L ranges must be non-negative")
    rows = []
    for V in vs:
        for L in ls:
            dt = max_delay(V, L)
            rows.append(FeasibilityRow(V, L, dt, dt * (1 - safety_margin)))
    return rows


def section5_setup(V: float, L: float, delay: float) -> SetupGeometry:
    """BS1 at rest at x=0 hit at t=delay; BS2 at x=L hit at t=0 while moving
    toward BS1 with speed ``V``.  Both impacts u-marked."""
    return SetupGeometry(
        ImpactEvent(t=delay, x=0.0, v=0.0),
        ImpactEvent(t=0.0, x=L, v=-V),
        MarkingMode.U,
        MarkingMode.U,
    )
