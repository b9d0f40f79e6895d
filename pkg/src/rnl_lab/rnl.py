"""Timing-dependent joint probabilities.

Which rule produces the coincidence distribution depends on the experiment
label (impact class of each photon):

* ``(b,b)``: each photon answers from local information only, so the pair
  statistics are those of the distinguishable mixture.
* ``(a,b)`` / ``(b,a)``: the non-before photon correlates with the partner's
  actual before outcome by the usual entanglement rule.
* ``(a,a)``: each photon correlates with the outcome its partner *would*
  have produced in a before impact.  The joint is the before-before
  distribution pushed through two conditional tables::

      P_aa(s', w') = sum_{s, w} P_bb(s, w) * c1(s' | w) * c2(w' | s)

  where ``c1(s'|w) = P_ab(s', w) / P_b2(w)`` and symmetrically for ``c2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateConditioningError, HypothesisError, UnsupportedConfigurationError, ValidationError
from .model import (
    OUTCOMES,
    PAIRS,
    TAU_P,
    ConditionalTable,
    JointDistribution,
    Marginal,
    Outcome,
    check_distribution,
    correlation,
    marginal,
    validate_conditional,
)
from .quantum import AnalyzerSettings, TwoPhotonState, entangled_joint, mixture_joint
from .timing import AA, AB, BA, BB, LABELS, ExperimentLabel, MarkingMode, SetupGeometry, classify_experiment

IDENTITY_TOL = 1e-12
"""Tolerance for identities that hold exactly in exact arithmetic."""

# below this a conditioning probability is treated as zero
_MARGINAL_FLOOR = 1e-300


def _oriented(joint: JointDistribution, nonbefore_party: int) -> JointDistribution:
    # index as (non-before outcome, before outcome)
    if nonbefore_party == 1:
        return joint
    if nonbefore_party == 2:
        return joint.transposed()
    raise ValueError(f"nonbefore_party must be 1 or 2, got {nonbefore_party!r}")


def conditional_table(
    joint_ab: JointDistribution,
    before_marginal: Marginal,
    *,
    nonbefore_party: int = 1,
    on_degenerate: str = "raise",
) -> ConditionalTable:
    """c(s'|w) = P(a_i, b_j)_{s' w} / P(b_j)_w.

    ``joint_ab`` is indexed particle 1 first; ``nonbefore_party`` says which
    particle made the non-before impact.  With ``on_degenerate="uniform"`` a
    column conditioned on a zero-probability outcome becomes (0.5, 0.5);
    such a column carries zero weight in the two-non-before composition.
    """
    if on_degenerate not in ("raise", "uniform"):
        raise ValueError(f"on_degenerate must be 'raise' or 'uniform', got {on_degenerate!r}")
    j = _oriented(check_distribution(joint_ab), nonbefore_party)
    entries: dict[tuple[Outcome, Outcome], float] = {}
    degenerate = []
    for omega in OUTCOMES:
        m = before_marginal[omega]
        if m <= _MARGINAL_FLOOR:
            if on_degenerate == "raise":
                raise DegenerateConditioningError(
                    f"conditioning outcome {omega.symbol} has probability {m!r}"
                )
            degenerate.append(omega)
            for sigma in OUTCOMES:
                entries[sigma, omega] = 0.5
            continue
        for sigma in OUTCOMES:
            entries[sigma, omega] = j[sigma, omega] / m
    table = ConditionalTable(*(entries[pair] for pair in PAIRS), degenerate=tuple(degenerate))
    problems = validate_conditional(table)
    if problems:
        raise ValidationError("conditional table is not normalized: " + "; ".join(problems), problems)
    return table


def conditional_table_maxent(joint_ab: JointDistribution, *, nonbefore_party: int = 1) -> ConditionalTable:
    """c(s'|w) = 2 P(a_i, b_j)_{s' w}; valid only when both marginals are 1/2."""
    check_distribution(joint_ab)
    for party in (1, 2):
        m = marginal(joint_ab, party)
        if max(abs(m.plus - 0.5), abs(m.minus - 0.5)) > TAU_P:
            raise HypothesisError(
                f"marginal of particle {party} is {m.as_tuple()}, not (1/2, 1/2)"
            )
    j = _oriented(joint_ab, nonbefore_party)
    return ConditionalTable(*(2 * v for v in j.values()))


def two_nonbefore_joint(
    bb: JointDistribution, cond1: ConditionalTable, cond2: ConditionalTable
) -> JointDistribution:
    """Compose the before-before joint with both photons' conditional tables.

    ``cond1[s', w]`` conditions photon 1's non-before outcome on photon 2's
    before outcome; ``cond2[w', s]`` the converse.
    """
    check_distribution(bb)
    for name, c in (("cond1", cond1), ("cond2", cond2)):
        problems = validate_conditional(c)
        if problems:
            raise ValidationError(f"{name} invalid: " + "; ".join(problems), problems)
    entries = []
    for s1, w1 in PAIRS:
        entries.append(
            math.fsum(bb[s, w] * cond1[s1, w] * cond2[w1, s] for s, w in PAIRS)
        )
    return JointDistribution(*entries)


def rnl_correlation_closed_form(settings: AnalyzerSettings) -> float:
    """cos 2a * cos 2b * cos^2 2(a+b): the (a,a) correlation for the Bell state."""
    a, b = settings.alpha, settings.beta
    return math.cos(2 * a) * math.cos(2 * b) * math.cos(2 * (a + b)) ** 2


def theorem2_check(bb_E: float, ab_E: float, ba_E: float, aa_E: float) -> float:
    """Residual of the product law E(a,a) = E(b,b) E(a,b) E(b,a)."""
    return abs(aa_E - bb_E * ab_E * ba_E)


@dataclass(frozen=True)
class RNLJoints:
    """All four timing-dependent joints for one state and analyzer setting."""

    bb: JointDistribution
    ab: JointDistribution
    ba: JointDistribution
    aa: JointDistribution
    cond1: ConditionalTable
    cond2: ConditionalTable
    warnings: tuple[str, ...] = ()

    def __getitem__(self, label: ExperimentLabel) -> JointDistribution:
        return {BB: self.bb, AB: self.ab, BA: self.ba, AA: self.aa}[label]

    def correlations(self) -> dict[ExperimentLabel, float]:
        return {label: correlation(self[label]) for label in LABELS}


def rnl_joints(
    state: TwoPhotonState, settings: AnalyzerSettings, *, on_degenerate: str = "uniform"
) -> RNLJoints:
    bb = mixture_joint(state, settings)
    ab = entangled_joint(state, settings)
    ba = ab
    cond1 = conditional_table(ab, marginal(bb, 2), nonbefore_party=1, on_degenerate=on_degenerate)
    cond2 = conditional_table(ba, marginal(bb, 1), nonbefore_party=2, on_degenerate=on_degenerate)
    aa = two_nonbefore_joint(bb, cond1, cond2)
    warnings = []
    for particle, cond in ((1, cond1), (2, cond2)):
        for omega in cond.degenerate:
            warnings.append(
                f"degenerate conditioning for particle {particle}: partner outcome "
                f"{omega.symbol} has zero probability; column set to (0.5, 0.5)"
            )
    return RNLJoints(bb, ab, ba, aa, cond1, cond2, tuple(warnings))


def rnl_joint(label: ExperimentLabel, state: TwoPhotonState, settings: AnalyzerSettings) -> JointDistribution:
    return rnl_joints(state, settings)[label]


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class PredictionReport:
    label: ExperimentLabel
    rnl: JointDistribution
    qm: JointDistribution
    rnl_E: float
    qm_E: float
    joints: RNLJoints
    checks: tuple[Check, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "label": str(self.label),
            "rnl": {**self.rnl.to_dict(), "E": self.rnl_E},
            "qm": {**self.qm.to_dict(), "E": self.qm_E},
            "checks": [c.to_dict() for c in self.checks],
            "warnings": list(self.warnings),
        }


def no_signaling_residuals(joints: RNLJoints) -> tuple[float, float]:
    """Per particle: the largest spread of its marginal across the four experiments."""
    out = []
    for party in (1, 2):
        ms = [marginal(joints[label], party) for label in LABELS]
        out.append(
            max(max(m[s] for m in ms) - min(m[s] for m in ms) for s in OUTCOMES)
        )
    return out[0], out[1]


def no_signaling_check(report: PredictionReport) -> tuple[float, float]:
    return no_signaling_residuals(report.joints)


def _conditional_gap(a: ConditionalTable, b: ConditionalTable) -> float:
    return max(abs(x - y) for x, y in zip(a.values(), b.values()))


def predict(setup: SetupGeometry, state: TwoPhotonState, settings: AnalyzerSettings) -> PredictionReport:
    if not state.is_two_class:
        raise UnsupportedConfigurationError(
            "predictions need a two-class (|HH>, |VV>) preparation"
        )
    label = classify_experiment(setup).label
    joints = rnl_joints(state, settings)
    corr = joints.correlations()
    if setup.markings == (MarkingMode.D, MarkingMode.D):
        qm = joints.bb
    else:
        qm = joints.ab
    rnl = joints[label]

    warnings = list(joints.warnings)
    r1, r2 = no_signaling_residuals(joints)
    checks = [
        Check("no_signaling_particle1", r1, TAU_P),
        Check("no_signaling_particle2", r2, TAU_P),
    ]
    if state.is_equal_weight:
        checks.append(
            Check("theorem2_product_law", theorem2_check(corr[BB], corr[AB], corr[BA], corr[AA]), IDENTITY_TOL)
        )
        gap = max(
            _conditional_gap(joints.cond1, conditional_table_maxent(joints.ab, nonbefore_party=1)),
            _conditional_gap(joints.cond2, conditional_table_maxent(joints.ba, nonbefore_party=2)),
        )
        checks.append(Check("conditional_maxent_vs_general", gap, IDENTITY_TOL))
    else:
        warnings.append(
            "unequal class weights: outside the maximally entangled hypothesis; "
            "product law and maximal-entanglement conditionals not checked"
        )
    if state.is_bell():
        checks.append(
            Check("closed_form_aa", abs(corr[AA] - rnl_correlation_closed_form(settings)), IDENTITY_TOL)
        )
    return PredictionReport(
        label=label,
        rnl=rnl,
        qm=qm,
        rnl_E=corr[label],
        qm_E=correlation(qm),
        joints=joints,
        checks=tuple(checks),
        warnings=tuple(warnings),
    )
