"""Standard quantum predictions for two polarization-entangled photons.

Each photon passes a polarization rotation (half-wave plate) followed by a
polarizing beam-splitter whose H output port counts as outcome +1 and whose
V port counts as -1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedConfigurationError, ValidationError
from .model import TAU_P, JointDistribution


@dataclass(frozen=True)
class TwoPhotonState:
    """Amplitudes over |HH>, |HV>, |VH>, |VV> (photon 1 first)."""

    hh: complex
    hv: complex
    vh: complex
    vv: complex

    def __post_init__(self) -> None:
        norm = self.norm()
        if not math.isfinite(norm) or abs(norm - 1.0) > TAU_P:
            raise ValidationError(f"state is not normalized: sum |a|^2 = {norm!r}")

    def amplitudes(self) -> np.ndarray:
        return np.array([self.hh, self.hv, self.vh, self.vv], dtype=complex)

    def norm(self) -> float:
        return math.fsum(abs(a) ** 2 for a in (self.hh, self.hv, self.vh, self.vv))

    def with_phase(self, phi: float) -> "TwoPhotonState":
        g = cmath.exp(1j * phi)
        return TwoPhotonState(g * self.hh, g * self.hv, g * self.vh, g * self.vv)

    @property
    def is_two_class(self) -> bool:
        return abs(self.hv) ** 2 + abs(self.vh) ** 2 <= TAU_P

    @property
    def is_equal_weight(self) -> bool:
        """Both classes equally populated (the maximally entangled case)."""
        return self.is_two_class and abs(abs(self.hh) ** 2 - abs(self.vv) ** 2) <= TAU_P

    def is_bell(self) -> bool:
        """Equal to (|HH> - |VV>)/sqrt(2) up to a global phase."""
        overlap = (self.hh - self.vv) / math.sqrt(2)
        return abs(abs(overlap) - 1.0) <= TAU_P


def _fold(theta: float) -> float:
    r = theta % math.pi
    # a tiny negative angle rounds up to pi itself
    return 0.0 if r >= math.pi else r


@dataclass(frozen=True)
class AnalyzerSettings:
    """Polarization rotation angles of photon 1 (alpha) and photon 2 (beta), radians."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("analyzer angles must be finite")

    @classmethod
    def from_degrees(cls, alpha_deg: float, beta_deg: float) -> "AnalyzerSettings":
        return cls(math.radians(alpha_deg), math.radians(beta_deg))

    def reduced(self) -> "AnalyzerSettings":
        """Angles folded into [0, pi); every prediction is pi-periodic."""
        return AnalyzerSettings(_fold(self.alpha), _fold(self.beta))

    def swapped(self) -> "AnalyzerSettings":
        return AnalyzerSettings(self.beta, self.alpha)


def bell_state() -> TwoPhotonState:
    s = 1 / math.sqrt(2)
    return TwoPhotonState(s, 0, 0, -s)


def two_class_state(w_hh: complex, w_vv: complex) -> TwoPhotonState:
    norm = math.sqrt(abs(w_hh) ** 2 + abs(w_vv) ** 2)
    if norm == 0 or not math.isfinite(norm):
        raise DomainError("two-class weights must not both vanish")
    return TwoPhotonState(w_hh / norm, 0, 0, w_vv / norm)


def rotation(theta: float) -> np.ndarray:
    """|H> -> cos|H> + sin|V>,  |V> -> -sin|H> + cos|V>  (columns are images)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def entangled_joint(state: TwoPhotonState, settings: AnalyzerSettings) -> JointDistribution:
    """Coherent prediction: project the rotated pure state on the output ports."""
    out = np.kron(rotation(settings.alpha), rotation(settings.beta)) @ state.amplitudes()
    p = np.abs(out) ** 2
    return JointDistribution(*(float(x) for x in p))


def _port_probabilities(theta: float) -> tuple[tuple[float, float], tuple[float, float]]:
    # (P(+), P(-)) for an incoming H photon, then for an incoming V photon
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    return (c2, s2), (s2, c2)


def mixture_joint(state: TwoPhotonState, settings: AnalyzerSettings) -> JointDistribution:
    """Distinguishable prediction: an |a_HH|^2 : |a_VV|^2 mixture of HH and VV pairs,
    each photon passing its analyzer independently."""
    if not state.is_two_class:
        raise UnsupportedConfigurationError(
            "mixture prediction needs a two-class state (a_HV = a_VH = 0)"
        )
    w_h, w_v = abs(state.hh) ** 2, abs(state.vv) ** 2
    h1, v1 = _port_probabilities(settings.alpha)
    h2, v2 = _port_probabilities(settings.beta)
    entries = [
        w_h * h1[i] * h2[k] + w_v * v1[i] * v2[k]
        for i in (0, 1)
        for k in (0, 1)
    ]
    return JointDistribution(*entries)
