"""Strict JSON experiment configuration.

Schema ``rnl-lab/1`` (units in key suffixes)::

    {
      "schema": "rnl-lab/1",
      "geometry": {
        "bs1": {"t_s": 5e-11, "x_m": 0.0,    "v_mps": 0.0},
        "bs2": {"t_s": 0.0,   "x_m": 1.0e5,  "v_mps": -100.0}
      },
      "markings": ["u", "u"],
      "state": "bell",                       # or {"w_hh": 1, "w_vv": [0, -1]}
      "angles": {"alpha_deg": 45, "beta_deg": -45},
      "sweep": {"axis": "antidiagonal", "start_deg": 0, "stop_deg": 90, "steps": 91},
      "montecarlo": {"N": 1000000, "seed": 7},
      "feasibility": {
        "V_mps": {"start": 100, "stop": 100, "steps": 1},
        "L_m": {"start": 1e5, "stop": 1e5, "steps": 1},
        "safety_margin": 0.1
      }
    }

``sweep``, ``montecarlo`` and ``feasibility`` are optional.  Complex weights
are written ``[re, im]``.  Sweep axes: ``alpha`` (beta fixed at
``angles.beta_deg``), ``beta`` (alpha fixed), ``diagonal`` (beta = alpha) and
``antidiagonal`` (beta = -alpha); the swept angle runs over ``steps``
equally spaced points from ``start_deg`` to ``stop_deg`` inclusive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from .errors import ValidationError
from .quantum import AnalyzerSettings, TwoPhotonState, bell_state, two_class_state
from .timing import C, ImpactEvent, MarkingMode, SetupGeometry

SCHEMA = "rnl-lab/1"
SWEEP_AXES = ("alpha", "beta", "diagonal", "antidiagonal")


class ConfigError(ValidationError):
    """Config failed validation; ``violations`` lists ``path: message`` lines."""


@dataclass(frozen=True)
class EventSpec:
    t_s: float
    x_m: float
    v_mps: float


@dataclass(frozen=True)
class StateSpec:
    kind: str  # "bell" or "two_class"
    w_hh: complex = 0j
    w_vv: complex = 0j

    def build(self) -> TwoPhotonState:
        if self.kind == "bell":
            return bell_state()
        return two_class_state(self.w_hh, self.w_vv)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start_deg: float
    stop_deg: float
    steps: int

    def points(self, alpha_deg: float, beta_deg: float) -> list[tuple[float, float]]:
        if self.steps == 1:
            xs = [self.start_deg]
        else:
            step = (self.stop_deg - self.start_deg) / (self.steps - 1)
            xs = [self.start_deg + i * step for i in range(self.steps - 1)] + [self.stop_deg]
        if self.axis == "alpha":
            pts = [(x, beta_deg) for x in xs]
        elif self.axis == "beta":
            pts = [(alpha_deg, x) for x in xs]
        elif self.axis == "diagonal":
            pts = [(x, x) for x in xs]
        else:
            pts = [(x, -x) for x in xs]
        # adding 0.0 turns -0.0 into 0.0
        return [(a + 0.0, b + 0.0) for a, b in pts]


@dataclass(frozen=True)
class MonteCarloSpec:
    N: int
    seed: int


@dataclass(frozen=True)
class RangeSpec:
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class FeasibilitySpec:
    V_mps: RangeSpec
    L_m: RangeSpec
    safety_margin: float = 0.1


@dataclass(frozen=True)
class ExperimentConfig:
    bs1: EventSpec
    bs2: EventSpec
    markings: tuple[MarkingMode, MarkingMode]
    state: StateSpec
    alpha_deg: float
    beta_deg: float
    sweep: SweepSpec | None = None
    montecarlo: MonteCarloSpec | None = None
    feasibility: FeasibilitySpec | None = None

    def setup(self) -> SetupGeometry:
        return SetupGeometry(
            ImpactEvent(self.bs1.t_s, self.bs1.x_m, self.bs1.v_mps),
            ImpactEvent(self.bs2.t_s, self.bs2.x_m, self.bs2.v_mps),
            self.markings[0],
            self.markings[1],
        )

    def settings(self) -> AnalyzerSettings:
        return AnalyzerSettings.from_degrees(self.alpha_deg, self.beta_deg)

    def feasibility_or_default(self) -> FeasibilitySpec:
        """Explicit planner ranges, else the single point (|v2|, |x2 - x1|)."""
        if self.feasibility is not None:
            return self.feasibility
        V = abs(self.bs2.v_mps)
        L = abs(self.bs2.x_m - self.bs1.x_m)
        return FeasibilitySpec(RangeSpec(V, V, 1), RangeSpec(L, L, 1))


class _Reader:
    """Collects path-tagged errors while walking a parsed JSON document."""

    def __init__(self) -> None:
        self.errors: list[str] = []

    def fail(self, path: str, msg: str) -> None:
        self.errors.append(f"{path}: {msg}")

    def obj(self, value: Any, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict | None:
        if not isinstance(value, dict):
            self.fail(path, f"expected an object, got {type(value).__name__}")
            return None
        for key in value:
            if key not in required and key not in optional:
                self.fail(f"{path}.{key}", "unknown key")
        for key in required:
            if key not in value:
                self.fail(f"{path}.{key}", "missing required field")
        return value

    def number(self, d: dict, key: str, path: str, *, lo: float | None = None, hi: float | None = None,
               strict_hi: bool = False) -> float:
        if key not in d:
            return math.nan
        value = d[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"{path}.{key}", f"expected a number, got {value!r}")
            return math.nan
        value = float(value)
        if not math.isfinite(value):
            self.fail(f"{path}.{key}", "must be finite")
        elif lo is not None and value < lo:
            self.fail(f"{path}.{key}", f"{value!r} below lower bound {lo!r}")
        elif hi is not None and (value >= hi if strict_hi else value > hi):
            op = "<" if strict_hi else "<="
            self.fail(f"{path}.{key}", f"{value!r} out of range (must be {op} {hi!r})")
        return value

    def integer(self, d: dict, key: str, path: str, *, lo: int, hi: int | None = None) -> int:
        if key not in d:
            return 0
        value = d[key]
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"{path}.{key}", f"expected an integer, got {value!r}")
            return 0
        if value < lo or (hi is not None and value > hi):
            self.fail(f"{path}.{key}", f"{value!r} outside [{lo}, {hi if hi is not None else 'inf'}]")
        return value

    def weight(self, d: dict, key: str, path: str) -> complex:
        if key not in d:
            return 0j
        value = d[key]
        if isinstance(value, list) and len(value) == 2:
            parts = [self.number({f"{key}[{i}]": v}, f"{key}[{i}]", path) for i, v in enumerate(value)]
            return complex(parts[0], parts[1])
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return complex(self.number(d, key, path))
        self.fail(f"{path}.{key}", "expected a number or [re, im]")
        return 0j


def _event(r: _Reader, value: Any, path: str) -> EventSpec:
    d = r.obj(value, path, ("t_s", "x_m", "v_mps")) or {}
    v = r.number(d, "v_mps", path)
    if math.isfinite(v) and abs(v) >= C:
        r.fail(f"{path}.v_mps", f"superluminal velocity {v!r} m/s (bound: |v| < {C} m/s)")
    return EventSpec(r.number(d, "t_s", path), r.number(d, "x_m", path), v)


def _range(r: _Reader, value: Any, path: str, hi: float | None = None) -> RangeSpec:
    d = r.obj(value, path, ("start", "stop", "steps")) or {}
    spec = RangeSpec(
        r.number(d, "start", path, lo=0.0, hi=hi, strict_hi=True),
        r.number(d, "stop", path, lo=0.0, hi=hi, strict_hi=True),
        r.integer(d, "steps", path, lo=1),
    )
    if spec.stop < spec.start:
        r.fail(path, f"inverted range: stop {spec.stop!r} < start {spec.start!r}")
    if spec.steps == 1 and spec.start != spec.stop:
        r.fail(path, "a single-step range needs start == stop")
    return spec


def config_from_dict(doc: Any) -> ExperimentConfig:
    r = _Reader()
    top = r.obj(
        doc, "$",
        ("schema", "geometry", "markings", "state", "angles"),
        ("sweep", "montecarlo", "feasibility"),
    )
    if top is None:
        raise ConfigError("invalid config", r.errors)
    if "schema" in top and top["schema"] != SCHEMA:
        r.fail("$.schema", f"unsupported schema {top['schema']!r}; expected {SCHEMA!r}")

    geo = r.obj(top.get("geometry", {}), "$.geometry", ("bs1", "bs2")) or {}
    bs1 = _event(r, geo.get("bs1", {}), "$.geometry.bs1") if "bs1" in geo else None
    bs2 = _event(r, geo.get("bs2", {}), "$.geometry.bs2") if "bs2" in geo else None

    markings: tuple[MarkingMode, MarkingMode] = (MarkingMode.U, MarkingMode.U)
    if "markings" in top:
        m = top["markings"]
        if isinstance(m, list) and len(m) == 2 and all(x in ("u", "d") for x in m):
            markings = (MarkingMode(m[0]), MarkingMode(m[1]))
        else:
            r.fail("$.markings", f"expected two of 'u'/'d', got {m!r}")

    state = StateSpec("bell")
    if "state" in top:
        s = top["state"]
        if s == "bell":
            pass
        elif isinstance(s, dict):
            d = r.obj(s, "$.state", ("w_hh", "w_vv")) or {}
            state = StateSpec("two_class", r.weight(d, "w_hh", "$.state"), r.weight(d, "w_vv", "$.state"))
            if state.w_hh == 0 and state.w_vv == 0:
                r.fail("$.state", "weights must not both be zero")
        else:
            r.fail("$.state", f"expected 'bell' or a weights object, got {s!r}")

    ang = r.obj(top.get("angles", {}), "$.angles", ("alpha_deg", "beta_deg")) if "angles" in top else {}
    ang = ang or {}
    alpha = r.number(ang, "alpha_deg", "$.angles")
    beta = r.number(ang, "beta_deg", "$.angles")

    sweep = None
    if "sweep" in top:
        d = r.obj(top["sweep"], "$.sweep", ("axis", "start_deg", "stop_deg", "steps")) or {}
        axis = d.get("axis")
        if "axis" in d and axis not in SWEEP_AXES:
            r.fail("$.sweep.axis", f"expected one of {list(SWEEP_AXES)}, got {axis!r}")
        sweep = SweepSpec(
            str(axis),
            r.number(d, "start_deg", "$.sweep"),
            r.number(d, "stop_deg", "$.sweep"),
            r.integer(d, "steps", "$.sweep", lo=1),
        )

    mc = None
    if "montecarlo" in top:
        d = r.obj(top["montecarlo"], "$.montecarlo", ("N", "seed")) or {}
        mc = MonteCarloSpec(
            r.integer(d, "N", "$.montecarlo", lo=1),
            r.integer(d, "seed", "$.montecarlo", lo=0, hi=(1 << 64) - 1),
        )

    feas = None
    if "feasibility" in top:
        d = r.obj(top["feasibility"], "$.feasibility", ("V_mps", "L_m"), ("safety_margin",)) or {}
        feas = FeasibilitySpec(
            _range(r, d.get("V_mps", {}), "$.feasibility.V_mps", hi=float(C)) if "V_mps" in d else None,
            _range(r, d.get("L_m", {}), "$.feasibility.L_m") if "L_m" in d else None,
            r.number(d, "safety_margin", "$.feasibility", lo=0.0, hi=1.0, strict_hi=True)
            if "safety_margin" in d else 0.1,
        )

    if r.errors:
        raise ConfigError("invalid config: " + "; ".join(r.errors), r.errors)
    return ExperimentConfig(bs1, bs2, markings, state, alpha, beta, sweep, mc, feas)


def parse_config(text: str) -> ExperimentConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}", [f"$: malformed JSON: {exc}"]) from None
    return config_from_dict(doc)


def _weight_json(w: complex) -> float | list[float]:
    return w.real if w.imag == 0 else [w.real, w.imag]


def config_to_dict(cfg: ExperimentConfig) -> dict:
    def event(e: EventSpec) -> dict:
        return {"t_s": e.t_s, "x_m": e.x_m, "v_mps": e.v_mps}

    def rng(s: RangeSpec) -> dict:
        return {"start": s.start, "stop": s.stop, "steps": s.steps}

    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "geometry": {"bs1": event(cfg.bs1), "bs2": event(cfg.bs2)},
        "markings": [m.value for m in cfg.markings],
        "state": "bell" if cfg.state.kind == "bell"
        else {"w_hh": _weight_json(cfg.state.w_hh), "w_vv": _weight_json(cfg.state.w_vv)},
        "angles": {"alpha_deg": cfg.alpha_deg, "beta_deg": cfg.beta_deg},
    }
    if cfg.sweep is not None:
        s = cfg.sweep
        doc["sweep"] = {"axis": s.axis, "start_deg": s.start_deg, "stop_deg": s.stop_deg, "steps": s.steps}
    if cfg.montecarlo is not None:
        doc["montecarlo"] = {"N": cfg.montecarlo.N, "seed": cfg.montecarlo.seed}
    if cfg.feasibility is not None:
        f = cfg.feasibility
        doc["feasibility"] = {"V_mps": rng(f.V_mps), "L_m": rng(f.L_m), "safety_margin": f.safety_margin}
    return doc


def serialize_config(cfg: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2)
