"""``rnl-lab`` command line front end.

    rnl-lab <classify|predict|sweep|feasibility|simulate> --config PATH
            [--out PATH] [--format json|csv]

Data goes to ``--out`` (default stdout), diagnostics to stderr.  Exit status
is 0 on success, 1 when the config or inputs fail validation and 2 for any
other runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable

from .config import ConfigError, ExperimentConfig, parse_config
from .errors import DomainError, RNLError, UnsupportedConfigurationError, ValidationError
from .model import correlation
from .montecarlo import discrimination_power, estimate, sample_pairs
from .quantum import AnalyzerSettings
from .rnl import AB, BB, predict
from .timing import classify_experiment, feasibility_sweep


SWEEP_HEADER = ("alpha_deg", "beta_deg", "E_rnl", "E_qm", "E_bb", "E_ab")
FEASIBILITY_HEADER = ("V_mps", "L_m", "dt_max_s")
CLASSIFY_HEADER = ("particle", "class", "gap_s", "frame_velocity_mps")

DEFAULT_FORMAT = {
    "classify": "json",
    "predict": "json",
    "sweep": "csv",
    "feasibility": "csv",
    "simulate": "json",
}
CSV_COMMANDS = {"classify", "sweep", "feasibility"}


def _diag(level: str, msg: str) -> None:
    print(f"rnl-lab: {level}: {msg}", file=sys.stderr)


def fmt(x: float) -> str:
    """Shortest round-trip decimal form of a double."""
    return repr(float(x) + 0.0)


def fmt_sci(x: float) -> str:
    """Scientific notation, 17 significant digits."""
    return f"{float(x):.16e}"


def _csv(header: tuple[str, ...], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc: object) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def run_classify(cfg: ExperimentConfig, fmt_name: str) -> str:
    setup = cfg.setup()
    result = classify_experiment(setup)
    particles = [
        {"particle": 1, "class": result.label.class1.value, "gap_s": result.gap1,
         "frame_velocity_mps": setup.event1.v},
        {"particle": 2, "class": result.label.class2.value, "gap_s": result.gap2,
         "frame_velocity_mps": setup.event2.v},
    ]
    if fmt_name == "csv":
        return _csv(CLASSIFY_HEADER, [
            [str(p["particle"]), p["class"], fmt(p["gap_s"]), fmt(p["frame_velocity_mps"])]
            for p in particles
        ])
    return _json({
        "label": str(result.label),
        "markings": [m.value for m in setup.markings],
        "particles": particles,
    })


def run_predict(cfg: ExperimentConfig, fmt_name: str) -> str:
    report = predict(cfg.setup(), cfg.state.build(), cfg.settings())
    for w in report.warnings:
        _diag("warning", w)
    doc = {"alpha_deg": cfg.alpha_deg, "beta_deg": cfg.beta_deg, **report.to_dict()}
    return _json(doc)


def sweep_rows(cfg: ExperimentConfig) -> list[tuple[float, float, float, float, float, float]]:
    if cfg.sweep is None:
        raise ConfigError("sweep needs a 'sweep' section", ["$.sweep: missing required field"])
    setup, state = cfg.setup(), cfg.state.build()
    rows = []
    for a_deg, b_deg in cfg.sweep.points(cfg.alpha_deg, cfg.beta_deg):
        report = predict(setup, state, AnalyzerSettings.from_degrees(a_deg, b_deg))
        corr = report.joints.correlations()
        rows.append((a_deg, b_deg, report.rnl_E, report.qm_E, corr[BB], corr[AB]))
    return rows


def run_sweep(cfg: ExperimentConfig, fmt_name: str) -> str:
    rows = sweep_rows(cfg)
    if fmt_name == "csv":
        return _csv(SWEEP_HEADER, [[fmt(v) for v in row] for row in rows])
    return _json([dict(zip(SWEEP_HEADER, row)) for row in rows])


def run_feasibility(cfg: ExperimentConfig, fmt_name: str) -> str:
    spec = cfg.feasibility_or_default()
    rows = feasibility_sweep(
        (spec.V_mps.start, spec.V_mps.stop),
        (spec.L_m.start, spec.L_m.stop),
        spec.V_mps.steps,
        spec.L_m.steps,
        safety_margin=spec.safety_margin,
    )
    if fmt_name == "csv":
        return _csv(FEASIBILITY_HEADER, [[fmt_sci(r.V), fmt_sci(r.L), fmt_sci(r.dt_max)] for r in rows])
    return _json({
        "safety_margin": spec.safety_margin,
        "rows": [{"V_mps": r.V, "L_m": r.L, "dt_max_s": r.dt_max, "dt_safe_s": r.dt_safe} for r in rows],
    })


def _finite_or_none(x: float) -> float | None:
    return x if x == x and abs(x) != float("inf") else None


def run_simulate(cfg: ExperimentConfig, fmt_name: str) -> str:
    if cfg.montecarlo is None:
        raise ConfigError("simulate needs a 'montecarlo' section", ["$.montecarlo: missing required field"])
    N, seed = cfg.montecarlo.N, cfg.montecarlo.seed
    report = predict(cfg.setup(), cfg.state.build(), cfg.settings())
    out = {"label": str(report.label), "N": N, "seed": seed}
    estimates = {}
    # distinct streams keep the two samples independent under one seed
    for stream, (name, joint) in enumerate((("rnl", report.rnl), ("qm", report.qm))):
        record = sample_pairs(joint, N, seed, stream=stream)
        est = estimate(record)
        estimates[name] = est
        out[name] = {
            "E_analytic": correlation(joint),
            "stream": stream,
            "record": record.to_dict(),
            "estimate": est.to_dict(),
        }
    out["discrimination_sigma"] = {
        "analytic": _finite_or_none(discrimination_power(report.rnl_E, report.qm_E, N)),
        "estimated": _finite_or_none(
            discrimination_power(estimates["rnl"].E_hat, estimates["qm"].E_hat, N)
        ),
    }
    return _json(out)


COMMANDS: dict[str, Callable[[ExperimentConfig, str], str]] = {
    "classify": run_classify,
    "predict": run_predict,
    "sweep": run_sweep,
    "feasibility": run_feasibility,
    "simulate": run_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rnl-lab",
        description="Timing-dependent two-photon correlation predictions.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path, help="experiment config (JSON)")
    p.add_argument("--out", type=Path, help="write data here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), help="output format")
    return p


def run(command: str, config_text: str, fmt_name: str | None = None) -> str:
    """Execute one subcommand on config text and return the data stream."""
    fmt_name = fmt_name or DEFAULT_FORMAT[command]
    if fmt_name == "csv" and command not in CSV_COMMANDS:
        raise ConfigError(f"{command} has no csv output", [f"--format: {command} supports json only"])
    cfg = parse_config(config_text)
    return COMMANDS[command](cfg, fmt_name)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text()
    except OSError as exc:
        _diag("error", f"cannot read config: {exc}")
        return 2
    try:
        data = run(args.command, text, args.format)
    except ValidationError as exc:
        for v in exc.violations:
            _diag("error", v)
        return 1
    except (DomainError, UnsupportedConfigurationError) as exc:
        _diag("error", str(exc))
        return 1
    except RNLError as exc:
        _diag("error", str(exc))
        return 2
    try:
        if args.out is None:
            sys.stdout.write(data)
        else:
            args.out.write_text(data)
    except OSError as exc:
        _diag("error", f"cannot write output: {exc}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
