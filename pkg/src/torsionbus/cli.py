"""Batch front-end: config parsing, study dispatch, CSV/JSON output.

Config grammar (documented here and in the README): a line-oriented
key-value format with dotted section headers,

    # comment
    study = dark
    [couplings]
    gamma_m = 0.0002
    [schedules.g]
    kind = gaussian

Values are parsed as int, float, bool or bare strings; lists are
comma-separated.  Unknown keys are rejected by name, malformed numbers are
reported with their line number.  Every study writes one or more CSV files
(lines of comma-separated values under a single '#'-prefixed header line)
plus a ``<run>.meta.json`` sidecar holding the fully resolved parameter
set.  All computations are deterministic: identical configs produce
byte-identical CSVs.

Exit codes: 0 success, 1 configuration error, 2 integration failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bdg_lattice, protocols
from .bdg_lattice import ConfigError, LatticeConfig, NotTopologicalError, paper_lattice_config
from .hilbert import SpaceLayout
from .lindblad import IntegrationError, TrajectoryResult
from .params import PAPER_N_TH, CantileverParams, CouplingParams, paper_cantilever, paper_couplings
from .protocols import PulseSchedule, paper_dark_schedules

STUDIES = ("lattice", "rabi", "direct", "dark")

_COUPLING_KEYS = ("g0", "lambda_e", "Gamma1", "Gamma2", "gamma_m", "gamma_s")
_DEVICE_KEYS = ("torsional_spring_constant", "moment_of_inertia", "temperature")
_SEGMENT_KEYS = ("n_sites", "mu", "b_parallel", "B_transverse", "theta", "delta", "phi")
_LATTICE_KEYS = ("hopping_t", "spin_orbit_alpha", "lattice_spacing_a", "effective_mass_ratio")
_SCHEDULE_KEYS = ("kind", "amplitude", "center", "width")
_RUN_KEYS = ("study", "output_dir", "horizon", "n_th", "samples", "fock_dim", "theta_points", "dissipation", "source_re", "source_im")
_SWEEP_KEYS = ("parameter", "values")


@dataclass
class RunConfig:
    """Fully resolved description of one batch run."""

    study: str
    couplings: CouplingParams = field(default_factory=paper_couplings)
    device: CantileverParams = field(default_factory=paper_cantilever)
    lattice: LatticeConfig = field(default_factory=paper_lattice_config)
    schedule_g: PulseSchedule | None = None
    schedule_lambda: PulseSchedule | None = None
    sweep: tuple[str, tuple[float, ...]] | None = None
    output_dir: Path = Path(".")
    horizon: float = 10.0
    n_th: float = PAPER_N_TH
    samples: int = 400
    fock_dim: int = 10
    theta_points: int = 64
    dissipation: bool = True
    source_state: tuple[complex, complex] = (0.0, 1.0)


def _parse_scalar(raw: str, lineno: int):
    raw = raw.strip()
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    if any(c.isdigit() for c in raw) and all(c in "0123456789eE+-._," for c in raw):
        raise ConfigError(f"malformed numeric value {raw!r} on line {lineno}")
    return raw


def parse_config(text: str) -> RunConfig:
    """Parse the structured-text configuration into a validated RunConfig."""
    sections: dict[str, dict[str, tuple]] = {"": {}}
    current = ""
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
            sections.setdefault(current, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value' on line {lineno}: {stripped!r}")
        key, _, raw = stripped.partition("=")
        sections[current][key.strip()] = (raw, lineno)
    return _config_from_sections(sections)


def _take(section: dict, allowed: tuple[str, ...], name: str) -> dict:
    out = {}
    for key, (raw, lineno) in section.items():
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in section [{name}] (line {lineno})")
        out[key] = _parse_scalar(raw, lineno)
    return out


def _config_from_sections(sections: dict) -> RunConfig:
    top = _take(sections.pop("", {}), _RUN_KEYS, "")
    study = top.pop("study", None)
    if study is None:
        raise ConfigError("missing required key 'study'")
    if study not in STUDIES:
        raise ConfigError(f"unknown study {study!r}; expected one of {STUDIES}")

    cfg = RunConfig(study=study)
    if "output_dir" in top:
        cfg.output_dir = Path(str(top.pop("output_dir")))
    if "source_re" in top or "source_im" in top:
        # excited-state amplitude c1 of the source c0|0> + c1|1>, with c0 fixed
        # real non-negative by normalization
        c1 = complex(float(top.pop("source_re", 0.0)), float(top.pop("source_im", 0.0)))
        if abs(c1) > 1.0:
            raise ConfigError("source amplitude must satisfy |c1| <= 1")
        c0 = math.sqrt(max(0.0, 1.0 - abs(c1) ** 2))
        cfg.source_state = (complex(c0), c1)
    for key, value in top.items():
        setattr(cfg, key, value)

    if "couplings" in sections:
        kw = _take(sections.pop("couplings"), _COUPLING_KEYS, "couplings")
        cfg.couplings = dataclasses.replace(cfg.couplings, **kw)
    if "device" in sections:
        kw = _take(sections.pop("device"), _DEVICE_KEYS, "device")
        cfg.device = dataclasses.replace(cfg.device, **kw)
    if "lattice" in sections:
        kw = _take(sections.pop("lattice"), _LATTICE_KEYS, "lattice")
        cfg.lattice = dataclasses.replace(cfg.lattice, **kw)
    for pos, name in enumerate(("left", "middle", "right")):
        section = f"lattice.{name}"
        if section in sections:
            kw = _take(sections.pop(section), _SEGMENT_KEYS, section)
            segments = list(cfg.lattice.segments)
            segments[pos] = dataclasses.replace(segments[pos], **kw)
            cfg.lattice = dataclasses.replace(cfg.lattice, segments=tuple(segments))
    for attr, name in (("schedule_g", "schedules.g"), ("schedule_lambda", "schedules.lambda_e")):
        if name in sections:
            kw = _take(sections.pop(name), _SCHEDULE_KEYS, name)
            setattr(cfg, attr, PulseSchedule(**kw))
    if "sweep" in sections:
        kw = _take(sections.pop("sweep"), _SWEEP_KEYS, "sweep")
        if "parameter" not in kw or "values" not in kw:
            raise ConfigError("sweep section needs 'parameter' and 'values'")
        values = tuple(float(v) for v in str(kw["values"]).split(","))
        cfg.sweep = (str(kw["parameter"]), values)
    if sections:
        raise ConfigError(f"unknown section [{next(iter(sections))}]")
    return cfg


_SCALAR_OVERRIDES = ("horizon", "n_th", "samples", "fock_dim", "theta_points", "dissipation")


def apply_override(cfg: RunConfig, dotted: str, raw: str) -> None:
    """Apply a ``--override section.key=value`` style assignment."""
    value = _parse_scalar(raw, 0)
    parts = dotted.split(".")
    if len(parts) == 1:
        if parts[0] not in _SCALAR_OVERRIDES:
            raise ConfigError(f"unknown override target {dotted!r}")
        setattr(cfg, parts[0], value)
        return
    head, *rest = parts
    if head == "couplings" and len(rest) == 1:
        if rest[0] not in _COUPLING_KEYS:
            raise ConfigError(f"unknown coupling field {rest[0]!r}")
        cfg.couplings = dataclasses.replace(cfg.couplings, **{rest[0]: value})
    elif head == "device" and len(rest) == 1:
        if rest[0] not in _DEVICE_KEYS:
            raise ConfigError(f"unknown device field {rest[0]!r}")
        cfg.device = dataclasses.replace(cfg.device, **{rest[0]: value})
    elif head == "lattice" and len(rest) == 2 and rest[0] in ("left", "middle", "right"):
        pos = ("left", "middle", "right").index(rest[0])
        if rest[1] not in _SEGMENT_KEYS:
            raise ConfigError(f"unknown segment field {rest[1]!r}")
        segments = list(cfg.lattice.segments)
        segments[pos] = dataclasses.replace(segments[pos], **{rest[1]: value})
        cfg.lattice = dataclasses.replace(cfg.lattice, segments=tuple(segments))
    elif head == "lattice" and len(rest) == 1:
        if rest[0] not in _LATTICE_KEYS:
            raise ConfigError(f"unknown lattice field {rest[0]!r}")
        cfg.lattice = dataclasses.replace(cfg.lattice, **{rest[0]: value})
    else:
        raise ConfigError(f"unknown override target {dotted!r}")


# ---------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".12g")
    return str(x)


def write_csv(path: Path, columns: list[str], rows) -> None:
    lines = ["# " + ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_meta(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _trajectory_rows(traj: TrajectoryResult):
    fid = traj.fidelity
    for i, t in enumerate(traj.times):
        yield (
            t,
            traj.occupations["occ_tp"][i],
            traj.occupations["occ_tor"][i],
            traj.occupations["occ_nv"][i],
            float("nan") if fid is None else fid[i],
        )


_TRAJ_COLUMNS = ["t_inv_g0", "occ_TP", "occ_Tor", "occ_NV", "fidelity"]


# ---------------------------------------------------------------------------
# studies


def _meta_common(cfg: RunConfig) -> dict:
    return {
        "study": cfg.study,
        "couplings": cfg.couplings,
        "device": cfg.device,
        "n_th": cfg.n_th,
        "fock_dim": cfg.fock_dim,
        "samples": cfg.samples,
        "dissipation": cfg.dissipation,
        "integrator": {"method": "DOP853", "rtol": 1e-8, "atol": 1e-10},
    }


def _run_lattice(cfg: RunConfig, tag: str) -> None:
    thetas = np.linspace(0.0, 4.0 * math.pi, cfg.theta_points)
    e_m, j_m = bdg_lattice.theta_sweep(cfg.lattice, thetas)
    write_csv(
        cfg.output_dir / f"{tag}_theta_sweep.csv",
        ["theta_rad", "E_m_meV", "J_m"],
        zip(thetas, e_m, j_m),
    )
    spectrum = bdg_lattice.diagonalize(bdg_lattice.build_hamiltonian(cfg.lattice))
    write_csv(
        cfg.output_dir / f"{tag}_spectrum.csv",
        ["index", "energy_meV"],
        enumerate(spectrum.eigenvalues),
    )
    meta = {
        "study": "lattice",
        "lattice": cfg.lattice,
        "theta_points": cfg.theta_points,
        "segment_topological": [
            bdg_lattice.is_topological(s) if s.delta**2 > s.b_parallel**2 else None
            for s in cfg.lattice.segments
        ],
    }
    write_meta(cfg.output_dir / f"{tag}.meta.json", meta)


def _run_rabi(cfg: RunConfig, tag: str) -> None:
    traj = protocols.run_rabi(
        cfg.couplings,
        horizon=cfg.horizon,
        n_th=cfg.n_th,
        samples=cfg.samples,
        layout=SpaceLayout(cfg.fock_dim),
        dissipation=cfg.dissipation,
    )
    write_csv(cfg.output_dir / f"{tag}_trajectory.csv", _TRAJ_COLUMNS, _trajectory_rows(traj))
    meta = _meta_common(cfg)
    meta["horizon"] = cfg.horizon
    meta["integrator_stats"] = traj.integrator_stats
    write_meta(cfg.output_dir / f"{tag}.meta.json", meta)


def _run_transfer(cfg: RunConfig, tag: str) -> None:
    layout = SpaceLayout(cfg.fock_dim)
    if cfg.study == "direct":
        report = protocols.run_direct_transfer(
            cfg.couplings,
            source_state=cfg.source_state,
            n_th=cfg.n_th,
            samples=cfg.samples,
            layout=layout,
            dissipation=cfg.dissipation,
        )
    else:
        report = protocols.run_dark_state_transfer(
            cfg.couplings,
            source_state=cfg.source_state,
            schedule_g=cfg.schedule_g,
            schedule_lambda=cfg.schedule_lambda,
            n_th=cfg.n_th,
            samples=cfg.samples,
            layout=layout,
            dissipation=cfg.dissipation,
        )
    write_csv(
        cfg.output_dir / f"{tag}_trajectory.csv", _TRAJ_COLUMNS, _trajectory_rows(report.trajectory)
    )
    summary = {
        "final_fidelity": report.final_fidelity,
        "peak_fidelity": report.peak_fidelity,
        "peak_phonon": report.peak_phonon_occupation,
        "margin": report.adiabaticity_margin,
    }
    write_meta(cfg.output_dir / f"{tag}_summary.json", summary)
    meta = _meta_common(cfg)
    meta["source_state"] = cfg.source_state
    if cfg.study == "dark":
        meta["schedules"] = {
            "g": cfg.schedule_g or paper_dark_schedules()[0],
            "lambda_e": cfg.schedule_lambda or paper_dark_schedules()[1],
        }
    meta["integrator_stats"] = report.trajectory.integrator_stats
    meta.update(summary)
    write_meta(cfg.output_dir / f"{tag}.meta.json", meta)


_DISPATCH = {"lattice": _run_lattice, "rabi": _run_rabi, "direct": _run_transfer, "dark": _run_transfer}


def _single_run(cfg: RunConfig, tag: str) -> None:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    _DISPATCH[cfg.study](cfg, tag)


def run(cfg: RunConfig, parallel: int = 1) -> int:
    """Execute a run (or sweep) and write its outputs; returns an exit code."""
    try:
        if cfg.sweep is None:
            _single_run(cfg, cfg.study)
        else:
            parameter, values = cfg.sweep
            jobs = []
            for i, v in enumerate(values):
                sub = dataclasses.replace(cfg, sweep=None)
                apply_override(sub, parameter, _fmt(v))
                jobs.append((sub, f"{cfg.study}_{i:03d}"))
            if parallel > 1:
                with ThreadPoolExecutor(max_workers=parallel) as pool:
                    list(pool.map(lambda job: _single_run(*job), jobs))
            else:
                for job in jobs:
                    _single_run(*job)
    except (ConfigError, NotTopologicalError) as exc:
        _write_error(cfg, exc)
        return 1
    except (IntegrationError,) as exc:
        _write_error(cfg, exc)
        return 2
    return 0


def _write_error(cfg: RunConfig, exc: Exception) -> None:
    record = {"error": type(exc).__name__, "message": str(exc), "study": cfg.study}
    sys.stderr.write(json.dumps(record) + "\n")
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        write_meta(cfg.output_dir / f"{cfg.study}.error.json", record)
    except OSError:
        pass


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="torsionbus",
        description="Hybrid Majorana/torsion/NV device studies (batch runs, CSV output)",
    )
    parser.add_argument("--config", type=Path, help="configuration file path")
    parser.add_argument("--study", choices=STUDIES, help="study type (overrides the config)")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--parallel", type=int, default=1, help="concurrent sweep workers")
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="dotted-path parameter override, e.g. couplings.gamma_m=0.002",
    )
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            cfg = parse_config(args.config.read_text())
        elif args.study is not None:
            cfg = RunConfig(study=args.study)
        else:
            parser.error("either --config or --study is required")
        if args.study is not None:
            cfg.study = args.study
        if args.out is not None:
            cfg.output_dir = args.out
        for item in args.override:
            if "=" not in item:
                raise ConfigError(f"override must look like key=value, got {item!r}")
            dotted, _, raw = item.partition("=")
            apply_override(cfg, dotted.strip(), raw.strip())
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": "ConfigError", "message": str(exc)}) + "\n")
        return 1
    return run(cfg, parallel=max(1, args.parallel))


if __name__ == "__main__":
    raise SystemExit(main())
