"""Command-line front end: simulate, ensemble, covariance.

Config files are flat ``key = value`` lines under bracketed section
headers; blank lines and lines starting with ``#`` are ignored, and
unknown sections or keys are rejected with their line number.  Example::

    [model]
    L = 3.141592653589793
    m = 1.0
    n_a = 1
    n_b = 2

    [run]
    z1 = 1.0
    t1 = 0.0
    z2 = 2.0
    t2 = 0.0
    epsilon = 0.01
    steps = 500
    scheme = midpoint

    [boost]
    velocity = 0.3
    epsilons = 0.02 0.01 0.005
    total_proper_time = 2.0

    [ensemble]
    count = 100
    weighting = uniform
    seed = 1

Exit codes: 0 success, 2 config error, 3 node abort, 4 degenerate flow or
sampling failure, 5 boundary abort, 6 frame-comparison failure.  Aborted
runs still write their partial trajectory before exiting nonzero.  All
files are written atomically (temp file plus rename) and contain no
timestamps, so reruns with the same config and seed are byte-identical.
"""

from __future__ import annotations

import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from xml.etree import ElementTree as ET

from .errors import (
    BoundaryError,
    ComparisonFailure,
    DegenerateFlowError,
    FlowError,
    LightlikeVelocityError,
    NodeProximityError,
    NoTimelikeFlowError,
    SamplingError,
)
from .minkowski import Rapidity, rapidity_from_velocity
from .wavefield import ConfigPoint, WaveModel, boosted, box_mode, entangled_pair
from .integrator import (
    SCHEMES,
    Trajectory,
    integrate,
    sample_hyperplane,
)
from .covariance import compare_frames, convergence_study

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NODE = 3
EXIT_DEGENERATE = 4
EXIT_BOUNDARY = 5
EXIT_COMPARISON = 6

_TERMINATION_EXIT = {
    "completed": EXIT_OK,
    "node_abort": EXIT_NODE,
    "degenerate_abort": EXIT_DEGENERATE,
    "boundary_abort": EXIT_BOUNDARY,
}

CSV_HEADER = "sigma,z1,t1,z2,t2,v1,v2,lambda1,lambda2"


class ConfigError(Exception):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class EnsembleSpec:
    count: int
    weighting: str
    seed: int


@dataclass(frozen=True)
class RunConfig:
    L: float
    m: float
    n_a: int
    n_b: int
    q0: ConfigPoint
    epsilon: float
    n_steps: int
    scheme: str
    out_dir: Path
    model_boost: Rapidity | None = None
    boost: Rapidity | None = None
    epsilons: tuple[float, ...] | None = None
    total_proper_time: float | None = None
    ensemble: EnsembleSpec | None = None
    echo: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class PlotSpec:
    """World-line plot layout: one panel per listed particle, z running
    horizontally and t vertically, sigma-index labels every ``label_stride``
    records."""

    particles: tuple[int, ...] = (1, 2)
    label_stride: int = 10
    width: int = 880
    height: int = 460


_SECTION_KEYS = {
    "model": {"L", "m", "n_a", "n_b", "boost_velocity", "boost_alpha"},
    "run": {"z1", "t1", "z2", "t2", "epsilon", "steps", "scheme"},
    "boost": {"velocity", "alpha", "epsilons", "total_proper_time"},
    "ensemble": {"count", "weighting", "seed"},
}
_REQUIRED = {
    "model": {"L", "m", "n_a", "n_b"},
    "run": {"z1", "t1", "z2", "t2", "epsilon", "steps"},
}

RawConfig = dict[str, dict[str, tuple[str, int]]]


def _parse_lines(text: str, origin: str) -> RawConfig:
    sections: RawConfig = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTION_KEYS:
                raise ConfigError(f"{origin}:{lineno}: unknown section [{name}]")
            if name in sections:
                raise ConfigError(f"{origin}:{lineno}: duplicate section [{name}]")
            sections[name] = {}
            current = name
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {line!r}")
        if current is None:
            raise ConfigError(f"{origin}:{lineno}: key outside any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SECTION_KEYS[current]:
            raise ConfigError(f"{origin}:{lineno}: unknown key {current}.{key}")
        if key in sections[current]:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {current}.{key}")
        sections[current][key] = (value, lineno)
    for section, needed in _REQUIRED.items():
        if section not in sections:
            raise ConfigError(f"{origin}: missing required section [{section}]")
        missing = needed - set(sections[section])
        if missing:
            raise ConfigError(
                f"{origin}: section [{section}] missing keys: {', '.join(sorted(missing))}"
            )
    return sections


def _take_float(raw: RawConfig, section: str, key: str) -> float | None:
    if section not in raw or key not in raw[section]:
        return None
    value, lineno = raw[section][key]
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{section}.{key} (line {lineno}): not a number: {value!r}") from None


def _take_int(raw: RawConfig, section: str, key: str) -> int | None:
    if section not in raw or key not in raw[section]:
        return None
    value, lineno = raw[section][key]
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{section}.{key} (line {lineno}): not an integer: {value!r}") from None


def _take_str(raw: RawConfig, section: str, key: str) -> str | None:
    if section not in raw or key not in raw[section]:
        return None
    return raw[section][key][0]


def _take_float_list(raw: RawConfig, section: str, key: str) -> tuple[float, ...] | None:
    if section not in raw or key not in raw[section]:
        return None
    value, lineno = raw[section][key]
    try:
        items = tuple(float(part) for part in value.split())
    except ValueError:
        raise ConfigError(
            f"{section}.{key} (line {lineno}): not a space-separated number list: {value!r}"
        ) from None
    if not items:
        raise ConfigError(f"{section}.{key} (line {lineno}): empty list")
    return items


def _line_of(raw: RawConfig, section: str, key: str) -> int:
    return raw[section][key][1]


def _rapidity_from(raw: RawConfig, section: str, vel_key: str, alpha_key: str) -> Rapidity | None:
    velocity = _take_float(raw, section, vel_key)
    alpha = _take_float(raw, section, alpha_key)
    if velocity is not None and alpha is not None:
        raise ConfigError(f"{section}: give exactly one of {vel_key} or {alpha_key}")
    if velocity is not None:
        if not abs(velocity) < 1.0:
            raise ConfigError(
                f"{section}.{vel_key} (line {_line_of(raw, section, vel_key)}): "
                f"|velocity| must be < 1, got {velocity!r}"
            )
        return rapidity_from_velocity(velocity)
    if alpha is not None:
        return Rapidity(alpha)
    return None


def load_config(
    path: Path,
    out_dir: Path,
    scheme_override: str | None = None,
    seed_override: int | None = None,
) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    raw = _parse_lines(text, str(path))

    L = _take_float(raw, "model", "L")
    m = _take_float(raw, "model", "m")
    n_a = _take_int(raw, "model", "n_a")
    n_b = _take_int(raw, "model", "n_b")
    if not L > 0.0:
        raise ConfigError(f"model.L (line {_line_of(raw, 'model', 'L')}): must be > 0")
    if not m >= 0.0:
        raise ConfigError(f"model.m (line {_line_of(raw, 'model', 'm')}): must be >= 0")
    for key, n in (("n_a", n_a), ("n_b", n_b)):
        if n < 1:
            raise ConfigError(f"model.{key} (line {_line_of(raw, 'model', key)}): must be >= 1")
    model_boost = _rapidity_from(raw, "model", "boost_velocity", "boost_alpha")

    q0 = ConfigPoint(
        z1=_take_float(raw, "run", "z1"),
        t1=_take_float(raw, "run", "t1"),
        z2=_take_float(raw, "run", "z2"),
        t2=_take_float(raw, "run", "t2"),
    )
    epsilon = _take_float(raw, "run", "epsilon")
    n_steps = _take_int(raw, "run", "steps")
    scheme = _take_str(raw, "run", "scheme") or "midpoint"
    if scheme_override is not None:
        scheme = scheme_override
    if not epsilon > 0.0:
        raise ConfigError(f"run.epsilon (line {_line_of(raw, 'run', 'epsilon')}): must be > 0")
    if n_steps < 1:
        raise ConfigError(f"run.steps (line {_line_of(raw, 'run', 'steps')}): must be >= 1")
    if scheme not in SCHEMES:
        raise ConfigError(f"run.scheme: must be one of {', '.join(SCHEMES)}, got {scheme!r}")

    boost_rapidity = None
    epsilons = None
    total_proper_time = None
    if "boost" in raw:
        boost_rapidity = _rapidity_from(raw, "boost", "velocity", "alpha")
        if boost_rapidity is None:
            raise ConfigError("boost: needs velocity or alpha")
        epsilons = _take_float_list(raw, "boost", "epsilons")
        total_proper_time = _take_float(raw, "boost", "total_proper_time")
        if epsilons is not None:
            if total_proper_time is None:
                raise ConfigError("boost.total_proper_time: required alongside boost.epsilons")
            if len(epsilons) < 3:
                raise ConfigError(
                    f"boost.epsilons (line {_line_of(raw, 'boost', 'epsilons')}): "
                    "need at least 3 values"
                )
            if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
                raise ConfigError(
                    f"boost.epsilons (line {_line_of(raw, 'boost', 'epsilons')}): "
                    "must be strictly decreasing"
                )

    ensemble = None
    if "ensemble" in raw:
        count = _take_int(raw, "ensemble", "count")
        weighting = _take_str(raw, "ensemble", "weighting") or "uniform"
        seed = _take_int(raw, "ensemble", "seed")
        if count is None or count < 1:
            raise ConfigError("ensemble.count: must be a positive integer")
        if weighting not in ("uniform", "eigenvalue"):
            raise ConfigError(
                f"ensemble.weighting: must be uniform or eigenvalue, got {weighting!r}"
            )
        if seed is None:
            seed = 0
        if seed_override is not None:
            seed = seed_override
        if seed < 0:
            raise ConfigError("ensemble.seed: must be nonnegative")
        ensemble = EnsembleSpec(count=count, weighting=weighting, seed=seed)

    echo = []
    for section in ("model", "run", "boost", "ensemble"):
        if section in raw:
            for key in sorted(raw[section]):
                echo.append(f"{section}.{key} = {raw[section][key][0]}")
    if scheme_override is not None:
        echo.append(f"override.scheme = {scheme_override}")
    if seed_override is not None:
        echo.append(f"override.seed = {seed_override}")

    return RunConfig(
        L=L,
        m=m,
        n_a=n_a,
        n_b=n_b,
        q0=q0,
        epsilon=epsilon,
        n_steps=n_steps,
        scheme=scheme,
        out_dir=Path(out_dir),
        model_boost=model_boost,
        boost=boost_rapidity,
        epsilons=epsilons,
        total_proper_time=total_proper_time,
        ensemble=ensemble,
        echo=tuple(echo),
    )


def build_model(cfg: RunConfig) -> WaveModel:
    model: WaveModel = entangled_pair(
        box_mode(cfg.n_a, cfg.L, cfg.m), box_mode(cfg.n_b, cfg.L, cfg.m)
    )
    if cfg.model_boost is not None:
        model = boosted(model, cfg.model_boost)
    return model


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _echo_lines(cfg: RunConfig) -> list[str]:
    return [f"# {line}" for line in cfg.echo]


def trajectory_csv(traj: Trajectory, cfg: RunConfig) -> str:
    lines = _echo_lines(cfg)
    lines.append(f"# termination = {traj.termination}")
    lines.append(CSV_HEADER)
    for r in traj.records:
        lines.append(
            ",".join(
                _fmt(x)
                for x in (
                    r.sigma, r.q.z1, r.q.t1, r.q.z2, r.q.t2,
                    r.v1, r.v2, r.lambda1, r.lambda2,
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_svg(traj: Trajectory, spec: PlotSpec | None = None) -> str:
    """Standalone SVG with one world-line panel per particle.

    Position runs horizontally, coordinate time vertically; every
    ``label_stride``-th record carries its integer sigma index on both
    world lines.  A single-record trajectory is drawn as labeled points
    with no polyline.
    """
    spec = spec or PlotSpec()
    if spec.label_stride < 1:
        raise ValueError(f"label_stride must be >= 1, got {spec.label_stride!r}")
    if not traj.records:
        raise ValueError("cannot plot an empty trajectory")
    margin = 54.0
    n_panels = len(spec.particles)
    panel_w = (spec.width - margin * (n_panels + 1)) / n_panels
    panel_h = spec.height - 2 * margin
    root = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": str(spec.width),
            "height": str(spec.height),
            "viewBox": f"0 0 {spec.width} {spec.height}",
        },
    )
    ET.SubElement(root, "rect", {
        "x": "0", "y": "0", "width": str(spec.width), "height": str(spec.height),
        "fill": "white",
    })
    for panel, particle in enumerate(spec.particles):
        ts, zs = zip(*(r.q.particle(particle) for r in traj.records))
        x0 = margin + panel * (panel_w + margin)
        y0 = margin

        def span(values):
            lo, hi = min(values), max(values)
            pad = 0.05 * (hi - lo) if hi > lo else 0.5
            return lo - pad, hi + pad

        z_lo, z_hi = span(zs)
        t_lo, t_hi = span(ts)

        def sx(z):
            return x0 + (z - z_lo) / (z_hi - z_lo) * panel_w

        def sy(t):
            return y0 + panel_h - (t - t_lo) / (t_hi - t_lo) * panel_h

        ET.SubElement(root, "rect", {
            "x": f"{x0:.2f}", "y": f"{y0:.2f}",
            "width": f"{panel_w:.2f}", "height": f"{panel_h:.2f}",
            "fill": "none", "stroke": "#333333", "stroke-width": "1",
        })
        title = ET.SubElement(root, "text", {
            "x": f"{x0 + panel_w / 2:.2f}", "y": f"{y0 - 12:.2f}",
            "text-anchor": "middle", "font-size": "14", "fill": "#333333",
        })
        title.text = f"particle {particle}"
        x_label = ET.SubElement(root, "text", {
            "x": f"{x0 + panel_w / 2:.2f}", "y": f"{y0 + panel_h + 32:.2f}",
            "text-anchor": "middle", "font-size": "12", "fill": "#333333",
        })
        x_label.text = "z"
        y_label = ET.SubElement(root, "text", {
            "x": f"{x0 - 28:.2f}", "y": f"{y0 + panel_h / 2:.2f}",
            "text-anchor": "middle", "font-size": "12", "fill": "#333333",
        })
        y_label.text = "t"
        if len(traj.records) > 1:
            pts = " ".join(f"{sx(z):.3f},{sy(t):.3f}" for z, t in zip(zs, ts))
            ET.SubElement(root, "polyline", {
                "points": pts, "fill": "none",
                "stroke": "#1f5fa8", "stroke-width": "1.5",
            })
        for j in range(0, len(traj.records), spec.label_stride):
            ET.SubElement(root, "circle", {
                "cx": f"{sx(zs[j]):.3f}", "cy": f"{sy(ts[j]):.3f}",
                "r": "2.2", "fill": "#b03030",
            })
            label = ET.SubElement(root, "text", {
                "x": f"{sx(zs[j]) + 5:.3f}", "y": f"{sy(ts[j]) - 4:.3f}",
                "font-size": "10", "fill": "#b03030",
            })
            label.text = str(j)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def ensemble_summary_csv(
    cfg: RunConfig, members: list[tuple[ConfigPoint, Trajectory]]
) -> str:
    lines = _echo_lines(cfg)
    lines.append(
        "member,z1_0,t1_0,z2_0,t2_0,termination,sigma_final,z1_f,t1_f,z2_f,t2_f"
    )
    for k, (q0, traj) in enumerate(members):
        last = traj.records[-1]
        lines.append(
            ",".join(
                [str(k)]
                + [_fmt(x) for x in (q0.z1, q0.t1, q0.z2, q0.t2)]
                + [traj.termination]
                + [_fmt(x) for x in (last.sigma, last.q.z1, last.q.t1, last.q.z2, last.q.t2)]
            )
        )
    return "\n".join(lines) + "\n"


def comparison_csv(comp, cfg: RunConfig) -> str:
    lines = _echo_lines(cfg)
    lines.append(f"# alpha = {_fmt(comp.alpha.alpha)}")
    lines.append(f"# max_deviation = {_fmt(comp.max_deviation)}")
    lines.append("step,sigma,dev1,dev2,deviation")
    for j, ((d1, d2), d) in enumerate(
        zip(comp.per_particle_deviation, comp.per_step_deviation)
    ):
        lines.append(
            f"{j},{_fmt(j * comp.epsilon)},{_fmt(d1)},{_fmt(d2)},{_fmt(d)}"
        )
    return "\n".join(lines) + "\n"


def convergence_csv(report, cfg: RunConfig) -> str:
    lines = _echo_lines(cfg)
    lines.append("epsilon,max_deviation")
    for e, d in zip(report.epsilons, report.deviations):
        lines.append(f"{_fmt(e)},{_fmt(d)}")
    if report.fitted_order is None:
        lines.append("# fitted_order = n/a (deviations below rounding floor)")
    else:
        lines.append(f"# fitted_order = {_fmt(report.fitted_order)}")
    return "\n".join(lines) + "\n"


def _exit_for_error(err: Exception) -> int:
    if isinstance(err, ConfigError):
        return EXIT_CONFIG
    if isinstance(err, NodeProximityError):
        return EXIT_NODE
    if isinstance(err, BoundaryError):
        return EXIT_BOUNDARY
    if isinstance(err, ComparisonFailure):
        return EXIT_COMPARISON
    if isinstance(
        err, (DegenerateFlowError, NoTimelikeFlowError, LightlikeVelocityError, SamplingError)
    ):
        return EXIT_DEGENERATE
    raise err


def cmd_simulate(cfg: RunConfig) -> int:
    model = build_model(cfg)
    traj = integrate(model, cfg.q0, cfg.epsilon, cfg.n_steps, cfg.scheme)
    _atomic_write(cfg.out_dir / "trajectory.csv", trajectory_csv(traj, cfg))
    _atomic_write(cfg.out_dir / "trajectory.svg", emit_svg(traj))
    if not traj.completed:
        print(f"simulate: terminated early: {traj.termination}", file=sys.stderr)
    return _TERMINATION_EXIT[traj.termination]


def cmd_ensemble(cfg: RunConfig) -> int:
    if cfg.ensemble is None:
        raise ConfigError("ensemble command needs an [ensemble] section")
    model = build_model(cfg)
    points = sample_hyperplane(
        model, cfg.ensemble.count, cfg.ensemble.weighting, cfg.ensemble.seed
    )
    members: list[tuple[ConfigPoint, Trajectory]] = []
    exit_code = EXIT_OK
    for k, q0 in enumerate(points):
        traj = integrate(model, q0, cfg.epsilon, cfg.n_steps, cfg.scheme)
        members.append((q0, traj))
        _atomic_write(cfg.out_dir / f"member_{k:03d}.csv", trajectory_csv(traj, cfg))
        if exit_code == EXIT_OK and not traj.completed:
            exit_code = _TERMINATION_EXIT[traj.termination]
            print(
                f"ensemble: member {k} terminated early: {traj.termination}",
                file=sys.stderr,
            )
    _atomic_write(cfg.out_dir / "summary.csv", ensemble_summary_csv(cfg, members))
    return exit_code


def cmd_covariance(cfg: RunConfig) -> int:
    if cfg.boost is None:
        raise ConfigError("covariance command needs a [boost] section")
    model = build_model(cfg)
    comp = compare_frames(model, cfg.q0, cfg.boost, cfg.epsilon, cfg.n_steps, cfg.scheme)
    _atomic_write(cfg.out_dir / "comparison.csv", comparison_csv(comp, cfg))
    if cfg.epsilons is not None:
        report = convergence_study(
            model, cfg.q0, cfg.boost, cfg.epsilons, cfg.total_proper_time, cfg.scheme
        )
        _atomic_write(cfg.out_dir / "convergence.csv", convergence_csv(report, cfg))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        prog="properflow",
        description="Equal-proper-time flow trajectories for entangled two-particle states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (
        ("simulate", "integrate one trajectory and write CSV + SVG"),
        ("ensemble", "integrate an ensemble from sampled hyperplane points"),
        ("covariance", "compare trajectories across boosted frames"),
    ):
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--config", required=True, type=Path, help="run configuration file")
        cmd.add_argument("--out", required=True, type=Path, help="output directory")
        cmd.add_argument("--scheme", choices=SCHEMES, help="override run.scheme")
        cmd.add_argument("--seed", type=int, help="override ensemble.seed")
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "ensemble": cmd_ensemble,
        "covariance": cmd_covariance,
    }
    try:
        cfg = load_config(
            args.config, args.out, scheme_override=args.scheme, seed_override=args.seed
        )
        return handlers[args.command](cfg)
    except (ConfigError, FlowError, ComparisonFailure, SamplingError) as err:
        print(f"{args.command}: {err}", file=sys.stderr)
        return _exit_for_error(err)


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_entry()
