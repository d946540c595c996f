"""Batch front end: JSON configs in, key-value reports and CSV profiles out.

Commands: validate, surface-info, renvol, wedge, anomaly.  Reports are
deterministic (no timestamps); validation failures exit nonzero with a
machine-readable JSON error object on stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import anomaly as anomaly_mod
from .mobius import Mobius
from .pleated import (
    PleatedCoreData,
    PleatLeaf,
    pleated_profile,
    renormalized_volume_pleated,
    wedge_volume_closed,
    wedge_volume_quadrature,
)
from .renvol import (
    Convention,
    PROVENANCE_QUADRATURE,
    expansion_fit,
    profile_closed,
    profile_quadrature,
    renormalized_volume_fuchsian,
    truncated_volume_closed,
)
from .schottky import (
    Circle,
    Pairing,
    SchottkyData,
    SchottkyError,
    generator_from_axis,
    validate,
)
from .surface import SurfaceTopologyError, surface_invariants

DISCREPANCY_THRESHOLD = 1e-4


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    mode: str
    name: str = "group"
    circles: list = field(default_factory=list)
    pairings: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    core_volume: float = 0.0
    leaves: list = field(default_factory=list)
    boundary_area: float | None = None
    boundary_genus: int | None = None
    mesh: dict | None = None
    field_spec: dict | None = None
    eps_min: float = 1e-3
    eps_max: float = 0.3
    eps_count: int = 12
    quadrature_tol: float = 1e-9
    convention: str = "both"


def _need(raw: dict, key: str, where: str):
    if key not in raw:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return raw[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_config(raw: dict, where: str = "config") -> Config:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: top level must be an object")
    mode = _need(raw, "mode", where)
    if mode not in ("fuchsian_group", "pleated_core", "anomaly_check"):
        raise ConfigError(f"{where}.mode: unknown mode {mode!r}")
    cfg = Config(mode=mode)
    cfg.name = str(raw.get("name", cfg.name))
    cfg.convention = str(raw.get("convention", cfg.convention))
    if cfg.convention not in ("paper", "derived", "both"):
        raise ConfigError(f"{where}.convention: must be paper, derived or both")
    grid = raw.get("epsilon_grid", {})
    if not isinstance(grid, dict):
        raise ConfigError(f"{where}.epsilon_grid: expected an object")
    cfg.eps_min = _number(grid.get("min", cfg.eps_min), f"{where}.epsilon_grid.min")
    cfg.eps_max = _number(grid.get("max", cfg.eps_max), f"{where}.epsilon_grid.max")
    cfg.eps_count = int(grid.get("count", cfg.eps_count))
    if not (0.0 < cfg.eps_min < cfg.eps_max < 1.0):
        raise ConfigError(f"{where}.epsilon_grid: need 0 < min < max < 1")
    if cfg.eps_count < 8:
        raise ConfigError(f"{where}.epsilon_grid.count: need at least 8 for fitting")
    cfg.quadrature_tol = _number(
        raw.get("quadrature_tol", cfg.quadrature_tol), f"{where}.quadrature_tol"
    )

    if mode == "fuchsian_group":
        circles = raw.get("circles", [])
        generators = raw.get("generators", [])
        if generators and circles:
            raise ConfigError(
                f"{where}: give either circles+pairings or axis generators, not both"
            )
        if generators:
            for k, gen in enumerate(generators):
                spot = f"{where}.generators[{k}]"
                cfg.generators.append(
                    {
                        "p": _number(_need(gen, "p", spot), f"{spot}.p"),
                        "q": _number(_need(gen, "q", spot), f"{spot}.q"),
                        "length": _number(_need(gen, "length", spot), f"{spot}.length"),
                    }
                )
        else:
            for k, circ in enumerate(circles):
                spot = f"{where}.circles[{k}]"
                cfg.circles.append(
                    {
                        "center": _number(_need(circ, "center", spot), f"{spot}.center"),
                        "radius": _number(_need(circ, "radius", spot), f"{spot}.radius"),
                    }
                )
            for k, pair in enumerate(raw.get("pairings", [])):
                spot = f"{where}.pairings[{k}]"
                matrix = _need(pair, "matrix", spot)
                if not isinstance(matrix, list) or len(matrix) != 4:
                    raise ConfigError(f"{spot}.matrix: expected [a, b, c, d] row-major")
                cfg.pairings.append(
                    {
                        "source": int(_need(pair, "source", spot)),
                        "target": int(_need(pair, "target", spot)),
                        "matrix": [_number(x, f"{spot}.matrix") for x in matrix],
                    }
                )
            if not cfg.circles or not cfg.pairings:
                raise ConfigError(f"{where}: fuchsian_group needs circles and pairings")
    elif mode == "pleated_core":
        cfg.core_volume = _number(
            raw.get("core_volume", 0.0), f"{where}.core_volume"
        )
        for k, leaf in enumerate(raw.get("leaves", [])):
            spot = f"{where}.leaves[{k}]"
            cfg.leaves.append(
                {
                    "length": _number(_need(leaf, "length", spot), f"{spot}.length"),
                    "theta": _number(_need(leaf, "theta", spot), f"{spot}.theta"),
                }
            )
        if "boundary_area" in raw:
            cfg.boundary_area = _number(raw["boundary_area"], f"{where}.boundary_area")
        if "boundary_genus" in raw:
            cfg.boundary_genus = int(raw["boundary_genus"])
    else:
        mesh = _need(raw, "mesh", where)
        spot = f"{where}.mesh"
        cfg.mesh = {
            "tag": str(_need(mesh, "tag", spot)),
            "t_extent": _number(_need(mesh, "t_extent", spot), f"{spot}.t_extent"),
            "circumference": _number(
                _need(mesh, "circumference", spot), f"{spot}.circumference"
            ),
            "n_t": int(_need(mesh, "n_t", spot)),
            "n_theta": int(_need(mesh, "n_theta", spot)),
        }
        fld = raw.get("field", {"kind": "zero"})
        if not isinstance(fld, dict) or "kind" not in fld:
            raise ConfigError(f"{where}.field: expected an object with a 'kind'")
        cfg.field_spec = dict(fld)
    return cfg


def config_to_dict(cfg: Config) -> dict:
    out: dict = {
        "mode": cfg.mode,
        "name": cfg.name,
        "convention": cfg.convention,
        "epsilon_grid": {"min": cfg.eps_min, "max": cfg.eps_max, "count": cfg.eps_count},
        "quadrature_tol": cfg.quadrature_tol,
    }
    if cfg.mode == "fuchsian_group":
        if cfg.generators:
            out["generators"] = cfg.generators
        else:
            out["circles"] = cfg.circles
            out["pairings"] = cfg.pairings
    elif cfg.mode == "pleated_core":
        out["core_volume"] = cfg.core_volume
        out["leaves"] = cfg.leaves
        if cfg.boundary_area is not None:
            out["boundary_area"] = cfg.boundary_area
        if cfg.boundary_genus is not None:
            out["boundary_genus"] = cfg.boundary_genus
    else:
        out["mesh"] = cfg.mesh
        out["field"] = cfg.field_spec
    return out


def build_group(cfg: Config):
    if cfg.mode != "fuchsian_group":
        raise ConfigError(f"command needs mode fuchsian_group, config has {cfg.mode}")
    if cfg.generators:
        circles = []
        pairings = []
        for gen in cfg.generators:
            mob, src, tgt = generator_from_axis(gen["p"], gen["q"], gen["length"])
            pairings.append(Pairing(len(circles), len(circles) + 1, mob))
            circles.extend((src, tgt))
        data = SchottkyData(tuple(circles), tuple(pairings), fuchsian=True)
    else:
        circles = tuple(Circle(c["center"], c["radius"]) for c in cfg.circles)
        pairings = tuple(
            Pairing(p["source"], p["target"], Mobius(*p["matrix"]))
            for p in cfg.pairings
        )
        data = SchottkyData(circles, pairings, fuchsian=True)
    return validate(data)


def _conventions(cfg: Config, override: str | None):
    chosen = override or cfg.convention
    if chosen == "both":
        return [Convention.PAPER, Convention.DERIVED]
    return [Convention(chosen)]


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


class Report:
    def __init__(self):
        self.lines: list[tuple[str, str]] = []
        self._warnings = 0

    def add(self, key: str, value):
        self.lines.append((key, _fmt(value)))

    def warn(self, message: str):
        self._warnings += 1
        self.lines.append((f"warning.{self._warnings}", message))

    def text(self) -> str:
        return "\n".join(f"{k} = {v}" for k, v in self.lines) + "\n"


def write_profile_csv(profile, path: Path) -> None:
    lines = ["epsilon,lambda,vol,provenance"]
    for eps, vol in profile.samples:
        lines.append(f"{eps!r},{-math.log(eps)!r},{vol!r},{profile.provenance}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _emit(report: Report, args, csv_profiles=()) -> None:
    sys.stdout.write(report.text())
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.txt").write_text(report.text(), encoding="utf-8")
        if args.csv:
            for profile in csv_profiles:
                write_profile_csv(profile, out_dir / f"profile_{profile.provenance}.csv")


def _surface_summary(report: Report, group, surface):
    report.add("group.genus_handlebody", surface.handlebody_genus)
    report.add("group.circles", len(group.circles))
    report.add("surface.ends", surface.ends)
    report.add("surface.genus", surface.genus)
    report.add("surface.end_lengths", list(surface.end_lengths))
    report.add("surface.total_end_length", surface.total_end_length)
    report.add("surface.core_area", surface.core_area)


def cmd_validate(cfg: Config, args) -> int:
    group = build_group(cfg)
    report = Report()
    report.add("command", "validate")
    report.add("name", cfg.name)
    report.add("valid", "true")
    report.add("group.genus_handlebody", group.genus)
    report.add("group.circles", len(group.circles))
    _emit(report, args)
    return 0


def cmd_surface_info(cfg: Config, args) -> int:
    group = build_group(cfg)
    surface = surface_invariants(group)
    report = Report()
    report.add("command", "surface-info")
    report.add("name", cfg.name)
    _surface_summary(report, group, surface)
    _emit(report, args)
    return 0


def cmd_renvol(cfg: Config, args) -> int:
    group = build_group(cfg)
    surface = surface_invariants(group)
    conventions = _conventions(cfg, args.convention)
    eps_grid = np.geomspace(cfg.eps_max, cfg.eps_min, cfg.eps_count)

    report = Report()
    report.add("command", "renvol")
    report.add("name", cfg.name)
    _surface_summary(report, group, surface)
    report.add("eps.min", cfg.eps_min)
    report.add("eps.max", cfg.eps_max)
    report.add("eps.count", cfg.eps_count)
    report.add("quadrature.tol", cfg.quadrature_tol)

    profiles = []
    closed_v = {}
    for conv in conventions:
        v = renormalized_volume_fuchsian(surface, conv)
        closed_v[conv] = v
        report.add(f"closed.{conv.value}.V", v)
        report.add(
            f"closed.{conv.value}.vol_at_eps_max",
            truncated_volume_closed(surface, cfg.eps_max, conv),
        )
        profiles.append(profile_closed(surface, eps_grid, conv, group_id=cfg.name))

    quad_profile = profile_quadrature(
        surface, eps_grid, tol=cfg.quadrature_tol, group_id=cfg.name
    )
    profiles.append(quad_profile)
    fit = expansion_fit(quad_profile)
    report.add("fit.provenance", PROVENANCE_QUADRATURE)
    report.add("fit.c_eps_m2", fit.c_m2)
    report.add("fit.c_log", fit.c_log)
    report.add("fit.V", fit.v)
    report.add("fit.c_eps_2", fit.c_2)
    report.add("fit.residual", fit.residual)
    report.add("fit.condition", fit.condition)

    for conv, v in closed_v.items():
        gap = abs(fit.v - v)
        report.add(f"discrepancy.fit_vs_{conv.value}.V", gap)
        if gap > DISCREPANCY_THRESHOLD:
            report.warn(
                f"fitted V differs from the {conv.value} closed form by {gap!r}; "
                "the quadrature oracle does not support that convention's constants"
            )
    if Convention.PAPER in closed_v and Convention.DERIVED in closed_v:
        gap = abs(closed_v[Convention.PAPER] - closed_v[Convention.DERIVED])
        report.add("discrepancy.paper_vs_derived.V", gap)
        if gap > DISCREPANCY_THRESHOLD:
            report.warn(
                "printed end-cylinder coefficient is twice the induced-metric value; "
                "paper and derived conventions disagree on V"
            )
    _emit(report, args, csv_profiles=profiles)
    return 0


def _build_core(cfg: Config) -> PleatedCoreData:
    if cfg.mode != "pleated_core":
        raise ConfigError(f"command needs mode pleated_core, config has {cfg.mode}")
    leaves = tuple(PleatLeaf(leaf["length"], leaf["theta"]) for leaf in cfg.leaves)
    if cfg.boundary_area is not None:
        return PleatedCoreData(cfg.core_volume, leaves, cfg.boundary_area)
    if cfg.boundary_genus is not None:
        return PleatedCoreData.from_genus(cfg.core_volume, leaves, cfg.boundary_genus)
    return PleatedCoreData(cfg.core_volume, leaves, boundary_area=0.0)


def cmd_wedge(cfg: Config, args) -> int:
    core = _build_core(cfg)
    conventions = _conventions(cfg, args.convention)
    eps_grid = np.geomspace(cfg.eps_max, cfg.eps_min, cfg.eps_count)
    eps_check = float(math.sqrt(cfg.eps_min * cfg.eps_max))

    report = Report()
    report.add("command", "wedge")
    report.add("name", cfg.name)
    report.add("core.volume", core.core_volume)
    report.add("core.boundary_area", core.boundary_area)
    report.add("core.leaves", len(core.leaves))
    for i, leaf in enumerate(core.leaves):
        report.add(f"leaf.{i}.length", leaf.length)
        report.add(f"leaf.{i}.theta", leaf.theta)

    profiles = []
    values = {}
    for conv in conventions:
        v = renormalized_volume_pleated(core, conv)
        values[conv] = v
        report.add(f"closed.{conv.value}.V", v)
        profiles.append(pleated_profile(core, eps_grid, conv, group_id=cfg.name))
    for i, leaf in enumerate(core.leaves):
        derived = wedge_volume_closed(leaf, eps_check, Convention.DERIVED)
        quad = wedge_volume_quadrature(leaf, eps_check, tol=max(cfg.quadrature_tol, 1e-8))
        report.add(f"leaf.{i}.wedge_derived_at_eps_check", derived)
        report.add(f"leaf.{i}.wedge_quadrature_at_eps_check", quad)
        gap = abs(quad - derived) / max(abs(derived), 1e-300)
        if derived != 0.0 and gap > 1e-5:
            report.warn(
                f"leaf {i}: wedge quadrature disagrees with the derived closed "
                f"form (relative gap {gap!r})"
            )
    if Convention.PAPER in values and Convention.DERIVED in values:
        gap = abs(values[Convention.PAPER] - values[Convention.DERIVED])
        report.add("discrepancy.paper_vs_derived.V", gap)
        if gap > DISCREPANCY_THRESHOLD:
            report.warn(
                "printed wedge profile uses a first power of eps where the squared "
                "form is implied; paper and derived conventions disagree on V"
            )
    report.add("eps.check", eps_check)
    _emit(report, args, csv_profiles=profiles)
    return 0


def _build_field(mesh: anomaly_mod.SurfaceMesh, field_cfg: dict):
    kind = field_cfg.get("kind", "zero")
    if kind == "zero":
        return mesh.zeros()
    if kind == "constant":
        return mesh.constant(_number(field_cfg.get("value", 0.0), "field.value"))
    if kind == "theta_mode":
        k = int(field_cfg.get("k", 1))
        amp = _number(field_cfg.get("amplitude", 1.0), "field.amplitude")
        omega = 2.0 * math.pi * k / mesh.circumference
        return mesh.from_function(lambda t, th: amp * np.sin(omega * th))
    if kind == "log_sech_t":
        return mesh.from_function(lambda t, th: -np.log(np.cosh(t)))
    if kind == "csv":
        path = field_cfg.get("path")
        if not path:
            raise ConfigError("field.csv needs a 'path'")
        file_mesh, u = anomaly_mod.field_from_csv(path)
        if (file_mesh.tag, file_mesh.n_t, file_mesh.n_theta) != (
            mesh.tag, mesh.n_t, mesh.n_theta,
        ):
            raise ConfigError(f"field file {path} does not match the configured mesh")
        return u
    raise ConfigError(f"unknown field kind {kind!r}")


def cmd_anomaly(cfg: Config, args) -> int:
    if cfg.mode != "anomaly_check":
        raise ConfigError(f"command needs mode anomaly_check, config has {cfg.mode}")
    mesh = anomaly_mod.SurfaceMesh(
        tag=cfg.mesh["tag"],
        t_extent=cfg.mesh["t_extent"],
        circumference=cfg.mesh["circumference"],
        n_t=cfg.mesh["n_t"],
        n_theta=cfg.mesh["n_theta"],
    )
    u = _build_field(mesh, cfg.field_spec)

    report = Report()
    report.add("command", "anomaly")
    report.add("name", cfg.name)
    report.add("mesh.tag", mesh.tag)
    report.add("mesh.n_t", mesh.n_t)
    report.add("mesh.n_theta", mesh.n_theta)
    report.add("mesh.area", mesh.area)
    report.add("mesh.analytic_area", mesh.analytic_area)
    report.add("field.kind", cfg.field_spec.get("kind", "zero"))
    report.add("gradient_energy", anomaly_mod.gradient_energy(mesh, u))
    report.add("conformal_change_term", anomaly_mod.conformal_change_term(mesh, u))
    if mesh.tag == anomaly_mod.TAG_HYPERBOLIC:
        normalized = anomaly_mod.normalize_area(mesh, u)
        report.add("jensen_energy_normalized", anomaly_mod.jensen_energy(mesh, normalized))
        variant = anomaly_mod.VARIANT_HYPERBOLIC
    else:
        variant = anomaly_mod.VARIANT_FLAT
    residual = anomaly_mod.liouville_residual(mesh, u, variant)
    report.add("liouville.variant", variant)
    report.add("liouville.residual_max", float(np.abs(residual).max()))
    rms = math.sqrt(anomaly_mod.integrate(mesh, residual ** 2) / mesh.area)
    report.add("liouville.residual_rms", rms)
    defect = abs(
        anomaly_mod.integrate(mesh, u * anomaly_mod.laplacian(mesh, u))
        + anomaly_mod.gradient_energy(mesh, u)
        - anomaly_mod.boundary_flux(mesh, u, u)
    )
    report.add("integration_by_parts_defect", defect)
    _emit(report, args)
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "surface-info": cmd_surface_info,
    "renvol": cmd_renvol,
    "wedge": cmd_wedge,
    "anomaly": cmd_anomaly,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corevol",
        description="Renormalized volumes of Schottky hyperbolic 3-manifolds "
        "normalized by the distance to the convex core.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="path to a JSON config")
    parser.add_argument("--out", help="directory for report.txt and CSV output")
    parser.add_argument("--csv", action="store_true", help="write profile CSVs to --out")
    parser.add_argument("--convention", choices=["paper", "derived", "both"],
                        help="override the config convention")
    parser.add_argument("--quad-tol", type=float, help="override quadrature tolerance")
    parser.add_argument("--eps-min", type=float, help="override epsilon grid minimum")
    parser.add_argument("--eps-max", type=float, help="override epsilon grid maximum")
    parser.add_argument("--eps-count", type=int, help="override epsilon grid size")
    parser.add_argument("--echo-config", action="store_true",
                        help="print the normalized config as JSON and exit")
    return parser


def _error_object(kind: str, message: str, **extra) -> str:
    payload = {"error": {"kind": kind, "message": message, **extra}}
    return json.dumps(payload, sort_keys=True)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except FileNotFoundError:
        print(_error_object("io", f"config file not found: {args.config}"))
        return 1
    except json.JSONDecodeError as exc:
        print(_error_object("parse", f"{args.config}:{exc.lineno}:{exc.colno}: {exc.msg}"))
        return 1
    try:
        if args.csv and not args.out:
            raise ConfigError("--csv needs --out to know where to write")
        cfg = parse_config(raw)
        if args.quad_tol is not None:
            cfg.quadrature_tol = args.quad_tol
        if args.eps_min is not None:
            cfg.eps_min = args.eps_min
        if args.eps_max is not None:
            cfg.eps_max = args.eps_max
        if args.eps_count is not None:
            cfg.eps_count = args.eps_count
        if not (0.0 < cfg.eps_min < cfg.eps_max < 1.0):
            raise ConfigError("epsilon grid must satisfy 0 < min < max < 1")
        if args.echo_config:
            print(json.dumps(config_to_dict(cfg), sort_keys=True, indent=2))
            return 0
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(_error_object("config", str(exc)))
        return 1
    except SchottkyError as exc:
        print(_error_object(exc.kind, str(exc), **exc.detail))
        return 2
    except SurfaceTopologyError as exc:
        print(_error_object("surface_topology", str(exc)))
        return 2
    except ValueError as exc:
        print(_error_object("value", str(exc)))
        return 2


if __name__ == "__main__":
    sys.exit(main())
