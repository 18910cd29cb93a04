"""Command-line front end.

Every command is a thin, deterministic wrapper over the library:
identical invocations produce byte-identical output (fixed float
formatting, fixed row and key order, no timestamps). Exit codes are
0 success, 1 verification failure, 2 configuration error, 3 I/O error.

Tables honor --format csv|json; ``verify`` always emits JSON and
``export`` always emits CSV, since those are their defined shapes.
"""

from __future__ import annotations

import argparse
import cmath
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import (
    algebra_grid,
    apply_Lminus,
    apply_Lplus,
    apply_casimir,
    apply_hamiltonian,
)
from .coherent import CoherentSpec, bg_measure_density, bg_state_closed, default_coherent_grid
from .errors import ConfigError, MorsebandError
from .model import (
    PhysParams,
    QuantumNumbers,
    degeneracy_scan,
    energy,
    landau_a0,
    landau_energy,
    landau_limit_error,
)
from .moments import moments_closed, moments_quadrature, robertson_delta
from .quadrature import FD_MARGIN, GridSpec, weighted_norm
from .states import LandauParams, default_grid, landau_state_asym, landau_state_sym, wavefunction
from .verify import resolve_tolerances, run_suite, thread_budget

__all__ = ["RunConfig", "main"]

_PARAM_KEYS = ("B0", "a0", "mu", "hbar", "c", "e")
_GRID_KEYS = ("x_min", "x_max", "nx", "ny")
_LIMIT_TARGETS = (0.25, 2.25, 6.25)


@dataclass(frozen=True)
class RunConfig:
    """Resolved run inputs shared by all commands."""

    params: PhysParams
    grid: GridSpec | None
    tolerances: dict[str, float]
    output_format: str
    output_path: str | None


# ------------------------------------------------------------ formatting


def _fmt_float(v: float) -> str:
    return format(float(v), ".16e")


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def _csv_block(header: tuple[str, ...], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {_json_text(v, indent + 1)}"
            for k, v in sorted(obj.items())
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, float):
        return _fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        Path(cfg.output_path).write_text(text)


def _table_output(cfg: RunConfig, command: str, header: tuple[str, ...], rows: list[tuple]) -> None:
    if cfg.output_format == "json":
        payload = {
            "command": command,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        _emit(cfg, _json_text(payload) + "\n")
    else:
        _emit(cfg, _csv_block(header, rows))


# ---------------------------------------------------------------- config


def _parse_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    stripped = text.lstrip()
    if path.endswith(".json") or stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path!r} must hold a JSON object")
        return data
    data = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        data[key.strip()] = value.strip()
    return data


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    mapping = _parse_config_file(args.config) if args.config else {}
    unknown = set(mapping) - set(_PARAM_KEYS) - set(_GRID_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    params = PhysParams.from_mapping({k: mapping[k] for k in _PARAM_KEYS if k in mapping})
    grid = None
    grid_map = {k: mapping[k] for k in _GRID_KEYS if k in mapping}
    if grid_map:
        if set(grid_map) != set(_GRID_KEYS):
            raise ConfigError(f"a grid needs all of {_GRID_KEYS}, got {sorted(grid_map)}")
        try:
            grid = GridSpec(
                x_min=float(grid_map["x_min"]),
                x_max=float(grid_map["x_max"]),
                nx=int(grid_map["nx"]),
                ny=int(grid_map["ny"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid values: {exc}") from exc
    overrides = {}
    for item in args.tol or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            overrides[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--tol {name.strip()}: not a number: {value!r}") from exc
    return RunConfig(
        params=params,
        grid=grid,
        tolerances=resolve_tolerances(overrides),
        output_format=args.format,
        output_path=args.out,
    )


# -------------------------------------------------------------- commands


def _cmd_spectrum(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.n_max < 1:
        raise ConfigError(f"--n-max must be >= 1, got {args.n_max}")
    l_max = args.n_max - 1 if args.l_max is None else args.l_max
    multiplicity = {
        report.product: report.multiplicity for report in degeneracy_scan(args.n_max)
    }
    rows = []
    for n in range(1, args.n_max + 1):
        for l in range(min(l_max, n - 1) + 1):
            q = QuantumNumbers(l, n)
            product = (2 * n - 2 * l - 1) * (2 * n + 2 * l + 1)
            rows.append((l, n, q.N, product, energy(q, cfg.params), multiplicity[product]))
    _table_output(cfg, "spectrum", ("l", "n", "N", "product", "energy", "multiplicity"), rows)
    return 0


def _cmd_degeneracy(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.n_max < 1:
        raise ConfigError(f"--n-max must be >= 1, got {args.n_max}")
    reports = degeneracy_scan(args.n_max)
    histogram: dict[int, int] = {}
    for report in reports:
        histogram[report.multiplicity] = histogram.get(report.multiplicity, 0) + 1
    classes = [
        (
            report.product,
            report.multiplicity,
            ";".join(f"{q.l}:{q.n}" for q in report.states),
        )
        for report in reports
    ]
    if cfg.output_format == "json":
        payload = {
            "command": "degeneracy",
            "histogram": {str(k): histogram[k] for k in sorted(histogram)},
            "classes": [
                {
                    "product": report.product,
                    "multiplicity": report.multiplicity,
                    "states": [[q.l, q.n] for q in report.states],
                }
                for report in reports
            ],
        }
        _emit(cfg, _json_text(payload) + "\n")
    else:
        text = _csv_block(
            ("multiplicity", "count"), [(k, histogram[k]) for k in sorted(histogram)]
        )
        text += "\n" + _csv_block(("product", "multiplicity", "states"), classes)
        _emit(cfg, text)
    return 0


def _cmd_wavefunction(args: argparse.Namespace, cfg: RunConfig) -> int:
    q = QuantumNumbers(args.l, args.n)
    grid = cfg.grid or default_grid(cfg.params)
    s = wavefunction(q, cfg.params, grid)
    phase = cmath.exp(1j * args.n * cfg.params.kappa * s.y[0])
    radial = s.values[:, 0] * phase
    rows = [
        (float(s.x[i]), float(radial[i].real), float(abs(s.values[i, 0]) ** 2), float(s.weight[i]))
        for i in range(grid.nx)
    ]
    _table_output(cfg, "wavefunction", ("x", "radial", "density", "weight"), rows)
    return 0


def _cmd_ladder_check(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.n_max < 1:
        raise ConfigError(f"--n-max must be >= 1, got {args.n_max}")
    p = cfg.params
    grid = cfg.grid or algebra_grid(p)
    margin = 2 * FD_MARGIN

    def step_defect(s, target_state, coeff: float, raised: bool) -> float:
        stepped = apply_Lplus(s, p) if raised else apply_Lminus(s, p)
        if target_state is None:
            return weighted_norm(stepped, exclude_margin=margin) / weighted_norm(
                s, exclude_margin=margin
            )
        diff = dataclasses.replace(
            stepped, values=stepped.values - coeff * target_state.values, labels=None
        )
        return weighted_norm(diff, exclude_margin=margin) / (
            coeff * weighted_norm(target_state, exclude_margin=margin)
        )

    rows = []
    for n in range(1, args.n_max + 1):
        for l in range(n):
            q = QuantumNumbers(l, n)
            s = wavefunction(q, p, grid)
            up = wavefunction(QuantumNumbers(l, n + 1), p, grid)
            raise_defect = step_defect(s, up, math.sqrt((n + l + 1) * (n - l)), True)
            if n == l + 1:
                lower_defect = step_defect(s, None, 0.0, False)
            else:
                down = wavefunction(QuantumNumbers(l, n - 1), p, grid)
                lower_defect = step_defect(s, down, math.sqrt((n + l) * (n - l - 1)), False)
            rows.append(
                (
                    l,
                    n,
                    raise_defect,
                    lower_defect,
                    apply_casimir(s, p).residual_norm,
                    apply_hamiltonian(s, p).residual_norm,
                )
            )
    _table_output(
        cfg,
        "ladder-check",
        ("l", "n", "raise_defect", "lower_defect", "casimir_residual", "hamiltonian_residual"),
        rows,
    )
    return 0


def _cmd_coherent(args: argparse.Namespace, cfg: RunConfig) -> int:
    z = complex(args.z_re, args.z_im)
    spec = CoherentSpec(args.l, z)
    grid = cfg.grid or default_coherent_grid(cfg.params)
    s = bg_state_closed(spec, cfg.params, grid)
    state_rows = [
        (float(s.x[i]), float(abs(s.values[i, 0]) ** 2), float(s.weight[i]))
        for i in range(grid.nx)
    ]
    measure_rows = [
        (r, bg_measure_density(args.l, r)) for r in (i / 10.0 for i in range(1, 101))
    ]
    if cfg.output_format == "json":
        payload = {
            "command": "coherent",
            "state": [dict(zip(("x", "density", "weight"), row)) for row in state_rows],
            "measure": [dict(zip(("r", "measure_density"), row)) for row in measure_rows],
        }
        _emit(cfg, _json_text(payload) + "\n")
    else:
        text = _csv_block(("x", "density", "weight"), state_rows)
        text += "\n" + _csv_block(("r", "measure_density"), measure_rows)
        _emit(cfg, text)
    return 0


def _cmd_uncertainty(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.l_max < 0:
        raise ConfigError(f"--l-max must be >= 0, got {args.l_max}")
    p = cfg.params
    hbar2 = p.hbar**2
    rows = []
    for l in range(args.l_max + 1):
        for N in range(3):
            q = QuantumNumbers(l, l + 1 + N)
            closed = moments_closed(q, p).delta / hbar2
            quad = robertson_delta(moments_quadrature(q, p, cfg.grid)) / hbar2
            rows.append((l, N, closed, quad, _LIMIT_TARGETS[N]))
    _table_output(
        cfg,
        "uncertainty",
        ("l", "N", "delta_closed", "delta_quadrature", "delta_limit_target"),
        rows,
    )
    return 0


def _cmd_landau_limit(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        schedule = [int(part) for part in args.l_schedule.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"--l-schedule must be comma-separated integers: {exc}") from exc
    if not schedule:
        raise ConfigError("--l-schedule must name at least one l")
    if args.N < 0:
        raise ConfigError(f"--N must be >= 0, got {args.N}")
    p = cfg.params
    rows = []
    for l in schedule:
        a0 = landau_a0(l, p)
        p_l = dataclasses.replace(p, a0=a0)
        e_model = energy(QuantumNumbers(l, l + 1 + args.N), p_l)
        e_landau = landau_energy(args.N, p)
        rows.append(
            (
                l,
                a0,
                e_model,
                e_landau,
                landau_limit_error(args.N, l, p),
                (2.0 * args.N + 3.0) / (4.0 * l),
            )
        )
    _table_output(
        cfg,
        "landau-limit",
        ("l", "a0", "energy_model", "energy_landau", "rel_error", "predicted"),
        rows,
    )
    return 0


def _cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    report = run_suite(args.suite, tolerances=cfg.tolerances, max_workers=thread_budget())
    _emit(cfg, _json_text(report) + "\n")
    return 0 if report["passed"] else 1


def _export_state(args: argparse.Namespace, cfg: RunConfig):
    p = cfg.params
    if args.kind == "eigen":
        grid = cfg.grid or default_grid(p)
        s = wavefunction(QuantumNumbers(args.l, args.n), p, grid)
        label = f"kind=eigen l={args.l} n={args.n}"
    elif args.kind == "coherent":
        grid = cfg.grid or default_coherent_grid(p)
        s = bg_state_closed(CoherentSpec(args.l, complex(args.z_re, args.z_im)), p, grid)
        label = f"kind=coherent l={args.l} z_re={args.z_re!r} z_im={args.z_im!r}"
    else:
        r_c = LandauParams.cyclotron_radius(p)
        p_box = dataclasses.replace(p, a0=24.0 * r_c)
        if args.kind == "landau-sym":
            grid = cfg.grid or GridSpec(-12.0 * r_c, 12.0 * r_c, 1024, 256)
            s = landau_state_sym(args.n, args.l, p_box, grid)
            label = f"kind=landau-sym n={args.n} l={args.l}"
        else:
            lp = LandauParams(gauge="asymmetric", N=args.n, k_y=args.ky)
            centre = lp.guiding_centre(p)
            grid = cfg.grid or GridSpec(centre - 12.0 * r_c, centre + 12.0 * r_c, 1024, 8)
            s = landau_state_asym(lp, p_box, grid)
            label = f"kind=landau-asym N={args.n} ky={args.ky!r}"
    return s, grid, label


def _cmd_export(args: argparse.Namespace, cfg: RunConfig) -> int:
    s, grid, label = _export_state(args, cfg)
    p = cfg.params
    lines = [
        f"# morseband-{__version__}",
        f"# {label}",
        "# " + " ".join(f"{k}={_fmt_float(getattr(p, k))}" for k in _PARAM_KEYS),
        f"# grid x_min={_fmt_float(grid.x_min)} x_max={_fmt_float(grid.x_max)}"
        f" nx={grid.nx} ny={grid.ny}",
        "x,y,re_psi,im_psi,density,weight",
    ]
    for i in range(grid.nx):
        w = _fmt_float(s.weight[i])
        x = _fmt_float(s.x[i])
        for j in range(grid.ny):
            v = s.values[i, j]
            lines.append(
                f"{x},{_fmt_float(s.y[j])},{_fmt_float(v.real)},{_fmt_float(v.imag)},"
                f"{_fmt_float(abs(v) ** 2)},{w}"
            )
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


# ----------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morseband",
        description="Closed-form and numerical checks for an electron band "
        "in an exponentially decaying magnetic field.",
    )
    parser.add_argument("--version", action="version", version=f"morseband {__version__}")
    parser.add_argument("--config", metavar="PATH", help="key=value or JSON parameter file")
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="table output format (verify is always JSON, export always CSV)",
    )
    parser.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")
    parser.add_argument(
        "--tol",
        metavar="NAME=VALUE",
        action="append",
        help="override a named verification tolerance (repeatable)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("spectrum", help="levels, integer products, and degeneracies")
    cmd.add_argument("--l-max", type=int, default=None)
    cmd.add_argument("--n-max", type=int, default=6)

    cmd = sub.add_parser("degeneracy", help="multiplicity histogram and classes")
    cmd.add_argument("--n-max", type=int, default=100)

    cmd = sub.add_parser("wavefunction", help="x-profile of one eigenstate")
    cmd.add_argument("--l", type=int, default=0)
    cmd.add_argument("--n", type=int, default=1)

    cmd = sub.add_parser("ladder-check", help="ladder and commutator residual table")
    cmd.add_argument("--n-max", type=int, default=4)

    cmd = sub.add_parser("coherent", help="coherent-state density and measure profile")
    cmd.add_argument("--l", type=int, default=0)
    cmd.add_argument("--z-re", type=float, default=1.0)
    cmd.add_argument("--z-im", type=float, default=0.0)

    cmd = sub.add_parser("uncertainty", help="closed vs quadrature uncertainty table")
    cmd.add_argument("--l-max", type=int, default=4)

    cmd = sub.add_parser("landau-limit", help="flat-field limit of the level energies")
    cmd.add_argument("--N", type=int, default=0)
    cmd.add_argument("--l-schedule", default="10,100,1000,10000")

    cmd = sub.add_parser("verify", help="run a named invariant suite")
    cmd.add_argument(
        "--suite",
        choices=("specfun", "states", "algebra", "coherent", "moments", "all"),
        default="all",
    )

    cmd = sub.add_parser("export", help="full sampled state as CSV")
    cmd.add_argument(
        "--kind",
        choices=("eigen", "coherent", "landau-sym", "landau-asym"),
        default="eigen",
    )
    cmd.add_argument("--l", type=int, default=0)
    cmd.add_argument("--n", type=int, default=1, help="n for eigen/landau-sym, N for landau-asym")
    cmd.add_argument("--z-re", type=float, default=0.0)
    cmd.add_argument("--z-im", type=float, default=0.0)
    cmd.add_argument("--ky", type=float, default=0.0)
    return parser


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "degeneracy": _cmd_degeneracy,
    "wavefunction": _cmd_wavefunction,
    "ladder-check": _cmd_ladder_check,
    "coherent": _cmd_coherent,
    "uncertainty": _cmd_uncertainty,
    "landau-limit": _cmd_landau_limit,
    "verify": _cmd_verify,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_run_config(args)
        return _HANDLERS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MorsebandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
