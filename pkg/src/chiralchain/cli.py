"""Command-line front end: simulation runs, figure presets, kernel tables.

Four subcommands: ``simulate`` (one trajectory), ``figure`` (preset
parameter sets emitting every curve of a named figure), ``kernel``
(dipole-dipole kernel tables over a xi range), and ``ensemble``
(position-fluctuation statistics).

Every run writes its data as CSV with ``#``-prefixed metadata lines and
a ``manifest.json`` recording the fully resolved parameters, detector
defaults, and sha256 of each output, so any result can be reproduced
bitwise from its manifest.  Data files never embed timestamps.  With
``--stdout`` the data goes to standard output and nothing is written.

Exit codes: 0 on success, 2 for configuration and domain errors, 3 for
numerical failures (integrity cross-check, quadrature nonconvergence).
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
import time
from typing import Callable, Optional

import numpy as np

from . import __version__
from .analysis import (BURST_PROMINENCE_FRACTION, BURST_WINDOW,
                       PLATEAU_EPS_RATE, PLATEAU_MIN_DURATION, PLATEAU_WINDOW,
                       EnsembleResult, detect_bursts, run_ensemble)
from .chain import (ChainConfig, DisorderSpec, build_coupling_matrix,
                    build_positions, load_config_file)
from .dynamics import (Trajectory, log_grid, propagate, steady_state,
                       uniform_excitation, uniform_grid,
                       write_trajectory_csv, write_trajectory_json)
from .errors import (ChiralChainError, ConfigError, IntegrityError,
                     NumericsError)
from .kernels import DipoleGeometry, chiral_fg, kernel_1d_reciprocal, kernel_2d, kernel_3d

__all__ = ["main", "build_parser"]

OUTDIR_ENV = "CHIRALCHAIN_OUTDIR"
DEFAULT_SEED = 7


def _repr_float(x: float) -> str:
    return repr(float(x))


def _resolve_outdir(arg: Optional[str]) -> str:
    if arg:
        return arg
    return os.environ.get(OUTDIR_ENV, ".")


def _detector_defaults(gamma: float) -> dict:
    return {
        "plateau": {
            "eps_rate": PLATEAU_EPS_RATE * gamma,
            "min_duration": PLATEAU_MIN_DURATION / gamma,
            "window": [PLATEAU_WINDOW[0] / gamma, PLATEAU_WINDOW[1] / gamma],
        },
        "burst": {
            "prominence_fraction": BURST_PROMINENCE_FRACTION,
            "window": [BURST_WINDOW[0] / gamma, BURST_WINDOW[1] / gamma],
        },
    }


def _write_run(outdir: str, command: str, parameters: dict, gamma: float,
               writers: dict, started: float) -> None:
    """Write each output file plus a manifest with hashes and duration."""
    os.makedirs(outdir, exist_ok=True)
    outputs = []
    for name, writer in writers.items():
        path = os.path.join(outdir, name)
        buffer = io.StringIO()
        writer(buffer)
        data = buffer.getvalue().encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(data)
        outputs.append({
            "path": name,
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
        })
    manifest = {
        "tool": "chiralchain",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "detector_defaults": _detector_defaults(gamma),
        "outputs": outputs,
        "duration_seconds": time.monotonic() - started,
    }
    with open(os.path.join(outdir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _disorder_dict(disorder: DisorderSpec) -> dict:
    out = {"mode": disorder.mode}
    if disorder.mode == "single_site":
        out["site"] = disorder.site
        out["shift_fraction"] = disorder.shift_fraction
    elif disorder.mode == "ensemble":
        out["fluctuation_fraction"] = disorder.fluctuation_fraction
        out["n_realizations"] = disorder.n_realizations
        out["seed"] = disorder.seed
    return out


def _config_metadata(config: ChainConfig, disorder: DisorderSpec) -> dict:
    meta = {
        "n_atoms": config.n_atoms,
        "xi_over_pi": _repr_float(config.xi / math.pi),
        "gamma_left": _repr_float(config.gamma_left),
        "gamma_right": _repr_float(config.gamma_right),
        "disorder_mode": disorder.mode,
    }
    if disorder.mode == "single_site":
        meta["disorder_site"] = disorder.site
        meta["disorder_shift_fraction"] = _repr_float(disorder.shift_fraction)
    elif disorder.mode == "ensemble":
        meta["disorder_fluctuation_fraction"] = _repr_float(
            disorder.fluctuation_fraction)
        meta["disorder_n_realizations"] = disorder.n_realizations
        meta["disorder_seed"] = disorder.seed
    return meta


# ---------------------------------------------------------------------------
# config assembly shared by simulate and ensemble
# ---------------------------------------------------------------------------

def _merge_config(args, *, need_ensemble: bool) -> tuple:
    """Combine config file (if given) and flags; flags win field by field."""
    if args.config:
        config, disorder = load_config_file(args.config)
        n = config.n_atoms
        xi_over_pi = config.xi / math.pi
        gl, gr = config.gamma_left, config.gamma_right
    else:
        config = disorder = None
        n, xi_over_pi, gl, gr = 2, 0.0, 1.0, 1.0
    if args.n is not None:
        n = args.n
    if args.xi_over_pi is not None:
        xi_over_pi = args.xi_over_pi
    if args.gamma_l is not None:
        gl = args.gamma_l
    if args.gamma_r is not None:
        gr = args.gamma_r
    merged = ChainConfig(n_atoms=n, xi=xi_over_pi * math.pi,
                         gamma_left=gl, gamma_right=gr)

    if need_ensemble:
        fluct = args.fluct
        realizations = args.realizations
        seed = args.seed
        if disorder is not None and disorder.mode == "ensemble":
            if fluct is None:
                fluct = disorder.fluctuation_fraction
            if realizations is None:
                realizations = disorder.n_realizations
            if seed is None:
                seed = disorder.seed
        if fluct is None:
            fluct = 0.005
        if realizations is None:
            realizations = 200
        if seed is None:
            seed = DEFAULT_SEED
        return merged, DisorderSpec.ensemble(fluct, realizations, seed)

    shift_site = getattr(args, "shift_site", None)
    shift = getattr(args, "shift", None)
    if shift_site is not None or shift is not None:
        if shift_site is None or shift is None:
            raise ConfigError(
                "--shift-site and --shift must be given together")
        merged_disorder = DisorderSpec.single_site(shift_site, shift)
    elif disorder is not None and disorder.mode != "ensemble":
        merged_disorder = disorder
    else:
        merged_disorder = DisorderSpec.none()
    return merged, merged_disorder


def _simulation_grid(args) -> np.ndarray:
    if args.log_grid:
        return log_grid(horizon=args.horizon,
                        points_per_decade=args.points_per_decade)
    return uniform_grid(horizon=args.horizon, points=args.points)


def _grid_metadata(args) -> dict:
    if args.log_grid:
        return {"grid": "log", "horizon": _repr_float(args.horizon),
                "points_per_decade": args.points_per_decade}
    return {"grid": "uniform", "horizon": _repr_float(args.horizon),
            "points": args.points}


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    started = time.monotonic()
    config, disorder = _merge_config(args, need_ensemble=False)
    grid = _simulation_grid(args)
    positions = build_positions(config, disorder)
    matrix = build_coupling_matrix(positions, config.gamma_left,
                                   config.gamma_right)
    trajectory = propagate(matrix, uniform_excitation(config.n_atoms), grid,
                           cross_check=not args.no_cross_check)
    metadata = _config_metadata(config, disorder)
    metadata.update(_grid_metadata(args))
    metadata["gamma"] = _repr_float(config.gamma)

    if args.stdout:
        write_trajectory_csv(trajectory, sys.stdout, metadata)
        return 0
    writers = {"trajectory.csv":
               lambda fh: write_trajectory_csv(trajectory, fh, metadata)}
    if args.json:
        writers["trajectory.json"] = (
            lambda fh: write_trajectory_json(trajectory, fh, metadata))
    parameters = {
        "config": {
            "n_atoms": config.n_atoms,
            "xi_over_pi": config.xi / math.pi,
            "gamma_left": config.gamma_left,
            "gamma_right": config.gamma_right,
        },
        "disorder": _disorder_dict(disorder),
        "grid": _grid_metadata(args),
        "cross_check": not args.no_cross_check,
    }
    _write_run(_resolve_outdir(args.outdir), "simulate", parameters,
               config.gamma, writers, started)
    return 0


# ---------------------------------------------------------------------------
# ensemble
# ---------------------------------------------------------------------------

def _write_ensemble_csv(result: EnsembleResult, stream, metadata: dict) -> None:
    for key, value in metadata.items():
        stream.write(f"# {key} = {value}\n")
    if result.n_skipped:
        stream.write(f"# n_skipped = {result.n_skipped}\n")
    stream.write("t,mean_P_tot,std_P_tot,mean_I_tot,std_I_tot\n")
    for k in range(result.times.size):
        stream.write(",".join([
            _repr_float(result.times[k]),
            _repr_float(result.mean_total[k]),
            _repr_float(result.std_total[k]),
            _repr_float(result.mean_intensity[k]),
            _repr_float(result.std_intensity[k]),
        ]) + "\n")


def cmd_ensemble(args) -> int:
    started = time.monotonic()
    config, disorder = _merge_config(args, need_ensemble=True)
    grid = uniform_grid(horizon=args.horizon, points=args.points)
    result = run_ensemble(config, disorder, grid)
    metadata = _config_metadata(config, disorder)
    metadata["grid"] = "uniform"
    metadata["horizon"] = _repr_float(args.horizon)
    metadata["points"] = args.points
    metadata["gamma"] = _repr_float(config.gamma)

    if args.stdout:
        _write_ensemble_csv(result, sys.stdout, metadata)
        return 0

    writers = {"ensemble.csv":
               lambda fh: _write_ensemble_csv(result, fh, metadata)}
    burst_window = (BURST_WINDOW[0] / config.gamma,
                    BURST_WINDOW[1] / config.gamma)
    if grid[-1] >= burst_window[1]:
        report = detect_bursts(result).to_dict()
    else:
        report = {"skipped": "grid does not cover the default burst window",
                  "window": list(burst_window)}

    def write_report(fh):
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    writers["bursts.json"] = write_report
    parameters = {
        "config": {
            "n_atoms": config.n_atoms,
            "xi_over_pi": config.xi / math.pi,
            "gamma_left": config.gamma_left,
            "gamma_right": config.gamma_right,
        },
        "disorder": _disorder_dict(disorder),
        "grid": {"grid": "uniform", "horizon": args.horizon,
                 "points": args.points},
    }
    _write_run(_resolve_outdir(args.outdir), "ensemble", parameters,
               config.gamma, writers, started)
    return 0


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def _parse_xi_range(spec: str) -> np.ndarray:
    try:
        if ":" in spec:
            parts = [float(p) for p in spec.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, step, stop = parts
            if step <= 0.0 or stop < start:
                raise ValueError
            count = int(math.floor((stop - start) / step + 0.5)) + 1
            return start + step * np.arange(count)
        if "," in spec:
            return np.array([float(p) for p in spec.split(",")])
        return np.array([float(spec)])
    except ValueError as exc:
        raise ConfigError(
            f"bad xi range {spec!r}; use start:step:stop, a comma list, "
            "or a single value") from exc


def _kernel_rows(dim: str, xi_values: np.ndarray, alignment: float,
                 gamma_l: float, gamma_r: float):
    header: list
    rows = []
    if dim == "1":
        header = ["xi", "decay", "shift"]
        for xi in xi_values:
            kv = kernel_1d_reciprocal(float(xi))
            rows.append([xi, kv.decay_part, kv.shift_part])
    elif dim == "1chiral":
        header = ["xi", "decay", "shift", "F_re", "F_im", "G_re", "G_im"]
        for xi in xi_values:
            f, g = chiral_fg(float(xi), gamma_l, gamma_r)
            rows.append([xi, f.real, g.real, f.real, f.imag, g.real, g.imag])
    elif dim in ("2", "3"):
        header = ["xi", "decay", "shift", "shift_divergent"]
        build = kernel_2d if dim == "2" else kernel_3d
        for xi in xi_values:
            kv = build(DipoleGeometry(xi=float(xi), alignment=alignment))
            rows.append([xi, kv.decay_part, kv.shift_part,
                         int(kv.shift_divergent)])
    else:
        raise ConfigError(f"unknown kernel dimension {dim!r}")
    return header, rows


def _write_kernel_csv(stream, header, rows, metadata: dict) -> None:
    for key, value in metadata.items():
        stream.write(f"# {key} = {value}\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        cells = []
        for value in row:
            if isinstance(value, (int, np.integer)):
                cells.append(str(int(value)))
            else:
                cells.append(_repr_float(value))
        stream.write(",".join(cells) + "\n")


def cmd_kernel(args) -> int:
    started = time.monotonic()
    xi_values = _parse_xi_range(args.xi)
    header, rows = _kernel_rows(args.dim, xi_values, args.alignment,
                                args.gamma_l, args.gamma_r)
    metadata = {"dimension": args.dim}
    if args.dim in ("2", "3"):
        metadata["alignment"] = _repr_float(args.alignment)
    if args.dim == "1chiral":
        metadata["gamma_left"] = _repr_float(args.gamma_l)
        metadata["gamma_right"] = _repr_float(args.gamma_r)
    if args.stdout:
        _write_kernel_csv(sys.stdout, header, rows, metadata)
        return 0
    parameters = {"dimension": args.dim, "xi": args.xi,
                  "alignment": args.alignment,
                  "gamma_left": args.gamma_l, "gamma_right": args.gamma_r}
    _write_run(_resolve_outdir(args.outdir), "kernel", parameters, 1.0,
               {"kernel.csv":
                lambda fh: _write_kernel_csv(fh, header, rows, metadata)},
               started)
    return 0


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

GAMMA_SWEEP = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
FIGURE_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")


def _trajectory_for(n: int, xi: float, gl: float, gr: float, grid,
                    disorder: Optional[DisorderSpec] = None) -> Trajectory:
    config = ChainConfig(n_atoms=n, xi=xi, gamma_left=gl, gamma_right=gr)
    positions = build_positions(config, disorder)
    matrix = build_coupling_matrix(positions, gl, gr)
    return propagate(matrix, uniform_excitation(n), grid, cross_check=False)


def _traj_writer(n: int, xi_over_pi: float, gl: float, gr: float, grid,
                 disorder: Optional[DisorderSpec] = None) -> Callable:
    config = ChainConfig(n_atoms=n, xi=xi_over_pi * math.pi,
                         gamma_left=gl, gamma_right=gr)
    trajectory = _trajectory_for(n, xi_over_pi * math.pi, gl, gr, grid,
                                 disorder)
    metadata = _config_metadata(config, disorder or DisorderSpec.none())
    metadata["gamma"] = _repr_float(config.gamma)
    return lambda fh: write_trajectory_csv(trajectory, fh, metadata)


def _figure_fig2() -> dict:
    grid = uniform_grid(20.0, 4001)
    writers = {}
    for n in (2, 3):
        for tag, xi_over_pi in (("xi0", 0.0), ("xipi", 1.0)):
            writers[f"fig2_N{n}_{tag}.csv"] = _traj_writer(
                n, xi_over_pi, 0.0, 1.0, grid)
    return writers


def _figure_fig3() -> dict:
    writers = {}
    grid_a = uniform_grid(20.0, 4001)
    grid_b = uniform_grid(100.0, 2501)
    for n in (2, 3):
        for gl in GAMMA_SWEEP:
            tag = f"gl{gl:.1f}"
            writers[f"fig3a_N{n}_{tag}.csv"] = _traj_writer(
                n, 0.0, gl, 1.0, grid_a)
            writers[f"fig3b_N{n}_{tag}.csv"] = _traj_writer(
                n, 1.0, gl, 1.0, grid_b)

    def write_c(fh):
        fh.write("# xi_over_pi = 1.0\n")
        fh.write("# gamma_left = 1.0\n")
        fh.write("# gamma_right = 1.0\n")
        fh.write("N,P1_inf\n")
        for n in range(2, 14):
            config = ChainConfig(n_atoms=n, xi=math.pi,
                                 gamma_left=1.0, gamma_right=1.0)
            positions = build_positions(config, None)
            matrix = build_coupling_matrix(positions, 1.0, 1.0)
            result = steady_state(matrix, uniform_excitation(n))
            fh.write(f"{n},{_repr_float(result.state.populations[0])}\n")

    writers["fig3c.csv"] = write_c
    return writers


def _figure_fig4() -> dict:
    writers = {}
    grid_a = uniform_grid(40.0, 2001)
    grid_b = uniform_grid(1500.0, 37501)
    for n in (2, 3, 4, 5, 6, 7, 10, 11):
        writers[f"fig4a_N{n}.csv"] = _traj_writer(n, 1.0, 0.0, 1.0, grid_a)
        writers[f"fig4b_N{n}.csv"] = _traj_writer(n, 1.0, 0.9, 1.0, grid_b)
    return writers


def _figure_fig5() -> dict:
    writers = {}
    grid = uniform_grid(1000.0, 25001)
    for n in (4, 5):
        writers[f"fig5a_N{n}.csv"] = _traj_writer(n, 1.0, 0.9, 1.0, grid)
    config = ChainConfig(n_atoms=5, xi=math.pi, gamma_left=0.9,
                         gamma_right=1.0)
    for tag, width in (("0.5pct", 0.005), ("1pct", 0.010)):
        disorder = DisorderSpec.ensemble(width, 200, DEFAULT_SEED)
        result = run_ensemble(config, disorder, grid)
        metadata = _config_metadata(config, disorder)
        metadata["gamma"] = _repr_float(config.gamma)
        writers[f"fig5b_fluct{tag}.csv"] = (
            lambda fh, r=result, m=metadata: _write_ensemble_csv(r, fh, m))
    return writers


def _figure_fig6() -> dict:
    grid = uniform_grid(1500.0, 37501)
    return {
        "fig6a_N5_shift3.csv": _traj_writer(
            5, 1.0, 0.9, 1.0, grid, DisorderSpec.single_site(3, 0.05)),
        "fig6b_N5_shift2.csv": _traj_writer(
            5, 1.0, 0.9, 1.0, grid, DisorderSpec.single_site(2, 0.05)),
        "fig6c_N4_shift1.csv": _traj_writer(
            4, 1.0, 0.9, 1.0, grid, DisorderSpec.single_site(1, 0.05)),
    }


def _figure_fig7() -> dict:
    grid = log_grid(horizon=1e4, points_per_decade=400)
    return {
        "fig7_N5_shift3_30pct.csv": _traj_writer(
            5, 0.75, 0.9, 1.0, grid, DisorderSpec.single_site(3, 0.30)),
    }


_FIGURE_BUILDERS = {
    "fig2": _figure_fig2,
    "fig3": _figure_fig3,
    "fig4": _figure_fig4,
    "fig5": _figure_fig5,
    "fig6": _figure_fig6,
    "fig7": _figure_fig7,
}

_FIGURE_LOG_Y = {"fig4", "fig5", "fig6", "fig7"}


def _total_column(filename: str) -> Optional[int]:
    """1-based CSV column of P_tot, deduced from the N in the filename."""
    import re
    match = re.search(r"_N(\d+)", filename)
    if match is None:
        return None
    return int(match.group(1)) + 2


def _gnuplot_script(name: str, filenames: list) -> str:
    lines = [
        f"# gnuplot script for {name}; run: gnuplot {name}.gp",
        'set datafile separator ","',
        "set key outside right",
        'set xlabel "gamma t"',
    ]
    if name in _FIGURE_LOG_Y:
        lines.append("set logscale y")
        lines.append("set format y '10^{%T}'")
    if name == "fig5":
        lines.append('set ylabel "I_tot"')
    else:
        lines.append('set ylabel "P_tot"')
    plot_parts = []
    for fn in sorted(filenames):
        if fn == "fig3c.csv":
            continue
        if fn.startswith("fig5b"):
            use = "1:4"
        else:
            col = _total_column(fn)
            if col is None:
                continue
            if fn.startswith("fig5a"):
                col += 1
            use = f"1:{col}"
        title = fn[:-4].replace("_", " ")
        plot_parts.append(f"'{fn}' using {use} with lines title '{title}'")
    if name == "fig3":
        lines.append("# fig3c.csv (N,P1_inf) suits a separate point plot:")
        lines.append("#   plot 'fig3c.csv' using 1:2 with points")
    if plot_parts:
        lines.append("plot \\")
        for i, part in enumerate(plot_parts):
            sep = ", \\" if i < len(plot_parts) - 1 else ""
            lines.append("  " + part + sep)
    lines.append("pause -1 'press enter to close'")
    return "\n".join(lines) + "\n"


def cmd_figure(args) -> int:
    started = time.monotonic()
    name = args.name
    builder = _FIGURE_BUILDERS.get(name)
    if builder is None:
        raise ConfigError(
            f"unknown figure {name!r}; choose from {', '.join(FIGURE_NAMES)}")
    writers = builder()
    filenames = list(writers.keys())
    script = _gnuplot_script(name, filenames)
    writers[f"{name}.gp"] = lambda fh, s=script: fh.write(s)
    outdir = os.path.join(_resolve_outdir(args.outdir), name)
    parameters = {"figure": name}
    _write_run(outdir, "figure", parameters, 1.0, writers, started)
    return 0


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralchain",
        description="Dissipative dynamics of a chiral-coupled atomic chain "
                    "(single excitation, uniform initial state).")
    parser.add_argument("--version", action="version",
                        version=f"chiralchain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_config(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--n", type=int, help="number of atoms")
        p.add_argument("--xi-over-pi", type=float, dest="xi_over_pi",
                       help="inter-atomic phase xi as a multiple of pi")
        p.add_argument("--gamma-l", type=float, dest="gamma_l",
                       help="leftward coupling rate")
        p.add_argument("--gamma-r", type=float, dest="gamma_r",
                       help="rightward coupling rate")
        p.add_argument("--outdir", help=f"output directory "
                       f"(default: ${OUTDIR_ENV} or '.')")
        p.add_argument("--stdout", action="store_true",
                       help="write data to stdout, no files")

    sim = sub.add_parser("simulate", help="propagate one configuration")
    add_common_config(sim)
    sim.add_argument("--shift-site", type=int, dest="shift_site",
                     help="1-based site for a deterministic shift")
    sim.add_argument("--shift", type=float,
                     help="shift as a (signed) fraction of xi")
    sim.add_argument("--horizon", type=float, default=20.0,
                     help="final time in units of 1/gamma (default 20)")
    sim.add_argument("--points", type=int, default=2000,
                     help="uniform grid points (default 2000)")
    sim.add_argument("--log-grid", action="store_true", dest="log_grid",
                     help="log-spaced grid from 0.01/gamma to the horizon")
    sim.add_argument("--points-per-decade", type=int, default=400,
                     dest="points_per_decade",
                     help="log grid density (default 400)")
    sim.add_argument("--json", action="store_true",
                     help="also write complex amplitudes as JSON")
    sim.add_argument("--no-cross-check", action="store_true",
                     dest="no_cross_check",
                     help="skip the Runge-Kutta integrity check")
    sim.set_defaults(func=cmd_simulate)

    fig = sub.add_parser("figure", help="emit every curve of a named figure")
    fig.add_argument("name", choices=FIGURE_NAMES)
    fig.add_argument("--outdir", help=f"parent directory "
                     f"(default: ${OUTDIR_ENV} or '.')")
    fig.set_defaults(func=cmd_figure)

    ker = sub.add_parser("kernel", help="tabulate dipole-dipole kernels")
    ker.add_argument("--dim", required=True,
                     choices=("1", "1chiral", "2", "3"))
    ker.add_argument("--xi", required=True,
                     help="single value, comma list, or start:step:stop")
    ker.add_argument("--alignment", type=float, default=0.0,
                     help="dipole alignment cosine for 2D/3D (default 0)")
    ker.add_argument("--gamma-l", type=float, default=0.5, dest="gamma_l",
                     help="1chiral left rate (default 0.5)")
    ker.add_argument("--gamma-r", type=float, default=0.5, dest="gamma_r",
                     help="1chiral right rate (default 0.5)")
    ker.add_argument("--outdir", help=f"output directory "
                     f"(default: ${OUTDIR_ENV} or '.')")
    ker.add_argument("--stdout", action="store_true",
                     help="write the table to stdout, no files")
    ker.set_defaults(func=cmd_kernel)

    ens = sub.add_parser("ensemble",
                         help="position-fluctuation ensemble statistics")
    add_common_config(ens)
    ens.add_argument("--fluct", type=float,
                     help="fluctuation half-width as fraction of xi "
                          "(default 0.005)")
    ens.add_argument("--realizations", type=int,
                     help="ensemble size (default 200)")
    ens.add_argument("--seed", type=int,
                     help=f"ensemble seed (default {DEFAULT_SEED})")
    ens.add_argument("--horizon", type=float, default=1000.0,
                     help="final time in units of 1/gamma (default 1000)")
    ens.add_argument("--points", type=int, default=25001,
                     help="uniform grid points (default 25001)")
    ens.set_defaults(func=cmd_ensemble)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IntegrityError, NumericsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ChiralChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
