"""
Command line entry point.

    nwp simulate  --config run.json [--out out.csv]
    nwp decompose --config run.json
    nwp classical --config run.json
    nwp compare   --config run.json

Exit codes: 0 success, 2 config error, 3 invariant violation,
4 a correspondence criterion failed (compare only).
"""
from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path

import numpy as np

from .classical import compare_classical_quantum, default_initial_state, integrate_hc_at, track_position
from .config import RunConfig, load_config
from .decomposition import e_tilde, eigen_residual, full_hamiltonian, h_c, h_tilde, operator_fields
from .errors import ConfigError, InvariantError
from .grid import l2_norm
from .propagator import EvolutionConfig, boundary_flag, initial_packet, split_step_iter
from .scenarios import trajectory_d

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3
EXIT_ACCEPTANCE = 4


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


class CsvWriter:
    def __init__(self, columns):
        self.buf = io.StringIO()
        self.buf.write(",".join(columns) + "\n")

    def meta(self, text: str) -> None:
        self.buf.write(f"# {text}\n")

    def row(self, *values) -> None:
        self.buf.write(",".join(fmt(v) for v in values) + "\n")

    def getvalue(self) -> str:
        return self.buf.getvalue()


def _describe(cfg: RunConfig) -> str:
    g = cfg.grid
    return (f"case={cfg.scenario.case.value} grid=[{fmt(g.x_min)},{fmt(g.x_max)}) n={g.n} "
            f"dt={fmt(cfg.evolution.dt)} steps={cfg.evolution.steps}")


def cmd_simulate(cfg: RunConfig) -> tuple[int, str]:
    params = cfg.scenario
    ev = cfg.evolution
    out = CsvWriter(["t", "x_mode", "d_analytic", "norm_window", "boundary_flag"])
    out.meta("simulate " + _describe(cfg))
    wanted = set(cfg.sample_steps())

    def emit(f):
        out.row(f.t, track_position(params, f), trajectory_d(params, f.t),
                l2_norm(f, cfg.window), boundary_flag(f, params, ev.boundary_margin))

    f0 = initial_packet(params, cfg.grid, ev.taper if ev.apodize else None)
    emit(f0)
    inner = EvolutionConfig(ev.dt, ev.steps, apodize=False, boundary_margin=ev.boundary_margin, taper=ev.taper)
    for i, f in enumerate(split_step_iter(f0, params, inner), start=1):
        if i in wanted:
            emit(f)
    return EXIT_OK, out.getvalue()


def _coef_line(name, op) -> str:
    c = op.as_floats()
    return name + ": " + ",".join(f"{k}={fmt(c[k])}" for k in operator_fields())


def cmd_decompose(cfg: RunConfig) -> tuple[int, str]:
    params = cfg.scenario
    times = cfg.sample_times()
    t0 = times[0]
    out = CsvWriter(["t", "e_tilde", "eigen_residual"])
    out.meta("decompose " + _describe(cfg))
    out.meta(_coef_line(f"H(t={fmt(t0)})", full_hamiltonian(params, t0)))
    out.meta(_coef_line(f"H_tilde(t={fmt(t0)})", h_tilde(params, t0)))
    out.meta(_coef_line(f"H_c(t={fmt(t0)})", h_c(params, t0)))
    taper = cfg.evolution.taper
    for t in times:
        out.row(t, e_tilde(params, t), eigen_residual(params, t, cfg.grid, cfg.window, taper=taper))
    return EXIT_OK, out.getvalue()


def _classical_initial(cfg: RunConfig):
    cparams = cfg.classical.scenario or cfg.scenario
    x0, p0 = default_initial_state(cparams)
    if cfg.classical.x0 is not None:
        x0 = cfg.classical.x0
    if cfg.classical.p0 is not None:
        p0 = cfg.classical.p0
    return cparams, x0, p0


def cmd_classical(cfg: RunConfig) -> tuple[int, str]:
    cparams, x0, p0 = _classical_initial(cfg)
    rec = integrate_hc_at(cparams, x0, p0, cfg.sample_times(), cfg.classical.dt)
    out = CsvWriter(["t", "x_classical", "p_classical", "d_analytic"])
    out.meta("classical " + _describe(cfg) + f" rk4_dt={fmt(cfg.classical.dt)}")
    for pt in rec.points:
        out.row(pt.t, pt.x, pt.p, trajectory_d(cfg.scenario, pt.t))
    return EXIT_OK, out.getvalue()


def cmd_compare(cfg: RunConfig) -> tuple[int, str]:
    cparams, x0, p0 = _classical_initial(cfg)
    rec = compare_classical_quantum(
        cfg.scenario, cfg.grid, cfg.evolution,
        sample_every=cfg.sample_every,
        classical_dt=cfg.classical.dt,
        x0=x0, p0=p0,
        classical_params=cparams,
    )
    out = CsvWriter(["t", "x_classical", "p_classical", "d_analytic", "x_mode_quantum",
                     "classical_pass", "quantum_pass"])
    out.meta("compare " + _describe(cfg) + f" rk4_dt={fmt(cfg.classical.dt)}")
    verdict = {True: "PASS", False: "FAIL"}
    for i, pt in enumerate(rec.points):
        out.row(pt.t, pt.x, pt.p, rec.d_analytic[i], rec.x_mode_quantum[i],
                verdict[bool(rec.classical_ok[i])], verdict[bool(rec.quantum_ok[i])])
    classical_pass = bool(np.all(rec.classical_ok))
    quantum_pass = bool(np.all(rec.quantum_ok))
    out.meta(f"classical_trajectory |x_classical - d| <= 1e-6: {verdict[classical_pass]}")
    out.meta(f"quantum_trajectory |dx_quantum - dd| <= 2dx: {verdict[quantum_pass]}")
    status = EXIT_OK if (classical_pass and quantum_pass) else EXIT_ACCEPTANCE
    return status, out.getvalue()


COMMANDS = {
    "simulate": cmd_simulate,
    "decompose": cmd_decompose,
    "classical": cmd_classical,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nwp", description="Nonspreading wave packet laboratory")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", default=None, help="CSV output path (default: config output_path, else stdout)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        status, text = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"nwp: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantError as exc:
        print(f"nwp: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    dest = args.out or cfg.output_path
    if dest:
        Path(dest).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
