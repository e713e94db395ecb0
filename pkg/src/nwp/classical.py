"""
Classical Hamilton dynamics under the effective Hamiltonian ``H_c(t)``.

``H_c`` is linear in ``x`` and ``p``, so its vector field depends on time
only and fourth-order Runge-Kutta reduces to Simpson quadrature of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decomposition import h_c
from .errors import InvariantError
from .grid import Grid1D, centroid, mode_position
from .propagator import EvolutionConfig, boundary_flag, exact_evolve, initial_packet, split_step_iter
from .scenarios import Case, ScenarioParams, trajectory_d, trajectory_d_dot

#: tolerance on |x_classical - d| in correspondence checks
CLASSICAL_TOL = 1e-6


@dataclass(frozen=True)
class PhasePoint:
    t: float
    x: float
    p: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.x, self.p)):
            raise InvariantError("phase point must be finite")


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """
    Time series of classical phase points with matching analytic and quantum columns.

    ``classical_ok`` / ``quantum_ok`` are per-row verdicts filled in by
    :func:`compare_classical_quantum`.
    """

    points: tuple[PhasePoint, ...]
    d_analytic: np.ndarray
    x_mode_quantum: np.ndarray | None = None
    classical_ok: np.ndarray | None = None
    quantum_ok: np.ndarray | None = None
    boundary: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        ts = [pt.t for pt in self.points]
        if len(ts) > 1:
            steps = np.diff(ts)
            if not (np.all(steps > 0) or np.all(steps < 0)):
                raise InvariantError("trajectory times must be strictly monotone")
        if len(self.d_analytic) != len(self.points):
            raise InvariantError("d_analytic length does not match the number of points")

    @property
    def t(self) -> np.ndarray:
        return np.array([pt.t for pt in self.points])

    @property
    def x(self) -> np.ndarray:
        return np.array([pt.x for pt in self.points])

    @property
    def p(self) -> np.ndarray:
        return np.array([pt.p for pt in self.points])

    @property
    def passed(self) -> bool:
        checks = [c for c in (self.classical_ok, self.quantum_ok) if c is not None]
        return all(bool(np.all(c)) for c in checks)


def hc_vector_field(params: ScenarioParams, t: float, x: float, p: float) -> tuple[float, float]:
    """``(dH_c/dp, -dH_c/dx)`` at time ``t``; independent of ``x`` and ``p``."""
    c = h_c(params, t).as_floats()
    return c["c_p"], -c["c_x"]


def default_initial_state(params: ScenarioParams) -> tuple[float, float]:
    """``(d(0), m d_dot(0))``: the classical point sitting on the packet."""
    return trajectory_d(params, 0.0), params.m * trajectory_d_dot(params, 0.0)


def _rk4_step(params, t, x, p, h):
    k1 = hc_vector_field(params, t, x, p)
    k2 = hc_vector_field(params, t + 0.5 * h, x + 0.5 * h * k1[0], p + 0.5 * h * k1[1])
    k3 = hc_vector_field(params, t + 0.5 * h, x + 0.5 * h * k2[0], p + 0.5 * h * k2[1])
    k4 = hc_vector_field(params, t + h, x + h * k3[0], p + h * k3[1])
    x = x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    p = p + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    return x, p


def _record(params, points) -> TrajectoryRecord:
    d = np.array([trajectory_d(params, pt.t) for pt in points])
    return TrajectoryRecord(tuple(points), d)


def integrate_hc(
    params: ScenarioParams,
    x0: float,
    p0: float,
    t_end: float,
    dt: float,
    t0: float = 0.0,
) -> TrajectoryRecord:
    """
    Classical RK4 from ``(t0, x0, p0)`` to ``t_end`` with step ``dt``.

    ``dt`` is a magnitude; integration runs backwards when ``t_end < t0``.
    The final step is shortened to land on ``t_end`` exactly.
    """
    if not dt > 0.0:
        raise InvariantError(f"dt must be positive, got {dt}")
    span = t_end - t0
    n = max(1, int(math.ceil(abs(span) / dt - 1e-9)))
    points = [PhasePoint(t0, x0, p0)]
    x, p = x0, p0
    for i in range(n):
        ta = t0 + span * i / n
        tb = t0 + span * (i + 1) / n
        x, p = _rk4_step(params, ta, x, p, tb - ta)
        points.append(PhasePoint(tb, x, p))
    return _record(params, points)


def integrate_hc_at(params: ScenarioParams, x0: float, p0: float, times, dt: float) -> TrajectoryRecord:
    """RK4 sampled at the given increasing ``times`` (starting at ``times[0]``), step at most ``dt``."""
    times = [float(v) for v in times]
    points = [PhasePoint(times[0], x0, p0)]
    x, p = x0, p0
    for ta, tb in zip(times, times[1:]):
        seg = integrate_hc(params, x, p, tb, dt, t0=ta)
        x, p = seg.points[-1].x, seg.points[-1].p
        points.append(PhasePoint(tb, x, p))
    return _record(params, points)


def track_position(params: ScenarioParams, f) -> float:
    """
    Quantum position observable used for trajectory comparisons.

    Airy packets are not normalizable and have no centroid, so their main
    lobe (mode) is tracked. Oscillator packets use the centroid: excited
    levels have several equal maxima, which makes the mode ambiguous.
    """
    if params.case is Case.SHO:
        return centroid(f)
    return mode_position(f)


def compare_classical_quantum(
    params: ScenarioParams,
    grid: Grid1D,
    cfg: EvolutionConfig,
    sample_every: int = 1,
    classical_dt: float = 1e-3,
    x0: float | None = None,
    p0: float | None = None,
    classical_params: ScenarioParams | None = None,
    method: str = "split",
) -> TrajectoryRecord:
    """
    Run the quantum packet and the classical ``H_c`` particle side by side.

    The quantum packet is evolved for ``cfg.steps`` steps (``method`` is
    ``"split"`` or ``"exact"``) and sampled every ``sample_every`` steps
    and at the final step.
    Rows pass when ``|x_classical - d| <= 1e-6`` and
    ``|dx_quantum - dd| <= 2 dx``, displacements measured from t=0.
    ``classical_params`` lets the classical half use a different scenario
    (negative controls). Failures are recorded per row, never raised.
    """
    if sample_every < 1:
        raise InvariantError("sample_every must be >= 1")
    if method not in ("split", "exact"):
        raise InvariantError(f"unknown method {method!r}")
    cparams = classical_params or params
    dx0, dp0 = default_initial_state(cparams)
    x0 = dx0 if x0 is None else x0
    p0 = dp0 if p0 is None else p0

    f0 = initial_packet(params, grid, cfg.taper if cfg.apodize else None)
    times = [0.0]
    xq = [track_position(params, f0)]
    flags = [boundary_flag(f0, params, cfg.boundary_margin)]
    if method == "split":
        for i, f in enumerate(split_step_iter(f0, params, EvolutionConfig(cfg.dt, cfg.steps, apodize=False,
                                                                           boundary_margin=cfg.boundary_margin,
                                                                           taper=cfg.taper)), start=1):
            if i % sample_every == 0 or i == cfg.steps:
                times.append(f.t)
                xq.append(track_position(params, f))
                flags.append(boundary_flag(f, params, cfg.boundary_margin))
    else:
        idx = list(range(sample_every, cfg.steps + 1, sample_every))
        if cfg.steps and (not idx or idx[-1] != cfg.steps):
            idx.append(cfg.steps)
        for i in idx:
            f = exact_evolve(f0, params, i * cfg.dt)
            times.append(f.t)
            xq.append(track_position(params, f))
            flags.append(boundary_flag(f, params, cfg.boundary_margin))

    classical = integrate_hc_at(cparams, x0, p0, times, classical_dt)
    d = np.array([trajectory_d(params, t) for t in times])
    xq = np.array(xq)
    classical_ok = np.abs(classical.x - d) <= CLASSICAL_TOL
    quantum_ok = np.abs((xq - xq[0]) - (d - d[0])) <= 2.0 * grid.dx
    return TrajectoryRecord(classical.points, d, xq, classical_ok, quantum_ok, np.array(flags))
