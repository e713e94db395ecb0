"""
Time evolution of packets.

Two independent routes:

* :func:`exact_evolve` applies the closed-form evolution operator
  ``exp(i phi(x,t)/hbar) exp(-i (d(t)-d(0)) p / hbar)`` to the initial packet.
* :func:`split_step_evolve` integrates the Schroedinger equation with
  second-order Strang splitting on the full Hamiltonian.

:func:`product_formula_evolve` and :func:`infinitesimal_factor_check`
exercise the short-time factorization ``U(t+dt, t) ~ exp(-i E_tilde dt/hbar)
exp(-i c_x x dt/hbar) exp(-i d_dot dt p/hbar)`` that links the two.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .decomposition import e_tilde, full_hamiltonian, h_c
from .errors import InvariantError
from .grid import TAPERS, Grid1D, WaveField, Window, apply_mask, interior_window, l2_norm, spatial_shift
from .scenarios import Case, ScenarioParams, build_packet, phi0, trajectory_d, trajectory_d_dot

#: edge probability fraction above which a run is flagged
BOUNDARY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float
    steps: int
    apodize: bool = True
    boundary_margin: float = 0.10
    taper: str = "smooth"

    def __post_init__(self):
        if not self.dt > 0.0:
            raise InvariantError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise InvariantError(f"steps must be a non-negative integer, got {self.steps}")
        if not 0.0 < self.boundary_margin < 0.5:
            raise InvariantError("boundary_margin must lie in (0, 0.5)")
        if self.taper not in TAPERS:
            raise InvariantError(f"unknown taper {self.taper!r}; choose from {sorted(TAPERS)}")

    @property
    def t_span(self) -> float:
        return self.steps * self.dt


def apodize(f: WaveField, params: ScenarioParams, taper: str = "smooth", fraction: float = 0.10) -> WaveField:
    """Taper the outer ``fraction`` of an Airy field; oscillator fields pass through."""
    if not params.case.is_airy:
        return f
    return apply_mask(f, TAPERS[taper](f.grid, fraction))


def initial_packet(params: ScenarioParams, grid: Grid1D, taper: str | None = "smooth") -> WaveField:
    """The t=0 packet, tapered for Airy cases unless ``taper`` is None."""
    f0 = build_packet(params, 0.0, grid)
    return f0 if taper is None else apodize(f0, params, taper)


def monitored_edges(params: ScenarioParams) -> tuple[bool, bool]:
    """
    Which grid edges (lower, upper) the boundary monitor watches.

    An Airy packet always fills the edge facing its oscillatory tail, so
    only the edge on its decaying side can reveal wrap-around.
    """
    if params.case is Case.SHO:
        return True, True
    return (params.b < 0.0, params.b > 0.0)


def boundary_fraction(f: WaveField, margin: float = 0.10, edges: tuple[bool, bool] = (True, True)) -> float:
    """Probability within ``margin`` of the watched edges, relative to the total."""
    g = f.grid
    w = margin * g.length
    rho = f.density
    sel = np.zeros(g.n, dtype=bool)
    if edges[0]:
        sel |= g.x < g.x_min + w
    if edges[1]:
        sel |= g.x > g.x_max - w
    total = rho.sum()
    return 0.0 if total == 0.0 else float(rho[sel].sum() / total)


def boundary_flag(f: WaveField, params: ScenarioParams, margin: float = 0.10) -> bool:
    return boundary_fraction(f, margin, monitored_edges(params)) > BOUNDARY_TOLERANCE


def _potential(params: ScenarioParams, t: float, x: np.ndarray) -> np.ndarray | None:
    c = full_hamiltonian(params, t).as_floats()
    if c["c_x"] == 0.0 and c["c_xx"] == 0.0 and c["c_0"] == 0.0:
        return None
    return c["c_x"] * x + c["c_xx"] * x * x + c["c_0"]


def split_step_iter(f: WaveField, params: ScenarioParams, cfg: EvolutionConfig) -> Iterator[WaveField]:
    """
    Yield the field after each Strang step (the input itself is not yielded).

    Each step is ``exp(-iV dt/2h) exp(-iT dt/h) exp(-iV dt/2h)`` with the
    potential sampled at the step midpoint. Apodization, if enabled, is
    applied once to the input.
    """
    g = f.grid
    hbar, dt = params.hbar, cfg.dt
    c_pp = full_hamiltonian(params, f.t).as_floats()["c_pp"]
    kinetic = np.exp(-1j * c_pp * hbar * g.k**2 * dt)
    psi = (apodize(f, params, cfg.taper) if cfg.apodize else f).samples.copy()
    static = params.case is not Case.FORCED_AIRY
    half = None
    if static:
        v = _potential(params, f.t, g.x)
        half = None if v is None else np.exp(-0.5j * v * dt / hbar)
    t = f.t
    for _ in range(int(cfg.steps)):
        if not static:
            v = _potential(params, t + 0.5 * dt, g.x)
            half = None if v is None else np.exp(-0.5j * v * dt / hbar)
        if half is not None:
            psi *= half
        psi = np.fft.ifft(kinetic * np.fft.fft(psi))
        if half is not None:
            psi *= half
        t = t + dt
        yield WaveField(g, psi, t)


def split_step_evolve(f: WaveField, params: ScenarioParams, cfg: EvolutionConfig) -> WaveField:
    """Advance ``f`` by ``cfg.steps`` Strang steps of size ``cfg.dt``; zero steps return ``f``."""
    out = f
    for out in split_step_iter(f, params, cfg):
        pass
    return out


def exact_phase(params: ScenarioParams, t: float, x: np.ndarray) -> np.ndarray:
    """Phase ``phi(x, t)`` multiplying the shifted initial packet."""
    m = params.m
    d_t, d_0 = trajectory_d(params, t), trajectory_d(params, 0.0)
    v_t, v_0 = trajectory_d_dot(params, t), trajectory_d_dot(params, 0.0)
    return m * (v_t - v_0) * x + phi0(params, t) + m * v_0 * (d_t - d_0)


def exact_evolve(f0: WaveField, params: ScenarioParams, t: float) -> WaveField:
    """
    Closed-form evolution of the scenario's t=0 packet to time ``t``.

    Shift by ``d(t) - d(0)`` first, then multiply by ``exp(i phi/hbar)``;
    the two factors do not commute. Only valid when ``f0`` is the
    scenario's own initial packet (possibly tapered); this is not checked.
    """
    shift = trajectory_d(params, t) - trajectory_d(params, 0.0)
    moved = spatial_shift(f0, shift)
    phase = np.exp(1j * exact_phase(params, t, f0.grid.x) / params.hbar)
    return WaveField(f0.grid, moved.samples * phase, f0.t + t)


def factorized_step(f: WaveField, params: ScenarioParams, t: float, dt: float) -> WaveField:
    """
    One short-time step ``exp(-i(E_tilde + c_x x) dt/hbar) exp(-i c_p dt p/hbar)``.

    ``t`` is the instant at which ``H_c`` and ``E_tilde`` are evaluated.
    """
    c = h_c(params, t).as_floats()
    moved = spatial_shift(f, c["c_p"] * dt)
    phase = np.exp(-1j * (e_tilde(params, t) + c["c_x"] * f.grid.x) * dt / params.hbar)
    return WaveField(f.grid, moved.samples * phase, f.t + dt)


def infinitesimal_factor_check(
    params: ScenarioParams,
    t: float,
    dt: float,
    grid: Grid1D,
    window: Window | None = None,
    substeps: int = 4,
) -> float:
    """
    Windowed L2 gap between a split-step ``U(t+dt, t)`` and the factorized step.

    Both act on the analytic packet at ``t`` (tapered for Airy cases).
    ``substeps`` subdivides the split-step reference. The gap is O(dt^2).
    """
    window = window or interior_window(grid)
    psi = apodize(build_packet(params, t, grid), params)
    cfg = EvolutionConfig(dt=dt / substeps, steps=substeps, apodize=False)
    ref = split_step_evolve(psi, params, cfg)
    fac = factorized_step(psi, params, t, dt)
    return l2_norm(ref.with_samples(ref.samples - fac.samples), window)


def product_formula_evolve(f0: WaveField, params: ScenarioParams, t: float, N: int) -> WaveField:
    """
    Compose ``N`` factorized steps of size ``t/N`` starting from ``f0`` at time 0.

    ``H_c`` and ``E_tilde`` are sampled at each step midpoint.
    """
    if int(N) != N or N < 1:
        raise InvariantError(f"N must be a positive integer, got {N}")
    h = t / N
    f = f0
    for i in range(int(N)):
        f = factorized_step(f, params, (i + 0.5) * h, h)
    return WaveField(f0.grid, f.samples, f0.t + t)
