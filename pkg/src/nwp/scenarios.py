"""
Analytic nonspreading packets for the three scenario families.

* ``FreeAiry``   -- Airy packet in free space, self-accelerating.
* ``ForcedAiry`` -- Airy packet under a spatially uniform force F(t).
* ``SHO``        -- displaced oscillator eigenstate.

Every packet has the form ``shape(x - d(t)) * exp(i Phi(x, t) / hbar)``
with ``Phi = m * d_dot(t) * x + phi0(t)``. All functions accept negative
``t``; integrals ``int_0^t`` then carry the usual sign.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError
from .grid import Grid1D, WaveField
from .special import MAX_SUPPORTED_LEVEL, airy_ai, hermite_psi


class Case(str, enum.Enum):
    FREE_AIRY = "FreeAiry"
    FORCED_AIRY = "ForcedAiry"
    SHO = "SHO"

    @property
    def is_airy(self) -> bool:
        return self is not Case.SHO


# --------------------------------------------------------------------------
# force profiles

class ForceProfile:
    """
    A spatially uniform force ``F(t)``.

    Subclasses provide ``value(t)`` and the three running integrals used by
    the forced Airy packet: ``alpha(t) = int_0^t F``, ``beta(t) = int_0^t alpha``
    and ``alpha_sq(t) = int_0^t alpha^2``.
    """

    kind = "abstract"

    def value(self, t: float) -> float:
        raise NotImplementedError

    def alpha(self, t: float) -> float:
        raise NotImplementedError

    def beta(self, t: float) -> float:
        raise NotImplementedError

    def alpha_sq(self, t: float) -> float:
        raise NotImplementedError

    def covers(self, t: float) -> bool:
        return True


@dataclass(frozen=True)
class Constant(ForceProfile):
    F0: float
    kind = "Constant"

    def value(self, t):
        return self.F0

    def alpha(self, t):
        return self.F0 * t

    def beta(self, t):
        return 0.5 * self.F0 * t * t

    def alpha_sq(self, t):
        return self.F0 * self.F0 * t**3 / 3.0


@dataclass(frozen=True)
class Sinusoid(ForceProfile):
    """``F(t) = F0 * sin(Omega * t + phi)``."""

    F0: float
    Omega: float
    phi: float = 0.0
    kind = "Sinusoid"

    def __post_init__(self):
        if not self.Omega > 0.0:
            raise InvariantError("Sinusoid needs Omega > 0")

    def value(self, t):
        return self.F0 * math.sin(self.Omega * t + self.phi)

    def alpha(self, t):
        w, ph = self.Omega, self.phi
        return self.F0 / w * (math.cos(ph) - math.cos(w * t + ph))

    def beta(self, t):
        w, ph = self.Omega, self.phi
        return self.F0 / w * (t * math.cos(ph) - (math.sin(w * t + ph) - math.sin(ph)) / w)

    def alpha_sq(self, t):
        w, ph = self.Omega, self.phi
        c = math.cos(ph)
        int_cos = (math.sin(w * t + ph) - math.sin(ph)) / w
        int_cos2 = 0.5 * t + (math.sin(2.0 * (w * t + ph)) - math.sin(2.0 * ph)) / (4.0 * w)
        return (self.F0 / w) ** 2 * (t * c * c - 2.0 * c * int_cos + int_cos2)


def _simpson(f, a: float, b: float, n: int) -> float:
    xs = np.linspace(a, b, n + 1)
    ys = np.array([f(v) for v in xs])
    h = (b - a) / n
    return h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum())


def _simpson_richardson(f, a: float, b: float, rtol: float = 1e-12, n0: int = 2, n_max: int = 4096) -> float:
    """Composite Simpson, doubling panels until the Richardson estimate drops below rtol."""
    if a == b:
        return 0.0
    n = n0
    coarse = _simpson(f, a, b, n)
    while True:
        n *= 2
        fine = _simpson(f, a, b, n)
        err = abs(fine - coarse) / 15.0
        if err <= rtol * max(abs(fine), 1e-300) or err == 0.0 or n >= n_max:
            return fine + (fine - coarse) / 15.0
        coarse = fine


@dataclass(frozen=True)
class PiecewiseLinear(ForceProfile):
    """Force linearly interpolated through a table of ``(t_i, F_i)`` samples."""

    times: tuple
    values: tuple
    kind = "PiecewiseLinear"

    def __post_init__(self):
        ts = tuple(float(v) for v in self.times)
        fs = tuple(float(v) for v in self.values)
        if len(ts) != len(fs) or len(ts) < 2:
            raise InvariantError("PiecewiseLinear needs at least two (t, F) pairs")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvariantError("PiecewiseLinear times must be strictly increasing")
        if not ts[0] <= 0.0 <= ts[-1]:
            raise InvariantError("PiecewiseLinear table must contain t = 0")
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "values", fs)

    @classmethod
    def from_table(cls, table) -> PiecewiseLinear:
        ts, fs = zip(*table)
        return cls(tuple(ts), tuple(fs))

    def covers(self, t):
        return self.times[0] <= t <= self.times[-1]

    def _check(self, t):
        if not self.covers(t):
            raise InvariantError(
                f"t={t} outside force table coverage [{self.times[0]}, {self.times[-1]}]"
            )

    def value(self, t):
        self._check(t)
        return float(np.interp(t, self.times, self.values))

    def _breaks(self, t) -> list[float]:
        lo, hi = min(0.0, t), max(0.0, t)
        inner = [v for v in self.times if lo < v < hi]
        return [lo] + inner + [hi]

    def _integrate(self, f, t) -> float:
        # integrand is smooth between table nodes, so split there
        self._check(t)
        pts = self._breaks(t)
        total = sum(_simpson_richardson(f, a, b) for a, b in zip(pts, pts[1:]))
        return total if t >= 0.0 else -total

    def alpha(self, t):
        # F is linear per segment: one Simpson panel per segment is exact
        self._check(t)
        pts = self._breaks(t)
        total = sum(_simpson(self.value, a, b, 2) for a, b in zip(pts, pts[1:]))
        return total if t >= 0.0 else -total

    def beta(self, t):
        return self._integrate(self.alpha, t)

    def alpha_sq(self, t):
        return self._integrate(lambda s: self.alpha(s) ** 2, t)


# --------------------------------------------------------------------------
# scenario parameters

@dataclass(frozen=True)
class ScenarioParams:
    case: Case
    m: float = 1.0
    hbar: float = 1.0
    b: float = 1.0
    force: ForceProfile | None = None
    omega: float = 1.0
    A: float = 0.0
    theta: float = 0.0
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        if not (self.m > 0.0 and self.hbar > 0.0):
            raise InvariantError("m and hbar must be positive")
        if self.case.is_airy and self.b == 0.0:
            raise InvariantError("Airy scenarios need b != 0")
        if self.case is Case.FORCED_AIRY and self.force is None:
            raise InvariantError("ForcedAiry needs a force profile")
        if self.case is Case.SHO:
            if not self.omega > 0.0:
                raise InvariantError("SHO needs omega > 0")
            if self.A < 0.0:
                raise InvariantError("SHO needs A >= 0")
        if int(self.n) != self.n or self.n < 0:
            raise InvariantError("oscillator level n must be a non-negative integer")


@dataclass(frozen=True)
class PhaseDecomposition:
    """Trajectory and phase ingredients at one instant."""

    d: float
    d_dot: float
    phi0: float
    phi_of_x: float


def _require_airy(params: ScenarioParams) -> None:
    if not params.case.is_airy:
        raise InvariantError(f"only defined for Airy scenarios, got {params.case.value}")


def _require_forced(params: ScenarioParams) -> None:
    if params.case is not Case.FORCED_AIRY:
        raise InvariantError(f"only defined for ForcedAiry, got {params.case.value}")


def f_b(params: ScenarioParams) -> float:
    """Self-acceleration force ``hbar^2 b^3 / 2m`` of the Airy packet."""
    _require_airy(params)
    return params.hbar**2 * params.b**3 / (2.0 * params.m)


def d0(params: ScenarioParams, t: float) -> float:
    _require_airy(params)
    return f_b(params) * t * t / (2.0 * params.m)


def d0_dot(params: ScenarioParams, t: float) -> float:
    _require_airy(params)
    return f_b(params) * t / params.m


def force(params: ScenarioParams, t: float) -> float:
    """External force at ``t``; zero unless the scenario is ForcedAiry."""
    if params.case is Case.FORCED_AIRY:
        return params.force.value(t)
    return 0.0


def alpha(params: ScenarioParams, t: float) -> float:
    _require_forced(params)
    return params.force.alpha(t)


def d1(params: ScenarioParams, t: float) -> float:
    _require_forced(params)
    return params.force.beta(t) / params.m


def energy_level(params: ScenarioParams) -> float:
    return (params.n + 0.5) * params.hbar * params.omega


def trajectory_d(params: ScenarioParams, t: float) -> float:
    if params.case is Case.FREE_AIRY:
        return d0(params, t)
    if params.case is Case.FORCED_AIRY:
        return d0(params, t) + d1(params, t)
    return params.A * math.cos(params.omega * t + params.theta)


def trajectory_d_dot(params: ScenarioParams, t: float) -> float:
    if params.case is Case.FREE_AIRY:
        return d0_dot(params, t)
    if params.case is Case.FORCED_AIRY:
        return d0_dot(params, t) + alpha(params, t) / params.m
    return -params.A * params.omega * math.sin(params.omega * t + params.theta)


def phi0(params: ScenarioParams, t: float) -> float:
    """Spatially constant part of the packet phase (an action)."""
    m = params.m
    if params.case is Case.SHO:
        w, th, A = params.omega, params.theta, params.A
        # int_0^t (m/2)(d_dot^2 - w^2 d^2) = -(m A^2 w / 4)(sin(2wt+2th) - sin(2th))
        swing = math.sin(2.0 * (w * t + th)) - math.sin(2.0 * th)
        return -energy_level(params) * t + 0.25 * m * A * A * w * swing
    fb = f_b(params)
    free = -fb * fb * t**3 / (3.0 * m)
    if params.case is Case.FREE_AIRY:
        return free
    return free - fb * t * d1(params, t) - params.force.alpha_sq(t) / (2.0 * m)


def phase_decomposition(params: ScenarioParams, t: float) -> PhaseDecomposition:
    d_dot = trajectory_d_dot(params, t)
    return PhaseDecomposition(
        d=trajectory_d(params, t),
        d_dot=d_dot,
        phi0=phi0(params, t),
        phi_of_x=params.m * d_dot,
    )


def packet_shape(params: ScenarioParams, y) -> np.ndarray:
    """Real profile of the packet in its co-moving coordinate ``y = x - d``."""
    if params.case.is_airy:
        return airy_ai(params.b * np.asarray(y, dtype=float))
    return hermite_psi(params.n, y, params.m, params.omega, params.hbar)


def build_packet(params: ScenarioParams, t: float, grid: Grid1D) -> WaveField:
    """Sample the analytic nonspreading packet at time ``t``."""
    if params.case is Case.SHO and params.n > MAX_SUPPORTED_LEVEL:
        raise InvariantError(f"SHO level n={params.n} exceeds supported maximum {MAX_SUPPORTED_LEVEL}")
    ph = phase_decomposition(params, t)
    x = grid.x
    shape = packet_shape(params, x - ph.d)
    phase = np.exp(1j * (ph.phi_of_x * x + ph.phi0) / params.hbar)
    return WaveField(grid, shape * phase, t)
