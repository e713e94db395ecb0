"""
Hamiltonians as coefficient bundles over ``{p^2, p, x, x^2, 1}``.

The full Hamiltonian ``H`` splits as ``H = H_tilde(t) + H_c(t)`` where the
packet is an instantaneous eigenstate of ``H_tilde(t)`` and ``H_c(t)`` is
linear in ``x`` and ``p``. Coefficients are held as exact rationals
(``fractions.Fraction`` built from the float inputs) so the splitting can
be checked with exact equality; they are converted to floats only when an
operator is applied to a field.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from .errors import InvariantError
from .grid import TAPERS, Grid1D, WaveField, Window, apply_mask, interior_window, l2_norm
from .scenarios import (
    Case,
    ScenarioParams,
    alpha,
    build_packet,
    d0_dot,
    d1,
    energy_level,
    f_b,
    force,
    trajectory_d,
    trajectory_d_dot,
)

_COEFFS = ("c_pp", "c_p", "c_x", "c_xx", "c_0")


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(float(v))


@dataclass(frozen=True)
class OperatorSpec:
    """``c_pp p^2 + c_p p + c_x x + c_xx x^2 + c_0`` with ``p = -i hbar d/dx``."""

    c_pp: Fraction = Fraction(0)
    c_p: Fraction = Fraction(0)
    c_x: Fraction = Fraction(0)
    c_xx: Fraction = Fraction(0)
    c_0: Fraction = Fraction(0)
    hbar: float = 1.0

    def __post_init__(self):
        for name in _COEFFS:
            val = getattr(self, name)
            if isinstance(val, float) and not np.isfinite(val):
                raise InvariantError(f"operator coefficient {name} is not finite")
            object.__setattr__(self, name, _q(val))

    def __add__(self, other: OperatorSpec) -> OperatorSpec:
        if self.hbar != other.hbar:
            raise InvariantError("cannot add operators realized with different hbar")
        return OperatorSpec(
            *(getattr(self, n) + getattr(other, n) for n in _COEFFS), hbar=self.hbar
        )

    def __sub__(self, other: OperatorSpec) -> OperatorSpec:
        return self + other.scaled(-1)

    def scaled(self, s) -> OperatorSpec:
        s = _q(s)
        return OperatorSpec(*(s * getattr(self, n) for n in _COEFFS), hbar=self.hbar)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, n) for n in _COEFFS)

    def as_floats(self) -> dict[str, float]:
        return {n: float(getattr(self, n)) for n in _COEFFS}


def full_hamiltonian(params: ScenarioParams, t: float) -> OperatorSpec:
    m = _q(params.m)
    kin = Fraction(1, 2) / m
    if params.case is Case.FREE_AIRY:
        return OperatorSpec(c_pp=kin, hbar=params.hbar)
    if params.case is Case.FORCED_AIRY:
        return OperatorSpec(c_pp=kin, c_x=-_q(force(params, t)), hbar=params.hbar)
    return OperatorSpec(c_pp=kin, c_xx=m * _q(params.omega) ** 2 / 2, hbar=params.hbar)


def h_tilde(params: ScenarioParams, t: float) -> OperatorSpec:
    """Operator whose instantaneous eigenstate is the packet at ``t``."""
    m = _q(params.m)
    kin = Fraction(1, 2) / m
    d_dot = _q(trajectory_d_dot(params, t))
    if params.case.is_airy:
        return OperatorSpec(c_pp=kin, c_p=-d_dot, c_x=_q(f_b(params)), hbar=params.hbar)
    k = m * _q(params.omega) ** 2
    return OperatorSpec(
        c_pp=kin, c_p=-d_dot, c_x=-k * _q(trajectory_d(params, t)), c_xx=k / 2, hbar=params.hbar
    )


def h_c(params: ScenarioParams, t: float) -> OperatorSpec:
    """Effective Hamiltonian carrying the packet motion, linear in x and p."""
    d_dot = _q(trajectory_d_dot(params, t))
    if params.case.is_airy:
        return OperatorSpec(
            c_p=d_dot, c_x=-(_q(f_b(params)) + _q(force(params, t))), hbar=params.hbar
        )
    k = _q(params.m) * _q(params.omega) ** 2
    return OperatorSpec(c_p=d_dot, c_x=k * _q(trajectory_d(params, t)), hbar=params.hbar)


def e_tilde(params: ScenarioParams, t: float) -> float:
    """Instantaneous eigenvalue of :func:`h_tilde` on the packet."""
    m = params.m
    if params.case is Case.FREE_AIRY:
        # f_b d0 - m d0_dot^2 / 2 vanishes identically
        return 0.0
    if params.case is Case.FORCED_AIRY:
        # f_b d - m d_dot^2 / 2 with the vanishing free part removed
        a = alpha(params, t)
        return f_b(params) * d1(params, t) - d0_dot(params, t) * a - 0.5 * a * a / m
    d = trajectory_d(params, t)
    d_dot = trajectory_d_dot(params, t)
    return energy_level(params) - 0.5 * m * d_dot * d_dot - 0.5 * m * params.omega**2 * d * d


def apply_operator(op: OperatorSpec, f: WaveField) -> WaveField:
    """Apply ``op`` to ``f`` with spectral x-derivatives."""
    c = op.as_floats()
    x = f.grid.x
    out = (c["c_x"] * x + c["c_xx"] * x * x + c["c_0"]) * f.samples
    if c["c_pp"] != 0.0 or c["c_p"] != 0.0:
        hk = op.hbar * f.grid.k
        symbol = c["c_pp"] * hk * hk + c["c_p"] * hk
        out = out + np.fft.ifft(symbol * np.fft.fft(f.samples))
    return f.with_samples(out)


def residual_packet(params: ScenarioParams, t: float, grid: Grid1D, taper: str = "smooth") -> WaveField:
    """
    Packet prepared for spectral operator application.

    Airy packets are tapered at the grid edges so the periodic spectral
    derivative sees a smooth field; oscillator packets are left as is.
    """
    psi = build_packet(params, t, grid)
    if params.case.is_airy:
        psi = apply_mask(psi, TAPERS[taper](grid))
    return psi


def eigen_residual(
    params: ScenarioParams,
    t: float,
    grid: Grid1D,
    window: Window | None = None,
    energy_shift: float = 0.0,
    taper: str = "smooth",
) -> float:
    """
    Relative residual ``||(H_tilde - E_tilde) psi|| / ||psi||`` on ``window``.

    ``energy_shift`` offsets the eigenvalue; used for sensitivity checks.
    Defaults to the window that excludes the outer 15% of the grid.
    """
    window = window or interior_window(grid)
    psi = residual_packet(params, t, grid, taper)
    e = e_tilde(params, t) + energy_shift
    resid = apply_operator(h_tilde(params, t) - OperatorSpec(c_0=e, hbar=params.hbar), psi)
    norm = l2_norm(psi, window)
    if norm == 0.0:
        raise InvariantError("packet has zero norm on the residual window")
    return l2_norm(resid, window) / norm


def schrodinger_residual(
    params: ScenarioParams,
    t: float,
    grid: Grid1D,
    window: Window | None = None,
    dt: float = 1e-5,
    taper: str = "smooth",
) -> float:
    """
    ``||i hbar d_t psi - H psi|| / ||psi||`` on ``window`` for the analytic packet.

    The time derivative is a centered difference of :func:`build_packet`;
    ``H`` is applied spectrally at ``t``.
    """
    window = window or interior_window(grid)
    psi = residual_packet(params, t, grid, taper)
    fwd = build_packet(params, t + dt, grid).samples
    bwd = build_packet(params, t - dt, grid).samples
    lhs = 1j * params.hbar * (fwd - bwd) / (2.0 * dt)
    rhs = apply_operator(full_hamiltonian(params, t), psi).samples
    diff = psi.with_samples(lhs - rhs)
    return l2_norm(diff, window) / l2_norm(psi, window)


def operator_fields() -> tuple[str, ...]:
    return tuple(f.name for f in fields(OperatorSpec) if f.name in _COEFFS)
