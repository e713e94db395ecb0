import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from nwp.errors import InvariantError
from nwp.grid import interior_window, make_grid, spatial_shift
from nwp.scenarios import (
    Case,
    Constant,
    PiecewiseLinear,
    ScenarioParams,
    Sinusoid,
    alpha,
    build_packet,
    d0,
    d1,
    f_b,
    phase_decomposition,
    phi0,
    trajectory_d,
    trajectory_d_dot,
)
from nwp.special import airy_ai, hermite_psi


def forced(F, **kw):
    return ScenarioParams(Case.FORCED_AIRY, force=F, **kw)


TABLE = PiecewiseLinear.from_table([[-1.0, 0.5], [0.0, 0.2], [0.7, 1.4], [1.5, -0.3], [3.0, 0.8]])


class TestParams:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(case=Case.FREE_AIRY, m=0.0),
            dict(case=Case.FREE_AIRY, hbar=-1.0),
            dict(case=Case.FREE_AIRY, b=0.0),
            dict(case=Case.FORCED_AIRY),
            dict(case=Case.SHO, omega=0.0),
            dict(case=Case.SHO, A=-1.0),
            dict(case=Case.SHO, n=-1),
            dict(case=Case.SHO, n=1.5),
        ],
    )
    def test_rejected(self, kw):
        with pytest.raises(InvariantError):
            ScenarioParams(**kw)

    def test_case_from_string(self):
        assert ScenarioParams("SHO").case is Case.SHO

    def test_sinusoid_needs_frequency(self):
        with pytest.raises(InvariantError):
            Sinusoid(1.0, 0.0)


class TestPiecewiseTable:
    @pytest.mark.parametrize("table", [[[0, 1], [0, 2]], [[0, 1], [-1, 2]], [[1, 1], [2, 2]], [[0, 1]]])
    def test_bad_tables(self, table):
        with pytest.raises(InvariantError):
            PiecewiseLinear.from_table(table)

    def test_outside_coverage(self):
        with pytest.raises(InvariantError):
            TABLE.value(3.5)
        with pytest.raises(InvariantError):
            TABLE.beta(-2.0)

    @pytest.mark.parametrize("t", [-0.8, 0.3, 1.0, 2.2, 3.0])
    def test_integrals_against_quad(self, t):
        a = integrate.quad(TABLE.value, 0.0, t, points=TABLE.times, limit=200, epsabs=1e-14)[0]
        assert TABLE.alpha(t) == pytest.approx(a, abs=1e-12)

        def alpha_q(s):
            return integrate.quad(TABLE.value, 0.0, s, points=TABLE.times, epsabs=1e-14)[0]

        b = integrate.quad(alpha_q, 0.0, t, points=TABLE.times, epsabs=1e-13)[0]
        a2 = integrate.quad(lambda s: alpha_q(s) ** 2, 0.0, t, points=TABLE.times, epsabs=1e-13)[0]
        assert TABLE.beta(t) == pytest.approx(b, abs=1e-10)
        assert TABLE.alpha_sq(t) == pytest.approx(a2, abs=1e-10)

    def test_constant_table_matches_constant(self):
        tab = PiecewiseLinear.from_table([[0.0, 1.0], [4.0, 1.0]])
        for t in (0.5, 1.7, 3.9):
            assert tab.beta(t) == pytest.approx(Constant(1.0).beta(t), abs=1e-12)
            assert tab.alpha_sq(t) == pytest.approx(Constant(1.0).alpha_sq(t), abs=1e-12)


class TestSinusoidClosedForms:
    @pytest.mark.parametrize("t", [0.4, 2.0, -1.3])
    def test_against_quad(self, t):
        F = Sinusoid(0.8, 1.7, 0.4)
        assert F.alpha(t) == pytest.approx(integrate.quad(F.value, 0, t)[0], abs=1e-12)
        assert F.beta(t) == pytest.approx(integrate.quad(F.alpha, 0, t)[0], abs=1e-12)
        assert F.alpha_sq(t) == pytest.approx(integrate.quad(lambda s: F.alpha(s) ** 2, 0, t)[0], abs=1e-12)


class TestTrajectoryIngredients:
    @pytest.mark.parametrize("m,b,expected", [(1, 1, 0.5), (1, 2, 4.0), (2, 1, 0.25)])
    def test_f_b(self, m, b, expected):
        assert f_b(ScenarioParams(Case.FREE_AIRY, m=m, b=b)) == expected

    def test_f_b_needs_airy(self):
        with pytest.raises(InvariantError):
            f_b(ScenarioParams(Case.SHO))

    def test_d0(self, free):
        assert d0(free, 0.0) == 0.0
        assert d0(free, 2.0) == 1.0

    def test_d0_second_difference(self, free):
        h = 0.01
        acc = (d0(free, 1.0 + h) - 2 * d0(free, 1.0) + d0(free, 1.0 - h)) / h**2
        assert acc == pytest.approx(f_b(free) / free.m, abs=1e-8)

    def test_alpha(self):
        assert alpha(forced(Constant(1.0)), 2.0) == 2.0
        assert alpha(forced(Sinusoid(1.0, 1.0)), math.pi) == pytest.approx(2.0, abs=1e-10)
        assert alpha(forced(Constant(0.0)), 1.7) == 0.0

    def test_d1(self):
        assert d1(forced(Constant(1.0)), 2.0) == 2.0
        assert d1(forced(Constant(0.0)), 3.0) == 0.0
        assert d1(forced(Sinusoid(1.0, 1.0)), math.pi) == pytest.approx(math.pi, abs=1e-9)

    def test_trajectory(self):
        assert trajectory_d(forced(Constant(1.0)), 2.0) == pytest.approx(3.0, abs=1e-15)
        assert trajectory_d(ScenarioParams(Case.SHO, A=1.0), 0.0) == 1.0
        assert abs(trajectory_d(ScenarioParams(Case.SHO, A=2.0, theta=math.pi / 2), 0.0)) <= 1e-15

    def test_phi0(self):
        assert phi0(ScenarioParams(Case.FREE_AIRY), 2.0) == pytest.approx(-2.0 / 3.0, abs=1e-15)
        # -f_b^2 t^3/3 - f_b t * t^2/2 - t^3/6 at t=1
        assert phi0(forced(Constant(1.0)), 1.0) == pytest.approx(-0.5, abs=1e-15)
        sho = ScenarioParams(Case.SHO, n=0, A=0.0)
        for t in (0.0, 1.3, 7.0):
            assert phi0(sho, t) == pytest.approx(-0.5 * t, abs=1e-15)

    def test_sho_phi0_against_action_integral(self):
        p = ScenarioParams(Case.SHO, m=1.3, omega=0.7, A=1.4, theta=0.5, n=2)
        t = 2.9

        def lagrangian(s):
            d, v = trajectory_d(p, s), trajectory_d_dot(p, s)
            return 0.5 * p.m * (v * v - p.omega**2 * d * d)

        ref = -(p.n + 0.5) * p.hbar * p.omega * t - integrate.quad(lagrangian, 0, t, epsabs=1e-14)[0]
        assert phi0(p, t) == pytest.approx(ref, abs=1e-12)

    def test_phi_of_x(self, forced_sin):
        ph = phase_decomposition(forced_sin, 0.9)
        assert ph.phi_of_x == forced_sin.m * ph.d_dot


@pytest.mark.parametrize(
    "params",
    [
        ScenarioParams(Case.FREE_AIRY, m=1.2, b=0.8),
        forced(Constant(1.0)),
        forced(Sinusoid(1.0, 2.0, 0.3)),
        forced(TABLE),
        ScenarioParams(Case.SHO, A=1.0, theta=0.3, omega=1.4),
    ],
    ids=["free", "const", "sin", "table", "sho"],
)
@pytest.mark.parametrize("t", [0.35, 1.1, 2.45])
def test_trajectory_is_c1(params, t):
    h = 1e-5
    num = (trajectory_d(params, t + h) - trajectory_d(params, t - h)) / (2 * h)
    assert num == pytest.approx(trajectory_d_dot(params, t), abs=1e-6)


class TestBuildPacket:
    def test_free_t0(self, airy_grid, free):
        f = build_packet(free, 0.0, airy_grid)
        assert np.array_equal(f.samples.imag, np.zeros(airy_grid.n))
        assert np.array_equal(f.samples.real, airy_ai(airy_grid.x))

    def test_sho_stationary(self, sho_grid):
        p = ScenarioParams(Case.SHO, n=0, A=0.0)
        f = build_packet(p, 1.7, sho_grid)
        ref = hermite_psi(0, sho_grid.x) * np.exp(-0.5j * 1.7)
        assert np.max(np.abs(f.samples - ref)) <= 1e-15

    @pytest.mark.parametrize("case", ["free", "forced_const", "sho1"])
    def test_modulus_translates(self, case, request):
        params = request.getfixturevalue(case)
        g = make_grid(-40, 40, 4096) if params.case.is_airy else make_grid(-20, 20, 1024)
        t = 1.3
        shift = trajectory_d(params, t) - trajectory_d(params, 0.0)
        lhs = np.abs(build_packet(params, t, g).samples)
        rhs = np.abs(build_packet(params, 0.0, g).samples)
        # compare against the shape sampled at x - shift directly (no FFT)
        xs = g.x - shift - trajectory_d(params, 0.0)
        ref = np.abs(airy_ai(params.b * xs) if params.case.is_airy else hermite_psi(params.n, xs))
        sel = interior_window(g).mask(g)
        assert np.max(np.abs(lhs - ref)[sel]) <= 1e-9
        if not params.case.is_airy:
            moved = np.abs(spatial_shift(build_packet(params, 0.0, g), shift).samples)
            assert np.max(np.abs(lhs - moved)[sel]) <= 1e-9
        assert rhs.shape == lhs.shape

    def test_level_cap(self, sho_grid):
        with pytest.raises(InvariantError):
            build_packet(ScenarioParams(Case.SHO, n=21), 0.0, sho_grid)


class TestZeroForceDegeneracy:
    @pytest.mark.parametrize("t", [-1.5, 0.0, 0.7, 2.0])
    def test_matches_free(self, t, airy_grid):
        free = ScenarioParams(Case.FREE_AIRY, m=1.3, b=0.9)
        zero = forced(Constant(0.0), m=1.3, b=0.9)
        assert abs(trajectory_d(zero, t) - trajectory_d(free, t)) <= 1e-12
        assert abs(trajectory_d_dot(zero, t) - trajectory_d_dot(free, t)) <= 1e-12
        assert abs(phi0(zero, t) - phi0(free, t)) <= 1e-12
        a = build_packet(zero, t, airy_grid).samples
        b = build_packet(free, t, airy_grid).samples
        assert np.max(np.abs(a - b)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(-5.0, 5.0))
def test_negative_time_symmetry(t):
    # constant force: d and phi0 are even/odd polynomials in t
    p = forced(Constant(0.7))
    assert trajectory_d(p, -t) == pytest.approx(trajectory_d(p, t), abs=1e-12)
    assert phi0(p, -t) == pytest.approx(-phi0(p, t), abs=1e-12)
