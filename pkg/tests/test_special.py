import math

import mpmath
import numpy as np
import pytest

from nwp.errors import InvariantError
from nwp.grid import WaveField, make_grid
from nwp.decomposition import OperatorSpec, apply_operator
from nwp.special import AI0, AIP0, AiryEvalConfig, airy_ai, gamma, hermite_functions, hermite_psi

mpmath.mp.dps = 30


class TestGamma:
    @pytest.mark.parametrize("x", [0.1, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 2.5, 7.3])
    def test_against_mpmath(self, x):
        assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)

    def test_airy_constants(self):
        assert AI0 == pytest.approx(float(mpmath.airyai(0)), abs=1e-15)
        assert AIP0 == pytest.approx(float(mpmath.airyai(0, derivative=1)), abs=1e-15)


class TestAiry:
    def test_origin(self):
        # extended-precision Maclaurin oracle: 3^(-2/3) / Gamma(2/3)
        assert airy_ai(0.0) == pytest.approx(0.355028053887817239, abs=1e-10)

    def test_one(self):
        # 80-term Maclaurin series summed at 30 digits
        assert airy_ai(1.0) == pytest.approx(0.135292416312881416, abs=1e-10)

    def test_first_zero(self):
        # bisection on the extended-precision series gives -2.338107410459767
        assert abs(airy_ai(-2.3381074105)) <= 1e-8

    def test_accuracy_range(self):
        z = np.linspace(-30.0, 10.0, 2001)
        ref = np.array([float(mpmath.airyai(v)) for v in z])
        assert np.max(np.abs(airy_ai(z) - ref)) <= 1e-10

    @pytest.mark.parametrize("z", [-6.0, -6.0001, 5.9999, 6.0, 6.0001])
    def test_cutoff_continuity(self, z):
        assert airy_ai(z) == pytest.approx(float(mpmath.airyai(z)), abs=1e-10)

    def test_far_field(self):
        assert airy_ai(-500.0) == pytest.approx(float(mpmath.airyai(-500)), abs=1e-12)
        assert airy_ai(200.0) == 0.0

    def test_shape_preserved(self):
        z = np.linspace(-3, 3, 12).reshape(3, 4)
        assert airy_ai(z).shape == (3, 4)
        assert isinstance(airy_ai(0.5), float)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite(self, bad):
        with pytest.raises(InvariantError):
            airy_ai(bad)

    def test_ode_residual(self):
        z = np.linspace(-10.0, 5.0, 301)

        def d2(h):
            return (airy_ai(z + h) - 2.0 * airy_ai(z) + airy_ai(z - h)) / h**2

        # Richardson-extrapolated second difference, O(h^4)
        second = (4.0 * d2(0.01) - d2(0.02)) / 3.0
        assert np.max(np.abs(second - z * airy_ai(z))) <= 1e-5

    def test_config_validation(self):
        with pytest.raises(InvariantError):
            AiryEvalConfig(series_cutoff=0.0)
        with pytest.raises(InvariantError):
            AiryEvalConfig(asymptotic_terms=0)

    def test_alternative_cutoff(self):
        cfg = AiryEvalConfig(series_cutoff=7.0, asymptotic_terms=12)
        z = np.linspace(-12, 8, 101)
        ref = np.array([float(mpmath.airyai(v)) for v in z])
        assert np.max(np.abs(airy_ai(z, cfg) - ref)) <= 1e-10


class TestHermite:
    def test_ground_state_origin(self):
        assert hermite_psi(0, 0.0, 1, 1, 1) == pytest.approx(math.pi**-0.25, abs=1e-12)

    def test_odd_parity(self):
        assert abs(hermite_psi(1, 0.0, 1, 1, 1)) <= 1e-14

    def test_normalization_n3(self):
        g = make_grid(-20, 20, 4096)
        assert np.sum(hermite_psi(3, g.x) ** 2) * g.dx == pytest.approx(1.0, abs=1e-8)

    def test_orthonormal(self):
        g = make_grid(-20, 20, 4096)
        psi = hermite_functions(10, g.x)
        gram = psi @ psi.T * g.dx
        assert np.max(np.abs(gram - np.eye(11))) <= 1e-8

    def test_against_closed_form(self):
        # psi_n = (2^n n!)^(-1/2) pi^(-1/4) H_n(x) e^(-x^2/2), physicists' Hermite
        x = np.linspace(-5, 5, 41)
        for n in range(8):
            hn = np.polynomial.hermite.hermval(x, [0] * n + [1])
            ref = hn * np.exp(-x * x / 2) / math.sqrt(2.0**n * math.factorial(n)) * math.pi**-0.25
            assert np.max(np.abs(hermite_psi(n, x) - ref)) <= 1e-12

    def test_scaled_constants(self):
        # with m*omega/hbar = 4 the ground state is (4/pi)^(1/4) exp(-2x^2)
        x = np.linspace(-2, 2, 9)
        ref = (4 / math.pi) ** 0.25 * np.exp(-2 * x * x)
        assert np.allclose(hermite_psi(0, x, m=2.0, omega=3.0, hbar=1.5), ref, atol=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 4, 10])
    def test_eigen_equation(self, n):
        m, omega, hbar = 1.3, 0.8, 0.9
        g = make_grid(-20, 20, 2048)
        f = WaveField(g, hermite_psi(n, g.x, m, omega, hbar))
        h = OperatorSpec(c_pp=1 / (2 * m), c_xx=m * omega**2 / 2, hbar=hbar)
        e_n = (n + 0.5) * hbar * omega
        resid = apply_operator(h, f).samples - e_n * f.samples
        assert np.linalg.norm(resid) / np.linalg.norm(e_n * f.samples) <= 1e-8

    def test_level_twenty(self):
        g = make_grid(-20, 20, 4096)
        psi = hermite_psi(20, g.x)
        assert np.sum(psi**2) * g.dx == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("args", [(-1, 0.0, 1, 1, 1), (0, 0.0, 0, 1, 1), (0, 0.0, 1, -1, 1), (0, 0.0, 1, 1, 0)])
    def test_invalid(self, args):
        with pytest.raises(InvariantError):
            hermite_psi(*args)
