import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specurve.exceptions import DomainError, NoSolutionError
from specurve.model import PhysicalParameters, RadialProblem, energy_from_w, reduce


def params_with_tau(tau, m=1.0, p_z=0.0, alpha=0.0, l=1):
    # tau = sqrt(g b / 2) |chi|; g=2, b=1 makes tau = |chi|.
    return PhysicalParameters(m=m, p_z=p_z, alpha=alpha, l=l, g=2.0, b=1.0, chi=tau)


class TestPhysicalParameters:
    def test_rejects_imaginary_gamma(self):
        with pytest.raises(DomainError, match="imaginary gamma"):
            PhysicalParameters(m=1.0, p_z=0.0, alpha=1.5, l=1, g=2.0, b=1.0, chi=1.0)

    def test_rejects_nonpositive_couplings(self):
        with pytest.raises(DomainError):
            PhysicalParameters(m=1.0, p_z=0.0, alpha=0.0, l=1, g=0.0, b=1.0, chi=1.0)
        with pytest.raises(DomainError):
            PhysicalParameters(m=1.0, p_z=0.0, alpha=0.0, l=1, g=2.0, b=-1.0, chi=1.0)

    def test_tau_requires_chi(self):
        p = PhysicalParameters(m=1.0, p_z=0.0, alpha=0.0, l=1, g=2.0, b=1.0)
        with pytest.raises(DomainError, match="chi"):
            p.tau

    def test_tau_nonnegative_for_negative_chi(self):
        assert params_with_tau(-3.0).tau == 3.0


class TestReduce:
    def test_no_coulomb_term(self):
        out = reduce(params_with_tau(1.0, alpha=0.0, l=1), energy=7.3)
        assert out == RadialProblem(s=1.0, theta=0.0)

    def test_gamma_zero_boundary(self):
        out = reduce(params_with_tau(1.0, alpha=1.0, l=1), energy=2.0)
        assert out.s == 0.0

    def test_closed_formulas(self):
        # s = sqrt(l^2 - alpha^2), theta = 2 alpha E / sqrt(tau), evaluated here
        # independently of the implementation.
        out = reduce(params_with_tau(1.0, m=1.0, p_z=0.0, alpha=0.1, l=1), energy=1.0)
        assert out.s == pytest.approx(math.sqrt(0.99), abs=0, rel=1e-15)
        assert out.theta == pytest.approx(0.2, abs=1e-15)

    def test_degenerate_tau(self):
        with pytest.raises(DomainError, match="degenerate"):
            reduce(params_with_tau(0.0), energy=1.0)

    @settings(max_examples=50)
    @given(
        alpha=st.floats(0.01, 1.4),
        energy=st.floats(-5.0, 5.0),
        tau=st.floats(0.01, 10.0),
    )
    def test_scale_consistency(self, alpha, energy, tau):
        # Doubling alpha at fixed E, tau doubles theta; s follows its closed form.
        one = reduce(params_with_tau(tau, alpha=alpha, l=3), energy)
        two = reduce(params_with_tau(tau, alpha=2.0 * alpha, l=3), energy)
        assert two.theta == pytest.approx(2.0 * one.theta, rel=1e-14, abs=1e-300)
        assert one.s == math.sqrt(9.0 - alpha * alpha)
        assert two.s == math.sqrt(9.0 - 4.0 * alpha * alpha)


class TestEnergyFromW:
    def test_tau_zero_decouples(self):
        assert energy_from_w(params_with_tau(0.0, m=1.0), w=123.0) == 1.0

    def test_pure_oscillator_scale(self):
        assert energy_from_w(params_with_tau(1.0, m=0.0), w=4.0) == 2.0

    def test_general_case(self):
        p = params_with_tau(2.0, m=1.0, p_z=1.0)
        assert energy_from_w(p, w=4.0) == pytest.approx(math.sqrt(10.0), rel=1e-15)

    def test_antiparticle_branch(self):
        p = params_with_tau(1.0, m=1.0)
        assert energy_from_w(p, w=3.0, antiparticle=True) == -energy_from_w(p, w=3.0)

    def test_negative_radicand(self):
        with pytest.raises(NoSolutionError):
            energy_from_w(params_with_tau(1.0, m=1.0), w=-2.0)

    @settings(max_examples=50)
    @given(
        m=st.floats(0.0, 10.0),
        p_z=st.floats(-5.0, 5.0),
        tau=st.floats(0.1, 10.0),
        w=st.floats(-0.5, 50.0),
    )
    def test_square_recovers_tau_w(self, m, p_z, tau, w):
        p = params_with_tau(tau, m=m, p_z=p_z)
        if m * m + p_z * p_z + tau * w < 0:
            return
        e = energy_from_w(p, w)
        assert e * e - (m * m + p_z * p_z) == pytest.approx(tau * w, rel=1e-12, abs=1e-12)
