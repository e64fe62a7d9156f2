import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from satsteer import gaussian as g
from satsteer import steering as st_
from satsteer.channel import final_cm_closed, propagate_two_mode

LN_COSH2 = 1.3250027473578644  # mpmath
# mpmath, 40 digits, from the (s=1, theta=0.9) channel-output matrix
G_AB_09 = 0.9031282255956960
G_BA_09 = 0.7528893786219950
ASYM_09 = 0.1502388469737010

grid_s = np.linspace(0, 3, 13)
grid_theta = np.linspace(0, 1, 21)


class TestGeneralMeasure:
    def test_product_state(self):
        sig = np.diag([3.0, 3.0, 2.0, 2.0])
        assert st_.gaussian_steering(sig, [0]) == 0.0
        assert st_.gaussian_steering(sig, [1]) == 0.0

    @pytest.mark.parametrize("party", [[0], [1]])
    def test_pure_tmss(self, party):
        sig = g.two_mode_squeezed_cm(1.0)
        assert st_.gaussian_steering(sig, party) == pytest.approx(LN_COSH2, rel=1e-13)

    def test_frozen_channel_values(self):
        sig = final_cm_closed(1.0, 0.9)
        assert st_.gaussian_steering(sig, [0]) == pytest.approx(G_AB_09, rel=1e-13)
        assert st_.gaussian_steering(sig, [1]) == pytest.approx(G_BA_09, rel=1e-13)

    @pytest.mark.parametrize("s", grid_s)
    @pytest.mark.parametrize("theta", [0.0, 0.3, 0.77, 1.0])
    def test_entropy_route_agrees(self, s, theta):
        sig = final_cm_closed(s, theta)
        for party in ([0], [1]):
            assert st_.gaussian_steering(sig, party) == pytest.approx(
                st_.renyi_steering(sig, party), abs=1e-10
            )

    def test_multimode_steered_party(self):
        # one mode steering a two-mode party goes through the eigenvalue route
        sig = g.initial_four_mode_cm(0.8)[:6, :6]
        assert st_.gaussian_steering(sig, [0]) == pytest.approx(
            math.log(math.cosh(1.6)), rel=1e-12
        )

    def test_rejects_unphysical(self):
        with pytest.raises(ValueError):
            st_.gaussian_steering(0.5 * np.eye(4), [0])

    def test_entropy_route_needs_single_steered_mode(self):
        with pytest.raises(ValueError):
            st_.renyi_steering(np.eye(6), [0])


class TestClosedForms:
    def test_frozen_values(self):
        assert st_.steering_ab_closed(1.0, 0.9) == pytest.approx(G_AB_09, rel=1e-14)
        assert st_.steering_ba_closed(1.0, 0.9) == pytest.approx(G_BA_09, rel=1e-14)
        assert st_.steering_asymmetry(1.0, 0.9).asymmetry == pytest.approx(ASYM_09, rel=1e-13)

    @pytest.mark.parametrize("s", grid_s)
    def test_lossless(self, s):
        want = math.log(math.cosh(2 * s))
        assert st_.steering_ab_closed(s, 1.0) == pytest.approx(want, abs=1e-13)
        assert st_.steering_ba_closed(s, 1.0) == pytest.approx(want, abs=1e-13)
        assert st_.steering_asymmetry(s, 1.0).asymmetry < 1e-14

    @pytest.mark.parametrize("s", grid_s)
    def test_full_loss(self, s):
        r = st_.steering_asymmetry(s, 0.0)
        assert r.g_ab == 0.0 and r.g_ba == 0.0 and r.asymmetry == 0.0

    @pytest.mark.parametrize("theta", grid_theta)
    def test_no_squeezing(self, theta):
        assert st_.steering_ab_closed(0.0, theta) == 0.0
        assert st_.steering_ba_closed(0.0, theta) == 0.0

    def test_ba_below_ab(self):
        assert st_.steering_ba_closed(1.0, 0.9) < st_.steering_ab_closed(1.0, 0.9)

    @pytest.mark.parametrize("s", grid_s)
    @pytest.mark.parametrize("theta", grid_theta)
    def test_match_schur_measure_on_pipeline(self, s, theta):
        sig = propagate_two_mode(s, theta, dtype=np.longdouble)
        assert st_.steering_ab_closed(s, theta) == pytest.approx(
            st_.gaussian_steering(sig, [0], check=False), abs=1e-12, rel=1e-12
        )
        assert st_.steering_ba_closed(s, theta) == pytest.approx(
            st_.gaussian_steering(sig, [1], check=False), abs=1e-12, rel=1e-12
        )

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 3), st.floats(0, 1))
    def test_properties(self, s, theta):
        r = st_.steering_asymmetry(s, theta)
        assert r.g_ab >= r.g_ba >= 0
        assert r.asymmetry == abs(r.g_ab - r.g_ba)
        assert r.g_ab <= st_.lossless_steering(s) + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 3), st.floats(0, 0.99))
    def test_monotone_in_theta(self, s, theta):
        hi = min(1.0, theta + 0.01)
        assert st_.steering_ab_closed(s, hi) >= st_.steering_ab_closed(s, theta)
        assert st_.steering_ba_closed(s, hi) >= st_.steering_ba_closed(s, theta)

    @pytest.mark.parametrize("s, theta", [(-0.1, 0.5), (1.0, -0.1), (1.0, 1.1), (np.nan, 0.5)])
    def test_rejects_bad_input(self, s, theta):
        with pytest.raises(ValueError):
            st_.steering_asymmetry(s, theta)


class TestPerturbative:
    def test_lossless(self):
        assert st_.steering_ab_perturbative(1.0, 0.0, 5e14, 1e6) == st_.lossless_steering(1.0)
        assert st_.steering_ba_perturbative(1.0, 0.0, 5e14, 1e6) == st_.lossless_steering(1.0)

    def test_loss_parameter(self):
        assert st_.loss_parameter(1e-12, 5e14, 1e6) == pytest.approx(1.25e-7, rel=1e-14)

    def test_quoted_correction(self):
        g0 = st_.lossless_steering(1.0)
        corr = g0 - st_.steering_ab_perturbative(1.0, 1e-12, 5e14, 1e6)
        assert corr == pytest.approx(1.726372306927e-7, rel=1e-6)

    def test_ba_below_ab(self):
        args = (1.0, 1e-10, 5e14, 1e6)
        assert st_.steering_ba_perturbative(*args) < st_.steering_ab_perturbative(*args)

    @pytest.mark.parametrize("x", [0.01, 0.03, 0.1])
    def test_agrees_with_closed_form(self, x):
        # x = delta * Omega / sigma; closed form evaluated at the quadratic overlap
        delta = x * 1e6 / 5e14
        theta = 1 - x * x / 8
        y = x * x / 8
        ab = st_.steering_ab_perturbative(1.0, delta, 5e14, 1e6)
        ba = st_.steering_ba_perturbative(1.0, delta, 5e14, 1e6)
        u = math.sinh(1.0) ** 2
        # ln(1 + z) remainder plus the y^2 term of theta^2; coefficient 8u^2 + 2u
        coeff = 8 * u * u + 2 * u
        assert st_.steering_ab_closed(1.0, theta) - ab == pytest.approx(coeff * y * y, rel=0.02)
        assert abs(ba - st_.steering_ba_closed(1.0, theta)) <= coeff * y * y

    def test_warns_outside_validity(self):
        with pytest.warns(RuntimeWarning):
            st_.steering_ab_perturbative(1.0, 1e-8, 5e14, 1e6)


class TestDoubleAngleVariants:
    def test_lossless_value_differs(self):
        assert st_.g0_double_angle(1.0) != pytest.approx(st_.lossless_steering(1.0))
        assert st_.g0_double_angle(0.0) == 0.0

    def test_variants_run(self):
        assert st_.steering_ab_double_angle(1.0, 1.0) == pytest.approx(st_.g0_double_angle(1.0))
        assert st_.steering_ba_double_angle(1.0, 0.0) == 0.0
        assert st_.steering_ba_perturbative_double_angle(1.0, 0.0, 5e14, 1e6) == st_.g0_double_angle(1.0)
