import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermobound.qstate import (
    Hermitian2,
    StatePair,
    build_density_pair,
    check_orthogonality_lemma,
    eig2,
    even_mixture,
    mixture_spectrum,
    trace_distance_closed,
    trace_distance_oracle,
    von_neumann_entropy_even_mixture,
    von_neumann_entropy_oracle,
)

from conftest import H_075, numpy_entropy_bits, outer_pair

thetas = st.floats(0.0, math.pi / 2)
phis = st.floats(0.0, 2 * math.pi, exclude_max=True)


class TestStatePair:
    def test_overlap_magnitude_is_cos_theta(self):
        for theta in np.linspace(0, math.pi / 2, 7):
            for phi in (0.0, 1.0, 4.0):
                assert abs(StatePair(theta, phi).overlap()) == pytest.approx(math.cos(theta), abs=1e-15)

    def test_aux_orthogonal_to_psi1(self):
        pair = StatePair(0.3, 2.0)
        assert np.vdot(pair.psi1, pair.aux) == 0

    @pytest.mark.parametrize("theta,phi", [(-0.1, 0.0), (1.6, 0.0), (0.5, 2 * math.pi), (0.5, -1e-3)])
    def test_rejects_out_of_range(self, theta, phi):
        with pytest.raises(ValueError):
            StatePair(theta, phi)

    def test_from_cos(self):
        assert StatePair.from_cos(0.5).theta == pytest.approx(math.pi / 3)


class TestBuildDensityPair:
    def test_identical_states_at_theta_zero(self):
        for phi in (0.0, 1.7, 5.0):
            rho1, rho2 = build_density_pair(StatePair(0.0, phi))
            np.testing.assert_allclose(rho1.to_matrix(), rho2.to_matrix(), atol=1e-15)

    def test_orthogonal_basis_states(self):
        rho1, rho2 = build_density_pair(StatePair(math.pi / 2, 0.0))
        np.testing.assert_allclose(rho1.to_matrix(), np.diag([1, 0]), atol=1e-15)
        np.testing.assert_allclose(rho2.to_matrix(), np.diag([0, 1]), atol=1e-15)

    def test_offdiagonal_at_pi_over_3(self):
        _, rho2 = build_density_pair(StatePair(math.pi / 3, 0.0))
        assert rho2.offdiag == pytest.approx(math.sqrt(3) / 4, abs=1e-15)

    @given(thetas, phis)
    def test_matches_outer_product(self, theta, phi):
        rho1, rho2 = build_density_pair(StatePair(theta, phi))
        o1, o2 = outer_pair(theta, phi)
        np.testing.assert_allclose(rho1.to_matrix(), o1, atol=1e-15)
        np.testing.assert_allclose(rho2.to_matrix(), o2, atol=1e-15)

    @given(thetas, phis)
    def test_projectors(self, theta, phi):
        for rho in build_density_pair(StatePair(theta, phi)):
            assert rho.trace() == pytest.approx(1.0, abs=1e-12)
            hi, lo = eig2(rho)
            assert hi == pytest.approx(1.0, abs=1e-12)
            assert lo == pytest.approx(0.0, abs=1e-12)
            assert rho.is_density()


class TestEig2:
    def test_diag(self):
        assert eig2(Hermitian2(1.0, 0.0)) == (1.0, 0.0)

    def test_half_identity(self):
        assert eig2(Hermitian2(0.5, 0.5)) == (0.5, 0.5)

    def test_zero(self):
        assert eig2(Hermitian2(0.0, 0.0)) == (0.0, 0.0)

    def test_difference_at_pi_over_3(self):
        rho1, rho2 = build_density_pair(StatePair(math.pi / 3, 0.0))
        hi, lo = eig2(rho1 - rho2)
        assert hi == pytest.approx(0.8660254037844386, abs=1e-12)
        assert lo == pytest.approx(-0.8660254037844386, abs=1e-12)

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_against_eigvalsh(self, a, d, re, im):
        h = Hermitian2(a, d, re, im)
        hi, lo = eig2(h)
        ref = np.linalg.eigvalsh(h.to_matrix())
        assert hi >= lo
        np.testing.assert_allclose([lo, hi], ref, atol=1e-12 * max(1.0, abs(ref).max()))
        assert hi + lo == pytest.approx(h.trace(), abs=1e-12 * max(1.0, abs(ref).max()))

    @given(thetas, phis)
    def test_difference_spectrum_is_plus_minus_sin(self, theta, phi):
        rho1, rho2 = build_density_pair(StatePair(theta, phi))
        hi, lo = eig2(rho1 - rho2)
        assert hi == pytest.approx(math.sin(theta), abs=1e-12)
        assert lo == pytest.approx(-math.sin(theta), abs=1e-12)


class TestTraceDistance:
    @pytest.mark.parametrize("theta,expected", [(0.0, 0.0), (math.pi / 2, 2.0),
                                                (math.pi / 3, math.sqrt(3))])
    def test_values(self, theta, expected):
        assert trace_distance_closed(theta) == pytest.approx(expected, abs=1e-15)
        pair = build_density_pair(StatePair(theta, 0.0))
        assert trace_distance_oracle(*pair) == pytest.approx(expected, abs=1e-12)

    def test_grid(self, theta_grid):
        err = max(abs(trace_distance_closed(t) - trace_distance_oracle(*build_density_pair(StatePair(t, 0.9))))
                  for t in theta_grid)
        assert err <= 1e-12


class TestMixture:
    @pytest.mark.parametrize("theta,expected", [(math.pi / 2, (0.5, 0.5)), (0.0, (1.0, 0.0)),
                                                (math.pi / 3, (0.75, 0.25))])
    def test_spectrum(self, theta, expected):
        spectrum = mixture_spectrum(theta)
        assert tuple(spectrum) == pytest.approx(expected, abs=1e-15)
        assert eig2(even_mixture(StatePair(theta, 0.0))) == pytest.approx(expected, abs=1e-12)

    @given(thetas)
    def test_spectrum_sums_to_one_exactly(self, theta):
        spectrum = mixture_spectrum(theta)
        assert spectrum.c + spectrum.one_minus_c == 1.0
        assert 0.5 <= spectrum.c <= 1.0

    @pytest.mark.parametrize("theta,expected", [(math.pi / 2, 1.0), (0.0, 0.0), (math.pi / 3, H_075)])
    def test_entropy(self, theta, expected):
        assert von_neumann_entropy_even_mixture(theta) == pytest.approx(expected, abs=1e-12)

    def test_entropy_vs_eigen_oracles(self, theta_grid):
        for t in theta_grid:
            closed = von_neumann_entropy_even_mixture(t)
            assert abs(closed - von_neumann_entropy_oracle(StatePair(t, 0.4))) <= 1e-12
            o1, o2 = outer_pair(t, 0.4)
            assert abs(closed - numpy_entropy_bits((o1 + o2) / 2)) <= 1e-12

    @settings(max_examples=50)
    @given(thetas, phis, phis)
    def test_phase_invariance(self, theta, phi_a, phi_b):
        a, b = StatePair(theta, phi_a), StatePair(theta, phi_b)
        assert eig2(even_mixture(a)) == pytest.approx(eig2(even_mixture(b)), abs=1e-12)
        da, db = build_density_pair(a), build_density_pair(b)
        assert eig2(da[0] - da[1]) == pytest.approx(eig2(db[0] - db[1]), abs=1e-12)
        assert trace_distance_oracle(*da) == pytest.approx(trace_distance_oracle(*db), abs=1e-12)
        assert von_neumann_entropy_oracle(a) == pytest.approx(von_neumann_entropy_oracle(b), abs=1e-12)


class TestOrthogonalityLemma:
    @pytest.mark.parametrize("theta", [math.pi / 2, math.pi / 4, 0.0])
    def test_examples(self, theta):
        assert check_orthogonality_lemma(theta)

    def test_pi_over_4_is_not_half(self):
        assert mixture_spectrum(math.pi / 4).c == pytest.approx((1 + math.sqrt(2) / 2) / 2)

    @given(thetas)
    def test_property(self, theta):
        assert check_orthogonality_lemma(theta)

    def test_exact_at_float_level(self):
        assert mixture_spectrum(math.pi / 2).c == 0.5
        below = np.nextafter(math.pi / 2, 0.0)
        assert mixture_spectrum(below).c != 0.5
