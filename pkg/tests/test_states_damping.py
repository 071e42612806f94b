import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripartite_esd.damping import (
    DampingParams,
    ad_coefficients,
    apply_amplitude_damping,
    purified_evolution,
)
from tripartite_esd.measures import is_x_form
from tripartite_esd.states import Kind, StateFamily, ghz_w_mixture, make_state, mix
from tripartite_esd.tensor import DensityMatrix, PureState, random_density_matrix, random_pure_state

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
times = st.floats(min_value=0.0, max_value=8.0, allow_nan=False)
seeds = st.integers(min_value=0, max_value=2**32 - 1)

R2, R3 = math.sqrt(2), math.sqrt(3)


def ket(**amps):
    vec = np.zeros(8, dtype=complex)
    for bits, a in amps.items():
        vec[int(bits[1:], 2)] = a
    return vec


class TestFamilies:
    def test_ghz(self):
        np.testing.assert_allclose(make_state(StateFamily(Kind.GHZ)).amplitudes,
                                   ket(b000=1 / R2, b111=1 / R2), atol=1e-15)

    def test_w(self):
        np.testing.assert_allclose(make_state(StateFamily(Kind.W)).amplitudes,
                                   ket(b100=1 / R3, b010=1 / R3, b001=1 / R3), atol=1e-15)

    def test_g_theta_at_quarter_turn_is_ghz(self):
        g = make_state(StateFamily(Kind.G_THETA, math.pi / 4)).amplitudes
        np.testing.assert_allclose(g, make_state(StateFamily(Kind.GHZ)).amplitudes, atol=1e-15)

    def test_w_theta_symmetric_point_is_w(self):
        w = make_state(StateFamily(Kind.W_THETA, math.acos(1 / R3))).amplitudes
        np.testing.assert_allclose(w, make_state(StateFamily(Kind.W)).amplitudes, atol=1e-15)

    def test_explicit_kets(self):
        th = 0.37
        c, s = math.cos(th), math.sin(th)
        cases = {
            Kind.G_THETA: ket(b111=c, b000=s),
            Kind.W_THETA: ket(b100=c, b010=s / R2, b001=s / R2),
            Kind.WBAR_THETA: ket(b011=c, b101=s / R2, b110=s / R2),
            Kind.SIGMA_THETA: ket(b111=c, b100=s / R3, b010=s / R3, b001=s / R3),
        }
        for kind, want in cases.items():
            np.testing.assert_allclose(make_state(StateFamily(kind, th)).amplitudes, want, atol=1e-15)

    def test_kind_from_string(self):
        assert StateFamily("w-theta", 0.1).kind is Kind.W_THETA

    def test_non_finite_theta(self):
        with pytest.raises(ValueError):
            StateFamily(Kind.G_THETA, float("nan"))

    @given(st.sampled_from(list(Kind)), angles)
    @settings(max_examples=1000, deadline=None)
    def test_unit_norm(self, kind, theta):
        amps = make_state(StateFamily(kind, theta)).amplitudes
        assert abs(np.linalg.norm(amps) - 1) <= 1e-12

    @given(angles)
    @settings(max_examples=200, deadline=None)
    def test_w_and_wbar_related_by_global_flip(self, theta):
        w = make_state(StateFamily(Kind.W_THETA, theta)).amplitudes
        wbar = make_state(StateFamily(Kind.WBAR_THETA, theta)).amplitudes
        assert np.max(np.abs(w[::-1] - wbar)) <= 1e-12


class TestMix:
    def test_single_component(self):
        g = make_state(StateFamily(Kind.GHZ))
        np.testing.assert_allclose(mix([(1.0, g)]).matrix, np.outer(g.amplitudes, g.amplitudes.conj()))

    def test_half_half_matches_mixture(self):
        g, w = make_state(StateFamily(Kind.GHZ)), make_state(StateFamily(Kind.W))
        np.testing.assert_allclose(mix([(0.5, g), (0.5, w)]).matrix, ghz_w_mixture(0.5).matrix)

    def test_orthogonal_components(self):
        rho = mix([(0.3, PureState.basis("000")), (0.7, PureState.basis("111"))])
        want = np.zeros((8, 8))
        want[0, 0], want[7, 7] = 0.3, 0.7
        np.testing.assert_allclose(rho.matrix, want)

    @pytest.mark.parametrize("weights", [(0.5, 0.6), (1.2, -0.2), (0.5, 0.5 + 1e-9)])
    def test_bad_weights(self, weights):
        g = make_state(StateFamily(Kind.GHZ))
        with pytest.raises(ValueError):
            mix([(weights[0], g), (weights[1], g)])

    @given(seeds, st.integers(1, 6))
    @settings(max_examples=50, deadline=None)
    def test_output_is_density_matrix(self, seed, k):
        rng = np.random.default_rng(seed)
        w = rng.dirichlet(np.ones(k))
        w[-1] = 1 - w[:-1].sum()
        rho = mix([(float(x), random_pure_state(3, rng)) for x in w])
        assert isinstance(rho, DensityMatrix)


class TestCoefficients:
    def test_no_decay(self):
        assert ad_coefficients(DampingParams(0.0)) == (1.0, 0.0)

    def test_half_life(self):
        p, q = ad_coefficients(DampingParams(math.log(2)))
        assert abs(p - 1 / R2) < 1e-15 and abs(q - 1 / R2) < 1e-15

    def test_full_decay(self):
        p, q = ad_coefficients(DampingParams(100.0))
        assert p <= 1e-21 and abs(q - 1) <= 1e-14

    def test_tau_scaling(self):
        assert ad_coefficients(DampingParams(2.0, tau=4.0)) == ad_coefficients(DampingParams(0.5))

    @given(times)
    @settings(max_examples=200, deadline=None)
    def test_unit_sum(self, t):
        p, q = ad_coefficients(DampingParams(t))
        assert abs(p * p + q * q - 1) <= 1e-14

    @pytest.mark.parametrize("t,tau", [(-0.1, 1.0), (1.0, 0.0), (1.0, -2.0), (float("inf"), 1.0)])
    def test_bad_params(self, t, tau):
        with pytest.raises(ValueError):
            DampingParams(t, tau)


def binomial_populations(p2):
    # independent decay of three excitations: a basis state keeps each 1 w.p. p^2
    out = np.zeros(8)
    for b in range(8):
        k = bin(b).count("1")
        out[b] = p2**k * (1 - p2) ** (3 - k)
    return out


class TestChannel:
    def test_identity_at_zero(self):
        rho = random_density_matrix(3, np.random.default_rng(3))
        out = apply_amplitude_damping(rho, DampingParams(0.0))
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-15)

    def test_excited_populations(self):
        params = DampingParams(math.log(2))
        rho = PureState.basis("111").projector()
        oracle = purified_evolution(PureState.basis("111"), params)
        want = binomial_populations(0.5)
        assert abs(want[7] - 1 / 8) < 1e-15
        np.testing.assert_allclose(np.diag(oracle.matrix).real, want, atol=1e-14)
        np.testing.assert_allclose(np.diag(apply_amplitude_damping(rho, params).matrix).real, want, atol=1e-14)

    @pytest.mark.parametrize("theta,t", [(0.3, 0.2), (1.1, 0.9), (math.pi / 4, 2.5)])
    def test_g_theta_coherence(self, theta, t):
        psi = make_state(StateFamily(Kind.G_THETA, theta))
        p, _ = ad_coefficients(DampingParams(t))
        want = math.sin(theta) * math.cos(theta) * p**3
        oracle = purified_evolution(psi, DampingParams(t)).matrix[7, 0]
        got = apply_amplitude_damping(psi.projector(), DampingParams(t)).matrix[7, 0]
        assert abs(oracle - want) < 1e-14
        assert abs(got - want) < 1e-14

    def test_ground_state_fixed(self):
        g = PureState.basis("000")
        for t in (0.0, 0.4, 7.0):
            out = apply_amplitude_damping(g.projector(), DampingParams(t)).matrix
            assert np.array_equal(out, g.projector().matrix)
            np.testing.assert_allclose(purified_evolution(g, DampingParams(t)).matrix, g.projector().matrix)

    def test_purification_at_zero_time(self):
        psi = make_state(StateFamily(Kind.G_THETA, math.pi / 4))
        np.testing.assert_allclose(purified_evolution(psi, DampingParams(0.0)).matrix,
                                   psi.projector().matrix, atol=1e-15)

    def test_kraus_matches_purification_random(self):
        rng = np.random.default_rng(20240517)
        worst = 0.0
        for _ in range(100):
            psi = random_pure_state(3, rng)
            params = DampingParams(float(rng.uniform(0, 5)), float(rng.uniform(0.2, 3)))
            a = apply_amplitude_damping(psi.projector(), params).matrix
            b = purified_evolution(psi, params).matrix
            worst = max(worst, np.max(np.abs(a - b)))
        assert worst <= 1e-12

    def test_rejects_raw_arrays(self):
        with pytest.raises(ValueError):
            apply_amplitude_damping(np.eye(8) / 8, DampingParams(0.1))

    @given(seeds, times)
    @settings(max_examples=1000, deadline=None)
    def test_output_valid(self, seed, t):
        rho = random_density_matrix(3, np.random.default_rng(seed))
        assert isinstance(apply_amplitude_damping(rho, DampingParams(t)), DensityMatrix)

    @given(seeds, times, times)
    @settings(max_examples=100, deadline=None)
    def test_semigroup(self, seed, t1, t2):
        rho = random_density_matrix(3, np.random.default_rng(seed))
        two = apply_amplitude_damping(apply_amplitude_damping(rho, DampingParams(t1)), DampingParams(t2))
        one = apply_amplitude_damping(rho, DampingParams(t1 + t2))
        assert np.max(np.abs(two.matrix - one.matrix)) <= 1e-12

    @given(angles, times)
    @settings(max_examples=200, deadline=None)
    def test_g_theta_stays_x_form(self, theta, t):
        psi = make_state(StateFamily(Kind.G_THETA, theta))
        out = apply_amplitude_damping(psi.projector(), DampingParams(t))
        assert is_x_form(out, tol=1e-12)

    def test_w_theta_leaves_x_form(self):
        psi = make_state(StateFamily(Kind.W_THETA, 0.7))
        out = apply_amplitude_damping(psi.projector(), DampingParams(0.5))
        assert not is_x_form(out)
