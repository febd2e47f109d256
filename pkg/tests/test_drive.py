import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spinchain as sc
from spinchain.state import INTERACTION, SCHRODINGER, StateVector


def random_unit_state(rng, dim):
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return amps / np.linalg.norm(amps)


@pytest.fixture
def pulse1(eq12):
    return sc.Pulse(carrier=sc.flip_resonance(eq12, 0, 0), angle=np.pi / 2)


class TestWElement:
    def test_single_flip_at_t0_phi0(self, eq12, pulse1):
        for k in range(8):
            for q in range(3):
                m = k ^ (1 << q)
                assert sc.w_element(eq12, pulse1, 0.0, m, k) == pytest.approx(
                    -0.5 * eq12.rabi)

    def test_two_bit_difference_is_zero(self, eq12, pulse1):
        assert sc.w_element(eq12, pulse1, 1.3, 0, 3) == 0.0
        assert sc.w_element(eq12, pulse1, 1.3, 7, 0) == 0.0

    def test_diagonal_is_zero(self, eq12, pulse1):
        for m in range(8):
            assert sc.w_element(eq12, pulse1, 0.7, m, m) == 0.0

    @given(t=st.floats(0.0, 10.0), phi=st.floats(0.0, 2 * np.pi),
           carrier=st.floats(1.0, 3000.0))
    @settings(max_examples=100, deadline=None)
    def test_hermitian_all_pairs(self, eq12, t, phi, carrier):
        pulse = sc.Pulse(carrier=carrier, angle=np.pi, phase=phi)
        for m in range(8):
            for k in range(8):
                assert sc.w_element(eq12, pulse, t, m, k) == pytest.approx(
                    np.conj(sc.w_element(eq12, pulse, t, k, m)))

    @pytest.mark.parametrize("n_spins", [3, 4])
    def test_hamming_sparsity(self, n_spins):
        larmor = tuple(100.0 * (q + 1) for q in range(n_spins))
        p = sc.ChainParams(larmor, 2.0, 0.5, 1.0)
        pulse = sc.Pulse(carrier=150.0, angle=np.pi, phase=0.3)
        w = sc.w_matrix(p, pulse, 0.42)
        for m in range(p.dim):
            for k in range(p.dim):
                if bin(m ^ k).count("1") == 1:
                    assert abs(w[m, k]) == pytest.approx(0.5 * p.rabi)
                else:
                    assert w[m, k] == 0.0

    def test_matrix_matches_elements(self, eq12, pulse1):
        w = sc.w_matrix(eq12, pulse1, 0.9)
        for m in range(8):
            for k in range(8):
                assert w[m, k] == pytest.approx(
                    sc.w_element(eq12, pulse1, 0.9, m, k))


class TestResonanceOrientation:
    def test_secular_term_on_resonance(self, eq12):
        # the product W_10 e^{i w_10 t} must be time independent at resonance
        carrier = sc.flip_resonance(eq12, 0, 0)
        pulse = sc.Pulse(carrier=carrier, angle=np.pi)
        w10 = sc.omega_mk(eq12, 1, 0)
        ts = np.linspace(0.0, 2 * np.pi / carrier, 400, endpoint=False)
        vals = np.array([sc.w_element(eq12, pulse, t, 1, 0) * np.exp(1j * w10 * t)
                         for t in ts])
        assert abs(vals.mean()) >= 0.5 * eq12.rabi * (1 - 1e-3)

    def test_secular_term_averages_out_when_detuned(self, eq12):
        # detune by 10 Omega and average over one beat period
        detuning = 10.0 * eq12.rabi
        carrier = sc.flip_resonance(eq12, 0, 0) + detuning
        pulse = sc.Pulse(carrier=carrier, angle=np.pi)
        w10 = sc.omega_mk(eq12, 1, 0)
        ts = np.linspace(0.0, 2 * np.pi / detuning, 4000, endpoint=False)
        vals = np.array([sc.w_element(eq12, pulse, t, 1, 0) * np.exp(1j * w10 * t)
                         for t in ts])
        assert abs(vals.mean()) < eq12.rabi / 20.0


class TestRhs:
    def test_zero_rabi_gives_zero_derivative(self):
        p = sc.ChainParams((100.0, 200.0, 400.0), 5.0, 0.2, 1e-300)
        pulse = sc.Pulse(carrier=100.0, angle=np.pi)
        d = random_unit_state(np.random.default_rng(0), 8)
        assert np.abs(sc.rhs(p, pulse, 0.3, d)).max() < 1e-290

    def test_ground_state_connectivity(self, eq12, pulse1):
        d = np.zeros(8, dtype=complex)
        d[0] = 1.0
        dot = sc.rhs(eq12, pulse1, 0.0, d)
        for m in (1, 2, 4):
            assert abs(dot[m]) == pytest.approx(0.5 * eq12.rabi)
        for m in (0, 3, 5, 6, 7):
            assert abs(dot[m]) < 1e-15

    def test_norm_derivative_vanishes(self, eq12, pulse1):
        rng = np.random.default_rng(7)
        for _ in range(20):
            d = random_unit_state(rng, 8)
            t = rng.uniform(0.0, 7.5)
            dot = sc.rhs(eq12, pulse1, t, d)
            growth = 2.0 * np.real(np.vdot(d, dot))
            assert abs(growth) < 1e-12

    def test_dimension_mismatch(self, eq12, pulse1):
        with pytest.raises(ValueError):
            sc.rhs(eq12, pulse1, 0.0, np.ones(4, dtype=complex))

    def test_rejects_schrodinger_picture(self, eq12, pulse1):
        d = StateVector(np.eye(8)[0], SCHRODINGER)
        with pytest.raises(ValueError):
            sc.rhs(eq12, pulse1, 0.0, d)


class TestPictureTransform:
    def test_identity_at_t0(self, eq12):
        rng = np.random.default_rng(1)
        d = StateVector(random_unit_state(rng, 8))
        c = sc.to_schrodinger(d, 0.0, eq12)
        np.testing.assert_allclose(c.amps, d.amps)
        assert c.picture == SCHRODINGER

    def test_pure_phase(self, eq12):
        rng = np.random.default_rng(2)
        d = StateVector(random_unit_state(rng, 8))
        for t in (0.1, 3.3, 7.5):
            c = sc.to_schrodinger(d, t, eq12)
            np.testing.assert_allclose(np.abs(c.amps), np.abs(d.amps),
                                       atol=1e-14)

    def test_round_trip(self, eq12):
        rng = np.random.default_rng(3)
        d = StateVector(random_unit_state(rng, 8))
        back = sc.to_interaction(sc.to_schrodinger(d, 7.5, eq12), 7.5, eq12)
        assert np.abs(back.amps - d.amps).max() < 1e-12
        assert back.picture == INTERACTION

    def test_picture_tags_enforced(self, eq12):
        d = StateVector(np.eye(8)[0], INTERACTION)
        with pytest.raises(ValueError):
            sc.to_interaction(d, 0.0, eq12)


def test_pulse_durations(eq12):
    half = sc.Pulse(carrier=1.0, angle=np.pi / 2)
    full = sc.Pulse(carrier=1.0, angle=np.pi)
    assert half.duration(eq12) == pytest.approx(np.pi / (2 * eq12.rabi))
    assert full.duration(eq12) == pytest.approx(np.pi / eq12.rabi)
    # the default protocol lasts 2.5 + 5.0 us at Omega = 2pi x 0.1 MHz
    assert half.duration(eq12) + full.duration(eq12) == pytest.approx(7.5)


def test_pulse_rejects_nonpositive_angle():
    with pytest.raises(ValueError):
        sc.Pulse(carrier=1.0, angle=0.0)
