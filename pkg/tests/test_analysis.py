import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cpless_ofdm.analysis import (
    asymptotic_sir,
    avg_delay_spread,
    ici_power,
    isi_power,
    pdp_dft,
    signal_power,
)
from cpless_ofdm.channel import PowerDelayProfile, exp_pdp

# Golden values for exp_pdp(15, 0.1), frozen from a long-double
# direct-summation script independent of this package.
GOLDEN_TAU = 5.200078192942
GOLDEN_PS_256 = 0.959786999183
GOLDEN_INTERF_256 = 2.213950811719e-02
GOLDEN_SIR_256 = 43.3517761145
GOLDEN_SIR_DB_256 = 16.3700689514
GOLDEN_SIR_DB_64 = 10.0415240646

FLAT2 = PowerDelayProfile(np.array([0.5, 0.5]))


class TestAvgDelaySpread:
    def test_single_tap(self):
        assert avg_delay_spread(PowerDelayProfile(np.array([1.0]))) == 0.0

    def test_symmetric_two_tap(self):
        assert avg_delay_spread(FLAT2) == pytest.approx(0.5, abs=1e-15)

    def test_golden_direct_summation(self):
        assert avg_delay_spread(exp_pdp(15, 0.1)) == pytest.approx(GOLDEN_TAU, abs=1e-9)


class TestPdpDft:
    def test_dc_is_one(self):
        assert pdp_dft(exp_pdp(7, 0.3), 32)[0] == pytest.approx(1.0, abs=1e-12)

    def test_delta_is_flat(self):
        assert_allclose(pdp_dft(PowerDelayProfile(np.array([1.0])), 8), np.ones(8), atol=1e-12)

    def test_single_delayed_tap_pure_phase(self):
        got = pdp_dft(PowerDelayProfile(np.array([0.0, 1.0])), 8)
        assert_allclose(got, np.exp(-2j * np.pi * np.arange(8) / 8), atol=1e-12)

    def test_magnitude_bounded(self):
        assert np.all(np.abs(pdp_dft(exp_pdp(15, 0.1), 256)) <= 1 + 1e-12)


class TestSignalPower:
    def test_no_dispersion(self):
        assert signal_power(PowerDelayProfile(np.array([1.0])), 64) == 1.0

    def test_delayed_tap_arithmetic(self):
        assert signal_power(PowerDelayProfile(np.array([0.0, 1.0])), 2) == pytest.approx(0.25, abs=1e-15)

    def test_composition_with_delay_spread(self):
        pdp = exp_pdp(15, 0.1)
        expected = (1 - avg_delay_spread(pdp) / 256) ** 2
        assert signal_power(pdp, 256) == pytest.approx(expected, abs=1e-15)
        assert signal_power(pdp, 256) == pytest.approx(GOLDEN_PS_256, abs=1e-9)


class TestIciPower:
    def test_flat_channel_no_ici(self):
        pdp = PowerDelayProfile(np.array([1.0]))
        assert ici_power(pdp, 16, 1) == pytest.approx(0.0, abs=1e-18)
        assert ici_power(pdp, 16, 7) == pytest.approx(0.0, abs=1e-18)

    def test_two_tap_arithmetic(self):
        # rhobar(1) = 0 at N=2, so the term is 1/(4*4*1) = 1/16.
        assert ici_power(FLAT2, 2, 1) == pytest.approx(1.0 / 16.0, abs=1e-15)

    def test_d_zero_rejected(self):
        with pytest.raises(ValueError, match="signal term"):
            ici_power(FLAT2, 2, 0)


class TestIsiPower:
    def test_flat_channel_d0(self):
        assert isi_power(PowerDelayProfile(np.array([1.0])), 16, 0) == 0.0

    def test_d0_composition(self):
        pdp = exp_pdp(15, 0.1)
        assert isi_power(pdp, 256, 0) == pytest.approx((GOLDEN_TAU / 256) ** 2, abs=1e-12)

    def test_matches_ici_away_from_zero(self):
        pdp = exp_pdp(15, 0.1)
        assert isi_power(pdp, 256, 5) == ici_power(pdp, 256, 5)


class TestAsymptoticSir:
    def test_flat_channel_infinite(self):
        terms = asymptotic_sir(PowerDelayProfile(np.array([1.0])), 64)
        assert terms.sir_linear == math.inf
        assert terms.sir_db == math.inf
        assert terms.p_signal == 1.0

    def test_two_tap_exact_arithmetic(self):
        # Hand arithmetic: P_s = (1 - 0.5/2)^2 = 9/16, P_ISI(0) = 1/16,
        # P_ICI(1) = P_ISI(1) = 1/16, so SIR = (9/16)/(3/16) = 3 exactly.
        terms = asymptotic_sir(FLAT2, 2)
        assert terms.p_signal == pytest.approx(9.0 / 16.0, abs=1e-15)
        assert terms.p_isi[0] == pytest.approx(1.0 / 16.0, abs=1e-15)
        assert terms.p_ici[0] == pytest.approx(1.0 / 16.0, abs=1e-15)
        assert terms.p_isi[1] == pytest.approx(1.0 / 16.0, abs=1e-15)
        assert terms.sir_linear == pytest.approx(3.0, abs=1e-12)

    def test_golden_saturation_sir(self):
        terms = asymptotic_sir(exp_pdp(15, 0.1), 256)
        assert terms.sir_linear == pytest.approx(GOLDEN_SIR_256, abs=1e-6)
        assert terms.sir_db == pytest.approx(GOLDEN_SIR_DB_256, abs=1e-7)
        assert terms.p_signal + terms.p_ici.sum() + terms.p_isi.sum() == pytest.approx(
            GOLDEN_PS_256 + GOLDEN_INTERF_256, abs=1e-9
        )

    def test_golden_n64(self):
        assert asymptotic_sir(exp_pdp(15, 0.1), 64).sir_db == pytest.approx(GOLDEN_SIR_DB_64, abs=1e-7)

    def test_internal_consistency_with_term_functions(self):
        pdp = exp_pdp(15, 0.1)
        N = 64
        terms = asymptotic_sir(pdp, N)
        assert terms.p_signal == pytest.approx(signal_power(pdp, N), abs=1e-14)
        for d in (1, 2, 31, 63):
            assert terms.p_ici[d - 1] == pytest.approx(ici_power(pdp, N, d), abs=1e-14)
            assert terms.p_isi[d] == pytest.approx(isi_power(pdp, N, d), abs=1e-14)
        assert terms.p_isi[0] == pytest.approx(isi_power(pdp, N, 0), abs=1e-14)
        total = terms.p_ici.sum() + terms.p_isi.sum()
        assert terms.sir_linear == pytest.approx(terms.p_signal / total, rel=1e-14)

    def test_all_powers_nonnegative(self):
        terms = asymptotic_sir(exp_pdp(15, 0.1), 128)
        assert terms.p_signal >= 0
        assert np.all(terms.p_ici >= 0)
        assert np.all(terms.p_isi >= 0)

    def test_monotone_in_delay_spread(self):
        # More concentrated PDP (larger alpha) means smaller tau, higher SIR.
        sirs = [asymptotic_sir(exp_pdp(15, a), 256).sir_db for a in (0.05, 0.1, 0.5, 1.0)]
        assert all(b > a for a, b in zip(sirs, sirs[1:]))

    def test_monotone_in_n(self):
        pdp = exp_pdp(15, 0.1)
        sirs = [asymptotic_sir(pdp, n).sir_db for n in (64, 128, 256)]
        assert all(b > a for a, b in zip(sirs, sirs[1:]))
