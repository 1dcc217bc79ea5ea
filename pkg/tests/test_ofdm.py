import numpy as np
import pytest
from numpy.testing import assert_allclose

from cpless_ofdm.channel import ChannelSet, apply_uplink, exp_pdp, make_rng, sample_channels
from cpless_ofdm.ofdm import FrameConfig, demodulate_window, demodulate_windows, interior_symbols, modulate


def random_grid(cfg, seed):
    rng = make_rng(seed)
    g = rng.standard_normal((cfg.N, cfg.Q)) + 1j * rng.standard_normal((cfg.N, cfg.Q))
    return g


class TestFrameConfig:
    def test_lengths(self):
        cfg = FrameConfig(N=8, Q=3, cp_len=2)
        assert cfg.symbol_len == 10
        assert cfg.frame_len == 30

    @pytest.mark.parametrize("kwargs", [dict(N=1, Q=1), dict(N=4, Q=0), dict(N=4, Q=1, cp_len=4), dict(N=4, Q=1, cp_len=-1)])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            FrameConfig(**kwargs)


class TestModulate:
    def test_dc_symbol(self):
        cfg = FrameConfig(N=4, Q=1)
        d = np.array([[2.0], [0.0], [0.0], [0.0]])
        assert_allclose(modulate(d, cfg), [1, 1, 1, 1], atol=1e-12)

    def test_cp_copy_rule(self):
        cfg_nocp = FrameConfig(N=4, Q=1)
        cfg = FrameConfig(N=4, Q=1, cp_len=2)
        d = random_grid(cfg, 5)
        x = modulate(d, cfg_nocp)  # [a, b, c, e]
        a, b, c, e = x
        assert_allclose(modulate(d, cfg), [c, e, a, b, c, e], atol=1e-12)

    def test_energy_preserved_cpless(self):
        cfg = FrameConfig(N=16, Q=4)
        d = random_grid(cfg, 6)
        x = modulate(d, cfg)
        for i in range(cfg.Q):
            sym = x[i * cfg.N : (i + 1) * cfg.N]
            assert abs(np.linalg.norm(sym) - np.linalg.norm(d[:, i])) <= 1e-12 * np.linalg.norm(d[:, i])

    def test_dimension_mismatch_rejected(self):
        cfg = FrameConfig(N=4, Q=2)
        with pytest.raises(ValueError, match="grid shape"):
            modulate(np.zeros((4, 3)), cfg)


class TestDemodulateWindow:
    @pytest.mark.parametrize("N", [16, 256])
    def test_round_trip_identity_channel(self, N):
        cfg = FrameConfig(N=N, Q=3)
        d = random_grid(cfg, N)
        x = modulate(d, cfg)
        for i in range(cfg.Q):
            assert_allclose(demodulate_window(x, i, cfg), d[:, i], atol=1e-10)

    def test_cp_mode_discards_prefix(self):
        cfg = FrameConfig(N=8, Q=2, cp_len=3)
        d = random_grid(cfg, 9)
        x = modulate(d, cfg)
        for i in range(cfg.Q):
            assert_allclose(demodulate_window(x, i, cfg), d[:, i], atol=1e-10)

    def test_cp_mode_circular_channel_model(self):
        # With cp_len >= L-1 the per-subcarrier model d_hat(p) = htilde(p) d(p)
        # holds exactly on every symbol.
        N, Q, L = 32, 4, 5
        cfg = FrameConfig(N=N, Q=Q, cp_len=L - 1)
        d = random_grid(cfg, 10)
        ch = sample_channels(exp_pdp(L, 0.2), 1, 1, make_rng(3))
        r = apply_uplink(ch, modulate(d, cfg)[None, :], 0.0, make_rng(0))
        htilde = np.fft.fft(ch.cirs[0, 0], N)
        for i in range(Q):
            got = demodulate_window(r[0], i, cfg)
            assert_allclose(got, htilde * d[:, i], atol=1e-10)

    def test_delay_shifts_window(self):
        cfg = FrameConfig(N=4, Q=2)
        r = np.arange(12, dtype=complex)
        direct = demodulate_window(np.roll(r, -2)[: cfg.frame_len], 0, cfg)
        assert_allclose(demodulate_window(r, 0, cfg, delay=2), direct, atol=1e-12)

    def test_out_of_range_rejected(self):
        cfg = FrameConfig(N=8, Q=1)
        with pytest.raises(ValueError, match="out of range"):
            demodulate_window(np.zeros(8, dtype=complex), 0, cfg, delay=1)
        with pytest.raises(ValueError, match="out of range"):
            demodulate_window(np.zeros(8, dtype=complex), 0, cfg, delay=-1)

    def test_stacked_matches_single(self):
        cfg = FrameConfig(N=8, Q=4)
        rng = make_rng(12)
        r = rng.standard_normal((3, cfg.frame_len + 7)) + 1j * rng.standard_normal((3, cfg.frame_len + 7))
        got = demodulate_windows(r, cfg, symbols=[1, 2], delay=3)
        assert got.shape == (2, 3, 8)
        for wi, i in enumerate([1, 2]):
            for s in range(3):
                assert_allclose(got[wi, s], demodulate_window(r[s], i, cfg, delay=3), atol=1e-12)


def test_interior_symbols():
    assert interior_symbols(FrameConfig(N=4, Q=10)) == list(range(1, 9))
    assert interior_symbols(FrameConfig(N=4, Q=10), interior_only=False) == list(range(10))
    assert interior_symbols(FrameConfig(N=4, Q=2)) == [0, 1]


def test_identity_channel_single_symbol_flat():
    ch = ChannelSet(np.ones((1, 1, 1), dtype=complex))
    cfg = FrameConfig(N=16, Q=1)
    d = random_grid(cfg, 1)
    r = apply_uplink(ch, modulate(d, cfg)[None, :], 0.0, make_rng(0))
    assert_allclose(demodulate_window(r[0], 0, cfg), d[:, 0], atol=1e-10)
