"""Experiment harnesses: exact output decomposition and SINR/BER sweeps.

Every receiver here is linear in the transmitted signals and in the noise,
so its output on a given trial splits exactly, by superposition, into the
responses to (a) the desired user's desired-subcarrier content, (b) the
same symbol's other-subcarrier content (ICI), (c) the desired user's
adjacent symbols (ISI), (d) the other users' entire content (MUI), and
(e) the noise. The decomposition runs the chain on each part separately
with the combining weights held fixed, and audits that the parts rebuild
the full-chain output sample by sample.

Per-trial streams derive from (seed, trial_index), so parallel sweeps are
bit-identical to serial ones. The per-trial draw order is channels, then
data bits, then noise.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import apply_uplink, awgn, exp_pdp, load_pdp, make_rng, sample_channels
from .equalizers import (
    freq_responses,
    tr_channel_matrix,
    tr_mrc,
    tr_zf_detect_batched,
    zf_weights,
    _gtilde_diag_taps,
    _guard_stack_condition,
)
from .numerics import SingularSystemError, next_pow2
from .ofdm import FrameConfig, demodulate_windows, interior_symbols, modulate

RECEIVERS = ("mrc", "zf", "tr-mrc", "tr-zf", "cp-zf")
CONSTELLATIONS = ("qpsk", "qam16")

SNR_DEFINITION = "per-user-per-antenna; noise_var=10^(-snr_db/10); unit per-sample tx power per user"


@dataclass
class SimConfig:
    """One experiment description; defaults follow the reference instance."""

    N: int = 256
    L: int = 15
    alpha: float = 0.1
    K: int = 10
    Q: int = 10
    M_list: list = field(default_factory=lambda: [64, 128, 256, 512])
    snr_db_list: list = field(default_factory=lambda: [10.0])
    trials: int = 100
    seed: int = 1234
    receiver: str = "mrc"
    constellation: str = "qam16"
    cp_len: int | None = None
    interior_only: bool = True
    pdp_file: str | None = None

    def validate(self):
        if self.receiver not in RECEIVERS:
            raise ValueError(f"unknown receiver {self.receiver!r}; choose from {RECEIVERS}")
        if self.constellation not in CONSTELLATIONS:
            raise ValueError(f"unknown constellation {self.constellation!r}")
        if self.N < 2 or self.L < 1 or self.K < 1 or self.Q < 1 or self.trials < 1:
            raise ValueError("N, L, K, Q, trials must be positive (N >= 2)")
        if self.L > self.N:
            raise ValueError("channel longer than symbol (L > N)")
        if not self.M_list or any(m < 1 for m in self.M_list):
            raise ValueError("M_list must hold positive antenna counts")
        if self.receiver in ("zf", "tr-zf", "cp-zf") and min(self.M_list) < self.K:
            raise ValueError(f"{self.receiver} needs M >= K for every M in M_list")
        if self.receiver in ("tr-mrc", "tr-zf") and 2 * self.L - 1 > self.N:
            raise ValueError("time-reversal receivers need 2L-1 <= N")
        if self.receiver == "cp-zf" and self.resolved_cp_len() < self.L - 1:
            raise ValueError("cp-zf needs cp_len >= L-1")
        if self.cp_len is not None and not 0 <= self.cp_len < self.N:
            raise ValueError("cp_len must satisfy 0 <= cp_len < N")
        return self

    def resolved_cp_len(self):
        """Cyclic-prefix length in samples: L-1 by default for cp-zf, else 0."""
        if self.receiver != "cp-zf":
            return 0
        return self.L - 1 if self.cp_len is None else self.cp_len

    def pdp(self):
        if self.pdp_file:
            return load_pdp(self.pdp_file)
        return exp_pdp(self.L, self.alpha)

    def frame(self):
        return FrameConfig(N=self.N, Q=self.Q, cp_len=self.resolved_cp_len())


@dataclass(frozen=True)
class SinrBreakdown:
    """Per-subcarrier average component powers of one trial, plus ratios.

    reconstruction_rel_error is the audited superposition residual
    ||y_total - sum_c y_c|| / ||y_total|| over all targets and windows.
    """

    p_signal: float
    p_ici: float
    p_isi: float
    p_mui: float
    p_noise: float
    sinr_db: float
    sir_db: float
    reconstruction_rel_error: float


@dataclass(frozen=True)
class SweepRow:
    receiver: str
    M: int
    K: int
    N: int
    L: int
    alpha: float
    snr_db: float
    trials: int
    failed_trials: int
    metric_name: str
    metric_value: float
    stderr: float


@dataclass(frozen=True)
class SweepResult:
    rows: list
    seed: int
    snr_definition: str = SNR_DEFINITION


# ---------------------------------------------------------------------------
# QAM mapping


def qam_map(bits, constellation="qam16"):
    """Gray-mapped unit-average-energy symbols from a flat 0/1 bit array."""
    bits = np.asarray(bits)
    bps = 2 if constellation == "qpsk" else 4
    if constellation not in CONSTELLATIONS:
        raise ValueError(f"unknown constellation {constellation!r}")
    if bits.size % bps:
        raise ValueError(f"bit count {bits.size} not divisible by {bps}")
    b = bits.reshape(-1, bps)
    if constellation == "qpsk":
        return ((2 * b[:, 0] - 1) + 1j * (2 * b[:, 1] - 1)) / np.sqrt(2)
    # per-axis Gray code: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
    i_level = (2 * b[:, 0] - 1) * (3 - 2 * b[:, 1])
    q_level = (2 * b[:, 2] - 1) * (3 - 2 * b[:, 3])
    return (i_level + 1j * q_level) / np.sqrt(10)


def qam_demap(symbols, constellation="qam16"):
    """Hard-decision inverse of qam_map; returns a flat 0/1 int array."""
    s = np.asarray(symbols).reshape(-1)
    if constellation == "qpsk":
        bits = np.empty((s.size, 2), dtype=np.int64)
        bits[:, 0] = s.real > 0
        bits[:, 1] = s.imag > 0
        return bits.reshape(-1)
    if constellation != "qam16":
        raise ValueError(f"unknown constellation {constellation!r}")
    x = s.real * np.sqrt(10)
    y = s.imag * np.sqrt(10)
    bits = np.empty((s.size, 4), dtype=np.int64)
    bits[:, 0] = x > 0
    bits[:, 1] = np.abs(x) < 2
    bits[:, 2] = y > 0
    bits[:, 3] = np.abs(y) < 2
    return bits.reshape(-1)


def bits_per_symbol(constellation):
    return 2 if constellation == "qpsk" else 4


# ---------------------------------------------------------------------------
# shared per-trial plumbing


def _noise_var(snr_db):
    return 0.0 if math.isinf(snr_db) else 10.0 ** (-snr_db / 10.0)


def _ratio_db(ratio):
    if ratio == math.inf:
        return math.inf
    if ratio <= 0:
        return -math.inf
    return 10 * math.log10(ratio)


def _draw_frame(cfg, channels, rng):
    """Data bits, mapped symbol grids (K, Q, N), and serialized tx (K, frame_len)."""
    bps = bits_per_symbol(cfg.constellation)
    bits = rng.integers(0, 2, size=(cfg.K, cfg.Q, cfg.N, bps))
    d = qam_map(bits.reshape(-1), cfg.constellation).reshape(cfg.K, cfg.Q, cfg.N)
    frame = cfg.frame()
    tx = np.stack([modulate(d[k].T, frame) for k in range(cfg.K)])
    return bits, d, tx


def _symbol_blocks(cirs_f, tx, q, seg_len, blen, nfft):
    """Per-user, per-antenna linear-convolution block of symbol q."""
    seg = tx[:, q * seg_len : (q + 1) * seg_len]
    X = np.fft.fft(seg, nfft, axis=1)
    return np.fft.ifft(X[:, None, :] * cirs_f, axis=2)[..., :blen]


def _combining_weights(cfg, channels, fr):
    """Per-target linear weights w[k, m, p] with the receiver's normalization."""
    if cfg.receiver == "mrc":
        gamma = fr.responses
        norms = np.sum(np.abs(gamma) ** 2, axis=1)  # (K, N)
        if np.any(norms == 0):
            k, p = np.argwhere(norms == 0)[0]
            raise SingularSystemError("dead subcarrier", subcarrier=int(p), user=int(k))
        return np.conj(gamma) / norms[:, None, :]
    W = zf_weights(fr)  # (N, K, M)
    return np.transpose(W, (1, 2, 0))  # (K, M, N)


def _signal_coefficients(cfg, channels, w):
    """Realized diagonal gain A[k, p] of the same-symbol response.

    Without a CP the window truncates each Toeplitz diagonal, so the
    diagonal response is sum_l h(l) e^{-j2pi lp/N} (N-l)/N; with a CP at
    least L-1 long the channel is circular and the plain frequency response
    applies (making A exactly 1 for ZF weights).
    """
    N = cfg.N
    if cfg.resolved_cp_len() >= cfg.L - 1 and cfg.receiver == "cp-zf":
        xi = np.fft.fft(channels.cirs, N, axis=2)
    else:
        wgt = (N - np.arange(cfg.L)) / N
        xi = np.fft.fft(channels.cirs * wgt, N, axis=2)
    return np.einsum("kmp,kmp->kp", w, xi), xi


def _accumulate(acc, name, values):
    acc[name] += np.sum(np.abs(values) ** 2, axis=0)


def _conventional_trial(cfg, channels, d, tx, noise_var, rng):
    """Component power sums for mrc / zf / cp-zf on one channel realization."""
    N, L, K, M = cfg.N, cfg.L, channels.K, channels.M
    frame = cfg.frame()
    cp = frame.cp_len
    windows = interior_symbols(frame, cfg.interior_only)

    r_sig = apply_uplink(channels, tx, 0.0, rng)
    P = r_sig.shape[1]
    noise = awgn(M * P, noise_var, rng).reshape(M, P) if noise_var > 0 else None
    r_tot = r_sig + noise if noise is not None else r_sig

    fr = freq_responses(channels, N)
    w = _combining_weights(cfg, channels, fr)
    A, _ = _signal_coefficients(cfg, channels, w)

    # independent full-sequence route for the audit and the MUI split
    D_tot = demodulate_windows(r_tot, frame, windows)  # (W, M, N)
    D_noise = demodulate_windows(noise, frame, windows) if noise is not None else None

    seg_len = frame.symbol_len
    blen = seg_len + L - 1
    nfft = next_pow2(blen)
    cirs_f = np.fft.fft(channels.cirs, nfft, axis=2)

    acc = {name: np.zeros(N) for name in ("signal", "ici", "isi", "mui", "noise")}
    recon_num = recon_den = 0.0
    samples = 0

    prev_block = None
    cur_block = _symbol_blocks(cirs_f, tx, 0, seg_len, blen, nfft)
    window_pos = {i: wi for wi, i in enumerate(windows)}
    for i in range(frame.Q):
        if i + 1 < frame.Q:
            next_block = _symbol_blocks(cirs_f, tx, i + 1, seg_len, blen, nfft)
        else:
            next_block = None
        if i in window_pos:
            wi = window_pos[i]
            head = cur_block[:, :, cp : cp + N]
            D_same = np.fft.fft(head, axis=2, norm="ortho")  # (K, M, N)
            if cp >= L - 1 or prev_block is None:
                D_isi = None
            else:
                isi_td = np.zeros_like(head)
                isi_td[:, :, : L - 1] = prev_block[:, :, seg_len : seg_len + L - 1]
                D_isi = np.fft.fft(isi_td, axis=2, norm="ortho")

            own = D_same if D_isi is None else D_same + D_isi
            allsig = np.sum(own, axis=0)  # (M, N)

            tot = np.einsum("kmp,mp->kp", w, D_tot[wi])
            sig = A * d[:, i, :]
            same = np.einsum("kmp,kmp->kp", w, D_same)
            ici = same - sig
            isi = (
                np.einsum("kmp,kmp->kp", w, D_isi)
                if D_isi is not None
                else np.zeros_like(sig)
            )
            mui = np.einsum("kmp,mp->kp", w, allsig) - np.einsum("kmp,kmp->kp", w, own)
            noi = (
                np.einsum("kmp,mp->kp", w, D_noise[wi])
                if D_noise is not None
                else np.zeros_like(sig)
            )

            _accumulate(acc, "signal", sig)
            _accumulate(acc, "ici", ici)
            _accumulate(acc, "isi", isi)
            _accumulate(acc, "mui", mui)
            _accumulate(acc, "noise", noi)
            resid = tot - (sig + ici + isi + mui + noi)
            recon_num += float(np.sum(np.abs(resid) ** 2))
            recon_den += float(np.sum(np.abs(tot) ** 2))
            samples += K
        prev_block, cur_block = cur_block, next_block
    return acc, samples, recon_num, recon_den


def _tr_noise_sequences(channels, noise, out_len, nfft, chunk=64):
    """nu^TR_k = (1/sqrt(M)) sum_m nu_m * hbreve_{k,m} for all users at once."""
    K, M, L = channels.cirs.shape
    acc = np.zeros((K, nfft), dtype=np.complex128)
    hrev = np.conj(channels.cirs[:, :, ::-1])
    for m0 in range(0, M, chunk):
        m1 = min(m0 + chunk, M)
        Vf = np.fft.fft(noise[m0:m1], nfft, axis=1)
        Hb = np.fft.fft(hrev[:, m0:m1], nfft, axis=2)
        acc += np.einsum("mf,kmf->kf", Vf, Hb)
    return np.fft.ifft(acc, axis=1)[:, :out_len] / np.sqrt(M)


def _tr_trial(cfg, channels, d, tx, noise_var, rng):
    """Component power sums for tr-mrc / tr-zf on one channel realization."""
    N, L, K, M = cfg.N, cfg.L, channels.K, channels.M
    frame = cfg.frame()
    delay = L - 1
    windows = interior_symbols(frame, cfg.interior_only)

    gmat = tr_channel_matrix(channels)  # (K, K, 2L-1)
    gdiag = _gtilde_diag_taps(np.einsum("kkl->kl", gmat), N)  # (K, N)
    gstack = np.transpose(_gtilde_diag_taps(gmat, N), (2, 0, 1))  # (N, K, K)
    if cfg.receiver == "tr-zf":
        _guard_stack_condition(gstack)

    # full-sequence route: y_kj = g_kj * x_j, then the total with TR noise
    P = frame.frame_len + L - 1
    y_len = P + L - 1
    F = next_pow2(y_len)
    Xf = np.fft.fft(tx, F, axis=1)  # (K, F)
    Gf = np.fft.fft(gmat, F, axis=2)
    y = np.fft.ifft(Gf * Xf[None, :, :], axis=2)[..., :y_len]  # (K, K, y_len)
    y_tot = np.sum(y, axis=1)
    if noise_var > 0:
        noise = awgn(M * P, noise_var, rng).reshape(M, P)
        nu_tr = _tr_noise_sequences(channels, noise, y_len, F)
        y_tot = y_tot + nu_tr
    else:
        nu_tr = None

    D_tot = demodulate_windows(y_tot, frame, windows, delay=delay)  # (W, K, N)
    D_noise = (
        demodulate_windows(nu_tr, frame, windows, delay=delay) if nu_tr is not None else None
    )

    # block route per (branch k, source j) pair for the component split
    blen = N + 2 * L - 2
    nfft = next_pow2(blen)
    Gf2 = np.fft.fft(gmat, nfft, axis=2)  # (K, K, nfft)

    def pair_blocks(q):
        Xq = np.fft.fft(tx[:, q * N : (q + 1) * N], nfft, axis=1)  # (K, nfft)
        return np.fft.ifft(Gf2 * Xq[None, :, :], axis=2)[..., :blen]

    acc = {name: np.zeros(N) for name in ("signal", "ici", "isi", "mui", "noise")}
    recon_num = recon_den = 0.0
    samples = 0
    diag = np.arange(K)

    prev_block = None
    cur_block = pair_blocks(0)
    window_pos = {i: wi for wi, i in enumerate(windows)}
    for i in range(frame.Q):
        next_block = pair_blocks(i + 1) if i + 1 < frame.Q else None
        if i in window_pos:
            wi = window_pos[i]
            same_td = cur_block[:, :, delay : delay + N]  # (K, K, N)
            isi_td = np.zeros_like(same_td)
            if prev_block is not None:
                isi_td[:, :, : L - 1] += prev_block[:, :, N + L - 1 :]
            if next_block is not None:
                isi_td[:, :, N - L + 1 :] += next_block[:, :, : L - 1]
            D_same = np.fft.fft(same_td, axis=2, norm="ortho")
            D_isi = np.fft.fft(isi_td, axis=2, norm="ortho")

            if cfg.receiver == "tr-mrc":
                own_same = D_same[diag, diag]  # (K, N)
                own_isi = D_isi[diag, diag]
                sig = gdiag * d[:, i, :]
                ici = own_same - sig
                other = D_same + D_isi
                mui = np.sum(other, axis=1) - own_same - own_isi
                noi = D_noise[wi] if D_noise is not None else np.zeros_like(sig)
                tot = D_tot[wi]
                isi = own_isi
            else:  # tr-zf: solve every component stack against Gtilde_p
                n_rhs = 2 + 3 * K
                rhs = np.empty((K, N, n_rhs), dtype=np.complex128)
                rhs[:, :, 0] = D_tot[wi]
                rhs[:, :, 1] = D_noise[wi] if D_noise is not None else 0.0
                allsrc = np.sum(D_same + D_isi, axis=1)  # (K, N)
                for k in range(K):
                    rhs[:, :, 2 + 3 * k] = D_same[:, k, :]
                    rhs[:, :, 3 + 3 * k] = D_isi[:, k, :]
                    rhs[:, :, 4 + 3 * k] = allsrc - D_same[:, k, :] - D_isi[:, k, :]
                sol = np.linalg.solve(gstack, np.transpose(rhs, (1, 0, 2)))  # (N, K, n_rhs)
                tot = np.transpose(sol[:, :, 0])  # (K, N)
                noi = np.transpose(sol[:, :, 1])
                sig = d[:, i, :]
                own_same = np.stack([sol[:, k, 2 + 3 * k] for k in range(K)])
                isi = np.stack([sol[:, k, 3 + 3 * k] for k in range(K)])
                mui = np.stack([sol[:, k, 4 + 3 * k] for k in range(K)])
                ici = own_same - sig

            _accumulate(acc, "signal", sig)
            _accumulate(acc, "ici", ici)
            _accumulate(acc, "isi", isi)
            _accumulate(acc, "mui", mui)
            _accumulate(acc, "noise", noi)
            resid = tot - (sig + ici + isi + mui + noi)
            recon_num += float(np.sum(np.abs(resid) ** 2))
            recon_den += float(np.sum(np.abs(tot) ** 2))
            samples += K
        prev_block, cur_block = cur_block, next_block
    return acc, samples, recon_num, recon_den


def _trial_component_sums(cfg, M, snr_db, trial):
    """One full trial: sample, transmit, decompose; per-subcarrier power sums."""
    rng = make_rng(cfg.seed, trial)
    channels = sample_channels(cfg.pdp(), cfg.K, M, rng)
    bits, d, tx = _draw_frame(cfg, channels, rng)
    noise_var = _noise_var(snr_db)
    if cfg.receiver in ("tr-mrc", "tr-zf"):
        return _tr_trial(cfg, channels, d, tx, noise_var, rng)
    return _conventional_trial(cfg, channels, d, tx, noise_var, rng)


def decompose(cfg, channels, rng, tx_scale=1.0):
    """Exact signal/ICI/ISI/MUI/noise split of one trial on given channels.

    Uses the first entry of cfg.snr_db_list for the noise level; tx_scale
    scales the transmitted frame (0 gives the noise-only sanity case).
    Returns per-subcarrier average powers pooled over users and interior
    symbols, the resulting SINR/SIR, and the audited superposition residual.
    """
    cfg.validate()
    if channels.K != cfg.K or channels.L != cfg.L:
        raise ValueError("channels do not match cfg (K or L differs)")
    bits, d, tx = _draw_frame(cfg, channels, rng)
    d = d * tx_scale
    tx = tx * tx_scale
    noise_var = _noise_var(cfg.snr_db_list[0])
    if cfg.receiver in ("tr-mrc", "tr-zf"):
        acc, samples, recon_num, recon_den = _tr_trial(cfg, channels, d, tx, noise_var, rng)
    else:
        acc, samples, recon_num, recon_den = _conventional_trial(
            cfg, channels, d, tx, noise_var, rng
        )
    means = {name: float(np.mean(vals)) / samples for name, vals in acc.items()}
    interference = means["ici"] + means["isi"] + means["mui"]
    sir = means["signal"] / interference if interference > 0 else math.inf
    denom = interference + means["noise"]
    sinr = means["signal"] / denom if denom > 0 else math.inf
    recon = math.sqrt(recon_num / recon_den) if recon_den > 0 else 0.0
    return SinrBreakdown(
        p_signal=means["signal"],
        p_ici=means["ici"],
        p_isi=means["isi"],
        p_mui=means["mui"],
        p_noise=means["noise"],
        sinr_db=_ratio_db(sinr),
        sir_db=_ratio_db(sir),
        reconstruction_rel_error=recon,
    )


# ---------------------------------------------------------------------------
# parallel trial execution


def _worker_count():
    env = os.environ.get("SIM_THREADS", "0")
    try:
        n = int(env)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _sinr_worker(args):
    cfg, M, snr_db, trial = args
    try:
        return trial, _trial_component_sums(cfg, M, snr_db, trial), None
    except SingularSystemError as err:
        return trial, None, str(err)


def _run_parallel(worker, arglist):
    workers = _worker_count()
    if workers <= 1 or len(arglist) <= 1:
        return [worker(a) for a in arglist]
    chunk = max(1, len(arglist) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, arglist, chunksize=chunk))


def pooled_components(cfg, M, snr_db):
    """Run cfg.trials trials at one (M, snr) point; pool per-subcarrier powers.

    Returns (pooled, per_trial_sinr_lin, failed) where pooled maps component
    name to the per-subcarrier power sums over all successful trials.
    """
    args = [(cfg, M, snr_db, t) for t in range(cfg.trials)]
    results = _run_parallel(_sinr_worker, args)
    pooled = {name: np.zeros(cfg.N) for name in ("signal", "ici", "isi", "mui", "noise")}
    per_trial = []
    failed = 0
    for trial, payload, err in sorted(results, key=lambda r: r[0]):
        if err is not None:
            failed += 1
            continue
        acc, samples, recon_num, recon_den = payload
        if recon_den > 0 and math.sqrt(recon_num / recon_den) > 1e-6:
            raise ArithmeticError(
                f"superposition audit failed on trial {trial}: "
                f"residual {math.sqrt(recon_num / recon_den):.3e}"
            )
        for name in pooled:
            pooled[name] += acc[name]
        denom = acc["ici"] + acc["isi"] + acc["mui"] + acc["noise"]
        with np.errstate(divide="ignore"):
            ratios = np.where(denom > 0, acc["signal"] / np.maximum(denom, 1e-300), np.inf)
        per_trial.append(float(np.mean(ratios)))
    return pooled, per_trial, failed


def _sinr_from_pooled(pooled):
    denom = pooled["ici"] + pooled["isi"] + pooled["mui"] + pooled["noise"]
    if np.all(denom == 0):
        return math.inf
    with np.errstate(divide="ignore"):
        ratios = np.where(denom > 0, pooled["signal"] / np.maximum(denom, 1e-300), np.inf)
    mean = float(np.mean(ratios))
    return _ratio_db(mean) if math.isfinite(mean) else math.inf


def _stderr_db(per_trial):
    """Delta-method standard error in dB of the mean linear SINR."""
    vals = np.asarray([v for v in per_trial if math.isfinite(v)])
    if vals.size < 2:
        return math.nan
    mean = vals.mean()
    if mean <= 0:
        return math.nan
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    return float(10.0 / math.log(10.0) * se / mean)


def sweep_sinr(cfg):
    """SINR versus antenna count (and SNR): one row per (M, snr_db).

    The metric is the arithmetic mean over subcarriers of the per-subcarrier
    linear SINR, with powers pooled over trials, users, and interior symbols
    before the ratio; stderr comes from the spread of per-trial aggregates.
    """
    cfg.validate()
    rows = []
    for M in cfg.M_list:
        for snr_db in cfg.snr_db_list:
            pooled, per_trial, failed = pooled_components(cfg, M, snr_db)
            rows.append(
                SweepRow(
                    receiver=cfg.receiver,
                    M=M,
                    K=cfg.K,
                    N=cfg.N,
                    L=cfg.L,
                    alpha=cfg.alpha,
                    snr_db=snr_db,
                    trials=cfg.trials,
                    failed_trials=failed,
                    metric_name="sinr_db",
                    metric_value=_sinr_from_pooled(pooled),
                    stderr=_stderr_db(per_trial),
                )
            )
    rows.sort(key=lambda r: (r.receiver, r.M, r.snr_db))
    return SweepResult(rows=rows, seed=cfg.seed)


# ---------------------------------------------------------------------------
# BER sweep


def _detect_frame(cfg, channels, r, windows):
    """Hard-decision-ready symbol estimates (W, K, N) for the configured receiver."""
    N, L, K = cfg.N, cfg.L, cfg.K
    frame = cfg.frame()
    receiver = cfg.receiver
    if receiver in ("mrc", "zf", "cp-zf"):
        fr = freq_responses(channels, N)
        w = _combining_weights(cfg, channels, fr)
        A, _ = _signal_coefficients(cfg, channels, w)
        D = demodulate_windows(r, frame, windows)  # (W, M, N)
        out = np.einsum("kmp,wmp->wkp", w, D)
        return out / A[None, :, :]
    # time-reversal branch: filter per target user, window with delay L-1
    gmat = tr_channel_matrix(channels)
    tr_seq = np.stack([tr_mrc(r, channels, k) for k in range(K)])  # (K, P+L-1)
    D = demodulate_windows(tr_seq, frame, windows, delay=L - 1)  # (W, K, N)
    if receiver == "tr-mrc":
        gdiag = _gtilde_diag_taps(np.einsum("kkl->kl", gmat), N)  # (K, N)
        return D / gdiag[None, :, :]
    gstack = np.transpose(_gtilde_diag_taps(gmat, N), (2, 0, 1))  # (N, K, K)
    return np.stack([tr_zf_detect_batched(D[wi], gstack) for wi in range(len(windows))])


def _ber_worker(args):
    cfg, M, snr_db, trial = args
    try:
        rng = make_rng(cfg.seed, trial)
        channels = sample_channels(cfg.pdp(), cfg.K, M, rng)
        bits, d, tx = _draw_frame(cfg, channels, rng)
        r = apply_uplink(channels, tx, _noise_var(snr_db), rng)
        frame = cfg.frame()
        windows = interior_symbols(frame, cfg.interior_only)
        detected = _detect_frame(cfg, channels, r, windows)
        errors = 0
        for wi, i in enumerate(windows):
            got = qam_demap(detected[wi].reshape(-1), cfg.constellation)
            sent = bits[:, i, :, :].reshape(-1)
            errors += int(np.sum(got != sent))
        total = len(windows) * cfg.K * cfg.N * bits_per_symbol(cfg.constellation)
        return trial, (errors, total), None
    except SingularSystemError as err:
        return trial, None, str(err)


def sweep_ber(cfg):
    """Uncoded hard-decision BER per (M, snr_db); Gray-mapped constellations."""
    cfg.validate()
    rows = []
    for M in cfg.M_list:
        for snr_db in cfg.snr_db_list:
            args = [(cfg, M, snr_db, t) for t in range(cfg.trials)]
            results = _run_parallel(_ber_worker, args)
            errors = bits = failed = 0
            per_trial = []
            for trial, payload, err in sorted(results, key=lambda r: r[0]):
                if err is not None:
                    failed += 1
                    continue
                e, b = payload
                errors += e
                bits += b
                per_trial.append(e / b)
            ber = errors / bits if bits else math.nan
            if len(per_trial) >= 2:
                stderr = float(np.std(per_trial, ddof=1) / math.sqrt(len(per_trial)))
            else:
                stderr = math.nan
            rows.append(
                SweepRow(
                    receiver=cfg.receiver,
                    M=M,
                    K=cfg.K,
                    N=cfg.N,
                    L=cfg.L,
                    alpha=cfg.alpha,
                    snr_db=snr_db,
                    trials=cfg.trials,
                    failed_trials=failed,
                    metric_name="ber",
                    metric_value=ber,
                    stderr=stderr,
                )
            )
    rows.sort(key=lambda r: (r.receiver, r.M, r.snr_db))
    return SweepResult(rows=rows, seed=cfg.seed)
