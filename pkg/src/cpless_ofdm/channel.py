"""Multipath channel models for the uplink.

Power delay profiles, i.i.d. complex Gaussian channel sampling, the
multiuser uplink (sum of per-user linear convolutions plus AWGN), and the
time-domain ISI/ICI Toeplitz matrices used as the validation route against
the convolution pipeline.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .numerics import next_pow2

# Tolerance on the unit-sum invariant of a normalized PDP.
_PDP_SUM_TOL = 1e-12


@dataclass(frozen=True)
class PowerDelayProfile:
    """Normalized per-tap average powers rho(0..L-1)."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=float)
        if taps.ndim != 1 or taps.size == 0:
            raise ValueError("PDP must be a nonempty 1-D vector")
        if np.any(taps < 0):
            raise ValueError("PDP taps must be nonnegative")
        if abs(taps.sum() - 1.0) > _PDP_SUM_TOL:
            raise ValueError(f"PDP must sum to 1 (got {taps.sum()!r})")
        object.__setattr__(self, "taps", taps)

    @property
    def L(self):
        return self.taps.size


@dataclass(frozen=True)
class ChannelSet:
    """One realization of all K-by-M channel impulse responses, length L each."""

    cirs: np.ndarray  # (K, M, L) complex

    def __post_init__(self):
        cirs = np.asarray(self.cirs, dtype=np.complex128)
        if cirs.ndim != 3:
            raise ValueError("cirs must have shape (K, M, L)")
        object.__setattr__(self, "cirs", cirs)

    @property
    def K(self):
        return self.cirs.shape[0]

    @property
    def M(self):
        return self.cirs.shape[1]

    @property
    def L(self):
        return self.cirs.shape[2]


def make_rng(seed, trial=None):
    """Reproducible generator; (seed, trial) pairs give independent streams.

    Seeding with the entropy pair makes per-trial streams independent of
    scheduling order, so parallel sweeps reduce to bit-identical results.
    """
    if trial is None:
        return np.random.default_rng(seed)
    return np.random.default_rng([seed, trial])


def exp_pdp(L, alpha):
    """Exponentially decaying normalized PDP: rho(l) = e^{-alpha l} / sum."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    w = np.exp(-alpha * np.arange(L, dtype=float))
    return PowerDelayProfile(w / w.sum())


def load_pdp(path):
    """Read a PDP from a text file, one nonnegative tap power per line.

    Auto-normalizes, warning if the file's sum deviates from 1 by more
    than 1e-6.
    """
    taps = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#")[0].strip()
            if line:
                taps.append(float(line))
    taps = np.asarray(taps, dtype=float)
    if taps.size == 0:
        raise ValueError(f"no taps found in {path}")
    if np.any(taps < 0):
        raise ValueError("PDP taps must be nonnegative")
    total = taps.sum()
    if total <= 0:
        raise ValueError("PDP taps sum to zero")
    if abs(total - 1.0) > 1e-6:
        warnings.warn(f"PDP in {path} sums to {total:.6g}; normalizing", stacklevel=2)
    return PowerDelayProfile(taps / total)


def sample_channels(pdp, K, M, rng):
    """Draw h_{k,m} ~ CN(0, diag(rho)), independent across users and antennas.

    Variance rho(l) per tap, split equally between real and imaginary parts.
    """
    if K < 1 or M < 1:
        raise ValueError("K and M must be >= 1")
    scale = np.sqrt(pdp.taps / 2.0)
    h = rng.standard_normal((K, M, pdp.L)) + 1j * rng.standard_normal((K, M, pdp.L))
    return ChannelSet(h * scale)


def awgn(length, noise_var, rng):
    """i.i.d. CN(0, noise_var) samples; noise_var = 0 gives exact zeros."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if noise_var < 0:
        raise ValueError("noise variance must be nonnegative")
    if noise_var == 0:
        return np.zeros(length, dtype=np.complex128)
    s = np.sqrt(noise_var / 2.0)
    return s * (rng.standard_normal(length) + 1j * rng.standard_normal(length))


def apply_uplink(channels, tx, noise_var, rng):
    """Received signal per antenna: r_m = sum_k x_k * h_{k,m} + nu_m.

    tx is (K, NQ); the output is (M, P) with P = NQ + L - 1. Noise is drawn
    after the signal part so a noiseless run consumes no random samples.
    """
    tx = np.asarray(tx, dtype=np.complex128)
    if tx.ndim != 2:
        raise ValueError("tx must be (K, NQ)")
    if tx.shape[0] != channels.K:
        raise ValueError(f"tx has {tx.shape[0]} users, channels have {channels.K}")
    nq = tx.shape[1]
    P = nq + channels.L - 1
    r = _multiuser_convolve(channels.cirs, tx, P)
    if noise_var > 0:
        s = np.sqrt(noise_var / 2.0)
        r = r + s * (rng.standard_normal(r.shape) + 1j * rng.standard_normal(r.shape))
    elif noise_var < 0:
        raise ValueError("noise variance must be nonnegative")
    return r


def _multiuser_convolve(cirs, tx, P, chunk=128):
    """FFT-based sum_k x_k * h_{k,m}, chunked over antennas to bound memory."""
    K, M, L = cirs.shape
    nfft = next_pow2(P)
    X = np.fft.fft(tx, nfft, axis=1)  # (K, nfft)
    r = np.empty((M, P), dtype=np.complex128)
    for m0 in range(0, M, chunk):
        m1 = min(m0 + chunk, M)
        Hf = np.fft.fft(cirs[:, m0:m1], nfft, axis=2)  # (K, mc, nfft)
        acc = np.einsum("kf,kmf->mf", X, Hf)
        r[m0:m1] = np.fft.ifft(acc, axis=1)[:, :P]
    return r


def build_isi_ici_matrices(h, N):
    """Time-domain ISI and ICI matrices of one CIR for an N-sample window.

    H_ICI is lower-triangular banded Toeplitz with first column
    [h(0), ..., h(L-1), 0, ...]; H_ISI holds the tail taps h(1..L-1) in its
    top-right triangle, modeling leakage from the previous symbol. Their
    shifted sum reproduces linear convolution across consecutive symbols.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 1 or h.size == 0:
        raise ValueError("h must be a nonempty vector")
    L = h.size
    if L > N:
        raise ValueError("channel longer than symbol")
    H_ici = np.zeros((N, N), dtype=np.complex128)
    H_isi = np.zeros((N, N), dtype=np.complex128)
    idx = np.arange(N)
    diff = idx[:, None] - idx[None, :]  # n - q
    band = (diff >= 0) & (diff <= L - 1)
    H_ici[band] = h[diff[band]]
    tail = (diff + N >= 1) & (diff + N <= L - 1)
    H_isi[tail] = h[diff[tail] + N]
    return H_isi, H_ici
