"""The four receivers under study.

Conventional per-subcarrier MRC and frequency-domain ZF operate on the
windowed DFT outputs of each antenna. The time-reversal pair first filters
each antenna with the conjugated, time-reversed channel of the target user
and sums across antennas, collapsing the array into one equivalent channel
g_kk (plus cross-talk channels g_kj); TR-ZF then removes the per-subcarrier
cross-talk with a K-by-K solve built from the diagonal effective gains.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import COND_LIMIT, SingularSystemError, next_pow2, solve_linear


@dataclass(frozen=True)
class FreqResponseSet:
    """Per-user, per-antenna N-point frequency responses (unnormalized DFT)."""

    responses: np.ndarray  # (K, M, N): htilde_{k,m}(p) = sum_l h(l) e^{-j2pi lp/N}

    @property
    def K(self):
        return self.responses.shape[0]

    @property
    def M(self):
        return self.responses.shape[1]

    @property
    def N(self):
        return self.responses.shape[2]


@dataclass(frozen=True)
class TrChannel:
    """Equivalent time-reversal channel g_kj, lags -(L-1)..L-1.

    taps[l + L - 1] holds g(l); for j = k the center tap is real-positive
    (a sum of |h|^2 terms over antennas, scaled by 1/sqrt(M)).
    """

    taps: np.ndarray  # length 2L-1
    k: int
    j: int

    @property
    def L(self):
        return (self.taps.size + 1) // 2


def freq_responses(channels, N):
    """htilde_{k,m}(p) = sum_l h_{k,m}(l) e^{-j2pi lp/N} for all users/antennas."""
    if channels.L > N:
        raise ValueError("channel longer than symbol")
    return FreqResponseSet(np.fft.fft(channels.cirs, N, axis=2))


def mrc_combine(demod, fr, k):
    """Matched-filter combining: d_hat(p) = psi_p^H r_tilde(p), psi = gamma/|gamma|^2."""
    demod = np.asarray(demod, dtype=np.complex128)
    gamma = fr.responses[k]  # (M, N)
    if demod.shape != gamma.shape:
        raise ValueError(f"demod shape {demod.shape} does not match (M={fr.M}, N={fr.N})")
    norms = np.sum(np.abs(gamma) ** 2, axis=0)
    dead = np.flatnonzero(norms == 0)
    if dead.size:
        raise SingularSystemError("dead subcarrier", subcarrier=int(dead[0]), user=k)
    return np.einsum("mp,mp->p", np.conj(gamma), demod) / norms


def zf_combine_freq(demod, fr):
    """Per-subcarrier left-inverse of the M-by-K channel matrix, all users at once.

    Solves the normal equations (Gamma_p^H Gamma_p) d = Gamma_p^H r_tilde(p)
    for every subcarrier; a normal matrix with condition estimate beyond
    COND_LIMIT marks a rank-deficient channel and aborts with the subcarrier
    index attached.
    """
    demod = np.asarray(demod, dtype=np.complex128)
    if demod.shape != (fr.M, fr.N):
        raise ValueError(f"demod shape {demod.shape} does not match (M={fr.M}, N={fr.N})")
    if fr.M < fr.K:
        raise ValueError("ZF needs M >= K")
    gam = np.transpose(fr.responses, (2, 1, 0))  # (N, M, K)
    normal = np.conj(np.transpose(gam, (0, 2, 1))) @ gam  # (N, K, K)
    rhs = np.einsum("pmk,mp->pk", np.conj(gam), demod)  # (N, K)
    _guard_stack_condition(normal)
    return np.linalg.solve(normal, rhs[..., None])[..., 0].T  # (K, N)


def zf_weights(fr):
    """Rows of the per-subcarrier left-inverse: W[p, k, :] detects user k at p."""
    gam = np.transpose(fr.responses, (2, 1, 0))  # (N, M, K)
    gam_h = np.conj(np.transpose(gam, (0, 2, 1)))  # (N, K, M)
    normal = gam_h @ gam
    _guard_stack_condition(normal)
    return np.linalg.solve(normal, gam_h)  # (N, K, M)


def _guard_stack_condition(stack):
    """Raise SingularSystemError (with subcarrier index) on ill-conditioned slabs."""
    if stack.shape[-1] == 1:
        bad = np.abs(stack[..., 0, 0]) == 0
    else:
        conds = np.linalg.cond(stack)
        bad = ~np.isfinite(conds) | (conds > COND_LIMIT)
    if np.any(bad):
        raise SingularSystemError(subcarrier=int(np.flatnonzero(bad)[0]))


def tr_filter_bank(channels, k):
    """Conjugated time-reversed filters of user k: hbreve_{k,m}(i) = h*(L-1-i)."""
    return np.conj(channels.cirs[k, :, ::-1])


def tr_mrc(received, channels, k, chunk=256):
    """Time-reversal MRC: (1/sqrt(M)) sum_m r_m * hbreve_{k,m}; length P+L-1."""
    received = np.asarray(received, dtype=np.complex128)
    if received.ndim != 2 or received.shape[0] != channels.M:
        raise ValueError(f"received must be (M={channels.M}, P)")
    P = received.shape[1]
    out_len = P + channels.L - 1
    nfft = next_pow2(out_len)
    hrev = tr_filter_bank(channels, k)
    acc = np.zeros(nfft, dtype=np.complex128)
    for m0 in range(0, channels.M, chunk):
        m1 = min(m0 + chunk, channels.M)
        R = np.fft.fft(received[m0:m1], nfft, axis=1)
        Hb = np.fft.fft(hrev[m0:m1], nfft, axis=1)
        acc += np.sum(R * Hb, axis=0)
    return np.fft.ifft(acc)[:out_len] / np.sqrt(channels.M)


def tr_channel(channels, k, j):
    """Equivalent TR channel g_kj = (1/sqrt(M)) sum_m h_{j,m} * hbreve_{k,m}."""
    taps = np.zeros(2 * channels.L - 1, dtype=np.complex128)
    hrev = tr_filter_bank(channels, k)
    for m in range(channels.M):
        taps += np.convolve(channels.cirs[j, m], hrev[m])
    return TrChannel(taps=taps / np.sqrt(channels.M), k=k, j=j)


def tr_channel_matrix(channels):
    """All g_kj at once: (K, K, 2L-1) with [k, j] = tr_channel(channels, k, j).taps."""
    K, M, L = channels.cirs.shape
    nfft = next_pow2(2 * L - 1)
    A = np.fft.fft(channels.cirs, nfft, axis=2)  # (K=j, M, nfft)
    B = np.fft.fft(np.conj(channels.cirs[:, :, ::-1]), nfft, axis=2)  # (K=k, M, nfft)
    prod = np.einsum("jmf,kmf->kjf", A, B)
    return np.fft.ifft(prod, axis=2)[:, :, : 2 * L - 1] / np.sqrt(M)


def gtilde_diag(g, N):
    """Per-subcarrier effective gain: sum_l g(l) e^{-j2pi lp/N} (N-|l|)/N.

    Equals the diagonal of F G_ICI F^H, where the (N-|l|)/N weights count how
    often each lag appears on the corresponding Toeplitz diagonal.
    """
    taps = g.taps if isinstance(g, TrChannel) else np.asarray(g, dtype=np.complex128)
    return _gtilde_diag_taps(taps, N)


def _gtilde_diag_taps(taps, N):
    """gtilde_diag over the trailing axis of a (..., 2L-1) array of lag taps."""
    two_lm1 = taps.shape[-1]
    L = (two_lm1 + 1) // 2
    if two_lm1 != 2 * L - 1:
        raise ValueError("TR channel must have odd length 2L-1")
    if two_lm1 > N:
        raise ValueError("TR channel longer than symbol")
    lags = np.arange(-(L - 1), L)
    weights = (N - np.abs(lags)) / N
    kernel = np.exp(-2j * np.pi * np.outer(lags, np.arange(N)) / N)  # (2L-1, N)
    return (taps * weights) @ kernel


def build_G_matrices(g, N):
    """Time-domain ICI and two ISI matrices of a TR channel for an N-window.

    With the window delayed by L-1 samples, sample n of symbol i's window is
    sum_l g(l) x[iN + n - l]; splitting x by symbol gives
    G_ICI[n,q] = g(n-q) on |n-q| <= L-1       (symbol i),
    G_ISI1[n,q] = g(n-q+N) on 1 <= n-q+N <= L-1   (symbol i-1, top-right),
    G_ISI2[n,q] = g(n-q-N) on -(L-1) <= n-q-N <= -1 (symbol i+1, bottom-left).
    """
    taps = g.taps if isinstance(g, TrChannel) else np.asarray(g, dtype=np.complex128)
    L = (taps.size + 1) // 2
    if taps.size != 2 * L - 1:
        raise ValueError("TR channel must have odd length 2L-1")
    if taps.size > N:
        raise ValueError("TR channel longer than symbol")

    def lag_tap(lag):
        return taps[lag + L - 1]

    G_ici = np.zeros((N, N), dtype=np.complex128)
    G_isi1 = np.zeros((N, N), dtype=np.complex128)
    G_isi2 = np.zeros((N, N), dtype=np.complex128)
    n, q = np.indices((N, N))
    diff = n - q
    band = np.abs(diff) <= L - 1
    G_ici[band] = lag_tap(diff[band])
    prev = (diff + N >= 1) & (diff + N <= L - 1)
    G_isi1[prev] = lag_tap(diff[prev] + N)
    nxt = (diff - N >= -(L - 1)) & (diff - N <= -1)
    G_isi2[nxt] = lag_tap(diff[nxt] - N)
    return G_ici, G_isi1, G_isi2


def gtilde_stack(channels, N):
    """Per-subcarrier K-by-K effective-gain matrices: [p][k][j] = gtilde_diag(g_kj)(p)."""
    gmat = tr_channel_matrix(channels)  # (K, K, 2L-1)
    diags = _gtilde_diag_taps(gmat, N)  # (K, K, N)
    return np.transpose(diags, (2, 0, 1))


def tr_zf_detect(tr_demod, gstack):
    """ZF post-equalization: solve Gtilde_p d(p) = d_hat^TR(p) per subcarrier."""
    tr_demod = np.asarray(tr_demod, dtype=np.complex128)
    N, K, _ = gstack.shape
    if tr_demod.shape != (K, N):
        raise ValueError(f"tr_demod shape {tr_demod.shape} does not match (K={K}, N={N})")
    out = np.empty((K, N), dtype=np.complex128)
    for p in range(N):
        out[:, p] = solve_linear(gstack[p], tr_demod[:, p], subcarrier=p)
    return out


def tr_zf_detect_batched(tr_demod, gstack):
    """Batched route of tr_zf_detect (same condition guard, one LAPACK call)."""
    tr_demod = np.asarray(tr_demod, dtype=np.complex128)
    _guard_stack_condition(gstack)
    return np.linalg.solve(gstack, tr_demod.T[..., None])[..., 0].T
