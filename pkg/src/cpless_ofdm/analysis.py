"""Closed-form asymptotic SIR of conventional MRC without a cyclic prefix.

As the antenna count grows, the per-subcarrier interference coefficients of
the matched-filter receiver converge to deterministic functions of the PDP:
the signal power is (1 - tau/N)^2 with tau the average delay spread, each
ICI distance d contributes |1 - rhobar(d)|^2 / (4 N^2 sin^2(pi d / N)), the
ISI terms mirror the ICI ones except at d = 0 where the previous symbol
leaks (tau/N)^2. The saturation SIR is the ratio of the two.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SirTerms:
    """Asymptotic per-subcarrier power budget and its SIR."""

    p_signal: float
    p_ici: np.ndarray  # d = 1..N-1
    p_isi: np.ndarray  # d = 0..N-1
    sir_linear: float
    sir_db: float


def avg_delay_spread(pdp):
    """First moment of the PDP: tau = sum_l l rho(l)."""
    return float(np.sum(np.arange(pdp.L) * pdp.taps))


def pdp_dft(pdp, N):
    """Unnormalized DFT of the PDP: rhobar(d) = sum_l rho(l) e^{-j2pi l d/N}.

    The plain-sum convention makes rhobar(0) = 1 for a normalized PDP,
    which the 1 - rhobar(d) interference numerators rely on.
    """
    if pdp.L > N:
        raise ValueError("PDP longer than DFT size")
    return np.fft.fft(pdp.taps, N)


def signal_power(pdp, N):
    """Asymptotic per-subcarrier signal power (1 - tau/N)^2."""
    return (1.0 - avg_delay_spread(pdp) / N) ** 2


def ici_power(pdp, N, d):
    """Asymptotic ICI power leaked from subcarrier distance d (d != 0)."""
    if not 1 <= d <= N - 1:
        raise ValueError("d=0 is the signal term" if d == 0 else f"d must be in 1..{N - 1}")
    rhobar_d = np.sum(pdp.taps * np.exp(-2j * np.pi * d * np.arange(pdp.L) / N))
    return float(abs(1.0 - rhobar_d) ** 2 / (4.0 * N**2 * np.sin(np.pi * d / N) ** 2))


def isi_power(pdp, N, d):
    """Asymptotic ISI power at distance d: equals ICI for d != 0, (tau/N)^2 at d = 0."""
    if not 0 <= d <= N - 1:
        raise ValueError(f"d must be in 0..{N - 1}")
    if d == 0:
        return (avg_delay_spread(pdp) / N) ** 2
    return ici_power(pdp, N, d)


def asymptotic_sir(pdp, N):
    """Saturation SIR of conventional MRC: signal over summed ICI + ISI.

    A dispersion-free channel (zero interference) reports +inf explicitly.
    """
    if pdp.L > N:
        raise ValueError("PDP longer than symbol")
    tau = avg_delay_spread(pdp)
    p_signal = (1.0 - tau / N) ** 2
    d = np.arange(1, N)
    rhobar = pdp_dft(pdp, N)[1:]
    per_distance = np.abs(1.0 - rhobar) ** 2 / (4.0 * N**2 * np.sin(np.pi * d / N) ** 2)
    p_ici = per_distance.copy()
    p_isi = np.concatenate([[(tau / N) ** 2], per_distance])
    interference = float(p_ici.sum() + p_isi.sum())
    if interference == 0.0:
        sir_linear = math.inf
        sir_db = math.inf
    else:
        sir_linear = p_signal / interference
        sir_db = 10.0 * math.log10(sir_linear)
    return SirTerms(p_signal=p_signal, p_ici=p_ici, p_isi=p_isi, sir_linear=sir_linear, sir_db=sir_db)
