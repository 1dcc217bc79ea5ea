"""OFDM modulation and windowed demodulation, CP-less and CP-based.

The CP-less path is the system under study; the CP path (cp_len >= L-1)
is the benchmark whose per-subcarrier channel is exactly circular.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import dft


@dataclass(frozen=True)
class FrameConfig:
    """Frame geometry: N subcarriers, Q symbols, optional cyclic prefix."""

    N: int
    Q: int
    cp_len: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if self.Q < 1:
            raise ValueError("Q must be >= 1")
        if not 0 <= self.cp_len < self.N:
            raise ValueError("cp_len must satisfy 0 <= cp_len < N")

    @property
    def symbol_len(self):
        return self.N + self.cp_len

    @property
    def frame_len(self):
        return self.Q * self.symbol_len


def modulate(grid, cfg):
    """Serialize a DataGrid (N, Q) into Q concatenated OFDM symbols.

    Each symbol is the unitary inverse DFT of its column; in CP mode the
    last cp_len time samples are prepended to each symbol.
    """
    grid = np.asarray(grid, dtype=np.complex128)
    if grid.shape != (cfg.N, cfg.Q):
        raise ValueError(f"grid shape {grid.shape} does not match (N={cfg.N}, Q={cfg.Q})")
    x = np.fft.ifft(grid, axis=0, norm="ortho")  # (N, Q), column i = symbol i
    if cfg.cp_len:
        x = np.concatenate([x[-cfg.cp_len :], x], axis=0)
    return x.T.reshape(-1)


def demodulate_window(r, i, cfg, delay=0):
    """DFT of the N-sample rectangular window of symbol i.

    The window starts at delay + i*(N+cp_len) + cp_len, i.e. any cyclic
    prefix samples are discarded before windowing; `delay` shifts the window
    start (the time-reversal chain uses delay = L-1 to center the equivalent
    channel's main tap).
    """
    r = np.asarray(r, dtype=np.complex128)
    if r.ndim != 1:
        raise ValueError("r must be a 1-D sample stream")
    start = delay + i * cfg.symbol_len + cfg.cp_len
    if start < 0 or start + cfg.N > r.size:
        raise ValueError(
            f"window [{start}, {start + cfg.N}) out of range for {r.size} samples"
        )
    return dft(r[start : start + cfg.N])


def demodulate_windows(r, cfg, symbols, delay=0):
    """Stack demodulate_window over the given symbol indices; rows (len(symbols), N).

    Vectorized equivalent of calling demodulate_window per symbol; used by
    the Monte Carlo hot path where r is (n_streams, P).
    """
    r = np.atleast_2d(np.asarray(r, dtype=np.complex128))
    starts = [delay + i * cfg.symbol_len + cfg.cp_len for i in symbols]
    for s in starts:
        if s < 0 or s + cfg.N > r.shape[-1]:
            raise ValueError(f"window [{s}, {s + cfg.N}) out of range")
    stacked = np.stack([r[:, s : s + cfg.N] for s in starts], axis=0)
    return np.fft.fft(stacked, axis=-1, norm="ortho")


def interior_symbols(cfg, interior_only=True):
    """Symbol indices used for statistics: all, or excluding the frame edges."""
    if interior_only and cfg.Q > 2:
        return list(range(1, cfg.Q - 1))
    return list(range(cfg.Q))


