"""Complex vector/matrix kernels shared by every other module.

Unitary DFT pair, linear convolution, and small dense solves. All functions
are pure and hold no state, so they are safe to call from any thread.
"""

import numpy as np

# Condition-number ceiling above which a dense solve is refused.
COND_LIMIT = 1e12


class SingularSystemError(np.linalg.LinAlgError):
    """Raised when a per-subcarrier system is numerically singular.

    Carries the context supplied by the caller (typically subcarrier and
    user indices) so Monte Carlo harnesses can record which trial failed.
    """

    def __init__(self, message="singular system", **context):
        self.context = dict(context)
        if context:
            detail = ", ".join(f"{k}={v}" for k, v in sorted(context.items()))
            message = f"{message} ({detail})"
        super().__init__(message)


def _as_complex_vector(x, name="vector"):
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise ValueError("empty vector")
    return x


def dft(x):
    """Unitary DFT: X[p] = (1/sqrt(N)) sum_n x[n] e^{-j2pi np/N}.

    The 1/sqrt(N) normalization sits on the forward transform; every other
    module assumes this convention and must not re-scale.
    """
    x = _as_complex_vector(x)
    return np.fft.fft(x, norm="ortho")


def idft(X):
    """Exact inverse of :func:`dft` (unitary, 1/sqrt(N) on the forward side)."""
    X = _as_complex_vector(X)
    return np.fft.ifft(X, norm="ortho")


def linear_convolve(a, b):
    """Full linear convolution, out[n] = sum_k a[k] b[n-k], length La+Lb-1."""
    a = _as_complex_vector(a, "a")
    b = _as_complex_vector(b, "b")
    return np.convolve(a, b, mode="full")


def solve_linear(A, b, **context):
    """Solve the K-by-K dense system A x = b.

    Refuses systems whose condition estimate exceeds ``COND_LIMIT`` by
    raising :class:`SingularSystemError`; ``context`` keywords (for example
    ``subcarrier=17``) are attached to the error for the caller's records.
    """
    A = np.asarray(A, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if A.shape[0] == 0:
        raise ValueError("empty system")
    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
        raise ValueError("non-finite entries in linear system")
    if np.linalg.cond(A) > COND_LIMIT:
        raise SingularSystemError(**context)
    return np.linalg.solve(A, b)


def next_pow2(n):
    """Smallest power of two >= n (n >= 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return 1 << (int(n) - 1).bit_length()


def db(x):
    """Linear power ratio to decibels; accepts scalars or arrays."""
    return 10.0 * np.log10(x)


def from_db(x_db):
    """Decibels to linear power ratio."""
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)
