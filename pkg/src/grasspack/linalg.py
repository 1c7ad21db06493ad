"""Complex dense linear algebra, matrix exponential, and FFT primitives.

Matrices and vectors are plain numpy arrays with dtype complex128. All
tolerances in this package assume double precision. Every function here is
pure and safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

from .errors import NonPowerOfTwoLength, NotSkewHermitian, RankDeficient


def as_cmatrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {m.shape}")
    return m


def fro_norm(a) -> float:
    """Frobenius norm sqrt(sum of squared entry magnitudes)."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128)))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def fft(x, inverse: bool = False) -> np.ndarray:
    """Unitary FFT of a power-of-two-length vector.

    Both directions are scaled by 1/sqrt(N), so Parseval holds exactly:
    ``norm(x) == norm(fft(x))`` up to roundoff.
    """
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not is_power_of_two(v.size):
        raise NonPowerOfTwoLength(f"length {v.size} is not a power of two")
    if inverse:
        return np.fft.ifft(v, norm="ortho")
    return np.fft.fft(v, norm="ortho")


def matexp_skew_hermitian(a, tol: float = 1e-10) -> np.ndarray:
    """Matrix exponential of a skew-Hermitian matrix; the result is unitary.

    Computed by eigendecomposition: A = j*B with B Hermitian, so
    exp(A) = V diag(exp(j*lambda)) V^H where B = V diag(lambda) V^H.
    """
    m = as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if fro_norm(m + m.conj().T) > tol:
        raise NotSkewHermitian(f"A + A^H exceeds tolerance {tol}")
    herm = -1j * m
    lam, vec = np.linalg.eigh(herm)
    return (vec * np.exp(1j * lam)) @ vec.conj().T


def _qr_positive(a: np.ndarray) -> np.ndarray:
    """Thin QR factor with the R diagonal made real nonnegative.

    Accepts a single matrix or a stack (..., T, M); no rank check.
    """
    q, r = np.linalg.qr(a)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    mag = np.abs(d)
    phase = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    return q * phase.conj()[..., None, :]


def qr_orthonormalize(a, rank_tol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis Q of span(A) with deterministic sign convention.

    The convention (R diagonal real nonnegative) makes the output unique, so
    an already-orthonormal input is returned unchanged up to roundoff.
    """
    m = as_cmatrix(a)
    t, k = m.shape
    if t < k:
        raise ValueError(f"expected T >= M, got shape {m.shape}")
    smin = np.linalg.svd(m, compute_uv=False)[-1]
    if smin <= rank_tol:
        raise RankDeficient(f"smallest singular value {smin:.3e} <= {rank_tol}")
    return _qr_positive(m)


def random_stiefel(t: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed T x M matrix with orthonormal columns."""
    g = rng.standard_normal((t, m)) + 1j * rng.standard_normal((t, m))
    return _qr_positive(g)
