"""Limited-feedback MIMO link simulation.

Channels, the achievable-rate and effective-gain selection rules, and the
paired Monte Carlo sweeps behind the rate and gain comparisons. Every trial
draws its channel from a counter-based substream of the run seed, so results
are reproducible bit-for-bit regardless of chunking or thread count, and all
codebooks in one sweep see the same channel sequence (common random numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidK, TooFewCodewords
from .grassmann import Codebook, Codeword
from .linalg import as_cmatrix
from .rng import substream

_CHUNK = 2048


@dataclass(frozen=True)
class ChannelRealization:
    """An N x T channel matrix plus the model it was drawn from."""

    H: np.ndarray
    model: str = "rayleigh"
    k_factor: float | None = None

    @property
    def N(self) -> int:
        return self.H.shape[0]

    @property
    def T(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class RateResult:
    """Mean achievable rate of one codebook over an SNR grid."""

    name: str
    snr_db: tuple
    mean_rates: tuple
    trials: int
    seed: int
    paired: bool = True


@dataclass(frozen=True)
class RateSweep:
    """Paired rate curves plus per-pair difference statistics.

    ``diff_mean[(i, j)]`` holds the per-SNR mean of (rate_j - rate_i) and
    ``diff_se[(i, j)]`` its paired standard error, for 0-based codebook
    positions i < j in the sweep argument order.
    """

    results: tuple
    diff_mean: dict
    diff_se: dict


def _chan(h) -> np.ndarray:
    if isinstance(h, ChannelRealization):
        return h.H
    return as_cmatrix(h)


def _mat(w) -> np.ndarray:
    return w.matrix if isinstance(w, Codeword) else as_cmatrix(w)


def _rayleigh(n, t, rng):
    return (rng.standard_normal((n, t)) + 1j * rng.standard_normal((n, t))) / math.sqrt(2.0)


def sample_rayleigh(n: int, t: int, seed: int = 0, rng=None) -> ChannelRealization:
    """Uncorrelated Rayleigh channel: i.i.d. CN(0, 1) entries."""
    rng = rng if rng is not None else substream(seed, 0)
    return ChannelRealization(_rayleigh(n, t, rng), "rayleigh", None)


def _steering(count, angle):
    # half-wavelength uniform linear array response
    return np.exp(1j * np.pi * np.sin(angle) * np.arange(count))


def _check_k(k: float) -> float:
    k = float(k)
    if math.isnan(k) or k < 0:
        raise InvalidK(f"Rician factor must be >= 0 or +inf, got {k}")
    return k


def _rician(n, t, k, rng, normalize):
    ar = _steering(n, rng.uniform(-np.pi / 2, np.pi / 2))
    at = _steering(t, rng.uniform(-np.pi / 2, np.pi / 2))
    los = np.outer(ar, at.conj())  # unit-modulus entries, ||los||_F^2 = N*T
    if math.isinf(k):
        h = los
    else:
        h = math.sqrt(k / (k + 1)) * los + math.sqrt(1 / (k + 1)) * _rayleigh(n, t, rng)
    if normalize:
        h = h / math.sqrt(n * t)
    return h


def sample_rician(n: int, t: int, k: float, seed: int = 0, normalize: bool = False, rng=None) -> ChannelRealization:
    """Rician channel: rank-one line-of-sight plus Rayleigh scattering.

    The LoS part is an outer product of ULA steering vectors with departure
    and arrival angles drawn uniformly on (-pi/2, pi/2) per realization, so
    E||H_LoS||_F^2 = N*T matches the scattered part. ``normalize`` rescales
    to E||H||_F^2 = 1. K may be +inf for a pure LoS channel.
    """
    k = _check_k(k)
    rng = rng if rng is not None else substream(seed, 0)
    return ChannelRealization(_rician(n, t, k, rng, normalize), "rician", k)


def effective_gram(h, w, counter=None):
    """Gram matrix (HW)^H (HW), optionally counting complex multiplies.

    With a counter attached, codewords whose rows each carry at most one
    nonzero entry are multiplied along the sparse path (a scaled column
    gather), so the recorded count reflects the work actually done.
    """
    hm, wm = _chan(h), _mat(w)
    if hm.shape[1] != wm.shape[0]:
        raise DimensionMismatch(f"channel {hm.shape} incompatible with codeword {wm.shape}")
    n, t = hm.shape
    m = wm.shape[1]
    nz_rows = np.count_nonzero(wm, axis=1)
    if counter is not None and np.all(nz_rows <= 1):
        y = np.zeros((n, m), dtype=np.complex128)
        for ti in np.nonzero(nz_rows)[0]:
            mi = int(np.nonzero(wm[ti])[0][0])
            y[:, mi] += hm[:, ti] * wm[ti, mi]
        counter.add(n * int(np.count_nonzero(nz_rows)))
    else:
        y = hm @ wm
        if counter is not None:
            counter.add(n * t * m)
    if counter is not None:
        counter.add(n * m * m)
    return y.conj().T @ y


def _rate_from_gram(gram, rho, m):
    lam = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    return float(np.sum(np.log2(1.0 + (rho / m) * lam)))


def achievable_rate(h, w, rho: float) -> float:
    """log2 det(I + (rho/M) W^H H^H H W) via the Gram-matrix eigenvalues."""
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    wm = _mat(w)
    gram = effective_gram(h, wm)
    return _rate_from_gram(gram, rho, wm.shape[1])


def effective_gain(h, w) -> float:
    """Effective channel gain ||H W||_F^2."""
    hm, wm = _chan(h), _mat(w)
    if hm.shape[1] != wm.shape[0]:
        raise DimensionMismatch(f"channel {hm.shape} incompatible with codeword {wm.shape}")
    return float(np.linalg.norm(hm @ wm) ** 2)


def _codebook_grams(g, stack):
    # S_k = W_k^H (H^H H) W_k for every codeword, g is (..., T, T)
    return np.einsum("kti,...tu,kum->...kim", stack.conj(), g, stack)


def _first_within(scores, tol=1e-12):
    return int(np.nonzero(scores >= scores.max() - tol)[0][0]) + 1


def select_index(h, b: Codebook, rho: float) -> int:
    """1-based index of the rate-maximizing codeword (smallest on ties)."""
    hm = _chan(h)
    g = hm.conj().T @ hm
    grams = _codebook_grams(g, b.stack())
    lam = np.clip(np.linalg.eigvalsh(grams), 0.0, None)
    rates = np.sum(np.log2(1.0 + (rho / b.M) * lam), axis=-1)
    return _first_within(rates)


def select_index_gain(h, b: Codebook) -> int:
    """1-based index of the gain-maximizing codeword (smallest on ties)."""
    hm = _chan(h)
    g = hm.conj().T @ hm
    gains = np.einsum("kti,tu,kui->k", b.stack().conj(), g, b.stack()).real
    return _first_within(gains)


def rate_curve(codebooks, n: int, snr_db, trials: int, seed: int = 0, names=None) -> RateSweep:
    """Paired mean achievable rate over an SNR grid for several codebooks.

    Every codebook is evaluated on the same per-trial Rayleigh channels; the
    selected (maximum) rate is averaged per SNR point, and each codebook
    pair gets the mean and standard error of its per-trial rate difference.
    """
    books = list(codebooks)
    if not books:
        raise TooFewCodewords("need at least one codebook")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t = books[0].T
    if any(b.T != t for b in books):
        raise DimensionMismatch("all codebooks must share the antenna count T")
    names = list(names) if names else [f"codebook{i + 1}" for i in range(len(books))]
    snr_db = np.atleast_1d(np.asarray(snr_db, dtype=float))
    rho = 10.0 ** (snr_db / 10.0)
    stacks = [b.stack() for b in books]
    ncb, nsnr = len(books), snr_db.size
    rate_sum = np.zeros((ncb, nsnr))
    dsum = {}
    d2sum = {}
    for start in range(0, trials, _CHUNK):
        stop = min(start + _CHUNK, trials)
        hh = np.empty((stop - start, n, t), dtype=np.complex128)
        for i, trial in enumerate(range(start, stop)):
            hh[i] = _rayleigh(n, t, substream(seed, trial))
        g = np.einsum("bnt,bnu->btu", hh.conj(), hh)
        best = np.empty((stop - start, ncb, nsnr))
        for c, stack in enumerate(stacks):
            lam = np.clip(np.linalg.eigvalsh(_codebook_grams(g, stack)), 0.0, None)
            for si in range(nsnr):
                rates = np.sum(np.log2(1.0 + (rho[si] / books[c].M) * lam), axis=-1)
                best[:, c, si] = rates.max(axis=1)
        rate_sum += best.sum(axis=0)
        for i in range(ncb):
            for j in range(i + 1, ncb):
                d = best[:, j, :] - best[:, i, :]
                dsum[(i, j)] = dsum.get((i, j), 0.0) + d.sum(axis=0)
                d2sum[(i, j)] = d2sum.get((i, j), 0.0) + (d**2).sum(axis=0)
    results = tuple(
        RateResult(
            name=names[c],
            snr_db=tuple(snr_db),
            mean_rates=tuple(rate_sum[c] / trials),
            trials=trials,
            seed=seed,
        )
        for c in range(ncb)
    )
    diff_mean, diff_se = {}, {}
    for key, sd in dsum.items():
        mean = sd / trials
        if trials > 1:
            var = np.maximum(d2sum[key] - trials * mean**2, 0.0) / (trials - 1)
            se = np.sqrt(var / trials)
        else:
            se = np.full_like(mean, np.inf)
        diff_mean[key] = tuple(mean)
        diff_se[key] = tuple(se)
    return RateSweep(results, diff_mean, diff_se)


def gain_cdf(b: Codebook, n: int, k: float, trials: int, seed: int = 0) -> np.ndarray:
    """Sorted per-trial best effective gains under normalized Rician fading.

    The channel sequence depends only on (seed, trial, N, T, K), so calling
    this with several codebooks and one seed yields paired samples.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k = _check_k(k)
    stack = b.stack()
    out = np.empty(trials)
    for start in range(0, trials, _CHUNK):
        stop = min(start + _CHUNK, trials)
        hh = np.empty((stop - start, n, b.T), dtype=np.complex128)
        for i, trial in enumerate(range(start, stop)):
            hh[i] = _rician(n, b.T, k, substream(seed, trial), True)
        g = np.einsum("bnt,bnu->btu", hh.conj(), hh)
        gains = np.einsum("kti,btu,kui->bk", stack.conj(), g, stack).real
        out[start:stop] = gains.max(axis=1)
    return np.sort(out)
