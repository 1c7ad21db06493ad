"""OFDM / DFT-s-OFDM waveform synthesis and PAPR statistics.

Per-antenna time-domain signals are generated with localized, DC-centered
subcarrier mapping and frequency-domain zero padding for oversampling; PAPR
is the peak-to-mean instantaneous power ratio of each antenna signal. Frames
are independent substreams of the run seed, so pooled results do not depend
on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DimensionMismatch, InvalidEll, ShapeMismatch, ZeroSignal
from .grassmann import Codebook, Codeword
from .linalg import as_cmatrix, is_power_of_two
from .rng import substream

_MODULATIONS = ("4qam", "qpsk")
_WAVEFORMS = ("ofdm", "dft-s-ofdm")


@dataclass(frozen=True)
class WaveformConfig:
    """Frame parameters for the waveform generators.

    ``n_used`` active subcarriers are mapped to the center of an ``n_fft``
    grid; ``oversample`` zero-pads the spectrum to oversample * n_fft before
    the inverse transform (both products must be powers of two).
    """

    n_used: int
    n_fft: int
    oversample: int = 1
    modulation: str = "4qam"
    waveform: str = "ofdm"
    mapping: str = "localized"

    def __post_init__(self):
        if self.n_used < 1:
            raise ConfigError("n_used must be >= 1")
        if not is_power_of_two(self.n_fft) or self.n_fft < self.n_used:
            raise ConfigError("n_fft must be a power of two >= n_used")
        if self.oversample < 1 or not is_power_of_two(self.oversample * self.n_fft):
            raise ConfigError("oversample * n_fft must be a power of two")
        if self.modulation not in _MODULATIONS:
            raise ConfigError(f"modulation must be one of {_MODULATIONS}")
        if self.waveform not in _WAVEFORMS:
            raise ConfigError(f"waveform must be one of {_WAVEFORMS}")
        if self.mapping != "localized":
            raise ConfigError("only localized subcarrier mapping is supported")


@dataclass(frozen=True)
class PaprSamples:
    """Pooled per-antenna PAPR samples (linear ratios, sorted ascending)."""

    samples: np.ndarray
    config: WaveformConfig
    trials: int
    seed: int
    antenna_mean: bool = False


def modulate(count: int, modulation: str = "4qam", seed: int = 0, rng=None) -> np.ndarray:
    """Unit-average-power Gray-mapped symbols, i.i.d. uniform."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if modulation not in _MODULATIONS:
        raise ConfigError(f"modulation must be one of {_MODULATIONS}")
    rng = rng if rng is not None else substream(seed, 0)
    bits = rng.integers(0, 2, size=(count, 2))
    return ((1.0 - 2.0 * bits[:, 0]) + 1j * (1.0 - 2.0 * bits[:, 1])) / np.sqrt(2.0)


def dft_spread(x) -> np.ndarray:
    """Unitary DFT of one symbol block (any length)."""
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("expected a nonempty 1-D vector")
    return np.fft.fft(v, norm="ortho")


def precode_grid(w, streams) -> np.ndarray:
    """Apply one wideband precoder to every subcarrier: column k -> W s_k."""
    wm = w.matrix if isinstance(w, Codeword) else as_cmatrix(w)
    s = as_cmatrix(streams)
    if s.shape[0] != wm.shape[1]:
        raise DimensionMismatch(f"precoder {wm.shape} incompatible with streams {s.shape}")
    return wm @ s


def _synthesize(grid: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    """Rows of used-subcarrier symbols -> oversampled time signals.

    Localized DC-centered mapping, spectrum zero-padded at the edges to
    oversample * n_fft, unitary inverse FFT (same convention as linalg.fft).
    """
    if grid.shape[-1] != cfg.n_used:
        raise ConfigError(f"expected {cfg.n_used} used subcarriers, got {grid.shape[-1]}")
    qn = cfg.oversample * cfg.n_fft
    spec = np.zeros(grid.shape[:-1] + (qn,), dtype=np.complex128)
    start = qn // 2 - cfg.n_used // 2
    spec[..., start : start + cfg.n_used] = grid
    return np.fft.ifft(np.fft.ifftshift(spec, axes=-1), axis=-1, norm="ortho")


def to_time_domain(row, cfg: WaveformConfig) -> np.ndarray:
    """Time-domain signal (length oversample * n_fft) of one antenna row."""
    v = np.asarray(row, dtype=np.complex128)
    if v.ndim != 1:
        raise ConfigError("expected a 1-D vector of used-subcarrier symbols")
    return _synthesize(v[None, :], cfg)[0]


def papr(x) -> float:
    """Peak instantaneous power over mean power of a signal vector."""
    p = np.abs(np.asarray(x, dtype=np.complex128)) ** 2
    mean = p.mean()
    if mean == 0:
        raise ZeroSignal("PAPR is undefined for an all-zero signal")
    return float(p.max() / mean)


def ccdf(samples, thresholds_db) -> np.ndarray:
    """Empirical Pr(PAPR > threshold) per threshold, as (threshold, prob) rows."""
    vals = samples.samples if isinstance(samples, PaprSamples) else np.asarray(samples, dtype=float)
    if vals.size < 1:
        raise ValueError("need at least one PAPR sample")
    db = 10.0 * np.log10(vals)
    thr = np.atleast_1d(np.asarray(thresholds_db, dtype=float))
    probs = np.array([(db > t).mean() for t in thr])
    return np.column_stack([thr, probs])


def ccdf_threshold_db(samples, prob: float) -> float:
    """PAPR threshold (dB) the samples exceed with the given probability."""
    vals = samples.samples if isinstance(samples, PaprSamples) else np.asarray(samples, dtype=float)
    if not 0 < prob < 1:
        raise ValueError("prob must lie in (0, 1)")
    return float(np.quantile(10.0 * np.log10(vals), 1.0 - prob))


def row_sparse_precoder(t: int, m: int, ell: int, thetas=None, seed: int = 0) -> np.ndarray:
    """T x M matrix with exactly ell nonzeros of magnitude sqrt(M/(ell T)) per row.

    With explicit ``thetas`` every row applies the first ell phases to
    streams 1..ell (the constellation-study convention); otherwise phases are
    drawn per row and the active streams are rotated across rows. This is an
    analysis device for the sparsity-PAPR study, not a Stiefel codeword.
    """
    if not 1 <= ell <= m:
        raise InvalidEll(f"need 1 <= ell <= M, got ell={ell}, M={m}")
    mag = np.sqrt(m / (ell * t))
    w = np.zeros((t, m), dtype=np.complex128)
    if thetas is not None:
        th = np.asarray(thetas, dtype=float).reshape(-1)
        if th.size < ell:
            raise ShapeMismatch(f"need at least {ell} phases, got {th.size}")
        for row in range(t):
            w[row, :ell] = mag * np.exp(1j * th[:ell])
    else:
        rng = substream(seed, 0)
        for row in range(t):
            cols = (row + np.arange(ell)) % m
            w[row, cols] = mag * np.exp(1j * rng.uniform(-np.pi, np.pi, ell))
    return w


def _frame_signals(w, cfg, rng):
    """One frame: modulate M streams, spread if single-carrier, precode, synthesize."""
    m = w.shape[1]
    symbols = modulate(m * cfg.n_used, cfg.modulation, rng=rng).reshape(m, cfg.n_used)
    if cfg.waveform == "dft-s-ofdm":
        symbols = np.fft.fft(symbols, axis=1, norm="ortho")
    return _synthesize(w @ symbols, cfg)


def papr_experiment(source, cfg: WaveformConfig, trials: int, seed: int = 0, antenna_mean: bool = False) -> PaprSamples:
    """Pooled per-antenna PAPR samples over random frames.

    ``source`` is either a codebook (one codeword drawn uniformly per frame,
    since PAPR depends only on the precoder sparsity) or a fixed precoding
    matrix. Antennas with identically zero signals contribute no samples;
    ``antenna_mean`` records one per-frame average instead of pooling.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if isinstance(source, Codebook):
        stack = source.stack()
    else:
        stack = None
        w_fixed = source.matrix if isinstance(source, Codeword) else as_cmatrix(source)
    out = []
    for frame in range(trials):
        rng = substream(seed, frame)
        if stack is not None:
            w = stack[int(rng.integers(stack.shape[0]))]
        else:
            w = w_fixed
        signals = _frame_signals(w, cfg, rng)
        power = np.abs(signals) ** 2
        mean = power.mean(axis=1)
        live = mean > 0
        vals = power[live].max(axis=1) / mean[live]
        if antenna_mean:
            out.append(vals.mean())
        else:
            out.extend(vals)
    return PaprSamples(np.sort(np.asarray(out, dtype=float)), cfg, trials, seed, antenna_mean)


def constellation_samples(source, cfg: WaveformConfig, frames: int, seed: int = 0) -> np.ndarray:
    """Nyquist-rate time samples of antenna 1, for constellation scatter plots."""
    if frames < 1:
        raise ConfigError("frames must be >= 1")
    nyquist = replace(cfg, oversample=1)
    w = source.matrix if isinstance(source, Codeword) else as_cmatrix(source)
    out = np.empty((frames, nyquist.n_fft), dtype=np.complex128)
    for frame in range(frames):
        out[frame] = _frame_signals(w, nyquist, substream(seed, frame))[0]
    return out.reshape(-1)
