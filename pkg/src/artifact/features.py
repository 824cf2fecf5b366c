"""Per-window spectral correlation eigen-features.

Pipeline for one montaged recording: overlapping 1 s windows -> |FFT| bins
1..24 Hz -> log10 -> per-channel z-score across bins -> 22x22 Pearson
correlation between channels -> sorted absolute eigenvalues.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
import numpy as np

from .montage import MontagedRecording
from .numerics import eigvalsh_sorted, next_pow2, rfft_magnitude

LOG_EPS = 1e-12
ROUNDOFF_FLOOR = 1e-10


@dataclass(frozen=True)
class FeatureConfig:
    window_s: float = 1.0
    overlap_fraction: float = 0.75
    band_lo_hz: float = 1.0
    band_hi_hz: float = 24.0
    normalization: str = "zscore_per_channel"  # or "none"
    log_magnitude: bool = True
    append_correlations: bool = False

    def __post_init__(self):
        if not 0 <= self.overlap_fraction < 1:
            raise ValueError("overlap_fraction must lie in [0, 1)")
        if self.window_s <= 0:
            raise ValueError("window_s must be positive")
        if not self.band_lo_hz < self.band_hi_hz:
            raise ValueError("band_lo_hz must be below band_hi_hz")
        if self.normalization not in ("zscore_per_channel", "none"):
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def stride_s(self) -> float:
        return self.window_s * (1.0 - self.overlap_fraction)

    def window_samples(self, fs: float) -> int:
        n = self.window_s * fs
        if abs(n - round(n)) > 1e-9:
            raise ValueError(f"window of {self.window_s} s is not a whole number of samples at {fs} Hz")
        return int(round(n))

    def check_rate(self, fs: float):
        self.window_samples(fs)
        if not self.band_hi_hz < fs / 2:
            raise ValueError(f"band_hi_hz {self.band_hi_hz} must be below Nyquist {fs / 2}")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def dim(self, n_channels: int = 22) -> int:
        extra = n_channels * (n_channels - 1) // 2 if self.append_correlations else 0
        return n_channels + extra


@dataclass
class Window:
    start_s: float
    samples: np.ndarray  # (channels, window samples)


def window_starts(duration_s: float, cfg: FeatureConfig) -> np.ndarray:
    if duration_s < cfg.window_s:
        raise ValueError(f"recording shorter than one window ({duration_s} s < {cfg.window_s} s)")
    count = int(np.floor((duration_s - cfg.window_s) / cfg.stride_s + 1e-9)) + 1
    return np.arange(count) * cfg.stride_s


def window_slice(rec: MontagedRecording, cfg: FeatureConfig) -> list[Window]:
    fs = rec.sample_rate_hz
    n = cfg.window_samples(fs)
    out = []
    for start in window_starts(rec.duration_s, cfg):
        i = int(round(start * fs))
        if i + n > rec.signals.shape[1]:
            break
        out.append(Window(float(start), rec.signals[:, i:i + n]))
    return out


def band_bins(cfg: FeatureConfig, fs: float, n: int) -> np.ndarray:
    """FFT bin indices nearest to the integer frequencies of the band."""
    n_fft = next_pow2(n)
    freqs = np.arange(int(np.ceil(cfg.band_lo_hz)), int(np.floor(cfg.band_hi_hz)) + 1)
    return np.rint(freqs * n_fft / fs).astype(int), n_fft


def zscore_rows(x: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    centered = x - mean
    std = np.sqrt((centered * centered).mean(axis=-1, keepdims=True))
    flat = std <= 1e-12 * np.maximum(np.abs(mean), 1.0)
    return np.where(flat, 0.0, centered / np.where(flat, 1.0, std))


def spectral_features(w, cfg: FeatureConfig, fs: float = 256.0) -> np.ndarray:
    """Normalized band spectrum, (..., channels, bins).

    Accepts a Window or a raw (..., channels, samples) array of windows.
    """
    x = w.samples if isinstance(w, Window) else np.asarray(w, dtype=np.float64)
    bins, n_fft = band_bins(cfg, fs, x.shape[-1])
    mag = rfft_magnitude(x, n_fft)[..., bins]
    # bins at FFT roundoff level (e.g. a constant channel) count as exact zeros
    floor = ROUNDOFF_FLOOR * np.abs(x).sum(axis=-1, keepdims=True)
    mag = np.where(mag <= floor, 0.0, mag)
    if cfg.log_magnitude:
        mag = np.log10(mag + LOG_EPS)
    if cfg.normalization == "zscore_per_channel":
        mag = zscore_rows(mag)
    return mag


def correlation_matrix(s) -> np.ndarray:
    """Pearson correlation between rows; flat rows correlate 0 with others."""
    s = np.asarray(s, dtype=np.float64)
    centered = s - s.mean(axis=-1, keepdims=True)
    norm = np.sqrt((centered * centered).sum(axis=-1))
    mean_scale = np.maximum(np.abs(s).max(axis=-1), 1.0)
    flat = norm <= 1e-12 * mean_scale
    unit = centered / np.where(flat, 1.0, norm)[..., None]
    unit = np.where(flat[..., None], 0.0, unit)
    c = unit @ np.swapaxes(unit, -1, -2)
    c = 0.5 * (c + np.swapaxes(c, -1, -2))
    c = np.clip(c, -1.0, 1.0)
    n = c.shape[-1]
    c[..., np.arange(n), np.arange(n)] = 1.0
    return c


def eigen_features(c) -> np.ndarray:
    """Absolute eigenvalues of symmetric matrices, sorted descending."""
    w = np.abs(eigvalsh_sorted(c))
    return -np.sort(-w, axis=-1)


def upper_triangle(c) -> np.ndarray:
    c = np.asarray(c)
    iu = np.triu_indices(c.shape[-1], k=1)
    return c[..., iu[0], iu[1]]


def window_features(windows: np.ndarray, cfg: FeatureConfig, fs: float) -> np.ndarray:
    """(W, channels, samples) -> (W, dim) feature matrix."""
    corr = correlation_matrix(spectral_features(windows, cfg, fs))
    feats = eigen_features(corr)
    if cfg.append_correlations:
        feats = np.concatenate([feats, upper_triangle(corr)], axis=-1)
    return feats


def extract_features(rec: MontagedRecording, cfg: FeatureConfig = FeatureConfig(),
                     chunk: int = 512) -> list[tuple[float, np.ndarray]]:
    starts, feats = extract_matrix(rec, cfg, chunk)
    return list(zip(starts.tolist(), feats))


def extract_matrix(rec: MontagedRecording, cfg: FeatureConfig = FeatureConfig(),
                   chunk: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """Window start times and the (W, dim) feature matrix of a recording."""
    fs = rec.sample_rate_hz
    cfg.check_rate(fs)
    n = cfg.window_samples(fs)
    starts = window_starts(rec.duration_s, cfg)
    idx = np.rint(starts * fs).astype(int)
    starts = starts[idx + n <= rec.signals.shape[1]]
    idx = idx[: len(starts)]
    out = np.empty((len(starts), cfg.dim(rec.signals.shape[0])))
    for lo in range(0, len(starts), chunk):
        batch = np.stack([rec.signals[:, i:i + n] for i in idx[lo:lo + chunk]])
        out[lo:lo + chunk] = window_features(batch, cfg, fs)
    return starts, out

