"""Mel-spectrogram extraction and DCT-based mel-cepstra.

Framing uses reflective center-padding of fftSize/2 on both sides, so a
signal of L samples with hop H yields 1 + floor(L/H) frames (the padded
signal fits exactly that many full windows).  The mel filterbank uses the
HTK mel scale; the outer edges of the first and last filters are saturated
shelves so that every FFT bin inside [fMin, fMax] receives weight (the
boundary bins of a pure triangle bank would get exactly zero).
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
import scipy.fft
import scipy.signal


class FeatureError(ValueError):
    """Base class for feature extraction failures."""


class TooShortError(FeatureError):
    """Audio shorter than one analysis window."""


class RateMismatchError(FeatureError):
    """Audio sample rate disagrees with the requested parameters."""


class OrderTooHighError(FeatureError):
    """Cepstral order must stay below the mel channel count."""


# ---------------------------------------------------------------------------
# parameters and containers

@dataclass(frozen=True)
class MelParams:
    sample_rate: int = 22050
    fft_size: int = 1024
    win_size: int = 1024
    hop_size: int = 256
    n_mels: int = 80
    f_min: float = 0.0
    f_max: float = 8000.0
    log_floor: float = 1e-5

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MelSpectrogram:
    """Log mel energies, frames[nFrames][nMels]."""

    frames: np.ndarray
    params: MelParams

    def __post_init__(self):
        if self.frames.ndim != 2 or self.frames.shape[1] != self.params.n_mels:
            raise FeatureError("frames must be [nFrames x nMels]")
        if not np.isfinite(self.frames).all():
            raise FeatureError("non-finite mel values")


@dataclass(frozen=True)
class McepTrack:
    """Cepstral coefficients c_0..c_D per frame, frames[nFrames][D+1]."""

    frames: np.ndarray
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise FeatureError("order must be >= 1")
        if self.frames.ndim != 2 or self.frames.shape[1] != self.order + 1:
            raise FeatureError("frames must be [nFrames x (D+1)]")
        if not np.isfinite(self.frames).all():
            raise FeatureError("non-finite cepstral values")


# ---------------------------------------------------------------------------
# mel scale and filterbank

def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(params: MelParams) -> np.ndarray:
    """Triangular filterbank [nMels x (fftSize/2 + 1)] with shelf edges."""
    n_bins = params.fft_size // 2 + 1
    bin_hz = np.arange(n_bins) * params.sample_rate / params.fft_size
    points = mel_to_hz(
        np.linspace(hz_to_mel(params.f_min), hz_to_mel(params.f_max), params.n_mels + 2)
    )
    bank = np.zeros((params.n_mels, n_bins))
    for m in range(params.n_mels):
        left, center, right = points[m], points[m + 1], points[m + 2]
        rising = (bin_hz - left) / (center - left)
        falling = (right - bin_hz) / (right - center)
        weights = np.minimum(rising, falling)
        if m == 0:
            weights = np.where(bin_hz <= center, np.minimum(falling, 1.0), weights)
        if m == params.n_mels - 1:
            weights = np.where(bin_hz >= center, np.minimum(rising, 1.0), weights)
        in_range = (bin_hz >= params.f_min) & (bin_hz <= params.f_max)
        bank[m] = np.where(in_range, np.clip(weights, 0.0, 1.0), 0.0)
    return bank


def filter_center_frequencies(params: MelParams) -> np.ndarray:
    points = mel_to_hz(
        np.linspace(hz_to_mel(params.f_min), hz_to_mel(params.f_max), params.n_mels + 2)
    )
    return points[1:-1]


# ---------------------------------------------------------------------------
# STFT

def _window(params: MelParams) -> np.ndarray:
    win = scipy.signal.get_window("hann", params.win_size, fftbins=True)
    if params.win_size < params.fft_size:
        pad = params.fft_size - params.win_size
        win = np.pad(win, (pad // 2, pad - pad // 2))
    return win


def stft_magnitude(audio: np.ndarray, params: MelParams) -> np.ndarray:
    """Magnitude STFT [nFrames x (fftSize/2+1)] with reflective center pad."""
    audio = np.asarray(audio, dtype=np.float64)
    pad = params.fft_size // 2
    padded = np.pad(audio, pad, mode="reflect")
    n_frames = 1 + len(audio) // params.hop_size
    window = _window(params)
    frames = np.empty((n_frames, params.fft_size // 2 + 1))
    for t in range(n_frames):
        start = t * params.hop_size
        chunk = padded[start : start + params.fft_size]
        frames[t] = np.abs(np.fft.rfft(chunk * window))
    return frames


def mel_spectrogram(
    audio: np.ndarray, sample_rate: int, params: MelParams | None = None
) -> MelSpectrogram:
    """Magnitude STFT, mel filterbank, natural log with a floor."""
    params = params or MelParams()
    if sample_rate != params.sample_rate:
        raise RateMismatchError(
            f"audio is {sample_rate} Hz, params expect {params.sample_rate} Hz"
        )
    audio = np.asarray(audio, dtype=np.float64)
    if len(audio) < params.win_size:
        raise TooShortError(f"{len(audio)} samples < window {params.win_size}")
    magnitude = stft_magnitude(audio, params)
    bank = mel_filterbank(params)
    energies = magnitude @ bank.T
    frames = np.log(np.maximum(energies, params.log_floor))
    return MelSpectrogram(frames, params)


# ---------------------------------------------------------------------------
# mel-cepstra

def mcep(mel: MelSpectrogram, order: int = 24) -> McepTrack:
    """Orthonormal DCT-II of each log-mel frame, truncated to c_0..c_D."""
    if order >= mel.params.n_mels:
        raise OrderTooHighError(f"order {order} >= nMels {mel.params.n_mels}")
    coefficients = scipy.fft.dct(mel.frames, type=2, norm="ortho", axis=1)
    return McepTrack(np.ascontiguousarray(coefficients[:, : order + 1]), order)
