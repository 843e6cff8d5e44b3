"""Line-noise detection and second-order notch filtering.

Notch coefficients follow the standard audio-biquad cookbook form: for
center frequency f0 and quality factor Q,

    w0 = 2*pi*f0/fs,  alpha = sin(w0)/(2Q)
    b = [1, -2cos(w0), 1],  a = [1+alpha, -2cos(w0), 1-alpha]

which has exact zeros on the unit circle at +-w0 and unity gain at DC and
Nyquist.  Line-noise removal applies one notch per detected candidate,
strongest first, capped at three.
"""

from __future__ import annotations

import numpy as np
import scipy.signal

from indicvox.dsp.mel import MelParams, stft_magnitude


class FilterError(ValueError):
    """Base class for filtering failures."""


class InvalidFrequencyError(FilterError):
    """Notch frequency outside (0, Nyquist)."""


class TooShortError(FilterError):
    """Detection needs at least one second of audio."""


DEFAULT_Q = 30.0
MAX_NOTCHES = 3

# A bin counts as a line-noise candidate when it exceeds the local median
# by this many dB in at least this fraction of frames.
EXCESS_DB = 8.0
PERSISTENCE = 0.9
_MEDIAN_HALF_WIDTH = 25


def notch_coefficients(f0: float, sample_rate: int, q: float = DEFAULT_Q):
    if not 0.0 < f0 < sample_rate / 2.0:
        raise InvalidFrequencyError(f"f0 {f0} Hz outside (0, {sample_rate / 2})")
    if q <= 0:
        raise InvalidFrequencyError(f"Q must be positive, got {q}")
    w0 = 2.0 * np.pi * f0 / sample_rate
    alpha = np.sin(w0) / (2.0 * q)
    b = np.array([1.0, -2.0 * np.cos(w0), 1.0])
    a = np.array([1.0 + alpha, -2.0 * np.cos(w0), 1.0 - alpha])
    return b / a[0], a / a[0]


def notch_filter(
    audio: np.ndarray, f0: float, sample_rate: int, q: float = DEFAULT_Q
) -> np.ndarray:
    """Apply one recursive notch at f0; silence stays silence."""
    b, a = notch_coefficients(f0, sample_rate, q)
    return scipy.signal.lfilter(b, a, np.asarray(audio, dtype=np.float64))


def notch_response(f0: float, sample_rate: int, q: float, at_hz) -> np.ndarray:
    """Magnitude response of the notch at the requested frequencies."""
    b, a = notch_coefficients(f0, sample_rate, q)
    w = 2.0 * np.pi * np.atleast_1d(np.asarray(at_hz, dtype=np.float64)) / sample_rate
    z = np.exp(1j * w)
    numerator = b[0] + b[1] / z + b[2] / z**2
    denominator = 1.0 + a[1] / z + a[2] / z**2
    return np.abs(numerator / denominator)


def detect_line_noise(
    audio: np.ndarray, sample_rate: int, max_candidates: int = MAX_NOTCHES
) -> list[float]:
    """Frequencies of narrowband peaks persistent across >= 90% of frames.

    Per frame, a bin is peaked when its dB level exceeds the local median
    (over +-25 bins) by 8 dB and is a local maximum.  Candidates are
    ranked by median excess (prominence), strongest first, and thinned so
    no two survivors sit within 3 bins of each other.
    """
    audio = np.asarray(audio, dtype=np.float64)
    if len(audio) < sample_rate:
        raise TooShortError(f"{len(audio)} samples < 1 s at {sample_rate} Hz")
    params = MelParams(sample_rate=sample_rate)
    magnitude = stft_magnitude(audio, params)
    level_db = 20.0 * np.log10(np.maximum(magnitude, 1e-10))

    n_frames, n_bins = level_db.shape
    half = _MEDIAN_HALF_WIDTH
    excess = np.empty_like(level_db)
    for k in range(n_bins):
        lo, hi = max(0, k - half), min(n_bins, k + half + 1)
        local_median = np.median(level_db[:, lo:hi], axis=1)
        excess[:, k] = level_db[:, k] - local_median

    is_local_max = np.ones((n_frames, n_bins), dtype=bool)
    is_local_max[:, 1:] &= level_db[:, 1:] >= level_db[:, :-1]
    is_local_max[:, :-1] &= level_db[:, :-1] >= level_db[:, 1:]
    peaked = (excess >= EXCESS_DB) & is_local_max
    persistence = peaked.mean(axis=0)
    prominence = np.median(excess, axis=0)

    candidates = [
        (prominence[k], k)
        for k in range(1, n_bins - 1)
        if persistence[k] >= PERSISTENCE
    ]
    candidates.sort(reverse=True)
    chosen_bins: list[int] = []
    for _, k in candidates:
        if all(abs(k - other) > 3 for other in chosen_bins):
            chosen_bins.append(k)
        if len(chosen_bins) >= max_candidates:
            break
    return [k * sample_rate / params.fft_size for k in chosen_bins]


def remove_line_noise(
    audio: np.ndarray, sample_rate: int, q: float = DEFAULT_Q
) -> tuple[np.ndarray, list[float]]:
    """Detect line noise and notch out up to three candidates."""
    frequencies = detect_line_noise(audio, sample_rate, max_candidates=MAX_NOTCHES)
    filtered = np.asarray(audio, dtype=np.float64)
    for f0 in frequencies:
        filtered = notch_filter(filtered, f0, sample_rate, q)
    return filtered, frequencies
