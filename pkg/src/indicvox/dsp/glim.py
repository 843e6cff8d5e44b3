"""Griffin-Lim inversion of log-mel spectrograms.

The mel spectrogram is mapped back to a linear magnitude spectrogram with
the filterbank pseudo-inverse (clipped at zero), then phase is recovered
by alternating STFT projections starting from seeded random phases.  The
overlap-add inverse normalizes by the summed squared window.
"""

from __future__ import annotations

import numpy as np

from indicvox.dsp.mel import MelParams, MelSpectrogram, _window, mel_filterbank


def _istft(spectrum: np.ndarray, params: MelParams) -> np.ndarray:
    """Overlap-add inverse of the centered STFT used by stft_magnitude."""
    n_frames = len(spectrum)
    window = _window(params)
    padded_len = (n_frames - 1) * params.hop_size + params.fft_size
    signal = np.zeros(padded_len)
    weight = np.zeros(padded_len)
    for t in range(n_frames):
        start = t * params.hop_size
        frame = np.fft.irfft(spectrum[t], n=params.fft_size)
        signal[start : start + params.fft_size] += frame * window
        weight[start : start + params.fft_size] += window**2
    signal /= np.maximum(weight, 1e-10)
    pad = params.fft_size // 2
    return signal[pad : padded_len - pad]


def _stft_complex(audio: np.ndarray, params: MelParams) -> np.ndarray:
    pad = params.fft_size // 2
    padded = np.pad(audio, pad, mode="reflect")
    n_frames = 1 + len(audio) // params.hop_size
    window = _window(params)
    out = np.empty((n_frames, params.fft_size // 2 + 1), dtype=complex)
    for t in range(n_frames):
        start = t * params.hop_size
        out[t] = np.fft.rfft(padded[start : start + params.fft_size] * window)
    return out


def mel_to_linear(mel: MelSpectrogram) -> np.ndarray:
    """Least-squares linear magnitude spectrogram from log-mel energies."""
    bank = mel_filterbank(mel.params)
    energies = np.exp(mel.frames)
    linear = energies @ np.linalg.pinv(bank).T
    return np.maximum(linear, 0.0)


def griffin_lim(mel: MelSpectrogram, iterations: int = 60, seed: int = 0) -> np.ndarray:
    """Invert a log-mel spectrogram to a waveform; deterministic per seed."""
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    params = mel.params
    magnitude = mel_to_linear(mel)
    rng = np.random.default_rng(seed)
    phase = np.exp(2j * np.pi * rng.random(magnitude.shape))
    audio = _istft(magnitude * phase, params)
    for _ in range(iterations):
        rebuilt = _stft_complex(audio, params)
        scale = np.maximum(np.abs(rebuilt), 1e-10)
        audio = _istft(magnitude * (rebuilt / scale), params)
    return audio
