"""Mono 16-bit PCM wav reading and writing on top of the stdlib wave module."""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np


class WavFormatError(ValueError):
    """File is not mono 16-bit PCM."""


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a mono 16-bit wav as float32 samples in [-1, 1] plus the rate."""
    with wave.open(str(path), "rb") as handle:
        if handle.getnchannels() != 1:
            raise WavFormatError(f"{path}: expected mono")
        if handle.getsampwidth() != 2:
            raise WavFormatError(f"{path}: expected 16-bit samples")
        rate = handle.getframerate()
        payload = handle.readframes(handle.getnframes())
    samples = np.frombuffer(payload, dtype="<i2").astype(np.float32) / 32768.0
    return samples, rate


def write_wav(path: str | Path, audio: np.ndarray, sample_rate: int) -> None:
    """Write float samples (clipped to [-1, 1]) as mono 16-bit PCM."""
    clipped = np.clip(np.asarray(audio, dtype=np.float64), -1.0, 1.0)
    pcm = (clipped * 32767.0).round().astype("<i2")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(int(sample_rate))
        handle.writeframes(pcm.tobytes())
