"""Tests for mel-spectrogram extraction, mel-cepstra, and matrix/wav IO."""

import math

import numpy as np
import pytest

from indicvox.dsp import matrixio, wavio
from indicvox.dsp.mel import (
    MelParams,
    MelSpectrogram,
    OrderTooHighError,
    RateMismatchError,
    TooShortError,
    filter_center_frequencies,
    mel_filterbank,
    mel_spectrogram,
    mcep,
)


def tone(freq, seconds=1.0, sr=22050, amplitude=0.5):
    t = np.arange(int(seconds * sr)) / sr
    return amplitude * np.sin(2 * np.pi * freq * t)


def test_silence_hits_log_floor():
    params = MelParams()
    mel = mel_spectrogram(np.zeros(22050), 22050, params)
    assert np.allclose(mel.frames, math.log(params.log_floor))


def test_frame_count_formula():
    # 22050 samples, hop 256, centered: the padded signal holds exactly
    # 1 + floor(len/hop) full windows.  Count them independently.
    params = MelParams()
    mel = mel_spectrogram(np.zeros(22050), 22050, params)
    padded = 22050 + params.fft_size
    independent = 0
    start = 0
    while start + params.fft_size <= padded:
        independent += 1
        start += params.hop_size
    assert mel.frames.shape == (independent, 80)
    assert independent == 87


def test_frame_count_other_lengths():
    params = MelParams()
    for length in (1024, 1025, 4096, 10000, 22049, 22051):
        mel = mel_spectrogram(np.zeros(length), 22050, params)
        assert mel.frames.shape[0] == 1 + length // params.hop_size


def test_pure_tone_argmax_bin():
    # Cosine phase: the reflective center pad then continues the tone
    # almost evenly, so even the boundary frames stay clean.
    params = MelParams()
    centers = filter_center_frequencies(params)
    expected = int(np.argmin(np.abs(centers - 1000.0)))
    t = np.arange(22050) / 22050
    mel = mel_spectrogram(0.5 * np.cos(2 * np.pi * 1000.0 * t), 22050, params)
    assert (np.argmax(mel.frames, axis=1) == expected).all()


def test_rate_mismatch_and_too_short():
    with pytest.raises(RateMismatchError):
        mel_spectrogram(np.zeros(22050), 16000, MelParams())
    with pytest.raises(TooShortError):
        mel_spectrogram(np.zeros(512), 22050, MelParams())


def test_filterbank_no_dead_bins_and_positive_rows():
    for params in (MelParams(), MelParams(n_mels=40), MelParams(f_min=50.0, f_max=7600.0)):
        bank = mel_filterbank(params)
        bin_hz = np.arange(params.fft_size // 2 + 1) * params.sample_rate / params.fft_size
        in_range = (bin_hz >= params.f_min) & (bin_hz <= params.f_max)
        coverage = bank.sum(axis=0)
        assert (coverage[in_range] > 0).all(), "dead bin inside [fMin, fMax]"
        assert (bank.sum(axis=1) > 0).all(), "empty filter row"


def test_determinism():
    audio = tone(440.0) + tone(3000.0, amplitude=0.1)
    a = mel_spectrogram(audio, 22050).frames
    b = mel_spectrogram(audio.copy(), 22050).frames
    assert (a == b).all()


# ---------------------------------------------------------------------------
# mcep

def test_mcep_constant_vector():
    params = MelParams(n_mels=80)
    value = -2.5
    mel = MelSpectrogram(np.full((3, 80), value), params)
    track = mcep(mel, order=10)
    assert track.frames.shape == (3, 11)
    assert np.allclose(track.frames[:, 0], math.sqrt(80) * value)
    assert np.allclose(track.frames[:, 1:], 0.0, atol=1e-12)


def test_mcep_four_point_impulse():
    # Hand-evaluated orthonormal DCT-II of [1,0,0,0]:
    # c_k = s_k * cos(pi*k/8), s_0 = 1/2, s_k = 1/sqrt(2)
    params = MelParams(n_mels=4)
    mel = MelSpectrogram(np.array([[1.0, 0.0, 0.0, 0.0]]), params)
    track = mcep(mel, order=3)
    expected = [
        0.5,
        math.cos(math.pi / 8) / math.sqrt(2),
        math.cos(2 * math.pi / 8) / math.sqrt(2),
        math.cos(3 * math.pi / 8) / math.sqrt(2),
    ]
    assert np.allclose(track.frames[0], expected, atol=1e-12)


def test_mcep_linear():
    params = MelParams(n_mels=16)
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 16))
    b = rng.normal(size=(4, 16))
    both = mcep(MelSpectrogram(a + b, params), order=5).frames
    separate = (
        mcep(MelSpectrogram(a, params), order=5).frames
        + mcep(MelSpectrogram(b, params), order=5).frames
    )
    assert np.allclose(both, separate, atol=1e-12)


def test_mcep_order_too_high():
    mel = MelSpectrogram(np.zeros((2, 8)), MelParams(n_mels=8))
    with pytest.raises(OrderTooHighError):
        mcep(mel, order=8)


# ---------------------------------------------------------------------------
# IO

def test_matrix_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    matrix = rng.normal(size=(7, 5)).astype(np.float32)
    path = tmp_path / "feat.fmx"
    matrixio.dump_matrix(path, matrix, params={"hop_size": 256})
    loaded, params = matrixio.load_matrix(path)
    assert (loaded == matrix).all()
    assert params == {"hop_size": 256}
    # Header layout: magic + dims.
    blob = path.read_bytes()
    assert blob[:4] == b"FMX1"
    assert int.from_bytes(blob[4:8], "little") == 7
    assert int.from_bytes(blob[8:12], "little") == 5


def test_matrix_rejects_corruption(tmp_path):
    path = tmp_path / "feat.fmx"
    matrixio.dump_matrix(path, np.zeros((2, 2), dtype=np.float32))
    blob = path.read_bytes()
    (tmp_path / "bad1.fmx").write_bytes(b"XXXX" + blob[4:])
    (tmp_path / "bad2.fmx").write_bytes(blob[:-4])
    with pytest.raises(matrixio.MatrixFormatError):
        matrixio.load_matrix(tmp_path / "bad1.fmx")
    with pytest.raises(matrixio.MatrixFormatError):
        matrixio.load_matrix(tmp_path / "bad2.fmx")


def test_wav_round_trip(tmp_path):
    audio = tone(440.0, seconds=0.25)
    path = tmp_path / "a.wav"
    wavio.write_wav(path, audio, 22050)
    loaded, rate = wavio.read_wav(path)
    assert rate == 22050
    assert len(loaded) == len(audio)
    assert np.abs(loaded - audio).max() < 1.0 / 32000
