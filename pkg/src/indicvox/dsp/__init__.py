"""Acoustic features, alignment metrics, filters, and waveform inversion."""

from indicvox.dsp.mel import MelParams, MelSpectrogram, McepTrack, mel_spectrogram, mcep
from indicvox.dsp.align import DtwPath, dtw_align, mcd
from indicvox.dsp.filters import detect_line_noise, notch_filter, remove_line_noise
from indicvox.dsp.glim import griffin_lim
from indicvox.dsp.wavio import read_wav, write_wav
from indicvox.dsp.matrixio import dump_matrix, load_matrix

__all__ = [
    "MelParams",
    "MelSpectrogram",
    "McepTrack",
    "DtwPath",
    "mel_spectrogram",
    "mcep",
    "dtw_align",
    "mcd",
    "detect_line_noise",
    "notch_filter",
    "remove_line_noise",
    "griffin_lim",
    "read_wav",
    "write_wav",
    "dump_matrix",
    "load_matrix",
]
