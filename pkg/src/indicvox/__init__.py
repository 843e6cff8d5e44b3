"""indicvox: text, corpus and evaluation workbench for multilingual Indian-language TTS.

Subpackages:
    text     script detection, multi-language character map, phone parsing
    dsp      features, alignment metrics, filters, waveform reconstruction
    service  listening-test storage, statistics and HTTP API

Top-level modules:
    corpus    manifest building, pooling and adaptation subset selection
    speaker   utterance/speaker embedding archives and pooling
    attention location-sensitive attention with gradient checking
    cli       command-line entry point
"""

__version__ = "0.1.0"
