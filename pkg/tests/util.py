"""Shared fixture helpers: synthetic wav files and toy corpora."""

import math
import struct
import wave
from pathlib import Path

SAMPLE_TEXTS = {
    "hindi": ["कमल", "नमक कलम", "जनता समझ", "बरतन पानी", "घर शहर"],
    "tamil": ["கடல்", "அடி வீடு", "தங்கம் மலை", "பாடம் மாடு", "தமிழ் கதவு"],
    "kannada": ["ಕಮಲ", "ಕಮಲ ಕಮಲ", "ಕಮಲತಾ", "ಕಮಲ ಕಮಲತಾ", "ಕಮಲತಾ ಕಮಲ"],
}


def write_wav(path, seconds, sample_rate=22050, freq=440.0, amplitude=0.3):
    """Write a mono 16-bit sine wav of the requested length."""
    n = int(round(seconds * sample_rate))
    frames = bytearray()
    for i in range(n):
        value = amplitude * math.sin(2.0 * math.pi * freq * i / sample_rate)
        frames += struct.pack("<h", int(value * 32767))
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(sample_rate)
        handle.writeframes(bytes(frames))
    return path


def make_corpus(root, language, speaker, durations, sample_rate=22050):
    """Create <root>/<id>.wav files plus transcript.tsv; return the root."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    texts = SAMPLE_TEXTS[language]
    lines = []
    for i, seconds in enumerate(durations):
        utt_id = f"{language}_{speaker}_{i:03d}"
        write_wav(root / f"{utt_id}.wav", seconds, sample_rate, freq=220.0 + 55.0 * i)
        lines.append(f"{utt_id}\t{texts[i % len(texts)]}")
    (root / "transcript.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return root
