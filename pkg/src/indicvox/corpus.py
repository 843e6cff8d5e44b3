"""Utterance manifests: building, cleaning, filtering, pooling, subsetting.

A manifest is an immutable list of utterance records plus provenance notes.
On disk it is line-delimited JSON, one record per line, with the field names
id, language, family, speaker, script, text, audioPath, durationSec,
sampleRate.  Provenance and totals are derived state and are not persisted.

build_manifest expects a directory with a `transcript.tsv` index
(`utterance-id <TAB> text` per line) and one `<utterance-id>.wav` per line.
Durations come from the wave header; verify=True additionally decodes the
file and cross-checks the duration within 1 ms.
"""

from __future__ import annotations

import json
import random
import re
import unicodedata
import wave
from dataclasses import dataclass, replace
from pathlib import Path

from indicvox.text import scripts

# ---------------------------------------------------------------------------
# errors

class CorpusError(ValueError):
    """Base class for manifest construction and pooling failures."""


class MissingAudioError(CorpusError):
    """Transcript references an audio file that does not exist."""


class UnreadableHeaderError(CorpusError):
    """Audio header cannot be parsed or disagrees with the decoded data."""


class TranscriptMismatchError(CorpusError):
    """Transcript index is malformed or internally inconsistent."""


class EmptyAfterCleaningError(CorpusError):
    """Text cleanup removed everything."""


class CrossFamilyPoolingError(CorpusError):
    """Pooled manifests span language families without the override flag."""


class DuplicateIdError(CorpusError):
    """Two records share an utterance id."""


class InsufficientDataError(CorpusError):
    """Pool is shorter than the requested adaptation target."""


# ---------------------------------------------------------------------------
# records and manifests

FAMILY = {"indo-aryan": "IndoAryan", "dravidian": "Dravidian"}

FAMILY_OF_LANGUAGE = {
    language: FAMILY[family] for language, family in scripts.LANGUAGE_FAMILY.items()
}


@dataclass(frozen=True)
class UtteranceRecord:
    id: str
    language: str
    family: str
    speaker: str
    script: str
    text: str
    audio_path: str
    duration_sec: float
    sample_rate: int

    def __post_init__(self):
        if self.duration_sec <= 0:
            raise CorpusError(f"{self.id}: durationSec must be positive")
        if self.sample_rate <= 0:
            raise CorpusError(f"{self.id}: sampleRate must be positive")
        expected = FAMILY_OF_LANGUAGE.get(self.language)
        if expected is None:
            raise CorpusError(f"{self.id}: unknown language {self.language!r}")
        if self.family != expected:
            raise CorpusError(
                f"{self.id}: family {self.family!r} inconsistent with {self.language}"
            )

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "language": self.language,
                "family": self.family,
                "speaker": self.speaker,
                "script": self.script,
                "text": self.text,
                "audioPath": self.audio_path,
                "durationSec": self.duration_sec,
                "sampleRate": self.sample_rate,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "UtteranceRecord":
        raw = json.loads(line)
        return cls(
            id=raw["id"],
            language=raw["language"],
            family=raw["family"],
            speaker=raw["speaker"],
            script=raw["script"],
            text=raw["text"],
            audio_path=raw["audioPath"],
            duration_sec=raw["durationSec"],
            sample_rate=raw["sampleRate"],
        )


@dataclass(frozen=True)
class Manifest:
    records: tuple[UtteranceRecord, ...]
    provenance: tuple[str, ...]
    total_duration_sec: float

    def __post_init__(self):
        ids = [r.id for r in self.records]
        if len(ids) != len(set(ids)):
            seen = set()
            dup = next(i for i in ids if i in seen or seen.add(i))
            raise DuplicateIdError(f"duplicate utterance id {dup!r}")
        total = sum(r.duration_sec for r in self.records)
        if abs(total - self.total_duration_sec) > 1e-6:
            raise CorpusError("totalDurationSec does not match record sum")

    @classmethod
    def of(cls, records, provenance=()) -> "Manifest":
        records = tuple(records)
        total = sum(r.duration_sec for r in records)
        return cls(records, tuple(provenance), total)


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    path = Path(path)
    path.write_text(
        "".join(record.to_json() + "\n" for record in manifest.records),
        encoding="utf-8",
    )


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    records = [
        UtteranceRecord.from_json(line)
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    return Manifest.of(records, provenance=(str(path),))


# ---------------------------------------------------------------------------
# construction

def _wav_header_duration(path: Path) -> tuple[float, int, int]:
    try:
        with wave.open(str(path), "rb") as handle:
            frames = handle.getnframes()
            rate = handle.getframerate()
    except (wave.Error, EOFError, OSError) as exc:
        raise UnreadableHeaderError(f"{path}: {exc}") from exc
    if rate <= 0 or frames <= 0:
        raise UnreadableHeaderError(f"{path}: empty or rate-less wav header")
    return frames / rate, rate, frames


def _wav_decoded_duration(path: Path) -> float:
    with wave.open(str(path), "rb") as handle:
        rate = handle.getframerate()
        width = handle.getsampwidth() * handle.getnchannels()
        payload = handle.readframes(handle.getnframes())
    return len(payload) / width / rate


def build_manifest(
    data_root: str | Path, language: str, speaker: str, *, verify: bool = False
) -> Manifest:
    """Build a single-language, single-speaker manifest from a directory.

    One record per transcript line; text is cleaned; duration read from the
    wave header (cross-checked against decoded length when verify is set).
    """
    data_root = Path(data_root)
    index = data_root / "transcript.tsv"
    if not index.is_file():
        raise TranscriptMismatchError(f"{index}: transcript index not found")
    script = scripts.LANGUAGE_SCRIPT.get(language)
    if script is None:
        raise CorpusError(f"unknown language {language!r}")

    records = []
    seen = set()
    for number, line in enumerate(index.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise TranscriptMismatchError(f"{index}:{number}: expected id<TAB>text")
        utt_id, raw_text = parts
        if utt_id in seen:
            raise TranscriptMismatchError(f"{index}:{number}: duplicate id {utt_id!r}")
        seen.add(utt_id)
        audio = data_root / f"{utt_id}.wav"
        if not audio.is_file():
            raise MissingAudioError(f"{audio}: referenced by transcript, not found")
        duration, rate, _ = _wav_header_duration(audio)
        if verify:
            decoded = _wav_decoded_duration(audio)
            if abs(decoded - duration) > 1e-3:
                raise UnreadableHeaderError(
                    f"{audio}: header says {duration:.4f}s, data decodes to {decoded:.4f}s"
                )
        records.append(
            UtteranceRecord(
                id=utt_id,
                language=language,
                family=FAMILY_OF_LANGUAGE[language],
                speaker=speaker,
                script=script,
                text=clean_text(raw_text),
                audio_path=str(audio),
                duration_sec=duration,
                sample_rate=rate,
            )
        )
    return Manifest.of(records, provenance=(f"{data_root} ({language}/{speaker})",))


# ---------------------------------------------------------------------------
# cleaning

# Sentence punctuation allowed to survive cleanup; everything else in a
# punctuation category is dropped.
_PUNCT_WHITELIST = frozenset("।॥.,?!-:;'\"()")


def clean_text(raw: str) -> str:
    """Normalize, strip controls, collapse whitespace, whitelist punctuation."""
    text = scripts.normalize_text(raw)
    out = []
    for ch in text:
        category = unicodedata.category(ch)
        if category in ("Cc", "Cf"):
            out.append(" ")
        elif category[0] in "PS" and ch not in _PUNCT_WHITELIST:
            # Unspoken punctuation and symbols: verbalization is out of
            # scope, so they cannot survive into training text.
            out.append(" ")
        else:
            out.append(ch)
    cleaned = re.sub(r"\s+", " ", "".join(out)).strip()
    if not cleaned:
        raise EmptyAfterCleaningError("no content left after cleanup")
    return cleaned


# ---------------------------------------------------------------------------
# filtering and pooling

def filter_manifest(manifest: Manifest, max_duration_sec: float = 15.0) -> Manifest:
    """Keep records with durationSec <= the bound (inclusive)."""
    kept = tuple(r for r in manifest.records if r.duration_sec <= max_duration_sec)
    dropped = len(manifest.records) - len(kept)
    note = f"filter <= {max_duration_sec:g}s dropped {dropped} of {len(manifest.records)}"
    return Manifest.of(kept, provenance=manifest.provenance + (note,))


def pool(
    manifests: list[Manifest], family: str, *, allow_cross_family: bool = False
) -> Manifest:
    """Concatenate single-language single-speaker manifests into one pool.

    Every record must carry the requested family tag unless
    allow_cross_family is set.  Duplicate ids across inputs are an error.
    """
    if family not in FAMILY.values():
        raise CorpusError(f"unknown family {family!r}")
    records = []
    provenance = []
    for manifest in manifests:
        for record in manifest.records:
            if record.family != family and not allow_cross_family:
                raise CrossFamilyPoolingError(
                    f"{record.id}: {record.family} record in a {family} pool"
                )
        records.extend(manifest.records)
        provenance.extend(manifest.provenance)
    provenance.append(f"pooled {len(manifests)} manifests as {family}")
    return Manifest.of(records, provenance=provenance)


# ---------------------------------------------------------------------------
# adaptation subsets

def select_adaptation_subset(
    manifest: Manifest, target_minutes: float, *, seed: int = 0
) -> Manifest:
    """Pick a deterministic subset meeting a duration target.

    Records are put in a canonical order (by id), shuffled with the seed,
    and accumulated greedily until the total reaches the target.  The same
    seed therefore yields nested subsets across increasing targets, and the
    overshoot is bounded by the longest selected utterance.
    """
    target_sec = target_minutes * 60.0
    if manifest.total_duration_sec < target_sec:
        raise InsufficientDataError(
            f"pool holds {manifest.total_duration_sec:.1f}s, target {target_sec:.1f}s"
        )
    order = sorted(manifest.records, key=lambda r: r.id)
    random.Random(seed).shuffle(order)
    chosen = []
    total = 0.0
    for record in order:
        if total >= target_sec:
            break
        chosen.append(record)
        total += record.duration_sec
    note = f"adaptation subset target {target_minutes:g} min seed {seed}"
    return Manifest.of(chosen, provenance=manifest.provenance + (note,))
