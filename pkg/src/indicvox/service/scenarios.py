"""Cross-lingual synthesis scenario planner.

Each (text language, speaker) combination gets one of five labels:

    a  seen language, seen speaker, speaker native to the language
    b  seen language, seen speaker, speaker switched from another language
    c  seen language, unseen speaker
    d  unseen language, unseen speaker
    e  unseen language, seen speaker

Speakers default to being named after their native language; an explicit
speaker-to-language map overrides that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from indicvox.service.store import InvalidConfigError


@dataclass(frozen=True)
class ScenarioEntry:
    text_language: str
    speaker: str
    language_seen: bool
    speaker_seen: bool
    label: str

    def to_json(self) -> dict:
        return {
            "textLanguage": self.text_language,
            "speaker": self.speaker,
            "languageSeen": self.language_seen,
            "speakerSeen": self.speaker_seen,
            "label": self.label,
        }


@dataclass(frozen=True)
class ScenarioPlan:
    entries: tuple[ScenarioEntry, ...]

    def to_json(self) -> dict:
        return {"entries": [entry.to_json() for entry in self.entries]}


def scenario_label(language_seen: bool, speaker_seen: bool, native: bool) -> str:
    if language_seen and speaker_seen:
        return "a" if native else "b"
    if language_seen:
        return "c"
    return "e" if speaker_seen else "d"


def plan_scenarios(
    seen_languages: Iterable[str],
    seen_speakers: Iterable[str],
    target_languages: Iterable[str],
    target_speakers: Iterable[str],
    speaker_languages: Mapping[str, str] | None = None,
) -> ScenarioPlan:
    """Label the full cross product of target languages and speakers."""
    seen_languages = set(seen_languages)
    seen_speakers = set(seen_speakers)
    target_languages = sorted(set(target_languages))
    target_speakers = sorted(set(target_speakers))
    if not (seen_languages and seen_speakers and target_languages and target_speakers):
        raise InvalidConfigError("all four scenario sets must be non-empty")
    speaker_languages = speaker_languages or {}

    entries = []
    for language in target_languages:
        for speaker in target_speakers:
            language_seen = language in seen_languages
            speaker_seen = speaker in seen_speakers
            native = speaker_languages.get(speaker, speaker) == language
            entries.append(
                ScenarioEntry(
                    text_language=language,
                    speaker=speaker,
                    language_seen=language_seen,
                    speaker_seen=speaker_seen,
                    label=scenario_label(language_seen, speaker_seen, native),
                )
            )
    return ScenarioPlan(tuple(entries))
