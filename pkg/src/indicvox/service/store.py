"""Durable session and rating storage for listening tests.

Persistence is two append-only JSON-lines logs (sessions, ratings) plus
in-memory indices rebuilt by replaying the logs at startup.  Writes are
serialized through one lock; reads work on immutable snapshots so
statistics never block submissions.
"""

from __future__ import annotations

import enum
import json
import random
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path


# ---------------------------------------------------------------------------
# errors

class ServiceError(ValueError):
    """Base class for listening-test failures."""


class InvalidConfigError(ServiceError):
    """Session configuration violates the invariants of its kind."""


class MissingStimulusError(ServiceError):
    """A configured stimulus audio file does not exist."""


class UnknownSessionError(ServiceError):
    """No session with the given id."""


class UnknownStimulusError(ServiceError):
    """No stimulus with the given id, or not part of the session."""


class DuplicateRatingError(ServiceError):
    """Listener already rated this stimulus."""


class OutOfScaleError(ServiceError):
    """Rating value outside the 1-5 scale or the session's option pair."""


class NoRatingsError(ServiceError):
    """Statistic requested before any qualifying rating exists."""


class WrongKindError(ServiceError):
    """Statistic does not apply to this session kind."""


# ---------------------------------------------------------------------------
# domain types

class SessionKind(enum.Enum):
    DMOS = "DMOS"
    SPEAKER_SIMILARITY = "SpeakerSimilarity"
    NATIVITY_PREFERENCE = "NativityPreference"

    @classmethod
    def parse(cls, value: str) -> "SessionKind":
        for kind in cls:
            if kind.value == value:
                return kind
        raise InvalidConfigError(f"unknown session kind {value!r}")


ROLES = ("synthesized", "natural", "referenceSpeaker")
SCALE_KINDS = (SessionKind.DMOS, SessionKind.SPEAKER_SIMILARITY)


@dataclass(frozen=True)
class Stimulus:
    stimulus_id: str
    utterance_id: str
    audio_path: str
    role: str
    option_labels: tuple[str, str] | None = None

    def to_json(self) -> dict:
        record = {
            "utteranceId": self.utterance_id,
            "audioPath": self.audio_path,
            "role": self.role,
        }
        if self.option_labels is not None:
            record["optionLabels"] = list(self.option_labels)
        return record


@dataclass(frozen=True)
class TestSession:
    id: str
    kind: SessionKind
    stimuli: tuple[Stimulus, ...]
    listener_count: int

    def __post_init__(self):
        if not self.stimuli:
            raise InvalidConfigError("session needs at least one stimulus")
        if self.listener_count < 1:
            raise InvalidConfigError("listenerCount must be >= 1")
        seen_ids = set()
        for stimulus in self.stimuli:
            if stimulus.utterance_id in seen_ids:
                raise InvalidConfigError(
                    f"utterance {stimulus.utterance_id!r} listed twice"
                )
            seen_ids.add(stimulus.utterance_id)
            if stimulus.role not in ROLES:
                raise InvalidConfigError(f"unknown role {stimulus.role!r}")
        roles = {s.role for s in self.stimuli}
        if self.kind is SessionKind.DMOS:
            if "synthesized" not in roles or "natural" not in roles:
                raise InvalidConfigError(
                    "DMOS sessions need both synthesized and natural stimuli"
                )
        if self.kind is SessionKind.NATIVITY_PREFERENCE:
            for stimulus in self.stimuli:
                labels = stimulus.option_labels
                if labels is None or len(labels) != 2 or labels[0] == labels[1]:
                    raise InvalidConfigError(
                        "preference stimuli need exactly two distinct option labels"
                    )

    def stimulus(self, stimulus_id: str) -> Stimulus:
        for stimulus in self.stimuli:
            if stimulus.stimulus_id == stimulus_id:
                return stimulus
        raise UnknownStimulusError(
            f"stimulus {stimulus_id!r} is not part of session {self.id!r}"
        )

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "stimuli": [s.to_json() for s in self.stimuli],
            "listenerCount": self.listener_count,
        }


@dataclass(frozen=True)
class RatingRecord:
    session_id: str
    listener_id: str
    stimulus_id: str
    value: int | str
    timestamp: str = field(default="")

    def to_json(self) -> dict:
        return {
            "sessionId": self.session_id,
            "listenerId": self.listener_id,
            "stimulusId": self.stimulus_id,
            "value": self.value,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, record: dict) -> "RatingRecord":
        return cls(
            session_id=record["sessionId"],
            listener_id=record["listenerId"],
            stimulus_id=record["stimulusId"],
            value=record["value"],
            timestamp=record.get("timestamp", ""),
        )


def _stimulus_id(session_id: str, utterance_id: str) -> str:
    return f"{session_id}.{utterance_id}"


def _session_from_config(session_id: str, config: dict) -> TestSession:
    known_keys = {"id", "kind", "stimuli", "listenerCount"}
    unknown = set(config) - known_keys
    if unknown:
        raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
    if "kind" not in config or "stimuli" not in config:
        raise InvalidConfigError("config needs kind and stimuli")
    kind = SessionKind.parse(config["kind"])
    stimuli = []
    for entry in config["stimuli"]:
        labels = entry.get("optionLabels")
        try:
            stimuli.append(
                Stimulus(
                    stimulus_id=_stimulus_id(session_id, entry["utteranceId"]),
                    utterance_id=entry["utteranceId"],
                    audio_path=entry["audioPath"],
                    role=entry["role"],
                    option_labels=tuple(labels) if labels is not None else None,
                )
            )
        except KeyError as exc:
            raise InvalidConfigError(f"stimulus entry missing {exc}") from exc
    return TestSession(
        id=session_id,
        kind=kind,
        stimuli=tuple(stimuli),
        listener_count=int(config.get("listenerCount", 1)),
    )


# ---------------------------------------------------------------------------
# store

class EvalStore:
    """Append-only logs plus replayed in-memory indices."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.sessions_log = self.root / "sessions.log"
        self.ratings_log = self.root / "ratings.log"
        self._write_lock = threading.Lock()
        self._sessions: dict[str, TestSession] = {}
        self._ratings: dict[str, tuple[RatingRecord, ...]] = {}
        self._rated_pairs: set[tuple[str, str, str]] = set()
        self._replay()

    def _replay(self) -> None:
        if self.sessions_log.exists():
            for line in self.sessions_log.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                session = _session_from_config(record["id"], record)
                self._sessions[session.id] = session
        if self.ratings_log.exists():
            for line in self.ratings_log.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rating = RatingRecord.from_json(json.loads(line))
                self._index_rating(rating)

    def _index_rating(self, rating: RatingRecord) -> None:
        existing = self._ratings.get(rating.session_id, ())
        self._ratings[rating.session_id] = existing + (rating,)
        self._rated_pairs.add(
            (rating.session_id, rating.listener_id, rating.stimulus_id)
        )

    def _append(self, path: Path, record: dict) -> None:
        with path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")

    # -- sessions

    def create_session(self, config: dict) -> TestSession:
        with self._write_lock:
            session_id = config.get("id") or f"session-{len(self._sessions) + 1:04d}"
            if session_id in self._sessions:
                raise InvalidConfigError(f"session id {session_id!r} already exists")
            session = _session_from_config(session_id, config)
            for stimulus in session.stimuli:
                if not Path(stimulus.audio_path).is_file():
                    raise MissingStimulusError(stimulus.audio_path)
            self._append(self.sessions_log, session.to_json())
            self._sessions[session.id] = session
            return session

    def session(self, session_id: str) -> TestSession:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(f"no session {session_id!r}") from None

    def sessions(self) -> tuple[TestSession, ...]:
        return tuple(self._sessions.values())

    def find_stimulus(self, stimulus_id: str) -> Stimulus:
        session_id = stimulus_id.split(".", 1)[0]
        if session_id not in self._sessions:
            raise UnknownStimulusError(f"no stimulus {stimulus_id!r}")
        return self._sessions[session_id].stimulus(stimulus_id)

    # -- ratings

    def submit_rating(self, rating: RatingRecord) -> RatingRecord:
        session = self.session(rating.session_id)
        stimulus = session.stimulus(rating.stimulus_id)
        self._check_scale(session, stimulus, rating.value)
        if not rating.timestamp:
            rating = RatingRecord(
                rating.session_id,
                rating.listener_id,
                rating.stimulus_id,
                rating.value,
                datetime.now(timezone.utc).isoformat(),
            )
        with self._write_lock:
            key = (rating.session_id, rating.listener_id, rating.stimulus_id)
            if key in self._rated_pairs:
                raise DuplicateRatingError(
                    f"listener {rating.listener_id!r} already rated "
                    f"{rating.stimulus_id!r}"
                )
            self._append(self.ratings_log, rating.to_json())
            self._index_rating(rating)
        return rating

    @staticmethod
    def _check_scale(session: TestSession, stimulus: Stimulus, value) -> None:
        if session.kind in SCALE_KINDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise OutOfScaleError(f"scale ratings must be integers, got {value!r}")
            if not 1 <= value <= 5:
                raise OutOfScaleError(f"rating {value} outside 1-5")
        else:
            if not isinstance(value, str) or value not in stimulus.option_labels:
                raise OutOfScaleError(
                    f"choice {value!r} not in {stimulus.option_labels}"
                )

    def ratings(self, session_id: str) -> tuple[RatingRecord, ...]:
        self.session(session_id)
        return self._ratings.get(session_id, ())

    # -- per-listener presentation order

    def next_stimulus(self, session_id: str, listener_id: str) -> Stimulus | None:
        """First unrated stimulus in this listener's seeded shuffle order."""
        session = self.session(session_id)
        order = list(session.stimuli)
        random.Random(f"{session_id}\x1f{listener_id}").shuffle(order)
        for stimulus in order:
            if (session_id, listener_id, stimulus.stimulus_id) not in self._rated_pairs:
                return stimulus
        return None
