"""Speaker embedding archives, mean pooling, and encoder-state conditioning.

Embeddings are 512-dimensional vectors produced by an external extractor
and ingested from a line-oriented archive: `utterance-id` followed by 512
space-separated decimal floats.  Speaker membership lives in a separate
`utterance-id <TAB> speaker-id` file.  Means are computed over unnormalized
vectors by default (mean-then-normalize); a flag normalizes each vector to
unit length first, since the pooling order is not standardized.

toy_embedding is a desk-scale stand-in for the external extractor: log-mel
statistics whose informative components are invariant to audio scaling
(centered band means, band variances, adjacent-band correlations), padded
with zeros to 512 dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from indicvox.dsp.mel import MelParams, mel_spectrogram

EMBEDDING_DIM = 512


# ---------------------------------------------------------------------------
# errors

class SpeakerError(ValueError):
    """Base class for embedding failures."""


class BadDimensionError(SpeakerError):
    """Vector is not exactly 512-dimensional."""


class DuplicateUtteranceError(SpeakerError):
    """Archive lists the same utterance id twice."""


class CorruptArchiveError(SpeakerError):
    """Archive or membership file cannot be parsed."""


class UnknownSpeakerError(SpeakerError):
    """Membership holds no utterances for the requested speaker."""


class ZeroVectorError(SpeakerError):
    """Cosine similarity is undefined for an all-zero vector."""


class TooShortError(SpeakerError):
    """toy_embedding needs at least one second of audio."""


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class SpeakerEmbedding:
    vector: np.ndarray
    speaker: str = ""
    source_utterances: tuple[str, ...] = field(default=())

    def __post_init__(self):
        vector = np.asarray(self.vector, dtype=np.float64)
        if vector.shape != (EMBEDDING_DIM,):
            raise BadDimensionError(
                f"embedding must have {EMBEDDING_DIM} components, got {vector.shape}"
            )
        if not np.isfinite(vector).all():
            raise SpeakerError("non-finite embedding components")
        object.__setattr__(self, "vector", vector)


@dataclass(frozen=True)
class EncoderStateMatrix:
    states: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states, dtype=np.float64)
        if states.ndim != 2 or states.shape[0] < 1:
            raise SpeakerError("states must be [N x E] with N >= 1")
        if not np.isfinite(states).all():
            raise SpeakerError("non-finite encoder states")
        object.__setattr__(self, "states", states)


# ---------------------------------------------------------------------------
# archives

def load_embeddings(path: str | Path) -> dict[str, SpeakerEmbedding]:
    """Read a per-utterance embedding archive, validating dimensions."""
    embeddings: dict[str, SpeakerEmbedding] = {}
    for number, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        tokens = line.split()
        utt_id = tokens[0]
        if utt_id in embeddings:
            raise DuplicateUtteranceError(f"{path}:{number}: repeated id {utt_id!r}")
        try:
            values = np.array([float(v) for v in tokens[1:]])
        except ValueError as exc:
            raise CorruptArchiveError(f"{path}:{number}: {exc}") from exc
        if len(values) != EMBEDDING_DIM:
            raise BadDimensionError(
                f"{path}:{number}: {len(values)} floats, expected {EMBEDDING_DIM}"
            )
        embeddings[utt_id] = SpeakerEmbedding(values)
    return embeddings


def save_embeddings(path: str | Path, embeddings: dict[str, SpeakerEmbedding]) -> None:
    lines = []
    for utt_id in sorted(embeddings):
        values = " ".join(repr(float(v)) for v in embeddings[utt_id].vector)
        lines.append(f"{utt_id} {values}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_membership(path: str | Path) -> dict[str, str]:
    """Read `utterance-id <TAB> speaker-id` lines."""
    membership: dict[str, str] = {}
    for number, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorruptArchiveError(f"{path}:{number}: expected id<TAB>speaker")
        membership[parts[0]] = parts[1]
    return membership


# ---------------------------------------------------------------------------
# pooling and conditioning

def mean_speaker_embedding(
    embeddings: dict[str, SpeakerEmbedding],
    speaker: str,
    membership: dict[str, str],
    *,
    normalize: bool = False,
) -> SpeakerEmbedding:
    """Componentwise mean of one speaker's utterance embeddings.

    normalize=True length-normalizes each vector before averaging.
    """
    utterances = sorted(u for u, s in membership.items() if s == speaker)
    if not utterances:
        raise UnknownSpeakerError(f"no utterances for speaker {speaker!r}")
    missing = [u for u in utterances if u not in embeddings]
    if missing:
        raise CorruptArchiveError(f"membership lists {missing[0]!r} with no embedding")
    vectors = np.stack([embeddings[u].vector for u in utterances])
    if normalize:
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        if (norms == 0).any():
            raise ZeroVectorError("cannot normalize an all-zero embedding")
        vectors = vectors / norms
    return SpeakerEmbedding(vectors.mean(axis=0), speaker, tuple(utterances))


def condition_encoder_states(
    states: EncoderStateMatrix, emb: SpeakerEmbedding
) -> EncoderStateMatrix:
    """Append the embedding to every encoder state row: [N x (E+512)]."""
    n = states.states.shape[0]
    block = np.tile(emb.vector, (n, 1))
    return EncoderStateMatrix(np.hstack([states.states, block]))


def cosine_similarity(a: SpeakerEmbedding, b: SpeakerEmbedding) -> float:
    na = np.linalg.norm(a.vector)
    nb = np.linalg.norm(b.vector)
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine similarity undefined for zero vectors")
    return float(a.vector @ b.vector / (na * nb))


# ---------------------------------------------------------------------------
# desk-scale extractor

def toy_embedding(
    audio: np.ndarray, sample_rate: int, params: MelParams | None = None
) -> SpeakerEmbedding:
    """Deterministic 512-d vector of log-mel statistics.

    Features: per-band means centered on the utterance mean, per-band
    variances, and adjacent-band correlations.  All three are invariant to
    a constant log-domain shift, i.e. to scaling the audio (up to the log
    floor), then zero-padded to 512 components.
    """
    audio = np.asarray(audio, dtype=np.float64)
    if len(audio) < sample_rate:
        raise TooShortError(f"{len(audio)} samples < 1 s at {sample_rate} Hz")
    params = params or MelParams(sample_rate=sample_rate)
    frames = mel_spectrogram(audio, sample_rate, params).frames

    band_means = frames.mean(axis=0)
    centered_means = band_means - band_means.mean()
    variances = frames.var(axis=0)

    deviations = frames - band_means
    scale = np.sqrt(variances)
    correlations = np.zeros(params.n_mels - 1)
    for b in range(params.n_mels - 1):
        if scale[b] > 0 and scale[b + 1] > 0:
            correlations[b] = float(
                (deviations[:, b] @ deviations[:, b + 1])
                / (len(frames) * scale[b] * scale[b + 1])
            )

    features = np.concatenate([centered_means, variances, correlations])
    if len(features) > EMBEDDING_DIM:
        features = features[:EMBEDDING_DIM]
    vector = np.zeros(EMBEDDING_DIM)
    vector[: len(features)] = features
    return SpeakerEmbedding(vector)
