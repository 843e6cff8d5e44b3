"""Aggregate statistics over the ratings log.

DMOS and speaker-similarity means are computed over synthesized stimuli
only; ratings on natural or reference stimuli are reported separately as
anchors.  Preference results are percentages rounded half-up to two
decimals.  The cross-session DMOS aggregate is reported both as the mean
of session means and as the rating-weighted mean, since the published
single-number summary does not say which was used.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

from indicvox.service.store import (
    EvalStore,
    NoRatingsError,
    SessionKind,
    TestSession,
    WrongKindError,
)


def round_half_up(value: float, decimals: int = 2) -> float:
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def _values_by_role(store: EvalStore, session: TestSession) -> dict[str, dict[str, list[int]]]:
    """role -> stimulusId -> rating values, in submission order."""
    by_role: dict[str, dict[str, list[int]]] = {}
    for rating in store.ratings(session.id):
        stimulus = session.stimulus(rating.stimulus_id)
        by_role.setdefault(stimulus.role, {}).setdefault(
            stimulus.stimulus_id, []
        ).append(rating.value)
    return by_role


def _mean_block(per_stimulus: dict[str, list[int]], *, trimmed: bool) -> dict:
    values = [v for stim_values in per_stimulus.values() for v in stim_values]
    block = {
        "mean": sum(values) / len(values),
        "count": len(values),
        "perStimulus": {
            stimulus_id: sum(vs) / len(vs)
            for stimulus_id, vs in sorted(per_stimulus.items())
        },
    }
    if trimmed:
        block["trimmedMean"] = _trimmed_mean(values)
    return block


def _trimmed_mean(values: list[int], proportion: float = 0.1) -> float:
    """Diagnostic only: mean after cutting the given fraction from each tail."""
    ordered = sorted(values)
    cut = int(len(ordered) * proportion)
    kept = ordered[cut : len(ordered) - cut] if cut else ordered
    return sum(kept) / len(kept)


def compute_dmos(store: EvalStore, session_id: str, *, trimmed: bool = False) -> dict:
    """Mean over synthesized stimuli; natural means separately as anchors."""
    session = store.session(session_id)
    if session.kind is not SessionKind.DMOS:
        raise WrongKindError(f"session {session_id!r} is {session.kind.value}")
    by_role = _values_by_role(store, session)
    if not by_role.get("synthesized"):
        raise NoRatingsError(f"no synthesized-stimulus ratings in {session_id!r}")
    result = _mean_block(by_role["synthesized"], trimmed=trimmed)
    if by_role.get("natural"):
        result["naturalAnchors"] = _mean_block(by_role["natural"], trimmed=False)
    else:
        result["naturalAnchors"] = None
    return result


def compute_similarity_score(
    store: EvalStore, session_id: str, *, trimmed: bool = False
) -> dict:
    """Mean similarity on the 1-5 scale over synthesized stimuli."""
    session = store.session(session_id)
    if session.kind is not SessionKind.SPEAKER_SIMILARITY:
        raise WrongKindError(f"session {session_id!r} is {session.kind.value}")
    by_role = _values_by_role(store, session)
    if not by_role.get("synthesized"):
        raise NoRatingsError(f"no synthesized-stimulus ratings in {session_id!r}")
    return _mean_block(by_role["synthesized"], trimmed=trimmed)


def compute_preference(store: EvalStore, session_id: str) -> dict:
    """Percentage of choices per option label, rounded to 2 decimals."""
    session = store.session(session_id)
    if session.kind is not SessionKind.NATIVITY_PREFERENCE:
        raise WrongKindError(f"session {session_id!r} is {session.kind.value}")
    ratings = store.ratings(session_id)
    if not ratings:
        raise NoRatingsError(f"no ratings in {session_id!r}")
    labels: list[str] = []
    for stimulus in session.stimuli:
        for label in stimulus.option_labels:
            if label not in labels:
                labels.append(label)
    counts = {label: 0 for label in labels}
    for rating in ratings:
        counts[rating.value] += 1
    total = len(ratings)
    return {
        "options": {
            label: round_half_up(100.0 * count / total)
            for label, count in counts.items()
        },
        "total": total,
    }


def compute_results(store: EvalStore, session_id: str, *, trimmed: bool = False) -> dict:
    """Kind-appropriate statistics for one session."""
    session = store.session(session_id)
    if session.kind is SessionKind.DMOS:
        body = compute_dmos(store, session_id, trimmed=trimmed)
    elif session.kind is SessionKind.SPEAKER_SIMILARITY:
        body = compute_similarity_score(store, session_id, trimmed=trimmed)
    else:
        body = compute_preference(store, session_id)
    return {"sessionId": session_id, "kind": session.kind.value, **body}


def aggregate_dmos(store: EvalStore, session_ids: list[str]) -> dict:
    """Cross-session summary, reported under both plausible aggregations."""
    if not session_ids:
        raise NoRatingsError("no sessions given")
    means, counts = [], []
    for session_id in session_ids:
        result = compute_dmos(store, session_id)
        means.append(result["mean"])
        counts.append(result["count"])
    mean_of_means = sum(means) / len(means)
    weighted = sum(m * c for m, c in zip(means, counts)) / sum(counts)
    return {
        "sessionMeans": means,
        "meanOfSessionMeans": mean_of_means,
        "ratingWeightedMean": weighted,
        "reported": f"{round_half_up(mean_of_means):.2f}",
    }
