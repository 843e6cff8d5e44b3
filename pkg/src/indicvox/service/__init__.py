"""Listening-test service: sessions, durable ratings, statistics, batch MCD."""

from indicvox.service.batch import BatchMcdResult, NoPairsError, batch_mcd
from indicvox.service.scenarios import ScenarioEntry, ScenarioPlan, plan_scenarios
from indicvox.service.stats import (
    aggregate_dmos,
    compute_dmos,
    compute_preference,
    compute_similarity_score,
    round_half_up,
)
from indicvox.service.store import (
    DuplicateRatingError,
    EvalStore,
    InvalidConfigError,
    MissingStimulusError,
    NoRatingsError,
    OutOfScaleError,
    RatingRecord,
    ServiceError,
    SessionKind,
    Stimulus,
    TestSession,
    UnknownSessionError,
    UnknownStimulusError,
    WrongKindError,
)

__all__ = [
    "BatchMcdResult",
    "DuplicateRatingError",
    "EvalStore",
    "InvalidConfigError",
    "MissingStimulusError",
    "NoPairsError",
    "NoRatingsError",
    "OutOfScaleError",
    "RatingRecord",
    "ScenarioEntry",
    "ScenarioPlan",
    "ServiceError",
    "SessionKind",
    "Stimulus",
    "TestSession",
    "UnknownSessionError",
    "UnknownStimulusError",
    "WrongKindError",
    "aggregate_dmos",
    "batch_mcd",
    "compute_dmos",
    "compute_preference",
    "compute_similarity_score",
    "plan_scenarios",
    "round_half_up",
]
