"""HTTP surface of the listening-test service."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel

from indicvox.service.batch import NoPairsError, batch_mcd
from indicvox.service.stats import aggregate_dmos, compute_results
from indicvox.service.store import (
    DuplicateRatingError,
    EvalStore,
    InvalidConfigError,
    MissingStimulusError,
    NoRatingsError,
    OutOfScaleError,
    RatingRecord,
    ServiceError,
    UnknownSessionError,
    UnknownStimulusError,
    WrongKindError,
)

_STATUS_BY_ERROR = (
    (UnknownSessionError, 404),
    (UnknownStimulusError, 404),
    (DuplicateRatingError, 409),
    (InvalidConfigError, 400),
    (MissingStimulusError, 400),
    (OutOfScaleError, 400),
    (NoRatingsError, 400),
    (WrongKindError, 400),
    (NoPairsError, 400),
)


class RatingBody(BaseModel):
    sessionId: str
    listenerId: str
    stimulusId: str
    value: int | str
    timestamp: str = ""


class McdBody(BaseModel):
    refDir: str
    synDir: str
    order: int = 24
    reportPath: str | None = None


def create_app(store: EvalStore | str | Path) -> FastAPI:
    if not isinstance(store, EvalStore):
        store = EvalStore(store)
    app = FastAPI(title="indicvox listening tests")
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError) -> JSONResponse:
        status = 400
        for error_type, code in _STATUS_BY_ERROR:
            if isinstance(exc, error_type):
                status = code
                break
        name = type(exc).__name__.removesuffix("Error")
        return JSONResponse(
            status_code=status, content={"error": name, "detail": str(exc)}
        )

    @app.post("/sessions", status_code=201)
    async def create_session(config: dict) -> dict:
        return store.create_session(config).to_json()

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str) -> dict:
        return store.session(session_id).to_json()

    @app.get("/sessions/{session_id}/next")
    async def next_stimulus(session_id: str, listener: str = Query(...)) -> dict:
        stimulus = store.next_stimulus(session_id, listener)
        if stimulus is None:
            return {"done": True}
        record = stimulus.to_json()
        record["stimulusId"] = stimulus.stimulus_id
        record["audioUrl"] = f"/audio/{stimulus.stimulus_id}"
        record["done"] = False
        return record

    @app.get("/audio/{stimulus_id}")
    async def audio(stimulus_id: str) -> FileResponse:
        stimulus = store.find_stimulus(stimulus_id)
        path = Path(stimulus.audio_path)
        if not path.is_file():
            raise UnknownStimulusError(f"audio file missing: {path}")
        return FileResponse(path, media_type="audio/x-wav", filename=path.name)

    @app.post("/ratings", status_code=201)
    async def submit_rating(body: RatingBody) -> dict:
        stored = store.submit_rating(
            RatingRecord(
                session_id=body.sessionId,
                listener_id=body.listenerId,
                stimulus_id=body.stimulusId,
                value=body.value,
                timestamp=body.timestamp,
            )
        )
        return stored.to_json()

    @app.get("/results/{session_id}")
    async def results(session_id: str, trimmed: bool = False) -> dict:
        return compute_results(store, session_id, trimmed=trimmed)

    @app.get("/aggregate/dmos")
    async def aggregate(sessions: str = Query(...)) -> dict:
        ids = [s for s in sessions.split(",") if s]
        return aggregate_dmos(store, ids)

    @app.post("/mcd")
    async def mcd_endpoint(body: McdBody) -> dict:
        result = batch_mcd(
            body.refDir,
            body.synDir,
            order=body.order,
            report_path=body.reportPath,
        )
        return result.to_json()

    return app
