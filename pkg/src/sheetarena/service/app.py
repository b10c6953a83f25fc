"""HTTP layer over ArenaService.

    POST /prompts {"text": ...}                 -> battles (blind)
    GET  /battles/{battle_id}                   -> battle payload (blind)
    POST /battles/{battle_id}/vote
         {"outcome": ..., "voter_token": ...}   -> ack + model reveal
    GET  /leaderboard?category=&adjusted=&min_votes=&mode=
    GET  /models                                -> public roster configs
    GET  /schema                                -> SheetSpec@2 JSON Schema
    GET  /healthz
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..errors import DuplicateVote, EmptyPrompt, UnknownBattle
from ..rating.types import Outcome
from ..sheetspec.schema import SHEETSPEC_JSON_SCHEMA
from .core import ArenaService


class PromptBody(BaseModel):
    text: str


class VoteBody(BaseModel):
    outcome: str = Field(description="A_WINS | B_WINS | TIE | BOTH_BAD")
    voter_token: str


def create_app(service: ArenaService, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="sheetarena", version="0.1.0")
    app.state.service = service

    @app.post("/prompts")
    def submit_prompt(body: PromptBody):
        try:
            result = service.submit_prompt(body.text)
        except EmptyPrompt as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return JSONResponse(result.to_json_obj())

    @app.get("/battles/{battle_id}")
    def get_battle(battle_id: str):
        try:
            view = service.get_battle(battle_id)
        except UnknownBattle:
            raise HTTPException(status_code=404, detail="unknown battle") from None
        return JSONResponse(view.to_json_obj())

    @app.post("/battles/{battle_id}/vote")
    def cast_vote(battle_id: str, body: VoteBody):
        try:
            outcome = Outcome(body.outcome)
        except ValueError:
            raise HTTPException(status_code=422, detail=f"bad outcome {body.outcome!r}") from None
        try:
            ack = service.cast_vote(battle_id, outcome, body.voter_token)
        except UnknownBattle:
            raise HTTPException(status_code=404, detail="unknown battle") from None
        except DuplicateVote as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        return JSONResponse(ack)

    @app.get("/leaderboard")
    def leaderboard(
        category: str | None = None,
        adjusted: bool = False,
        min_votes: int | None = None,
        mode: str = "per_battle",
    ):
        return JSONResponse(
            service.get_leaderboard(
                category=category,
                adjusted=adjusted,
                min_votes=min_votes,
                covariate_mode=mode,
            )
        )

    @app.get("/models")
    def models():
        return JSONResponse(service.models_public())

    @app.get("/schema")
    def schema():
        return JSONResponse(SHEETSPEC_JSON_SCHEMA)

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "events": service.state.version}

    if ui_dir is not None and Path(ui_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
