"""In-memory arena state, deterministically rebuilt from the event log."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..rating.types import Outcome, VoteRecord
from . import events as ev


@dataclass
class PromptEntry:
    prompt_id: str
    text: str
    category: str | None
    ts: str


@dataclass
class WorkbookEntry:
    workbook_id: str
    prompt_id: str
    model_id: str
    document: dict | None
    valid: bool
    error: str | None


@dataclass
class BattleEntry:
    battle_id: str
    prompt_id: str
    workbook_a: str
    workbook_b: str
    voter_tokens: set[str] = field(default_factory=set)
    n_votes: int = 0


class ArenaState:
    """Pure fold over events; no I/O. ``version`` counts applied events."""

    def __init__(self) -> None:
        self.prompts: dict[str, PromptEntry] = {}
        self.workbooks: dict[str, WorkbookEntry] = {}
        self.battles: dict[str, BattleEntry] = {}
        self.votes: list[VoteRecord] = []
        self.exposure: dict[str, int] = {}  # V(m): battles of m with >= 1 vote
        self.prompt_seq = 0
        self.workbook_seq = 0
        self.battle_seq = 0
        self.version = 0

    # -- id allocation (used by the service before events are written) ---------

    def next_prompt_id(self) -> str:
        return f"p-{self.prompt_seq + 1:06d}"

    def next_workbook_id(self, offset: int = 0) -> str:
        return f"w-{self.workbook_seq + 1 + offset:06d}"

    def next_battle_id(self, offset: int = 0) -> str:
        return f"b-{self.battle_seq + 1 + offset:06d}"

    # -- folding ----------------------------------------------------------------

    def apply(self, event: dict[str, Any]) -> None:
        kind = event["type"]
        if kind == ev.PROMPT_SUBMITTED:
            self.prompts[event["prompt_id"]] = PromptEntry(
                prompt_id=event["prompt_id"],
                text=event["text"],
                category=event.get("category"),
                ts=event["ts"],
            )
            self.prompt_seq += 1
        elif kind == ev.GENERATION_STORED:
            self.workbooks[event["workbook_id"]] = WorkbookEntry(
                workbook_id=event["workbook_id"],
                prompt_id=event["prompt_id"],
                model_id=event["model_id"],
                document=event.get("document"),
                valid=bool(event["valid"]),
                error=event.get("error"),
            )
            self.workbook_seq += 1
        elif kind == ev.BATTLE_CREATED:
            self.battles[event["battle_id"]] = BattleEntry(
                battle_id=event["battle_id"],
                prompt_id=event["prompt_id"],
                workbook_a=event["workbook_a"],
                workbook_b=event["workbook_b"],
            )
            self.battle_seq += 1
        elif kind == ev.VOTE_CAST:
            battle = self.battles[event["battle_id"]]
            battle.voter_tokens.add(event["voter_token"])
            battle.n_votes += 1
            vote = VoteRecord(
                battle_id=event["battle_id"],
                prompt_id=event["prompt_id"],
                category=event.get("category"),
                model_a=event["model_a"],
                model_b=event["model_b"],
                workbook_a=event["workbook_a"],
                workbook_b=event["workbook_b"],
                outcome=Outcome(event["outcome"]),
                timestamp=event["ts"],
            )
            self.votes.append(vote)
            if battle.n_votes == 1:  # battle just became "voted"
                for model in (vote.model_a, vote.model_b):
                    self.exposure[model] = self.exposure.get(model, 0) + 1
        else:
            raise ValueError(f"unknown event type {kind!r}")
        self.version += 1

    def battle_models(self, battle: BattleEntry) -> tuple[str, str]:
        return (
            self.workbooks[battle.workbook_a].model_id,
            self.workbooks[battle.workbook_b].model_id,
        )

    def vote_counts(self, models: list[str]) -> dict[str, int]:
        return {m: self.exposure.get(m, 0) for m in models}

    # -- snapshots ----------------------------------------------------------------

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "snapshot_version": 1,
            "events_applied": self.version,
            "prompt_seq": self.prompt_seq,
            "workbook_seq": self.workbook_seq,
            "battle_seq": self.battle_seq,
            "prompts": {
                pid: {"text": p.text, "category": p.category, "ts": p.ts}
                for pid, p in self.prompts.items()
            },
            "workbooks": {
                wid: {
                    "prompt_id": w.prompt_id,
                    "model_id": w.model_id,
                    "document": w.document,
                    "valid": w.valid,
                    "error": w.error,
                }
                for wid, w in self.workbooks.items()
            },
            "battles": {
                bid: {
                    "prompt_id": b.prompt_id,
                    "workbook_a": b.workbook_a,
                    "workbook_b": b.workbook_b,
                    "voter_tokens": sorted(b.voter_tokens),
                    "n_votes": b.n_votes,
                }
                for bid, b in self.battles.items()
            },
            "votes": [v.to_json_obj() for v in self.votes],
            "exposure": dict(sorted(self.exposure.items())),
        }

    @classmethod
    def from_snapshot(cls, snap: dict[str, Any]) -> "ArenaState":
        state = cls()
        state.version = snap["events_applied"]
        state.prompt_seq = snap["prompt_seq"]
        state.workbook_seq = snap["workbook_seq"]
        state.battle_seq = snap["battle_seq"]
        for pid, p in snap["prompts"].items():
            state.prompts[pid] = PromptEntry(pid, p["text"], p.get("category"), p["ts"])
        for wid, w in snap["workbooks"].items():
            state.workbooks[wid] = WorkbookEntry(
                wid, w["prompt_id"], w["model_id"], w.get("document"), w["valid"], w.get("error")
            )
        for bid, b in snap["battles"].items():
            state.battles[bid] = BattleEntry(
                bid,
                b["prompt_id"],
                b["workbook_a"],
                b["workbook_b"],
                set(b["voter_tokens"]),
                b["n_votes"],
            )
        state.votes = [VoteRecord.from_json_obj(v) for v in snap["votes"]]
        state.exposure = dict(snap["exposure"])
        return state

    def digest(self) -> dict[str, Any]:
        """Canonical comparable view (used by replay-identity tests)."""
        return self.to_snapshot()
