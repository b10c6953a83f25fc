"""Vote records, fit configuration, and fit results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np


class Outcome(str, Enum):
    A_WINS = "A_WINS"
    B_WINS = "B_WINS"
    TIE = "TIE"
    BOTH_BAD = "BOTH_BAD"

    @property
    def decisive(self) -> bool:
        return self in (Outcome.A_WINS, Outcome.B_WINS)


@dataclass(frozen=True)
class VoteRecord:
    """One blind pairwise outcome."""

    battle_id: str
    prompt_id: str
    category: str | None
    model_a: str
    model_b: str
    workbook_a: str
    workbook_b: str
    outcome: Outcome
    timestamp: str = ""

    def __post_init__(self) -> None:
        if self.model_a == self.model_b:
            raise ValueError(f"battle {self.battle_id}: model_a == model_b ({self.model_a})")

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "battle_id": self.battle_id,
            "prompt_id": self.prompt_id,
            "category": self.category,
            "model_a": self.model_a,
            "model_b": self.model_b,
            "workbook_a": self.workbook_a,
            "workbook_b": self.workbook_b,
            "outcome": self.outcome.value,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "VoteRecord":
        return cls(
            battle_id=str(obj["battle_id"]),
            prompt_id=str(obj.get("prompt_id", "")),
            category=obj.get("category"),
            model_a=str(obj["model_a"]),
            model_b=str(obj["model_b"]),
            workbook_a=str(obj.get("workbook_a", "")),
            workbook_b=str(obj.get("workbook_b", "")),
            outcome=Outcome(obj["outcome"]),
            timestamp=str(obj.get("timestamp", "")),
        )


TIE_MODE_EXCLUDE = "exclude"
TIE_MODE_HALF_WIN = "half_win"

COVARIATE_PER_BATTLE = "per_battle"
COVARIATE_MODEL_MEAN = "model_mean"


@dataclass(frozen=True)
class FitConfig:
    anchor_model: str
    ridge: float = 1e-6
    tol: float = 1e-8
    max_iter: int = 500
    tie_mode: str = TIE_MODE_EXCLUDE
    covariate_mode: str = COVARIATE_PER_BATTLE


@dataclass(frozen=True)
class BetaStat:
    coefficient: float
    std_error: float
    p_value: float

    @property
    def significant(self) -> bool:
        return self.p_value < 0.05


@dataclass
class RatingFit:
    """Fitted strengths on the natural-log-odds scale; anchor pinned at 0."""

    theta: dict[str, float]
    beta: dict[str, BetaStat] | None
    anchor_model: str
    log_likelihood: float
    n_votes_used: float
    converged: bool
    iterations: int
    vote_counts: dict[str, int]
    config: FitConfig
    warnings: list[str] = field(default_factory=list)
    # Standardized per-model feature means (feature fits only); lets the win
    # matrix optionally re-add average feature contributions.
    model_feature_means: dict[str, np.ndarray] | None = None
    feature_names: list[str] | None = None

    @property
    def models(self) -> list[str]:
        return sorted(self.theta)

    def metadata(self) -> dict[str, Any]:
        return {
            "anchor_model": self.anchor_model,
            "log_likelihood": self.log_likelihood,
            "n_votes_used": self.n_votes_used,
            "converged": self.converged,
            "iterations": self.iterations,
            "ridge": self.config.ridge,
            "tie_mode": self.config.tie_mode,
            "covariate_mode": self.config.covariate_mode if self.beta is not None else None,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class LeaderboardRow:
    model: str
    elo: float
    n_votes: int
    rank: int
    delta_elo: float | None = None
    delta_rank: int | None = None


@dataclass(frozen=True)
class Leaderboard:
    rows: tuple[LeaderboardRow, ...]
    unranked: tuple[tuple[str, int], ...]  # (model, n_votes) below the vote floor
    min_votes: int
