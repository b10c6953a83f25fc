"""Failure-tag aggregation and expert-study statistics.

The LLM judge that produces failure tags and the conduct of the expert
study are external; this module only aggregates their outputs: per-model
tag rates, Likert dimension statistics, Krippendorff's alpha (ordinal),
and expert-vs-arena agreement rates.
"""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyInput, InsufficientData, MissingEvaluation, OutOfRange

# Tag ids 1-7; id 0 ("unjudgeable") merges into 1 at ingest.
TAG_NAMES = {
    1: "Non-functional",
    2: "Spec Non-compliance",
    3: "Integrity Failure",
    4: "Numerical Computation Failure",
    5: "Interpretability Failure",
    6: "Low User Value",
    7: "Presentation Deficiency",
}

DIMENSIONS = (
    "errors_accuracy",
    "formula_conventions",
    "color_formatting",
    "structure_organization",
    "modeling_conventions",
    "purpose_utility",
)

DIMENSION_LABELS = {
    "errors_accuracy": "Errors & Accuracy",
    "formula_conventions": "Formula Conventions",
    "color_formatting": "Color Coding & Formatting",
    "structure_organization": "Structure & Organization",
    "modeling_conventions": "Modeling Conventions",
    "purpose_utility": "Purpose & Utility",
}


@dataclass(frozen=True)
class TaggedLoss:
    battle_id: str
    loser: str
    tags: frozenset[int]
    rationale: str = ""

    def __post_init__(self) -> None:
        merged = frozenset(1 if t == 0 else t for t in self.tags)
        if not merged:
            raise ValueError(f"battle {self.battle_id}: empty tag set")
        unknown = [t for t in merged if t not in TAG_NAMES]
        if unknown:
            raise ValueError(f"battle {self.battle_id}: unknown tag ids {unknown}")
        object.__setattr__(self, "tags", merged)


def read_tags_jsonl(path: str | Path) -> list[TaggedLoss]:
    """JSONL of {battle_id, loser, tags: [ints], rationale}."""
    losses = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            losses.append(
                TaggedLoss(
                    battle_id=str(obj["battle_id"]),
                    loser=str(obj["loser"]),
                    tags=frozenset(int(t) for t in obj["tags"]),
                    rationale=str(obj.get("rationale", "")),
                )
            )
    return losses


@dataclass(frozen=True)
class FailureTagTable:
    rates: dict[str, dict[int, float]]  # model -> tag id -> rate over its losses
    loss_counts: dict[str, int]
    avg_tags_per_loss: float | None  # None when there are no losses

    def to_csv(self) -> str:
        import io

        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["model", "n_losses"] + [TAG_NAMES[t] for t in sorted(TAG_NAMES)])
        for model in sorted(self.rates):
            row = self.rates[model]
            writer.writerow(
                [model, self.loss_counts[model]]
                + [f"{row.get(t, 0.0):.3f}" for t in sorted(TAG_NAMES)]
            )
        return out.getvalue()


def aggregate_failure_tags(losses: Iterable[TaggedLoss]) -> FailureTagTable:
    """Per-model rate of each tag over that model's losses (multi-label,
    so rows need not sum to 1), plus the global average tags per loss."""
    counts: dict[str, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    totals: dict[str, int] = defaultdict(int)
    tag_total = 0
    n_losses = 0
    for loss in losses:
        totals[loss.loser] += 1
        n_losses += 1
        tag_total += len(loss.tags)
        for tag in loss.tags:
            counts[loss.loser][tag] += 1
    rates = {
        model: {tag: counts[model][tag] / totals[model] for tag in counts[model]}
        for model in totals
    }
    return FailureTagTable(
        rates=rates,
        loss_counts=dict(totals),
        avg_tags_per_loss=(tag_total / n_losses) if n_losses else None,
    )


# --- expert rubric --------------------------------------------------------------


def expert_overall(scores: Sequence[int]) -> int:
    """Round-half-up mean of the six dimension scores, as an integer 1-5."""
    if len(scores) != len(DIMENSIONS):
        raise OutOfRange(f"need {len(DIMENSIONS)} scores, got {len(scores)}")
    for score in scores:
        if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 5:
            raise OutOfRange(f"score {score!r} outside the 1-5 scale")
    total = sum(scores)
    # floor(total/6 + 1/2) in exact integer arithmetic
    return (total + 3) // 6


@dataclass(frozen=True)
class ExpertEvaluation:
    spreadsheet_id: str
    rater_id: str
    errors_accuracy: int
    formula_conventions: int
    color_formatting: int
    structure_organization: int
    modeling_conventions: int
    purpose_utility: int

    def scores(self) -> tuple[int, ...]:
        return tuple(getattr(self, d) for d in DIMENSIONS)

    @property
    def overall(self) -> int:
        return expert_overall(self.scores())


def read_evals_csv(path: str | Path) -> list[ExpertEvaluation]:
    """CSV: spreadsheet_id, rater_id, then the six dimension columns."""
    evals = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for record in reader:
            evals.append(
                ExpertEvaluation(
                    spreadsheet_id=record["spreadsheet_id"],
                    rater_id=record["rater_id"],
                    **{d: int(record[d]) for d in DIMENSIONS},
                )
            )
    return evals


@dataclass(frozen=True)
class ScoreStats:
    mean: float
    stddev: float  # population
    pct_ge_4: float
    pct_le_2: float


def _score_stats(values: Sequence[int]) -> ScoreStats:
    n = len(values)
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / n
    return ScoreStats(
        mean=mean,
        stddev=math.sqrt(variance),
        pct_ge_4=sum(1 for v in values if v >= 4) / n,
        pct_le_2=sum(1 for v in values if v <= 2) / n,
    )


def dimension_stats(evals: Sequence[ExpertEvaluation]) -> dict[str, ScoreStats]:
    """Population statistics per dimension plus the derived overall rating."""
    if not evals:
        raise EmptyInput("no expert evaluations")
    out = {
        dimension: _score_stats([getattr(e, dimension) for e in evals])
        for dimension in DIMENSIONS
    }
    out["overall"] = _score_stats([e.overall for e in evals])
    return out


# --- inter-rater reliability -----------------------------------------------------


def krippendorff_alpha(ratings: Mapping[str, Mapping[str, int]]) -> float:
    """Krippendorff's alpha with the ordinal metric over a partial
    rater -> item -> score matrix.

    Items rated by fewer than two raters drop out; at least two such
    pairable items are required. Returns 1.0 when there is no expected
    disagreement at all (every rating identical).
    """
    units: dict[str, list[int]] = defaultdict(list)
    for rater_scores in ratings.values():
        for item, score in rater_scores.items():
            units[item].append(score)
    pairable = {item: vals for item, vals in units.items() if len(vals) >= 2}
    if len(pairable) < 2:
        raise InsufficientData(
            f"need >= 2 items with >= 2 ratings, got {len(pairable)}"
        )

    values = sorted({v for vals in pairable.values() for v in vals})
    index = {v: i for i, v in enumerate(values)}
    size = len(values)
    coincidence = [[0.0] * size for _ in range(size)]
    for vals in pairable.values():
        m = len(vals)
        for i, a in enumerate(vals):
            for j, b in enumerate(vals):
                if i != j:
                    coincidence[index[a]][index[b]] += 1.0 / (m - 1)
    marginals = [sum(row) for row in coincidence]
    n_total = sum(marginals)

    def ordinal_delta_sq(ci: int, ki: int) -> float:
        lo, hi = min(ci, ki), max(ci, ki)
        if lo == hi:
            return 0.0
        between = sum(marginals[g] for g in range(lo, hi + 1))
        return (between - (marginals[lo] + marginals[hi]) / 2.0) ** 2

    observed = sum(
        coincidence[c][k] * ordinal_delta_sq(c, k)
        for c in range(size)
        for k in range(size)
    )
    expected = sum(
        marginals[c] * marginals[k] * ordinal_delta_sq(c, k)
        for c in range(size)
        for k in range(size)
    )
    if expected == 0.0:
        return 1.0
    return 1.0 - (n_total - 1.0) * observed / expected


# --- expert vs arena ---------------------------------------------------------------


@dataclass(frozen=True)
class ExpertBattle:
    battle_id: str
    spreadsheet_a: str
    spreadsheet_b: str
    winner: str  # "a" or "b"

    def __post_init__(self) -> None:
        if self.winner not in ("a", "b"):
            raise ValueError(f"battle {self.battle_id}: winner must be 'a' or 'b'")


@dataclass(frozen=True)
class AgreementStats:
    agree_rate: float
    disagree_rate: float
    tie_rate: float
    n_battles: int
    decisive_agreement: float | None  # agreement among non-tied expert comparisons


def arena_agreement(
    battles: Sequence[ExpertBattle], evals: Sequence[ExpertEvaluation]
) -> AgreementStats:
    """Compare expert preference (higher mean overall across raters) with
    the arena winner for each battle."""
    by_sheet: dict[str, list[int]] = defaultdict(list)
    for evaluation in evals:
        by_sheet[evaluation.spreadsheet_id].append(evaluation.overall)

    def mean_overall(sheet_id: str, battle_id: str) -> float:
        scores = by_sheet.get(sheet_id)
        if not scores:
            raise MissingEvaluation(
                f"battle {battle_id}: spreadsheet {sheet_id!r} has no expert evaluation"
            )
        return sum(scores) / len(scores)

    agree = disagree = tie = 0
    for battle in battles:
        score_a = mean_overall(battle.spreadsheet_a, battle.battle_id)
        score_b = mean_overall(battle.spreadsheet_b, battle.battle_id)
        if score_a == score_b:
            tie += 1
            continue
        expert_pick = "a" if score_a > score_b else "b"
        if expert_pick == battle.winner:
            agree += 1
        else:
            disagree += 1
    total = len(battles)
    if total == 0:
        raise EmptyInput("no battles")
    decisive = agree + disagree
    return AgreementStats(
        agree_rate=agree / total,
        disagree_rate=disagree / total,
        tie_rate=tie / total,
        n_battles=total,
        decisive_agreement=(agree / decisive) if decisive else None,
    )
