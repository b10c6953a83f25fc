"""Anchored Elo conversion, win matrices, fit comparison, segment fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..categories import expand_category_filter
from ..errors import InsufficientVotes, ModelSetMismatch
from .fit import FeatureTable, fit_bt, fit_bt_with_features, sigmoid
from .types import FitConfig, Leaderboard, LeaderboardRow, RatingFit, VoteRecord

ANCHOR_RATING = 1000.0
# Classical Elo curve: a 400-point gap means 10:1 odds.
ELO_SCALE = 400.0 / math.log(10.0)
DEFAULT_MIN_VOTES = 50


def elo_of(fit: RatingFit, model: str, anchor_rating: float = ANCHOR_RATING,
           scale: float = ELO_SCALE) -> float:
    return anchor_rating + scale * (fit.theta[model] - fit.theta[fit.anchor_model])


def to_elo(
    fit: RatingFit,
    anchor_rating: float = ANCHOR_RATING,
    scale: float = ELO_SCALE,
    min_votes: int = DEFAULT_MIN_VOTES,
) -> Leaderboard:
    """Leaderboard rows sorted by descending Elo, anchor exactly at
    ``anchor_rating``. Models under ``min_votes`` go to the unranked list.
    """
    scored = [
        (model, elo_of(fit, model, anchor_rating, scale), fit.vote_counts.get(model, 0))
        for model in fit.theta
    ]
    ranked = [(m, e, n) for m, e, n in scored if n >= min_votes]
    unranked = sorted((m, n) for m, e, n in scored if n < min_votes)
    ranked.sort(key=lambda row: (-row[1], row[0]))
    rows = tuple(
        LeaderboardRow(model=m, elo=e, n_votes=n, rank=i + 1)
        for i, (m, e, n) in enumerate(ranked)
    )
    return Leaderboard(rows=rows, unranked=tuple(unranked), min_votes=min_votes)


def win_matrix(
    fit: RatingFit, include_feature_means: bool = False
) -> tuple[list[str], np.ndarray]:
    """K x K matrix of P(row beats col) under the fitted strengths.

    For feature-augmented fits the default evaluates with feature
    contributions set to zero (a decomposition, not a prediction); pass
    ``include_feature_means=True`` to re-add the models' average
    standardized feature contributions.
    """
    models = fit.models
    theta = np.array([fit.theta[m] for m in models])
    adjust = np.zeros(len(models))
    if include_feature_means:
        if fit.beta is None or fit.model_feature_means is None:
            raise ValueError("fit carries no feature means to include")
        beta = np.array([fit.beta[name].coefficient for name in fit.feature_names])
        adjust = np.array(
            [float(fit.model_feature_means[m] @ beta) for m in models]
        )
    score = theta + adjust
    delta = score[:, None] - score[None, :]
    matrix = sigmoid(delta)
    np.fill_diagonal(matrix, 0.5)
    return models, matrix


@dataclass(frozen=True)
class ComparisonRow:
    model: str
    base_elo: float
    adjusted_elo: float
    delta_elo: float
    base_rank: int
    adjusted_rank: int
    delta_rank: int  # base rank - adjusted rank; positive means it moved up


def compare_fits(
    base: RatingFit,
    adjusted: RatingFit,
    anchor_rating: float = ANCHOR_RATING,
    scale: float = ELO_SCALE,
) -> list[ComparisonRow]:
    """Per-model Elo and rank shifts between two fits over the same models."""
    if set(base.theta) != set(adjusted.theta):
        raise ModelSetMismatch(
            f"model sets differ: {sorted(set(base.theta) ^ set(adjusted.theta))}"
        )
    if base.anchor_model != adjusted.anchor_model:
        raise ModelSetMismatch(
            f"anchors differ: {base.anchor_model!r} vs {adjusted.anchor_model!r}"
        )
    base_board = to_elo(base, anchor_rating, scale, min_votes=0)
    adjusted_board = to_elo(adjusted, anchor_rating, scale, min_votes=0)
    base_rows = {row.model: row for row in base_board.rows}
    adjusted_rows = {row.model: row for row in adjusted_board.rows}
    out = []
    for model in base_rows:
        b, a = base_rows[model], adjusted_rows[model]
        out.append(
            ComparisonRow(
                model=model,
                base_elo=b.elo,
                adjusted_elo=a.elo,
                delta_elo=a.elo - b.elo,
                base_rank=b.rank,
                adjusted_rank=a.rank,
                delta_rank=b.rank - a.rank,
            )
        )
    out.sort(key=lambda row: row.base_rank)
    return out


def segment_fit(
    votes: list[VoteRecord],
    category_filter: str | list[str],
    config: FitConfig,
    features: FeatureTable | None = None,
    min_decisive_votes: int = 30,
) -> RatingFit:
    """Fit restricted to votes whose category matches the filter.

    "Finance" expands to the two finance-flavored categories. Raises
    InsufficientVotes when fewer than ``min_decisive_votes`` decisive votes
    survive the filter.
    """
    wanted = expand_category_filter(category_filter)
    filtered = [v for v in votes if v.category in wanted]
    decisive = sum(1 for v in filtered if v.outcome.decisive)
    if decisive < min_decisive_votes:
        raise InsufficientVotes(
            f"segment {sorted(wanted)} has {decisive} decisive votes; need "
            f">= {min_decisive_votes}"
        )
    if features is None:
        return fit_bt(filtered, config)
    return fit_bt_with_features(filtered, features, config)
