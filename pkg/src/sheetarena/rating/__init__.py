"""Bradley-Terry rating engine with anchored Elo and feature covariates."""

from .fit import Design, FeatureTable, fit_bt, fit_bt_with_features, sigmoid
from .leaderboard import (
    ANCHOR_RATING,
    DEFAULT_MIN_VOTES,
    ELO_SCALE,
    ComparisonRow,
    compare_fits,
    elo_of,
    segment_fit,
    to_elo,
    win_matrix,
)
from .types import (
    BetaStat,
    COVARIATE_MODEL_MEAN,
    COVARIATE_PER_BATTLE,
    FitConfig,
    Leaderboard,
    LeaderboardRow,
    Outcome,
    RatingFit,
    TIE_MODE_EXCLUDE,
    TIE_MODE_HALF_WIN,
    VoteRecord,
)

__all__ = [
    "Design",
    "FeatureTable",
    "fit_bt",
    "fit_bt_with_features",
    "sigmoid",
    "ANCHOR_RATING",
    "DEFAULT_MIN_VOTES",
    "ELO_SCALE",
    "ComparisonRow",
    "compare_fits",
    "elo_of",
    "segment_fit",
    "to_elo",
    "win_matrix",
    "BetaStat",
    "COVARIATE_MODEL_MEAN",
    "COVARIATE_PER_BATTLE",
    "FitConfig",
    "Leaderboard",
    "LeaderboardRow",
    "Outcome",
    "RatingFit",
    "TIE_MODE_EXCLUDE",
    "TIE_MODE_HALF_WIN",
    "VoteRecord",
]
