"""Synthetic arena generation with known ground truth.

Battles are drawn uniformly over unordered model pairs; each side's output
gets synthetic features (per-model mean + gaussian noise); the outcome is
sampled from the augmented win probability

    P(A beats B) = sigmoid(theta*_A - theta*_B + sum_k beta*_k (X_Ak - X_Bk))

Given the same spec and seed the emitted records are byte-identical, which
makes the simulator usable as a frozen oracle for recovery tests.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .rating.fit import FeatureTable
from .rating.types import Outcome, VoteRecord


@dataclass
class SimulationSpec:
    models: list[str]
    theta: dict[str, float]
    n_votes: int
    seed: int
    beta: dict[str, float] = field(default_factory=dict)
    feature_names: list[str] = field(default_factory=list)
    # feature -> model -> mean; unlisted combinations default to 0.
    feature_means: dict[str, dict[str, float]] = field(default_factory=dict)
    feature_sd: float = 1.0
    categories: list[str] | None = None
    # category -> feature -> coefficient; falls back to the global beta.
    beta_by_category: dict[str, dict[str, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.models) < 2:
            raise ValueError("need at least 2 models")
        if self.n_votes < 1:
            raise ValueError("need at least 1 vote")
        missing = [m for m in self.models if m not in self.theta]
        if missing:
            raise ValueError(f"theta missing for models: {missing}")
        for name in self.beta:
            if name not in self.feature_names:
                raise ValueError(f"beta names unknown feature {name!r}")

    @classmethod
    def uniform_theta(
        cls, n_models: int, lo: float, hi: float, n_votes: int, seed: int, **kwargs
    ) -> "SimulationSpec":
        models = [f"m{i:02d}" for i in range(n_models)]
        if n_models == 1:
            theta = {models[0]: lo}
        else:
            step = (hi - lo) / (n_models - 1)
            theta = {m: lo + i * step for i, m in enumerate(models)}
        return cls(models=models, theta=theta, n_votes=n_votes, seed=seed, **kwargs)


@dataclass
class SimulationResult:
    votes: list[VoteRecord]
    features: FeatureTable
    truth: dict

    def empirical_win_rate(self, model_a: str, model_b: str) -> float | None:
        """Fraction of battles between the two models that model_a won."""
        wins = 0
        total = 0
        for vote in self.votes:
            pair = {vote.model_a, vote.model_b}
            if pair != {model_a, model_b}:
                continue
            total += 1
            winner = vote.model_a if vote.outcome == Outcome.A_WINS else vote.model_b
            if winner == model_a:
                wins += 1
        return wins / total if total else None


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def simulate(spec: SimulationSpec) -> SimulationResult:
    rng = random.Random(spec.seed)
    pairs = [
        (a, b)
        for i, a in enumerate(spec.models)
        for b in spec.models[i + 1 :]
    ]
    votes: list[VoteRecord] = []
    rows: dict[str, np.ndarray] = {}

    def draw_features(model: str) -> np.ndarray:
        values = []
        for name in spec.feature_names:
            mean = spec.feature_means.get(name, {}).get(model, 0.0)
            values.append(rng.gauss(mean, spec.feature_sd))
        return np.array(values, dtype=float)

    for i in range(spec.n_votes):
        pair = rng.choice(pairs)
        model_a, model_b = pair if rng.random() < 0.5 else (pair[1], pair[0])
        category = rng.choice(spec.categories) if spec.categories else None
        beta = spec.beta_by_category.get(category, spec.beta) if category else spec.beta

        wid_a = f"wk-{i:06d}-a"
        wid_b = f"wk-{i:06d}-b"
        x_a = draw_features(model_a)
        x_b = draw_features(model_b)
        rows[wid_a] = x_a
        rows[wid_b] = x_b

        logit = spec.theta[model_a] - spec.theta[model_b]
        for k, name in enumerate(spec.feature_names):
            logit += beta.get(name, 0.0) * (x_a[k] - x_b[k])
        outcome = Outcome.A_WINS if rng.random() < _sigmoid(logit) else Outcome.B_WINS

        votes.append(
            VoteRecord(
                battle_id=f"sim-{i:06d}",
                prompt_id=f"prompt-{i:06d}",
                category=category,
                model_a=model_a,
                model_b=model_b,
                workbook_a=wid_a,
                workbook_b=wid_b,
                outcome=outcome,
                timestamp="1970-01-01T00:00:00Z",
            )
        )

    truth = {
        "models": list(spec.models),
        "theta": dict(spec.theta),
        "beta": dict(spec.beta),
        "beta_by_category": {c: dict(b) for c, b in spec.beta_by_category.items()},
        "feature_names": list(spec.feature_names),
        "feature_means": {f: dict(m) for f, m in spec.feature_means.items()},
        "feature_sd": spec.feature_sd,
        "categories": list(spec.categories) if spec.categories else None,
        "n_votes": spec.n_votes,
        "seed": spec.seed,
    }
    return SimulationResult(
        votes=votes,
        features=FeatureTable(names=list(spec.feature_names), rows=rows),
        truth=truth,
    )
