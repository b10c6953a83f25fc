"""Maximum-likelihood fitting of pairwise strength models.

The win probability for a battle between models a and b is

    P(a beats b) = sigmoid(theta_a - theta_b + sum_k beta_k * d_k)

where d is the (standardized) difference of output features, absent in the
vanilla fit. The loss is the mean cross-entropy over decisive votes plus a
small ridge penalty for numerical identifiability; the anchor model's theta
is pinned to zero during optimization. Newton-Raphson with step halving
guarantees the penalized loss never increases across iterations.

Standard errors come from the inverse observed information of the
*unpenalized* log-likelihood at the optimum; p-values are two-sided Wald.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateData, MissingAnchor, SingularInformation
from ..features.extract import standardize_features
from .types import (
    BetaStat,
    COVARIATE_MODEL_MEAN,
    COVARIATE_PER_BATTLE,
    FitConfig,
    Outcome,
    RatingFit,
    TIE_MODE_HALF_WIN,
    VoteRecord,
)


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    exp_z = np.exp(z[~positive])
    out[~positive] = exp_z / (1.0 + exp_z)
    return out


@dataclass
class FeatureTable:
    """Per-workbook raw feature rows, keyed by workbook id."""

    names: list[str]
    rows: dict[str, np.ndarray]

    def __post_init__(self) -> None:
        width = len(self.names)
        for wid, row in self.rows.items():
            array = np.asarray(row, dtype=float)
            if array.shape != (width,):
                raise ValueError(f"feature row {wid!r} has shape {array.shape}, want ({width},)")
            self.rows[wid] = array

    @classmethod
    def from_feature_vectors(cls, vectors: dict) -> "FeatureTable":
        from ..features.extract import FEATURE_NAMES

        return cls(
            names=list(FEATURE_NAMES),
            rows={wid: fv.as_array() for wid, fv in vectors.items()},
        )


class Design:
    """Immutable fitting problem: rows, labels, weights, parameter names.

    Parameters are ordered [non-anchor models (sorted), feature columns].
    Exposes loss/gradient/hessian so gradient checks can probe arbitrary
    points.
    """

    def __init__(
        self,
        votes: list[VoteRecord],
        config: FitConfig,
        features: FeatureTable | None = None,
    ):
        self.config = config
        used: list[tuple[VoteRecord, float, float]] = []  # (vote, y, w)
        for vote in votes:
            if vote.outcome == Outcome.A_WINS:
                used.append((vote, 1.0, 1.0))
            elif vote.outcome == Outcome.B_WINS:
                used.append((vote, 0.0, 1.0))
            elif vote.outcome == Outcome.TIE and config.tie_mode == TIE_MODE_HALF_WIN:
                used.append((vote, 1.0, 0.5))
                used.append((vote, 0.0, 0.5))
        if not used:
            raise DegenerateData("no decisive votes to fit")

        self.models = sorted({v.model_a for v, _, _ in used} | {v.model_b for v, _, _ in used})
        if config.anchor_model not in self.models:
            raise MissingAnchor(
                f"anchor model {config.anchor_model!r} has no decisive votes"
            )
        self.free_models = [m for m in self.models if m != config.anchor_model]
        model_col = {m: j for j, m in enumerate(self.free_models)}

        self.feature_names: list[str] = list(features.names) if features is not None else []
        self.zero_feature_columns: list[str] = []
        self.model_feature_means: dict[str, np.ndarray] | None = None

        n_rows = len(used)
        n_models = len(self.free_models)
        n_features = len(self.feature_names)
        X = np.zeros((n_rows, n_models + n_features))
        y = np.zeros(n_rows)
        w = np.zeros(n_rows)

        diffs = None
        if features is not None:
            diffs = self._feature_diffs([v for v, _, _ in used], features)

        for i, (vote, label, weight) in enumerate(used):
            if vote.model_a != config.anchor_model:
                X[i, model_col[vote.model_a]] = 1.0
            if vote.model_b != config.anchor_model:
                X[i, model_col[vote.model_b]] = -1.0
            if diffs is not None:
                X[i, n_models:] = diffs[i]
            y[i] = label
            w[i] = weight

        if n_features:
            zero_mask = np.all(X[:, n_models:] == 0.0, axis=0)
            self.zero_feature_columns = [
                name for name, is_zero in zip(self.feature_names, zero_mask) if is_zero
            ]
            keep = ~zero_mask
            self.active_feature_names = [
                name for name, k in zip(self.feature_names, keep) if k
            ]
            X = np.hstack([X[:, :n_models], X[:, n_models:][:, keep]])
        else:
            self.active_feature_names = []

        self.X = X
        self.y = y
        self.w = w
        self.n_eff = float(w.sum())
        self.param_names = list(self.free_models) + list(self.active_feature_names)
        self.n_models = n_models
        self.used_votes = used

    def _feature_diffs(self, votes: list[VoteRecord], features: FeatureTable) -> np.ndarray:
        workbook_ids = sorted({v.workbook_a for v in votes} | {v.workbook_b for v in votes})
        missing = [wid for wid in workbook_ids if wid not in features.rows]
        if missing:
            raise KeyError(f"feature vectors missing for workbooks: {missing[:5]}")
        matrix = np.vstack([features.rows[wid] for wid in workbook_ids])
        if len(workbook_ids) >= 2:
            standardized, _, _, _ = standardize_features(matrix)
        else:
            standardized = np.zeros_like(matrix)
        z_rows = {wid: standardized[i] for i, wid in enumerate(workbook_ids)}

        mode = self.config.covariate_mode
        if mode == COVARIATE_PER_BATTLE:
            return np.vstack([z_rows[v.workbook_a] - z_rows[v.workbook_b] for v in votes])
        if mode != COVARIATE_MODEL_MEAN:
            raise ValueError(f"unknown covariate mode {mode!r}")

        by_model: dict[str, list[np.ndarray]] = {}
        seen: set[str] = set()
        for vote in votes:
            for model, wid in ((vote.model_a, vote.workbook_a), (vote.model_b, vote.workbook_b)):
                if wid not in seen:
                    seen.add(wid)
                    by_model.setdefault(model, []).append(z_rows[wid])
        means = {m: np.vstack(rows).mean(axis=0) for m, rows in by_model.items()}
        self.model_feature_means = means
        return np.vstack([means[v.model_a] - means[v.model_b] for v in votes])

    # -- objective -------------------------------------------------------------

    def nll(self, params: np.ndarray) -> float:
        z = self.X @ params
        cross_entropy = self.y * np.logaddexp(0.0, -z) + (1.0 - self.y) * np.logaddexp(0.0, z)
        penalty = self.config.ridge * float(params @ params)
        return float(self.w @ cross_entropy) / self.n_eff + penalty

    def gradient(self, params: np.ndarray) -> np.ndarray:
        p = sigmoid(self.X @ params)
        return self.X.T @ (self.w * (p - self.y)) / self.n_eff + 2.0 * self.config.ridge * params

    def hessian(self, params: np.ndarray) -> np.ndarray:
        p = sigmoid(self.X @ params)
        curvature = self.w * p * (1.0 - p)
        H = self.X.T @ (self.X * curvature[:, None]) / self.n_eff
        H[np.diag_indices_from(H)] += 2.0 * self.config.ridge
        return H

    def log_likelihood(self, params: np.ndarray) -> float:
        """Unpenalized weighted log-likelihood (sum form, not mean)."""
        z = self.X @ params
        cross_entropy = self.y * np.logaddexp(0.0, -z) + (1.0 - self.y) * np.logaddexp(0.0, z)
        return -float(self.w @ cross_entropy)

    def observed_information(self, params: np.ndarray) -> np.ndarray:
        p = sigmoid(self.X @ params)
        curvature = self.w * p * (1.0 - p)
        return self.X.T @ (self.X * curvature[:, None])


def _newton(
    design: Design, x0: np.ndarray, trace: list[float] | None = None
) -> tuple[np.ndarray, bool, int]:
    params = x0.copy()
    current = design.nll(params)
    if trace is not None:
        trace.append(current)
    iterations = 0
    converged = False
    for iterations in range(1, design.config.max_iter + 1):
        grad = design.gradient(params)
        if float(np.max(np.abs(grad))) < design.config.tol:
            converged = True
            iterations -= 1
            break
        H = design.hessian(params)
        try:
            step = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            step = -grad  # fall back to gradient descent direction
        # Step halving keeps the penalized loss non-increasing.
        scale = 1.0
        improved = False
        for _ in range(60):
            candidate = params + scale * step
            value = design.nll(candidate)
            if value <= current:
                params = candidate
                current = value
                improved = True
                break
            scale *= 0.5
        if trace is not None:
            trace.append(current)
        if not improved:
            break
    else:
        iterations = design.config.max_iter
    if not converged:
        converged = float(np.max(np.abs(design.gradient(params)))) < design.config.tol
    return params, converged, iterations


def _vote_counts(votes: list[VoteRecord], models: list[str]) -> dict[str, int]:
    counts = {m: 0 for m in models}
    for vote in votes:
        for model in (vote.model_a, vote.model_b):
            if model in counts:
                counts[model] += 1
    return counts


def _degeneracy_warnings(design: Design) -> list[str]:
    wins: dict[str, float] = {m: 0.0 for m in design.models}
    losses: dict[str, float] = {m: 0.0 for m in design.models}
    for vote, label, weight in design.used_votes:
        winner = vote.model_a if label == 1.0 else vote.model_b
        loser = vote.model_b if label == 1.0 else vote.model_a
        wins[winner] += weight
        losses[loser] += weight
    flagged = [m for m in design.models if wins[m] == 0.0 or losses[m] == 0.0]
    if not flagged:
        return []
    if design.config.ridge == 0.0:
        raise DegenerateData(
            f"models with only wins or only losses and no ridge penalty: {flagged}"
        )
    return [f"model {m} has only wins or only losses; ridge keeps the fit finite" for m in flagged]


def _wald_stats(
    design: Design, params: np.ndarray
) -> tuple[dict[str, BetaStat], list[str]]:
    """Feature-coefficient standard errors and p-values at the optimum."""
    warnings: list[str] = []
    info = design.observed_information(params)
    n_models = design.n_models
    try:
        np.linalg.cholesky(info)
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        # Distinguish features collinear among themselves (an input defect,
        # raised) from covariates collinear with model identities (inherent
        # to the model_mean reading, where each model's covariate is
        # constant; fall back to a pseudo-inverse).
        feature_block = design.X[:, n_models:]
        if feature_block.shape[1]:
            _, singular_values, v_rows = np.linalg.svd(feature_block, full_matrices=True)
            cutoff = max(1e-10, 1e-12 * float(singular_values.max(initial=1.0)))
            offending: list[str] = []
            for idx in range(len(v_rows)):
                if idx >= len(singular_values) or singular_values[idx] < cutoff:
                    for j, name in enumerate(design.active_feature_names):
                        if abs(v_rows[idx][j]) > 1e-6:
                            offending.append(name)
            if offending:
                raise SingularInformation(sorted(set(offending)))
        warnings.append(
            "observed information is singular (covariates not separable from "
            "model identities); standard errors use a pseudo-inverse"
        )
        cov = np.linalg.pinv(info)

    beta: dict[str, BetaStat] = {}
    for j, name in enumerate(design.active_feature_names):
        column = n_models + j
        se = math.sqrt(max(cov[column, column], 0.0))
        coef = float(params[column])
        if se == 0.0:
            p = 1.0 if coef == 0.0 else 0.0
        else:
            p = math.erfc(abs(coef / se) / math.sqrt(2.0))
        beta[name] = BetaStat(coefficient=coef, std_error=se, p_value=p)
    for name in design.zero_feature_columns:
        beta[name] = BetaStat(coefficient=0.0, std_error=float("inf"), p_value=1.0)
        warnings.append(f"feature {name} has zero difference on every vote; coefficient pinned to 0")
    # Preserve the input column order.
    ordered = {name: beta[name] for name in design.feature_names if name in beta}
    return ordered, warnings


def independent_feature_columns(
    table: FeatureTable,
    tol: float = 1e-6,
    votes: list[VoteRecord] | None = None,
) -> tuple[FeatureTable, list[str]]:
    """Maximal independent subset of feature columns, earlier names first.

    Small arenas (few distinct workbooks or few votes) cannot identify all
    29 covariates; dropping linearly dependent columns up front keeps the
    feature fit well-posed. When ``votes`` is given, independence is judged
    on the per-battle difference matrix the fit will actually see, which is
    a projection of the output rows and can lose further rank. Returns
    (filtered table, dropped names).
    """
    ids = sorted(table.rows)
    if len(ids) < 2:
        return table, []
    matrix = np.vstack([table.rows[wid] for wid in ids])
    standardized, _, _, _ = standardize_features(matrix)
    if votes is not None:
        z_rows = {wid: standardized[i] for i, wid in enumerate(ids)}
        diffs = [
            z_rows[v.workbook_a] - z_rows[v.workbook_b]
            for v in votes
            if v.outcome.decisive and v.workbook_a in z_rows and v.workbook_b in z_rows
        ]
        if not diffs:
            return table, []
        standardized = np.vstack(diffs)
    kept: list[int] = []
    basis: list[np.ndarray] = []
    for j in range(standardized.shape[1]):
        column = standardized[:, j].copy()
        norm0 = float(np.linalg.norm(column))
        if norm0 < tol:
            continue  # constant column; carries no signal
        for b in basis:
            column -= (column @ b) * b
        if float(np.linalg.norm(column)) > tol * norm0:
            basis.append(column / np.linalg.norm(column))
            kept.append(j)
    dropped = [name for j, name in enumerate(table.names) if j not in kept]
    filtered = FeatureTable(
        names=[table.names[j] for j in kept],
        rows={wid: table.rows[wid][kept] for wid in table.rows},
    )
    return filtered, dropped


def fit_bt(votes: list[VoteRecord], config: FitConfig) -> RatingFit:
    """Vanilla Bradley-Terry fit over decisive votes."""
    design = Design(votes, config)
    warnings = _degeneracy_warnings(design)
    params, converged, iterations = _newton(design, np.zeros(len(design.param_names)))
    theta = {config.anchor_model: 0.0}
    for j, model in enumerate(design.free_models):
        theta[model] = float(params[j])
    return RatingFit(
        theta=theta,
        beta=None,
        anchor_model=config.anchor_model,
        log_likelihood=design.log_likelihood(params),
        n_votes_used=design.n_eff,
        converged=converged,
        iterations=iterations,
        vote_counts=_vote_counts(votes, design.models),
        config=config,
        warnings=warnings,
    )


def fit_bt_with_features(
    votes: list[VoteRecord],
    features: FeatureTable,
    config: FitConfig,
) -> RatingFit:
    """Feature-augmented fit; warm-started from the vanilla solution so the
    penalized loss (and in practice the log-likelihood) never regresses."""
    vanilla = fit_bt(votes, config)
    design = Design(votes, config, features=features)
    warnings = _degeneracy_warnings(design)

    x0 = np.zeros(len(design.param_names))
    for j, model in enumerate(design.free_models):
        x0[j] = vanilla.theta[model]
    params, converged, iterations = _newton(design, x0)

    beta, wald_warnings = _wald_stats(design, params)
    warnings.extend(wald_warnings)

    theta = {config.anchor_model: 0.0}
    for j, model in enumerate(design.free_models):
        theta[model] = float(params[j])
    return RatingFit(
        theta=theta,
        beta=beta,
        anchor_model=config.anchor_model,
        log_likelihood=design.log_likelihood(params),
        n_votes_used=design.n_eff,
        converged=converged,
        iterations=iterations,
        vote_counts=_vote_counts(votes, design.models),
        config=config,
        warnings=warnings,
        model_feature_means=design.model_feature_means,
        feature_names=list(design.feature_names),
    )
