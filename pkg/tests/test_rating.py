import math
import random

import numpy as np
import pytest

from sheetarena.errors import (
    DegenerateData,
    InsufficientVotes,
    MissingAnchor,
    ModelSetMismatch,
    SingularInformation,
)
from sheetarena.rating import (
    Design,
    FeatureTable,
    FitConfig,
    Outcome,
    VoteRecord,
    compare_fits,
    fit_bt,
    fit_bt_with_features,
    segment_fit,
    to_elo,
    win_matrix,
)
from sheetarena.rating.fit import _newton
from sheetarena.simulate import SimulationSpec, simulate
from helpers import spearman


def vote(i, a, b, outcome, category=None, wa=None, wb=None):
    return VoteRecord(
        battle_id=f"b{i}",
        prompt_id=f"p{i}",
        category=category,
        model_a=a,
        model_b=b,
        workbook_a=wa or f"w{i}a",
        workbook_b=wb or f"w{i}b",
        outcome=outcome,
    )


def votes_from_counts(counts):
    """counts: {(winner, loser): n} -> decisive vote list."""
    votes = []
    i = 0
    for (winner, loser), n in counts.items():
        for _ in range(n):
            votes.append(vote(i, winner, loser, Outcome.A_WINS))
            i += 1
    return votes


CFG = FitConfig(anchor_model="A")


def test_symmetric_votes_give_equal_strengths():
    votes = votes_from_counts({("A", "B"): 2, ("B", "A"): 2})
    fit = fit_bt(votes, CFG)
    assert abs(fit.theta["A"] - fit.theta["B"]) < 1e-9
    models, matrix = win_matrix(fit)
    assert matrix[0, 1] == pytest.approx(0.5, abs=1e-9)


def test_logistic_identity_for_every_pair():
    votes = votes_from_counts({("A", "B"): 5, ("B", "A"): 2, ("A", "C"): 3, ("C", "B"): 4})
    fit = fit_bt(votes, CFG)
    models, matrix = win_matrix(fit)
    assert np.allclose(matrix + matrix.T, 1.0, atol=1e-12)


def test_label_swap_symmetry():
    votes = votes_from_counts({("A", "B"): 5, ("B", "A"): 2, ("A", "C"): 3, ("C", "B"): 4})
    swapped = [
        VoteRecord(
            battle_id=v.battle_id,
            prompt_id=v.prompt_id,
            category=v.category,
            model_a=v.model_b,
            model_b=v.model_a,
            workbook_a=v.workbook_b,
            workbook_b=v.workbook_a,
            outcome=Outcome.B_WINS if v.outcome == Outcome.A_WINS else Outcome.A_WINS,
        )
        for v in votes
    ]
    fit1 = fit_bt(votes, CFG)
    fit2 = fit_bt(swapped, CFG)
    for model in fit1.theta:
        assert fit1.theta[model] == pytest.approx(fit2.theta[model], abs=1e-9)


def test_missing_anchor_raises():
    votes = votes_from_counts({("B", "C"): 3})
    with pytest.raises(MissingAnchor):
        fit_bt(votes, CFG)


def test_degenerate_data_with_zero_ridge_raises():
    votes = votes_from_counts({("A", "B"): 5})
    with pytest.raises(DegenerateData):
        fit_bt(votes, FitConfig(anchor_model="A", ridge=0.0))
    fit = fit_bt(votes, CFG)  # default ridge keeps it finite
    assert fit.converged
    assert any("only wins or only losses" in w for w in fit.warnings)


def test_tie_modes():
    votes = votes_from_counts({("A", "B"): 2, ("B", "A"): 2})
    votes.append(vote(99, "A", "B", Outcome.TIE))
    votes.append(vote(100, "A", "B", Outcome.BOTH_BAD))
    excl = fit_bt(votes, CFG)
    assert excl.n_votes_used == 4.0
    half = fit_bt(votes, FitConfig(anchor_model="A", tie_mode="half_win"))
    assert half.n_votes_used == 5.0  # tie contributes two half-weight rows
    assert abs(half.theta["B"]) < 1e-9


def test_gradient_matches_central_differences():
    rng = random.Random(4)
    for _ in range(10):
        models = ["A", "B", "C", "D"]
        votes = []
        for i in range(60):
            a, b = rng.sample(models, 2)
            votes.append(vote(i, a, b, rng.choice([Outcome.A_WINS, Outcome.B_WINS])))
        table = FeatureTable(
            names=["f1", "f2"],
            rows={
                w: np.array([rng.gauss(0, 1), rng.gauss(0, 1)])
                for v in votes
                for w in (v.workbook_a, v.workbook_b)
            },
        )
        design = Design(votes, CFG, features=table)
        params = np.array([rng.gauss(0, 1) for _ in design.param_names])
        analytic = design.gradient(params)
        h = 1e-5
        for j in range(len(params)):
            bump = np.zeros_like(params)
            bump[j] = h
            numeric = (design.nll(params + bump) - design.nll(params - bump)) / (2 * h)
            scale = max(1.0, abs(analytic[j]), abs(numeric))
            assert abs(analytic[j] - numeric) / scale < 1e-6


def test_newton_loss_is_nonincreasing():
    rng = random.Random(11)
    models = ["A", "B", "C", "D", "E"]
    votes = []
    for i in range(200):
        a, b = rng.sample(models, 2)
        votes.append(vote(i, a, b, rng.choice([Outcome.A_WINS, Outcome.B_WINS])))
    design = Design(votes, CFG)
    trace: list[float] = []
    _, converged, _ = _newton(design, np.zeros(len(design.param_names)), trace=trace)
    assert converged
    assert all(b <= a + 1e-15 for a, b in zip(trace, trace[1:]))


def test_zeroed_features_reduce_to_vanilla():
    rng = random.Random(5)
    models = ["A", "B", "C"]
    votes = []
    for i in range(120):
        a, b = rng.sample(models, 2)
        votes.append(vote(i, a, b, rng.choice([Outcome.A_WINS, Outcome.B_WINS])))
    # identical features on both sides of every battle -> zero differences
    table = FeatureTable(
        names=["f1", "f2"],
        rows={w: np.array([1.5, -2.0]) for v in votes for w in (v.workbook_a, v.workbook_b)},
    )
    vanilla = fit_bt(votes, CFG)
    adjusted = fit_bt_with_features(votes, table, CFG)
    for model in vanilla.theta:
        assert adjusted.theta[model] == pytest.approx(vanilla.theta[model], abs=1e-6)
    assert adjusted.log_likelihood >= vanilla.log_likelihood - 1e-12
    for stat in adjusted.beta.values():
        assert stat.coefficient == 0.0 and stat.p_value == 1.0


def test_feature_fit_likelihood_dominates_vanilla():
    result = simulate(
        SimulationSpec.uniform_theta(
            6, -1, 1, 800, seed=3,
            feature_names=["f1", "f2"], beta={"f1": 0.5},
        )
    )
    cfg = FitConfig(anchor_model="m00")
    vanilla = fit_bt(result.votes, cfg)
    adjusted = fit_bt_with_features(result.votes, result.features, cfg)
    assert adjusted.log_likelihood >= vanilla.log_likelihood


def test_feature_sign_equivariance():
    result = simulate(
        SimulationSpec.uniform_theta(
            5, -1, 1, 600, seed=7, feature_names=["f1"], beta={"f1": 0.8}
        )
    )
    cfg = FitConfig(anchor_model="m00")
    fit1 = fit_bt_with_features(result.votes, result.features, cfg)
    negated = FeatureTable(
        names=["f1"], rows={w: -row for w, row in result.features.rows.items()}
    )
    fit2 = fit_bt_with_features(result.votes, negated, cfg)
    assert fit2.beta["f1"].coefficient == pytest.approx(
        -fit1.beta["f1"].coefficient, abs=1e-8
    )
    for model in fit1.theta:
        assert fit2.theta[model] == pytest.approx(fit1.theta[model], abs=1e-8)


def test_collinear_features_raise_singular_information():
    result = simulate(
        SimulationSpec.uniform_theta(
            4, -1, 1, 300, seed=9, feature_names=["f1"], beta={"f1": 0.5}
        )
    )
    doubled = FeatureTable(
        names=["f1", "f1_copy"],
        rows={w: np.array([row[0], row[0]]) for w, row in result.features.rows.items()},
    )
    with pytest.raises(SingularInformation) as exc:
        fit_bt_with_features(result.votes, doubled, FitConfig(anchor_model="m00"))
    assert set(exc.value.columns) == {"f1", "f1_copy"}


def test_covariate_model_mean_mode():
    result = simulate(
        SimulationSpec.uniform_theta(
            5, -1, 1, 800, seed=13,
            feature_names=["style"],
            beta={"style": 1.0},
            feature_means={"style": {"m04": 1.0, "m00": -1.0}},
        )
    )
    cfg = FitConfig(anchor_model="m00", covariate_mode="model_mean")
    fit = fit_bt_with_features(result.votes, result.features, cfg)
    assert fit.converged
    assert fit.model_feature_means is not None
    assert fit.beta["style"].coefficient > 0


def test_segment_fit_filters_and_floors():
    result = simulate(
        SimulationSpec.uniform_theta(
            4, -1, 1, 400, seed=21, categories=["Professional Finance", "Creative & Generative"]
        )
    )
    cfg = FitConfig(anchor_model="m00")
    with pytest.raises(InsufficientVotes):
        segment_fit(result.votes, "Academic & Research", cfg)
    finance = segment_fit(result.votes, "Finance", cfg)
    n_finance = sum(1 for v in result.votes if v.category == "Professional Finance")
    assert finance.n_votes_used == float(n_finance)
    # filter matching every vote reproduces the unfiltered fit
    everything = segment_fit(
        result.votes, ["Professional Finance", "Creative & Generative"], cfg
    )
    unfiltered = fit_bt(result.votes, cfg)
    for model in unfiltered.theta:
        assert everything.theta[model] == pytest.approx(unfiltered.theta[model], abs=1e-12)


def test_planted_segment_effect_recovered_only_in_segment():
    spec = SimulationSpec.uniform_theta(
        6, -1, 1, 4000, seed=31,
        feature_names=["f1"],
        categories=["Academic & Research", "SMB & Personal"],
        beta_by_category={
            "Academic & Research": {"f1": 1.0},
            "SMB & Personal": {"f1": 0.0},
        },
    )
    result = simulate(spec)
    cfg = FitConfig(anchor_model="m00")
    academic = segment_fit(result.votes, "Academic & Research", cfg, features=result.features)
    personal = segment_fit(result.votes, "SMB & Personal", cfg, features=result.features)
    assert academic.beta["f1"].p_value < 0.05
    assert academic.beta["f1"].coefficient > 0.5
    assert personal.beta["f1"].p_value > 0.05


def test_compare_fits_identity_and_anchor():
    votes = votes_from_counts({("A", "B"): 6, ("B", "A"): 3, ("C", "A"): 4, ("A", "C"): 4})
    fit = fit_bt(votes, CFG)
    rows = compare_fits(fit, fit)
    for row in rows:
        assert row.delta_elo == 0.0 and row.delta_rank == 0
    anchor_row = next(r for r in rows if r.model == "A")
    assert anchor_row.base_elo == 1000.0 and anchor_row.adjusted_elo == 1000.0


def test_compare_fits_model_set_mismatch():
    fit1 = fit_bt(votes_from_counts({("A", "B"): 2, ("B", "A"): 1}), CFG)
    fit2 = fit_bt(
        votes_from_counts({("A", "B"): 2, ("B", "A"): 1, ("C", "A"): 1, ("A", "C"): 1}), CFG
    )
    with pytest.raises(ModelSetMismatch):
        compare_fits(fit1, fit2)


def test_confounded_feature_swaps_ranks_after_adjustment():
    # B's raw edge comes from a style feature; C is genuinely stronger.
    spec = SimulationSpec(
        models=["A", "B", "C"],
        theta={"A": 0.0, "B": 0.2, "C": 0.4},
        n_votes=4000,
        seed=17,
        feature_names=["style"],
        beta={"style": 0.8},
        feature_means={"style": {"B": 1.5, "C": -1.5}},
    )
    result = simulate(spec)
    cfg = FitConfig(anchor_model="A")
    base = fit_bt(result.votes, cfg)
    adjusted = fit_bt_with_features(result.votes, result.features, cfg)
    rows = {r.model: r for r in compare_fits(base, adjusted)}
    assert rows["B"].base_rank < rows["C"].base_rank  # style carried B
    assert rows["C"].adjusted_rank < rows["B"].adjusted_rank  # adjustment flips it
    assert rows["C"].delta_rank > 0 and rows["B"].delta_rank < 0


def test_recovery_spearman_small():
    result = simulate(SimulationSpec.uniform_theta(8, -2, 2, 2000, seed=41))
    fit = fit_bt(result.votes, FitConfig(anchor_model="m00"))
    truth = result.truth["theta"]
    models = sorted(truth)
    rho = spearman([truth[m] for m in models], [fit.theta[m] for m in models])
    assert rho >= 0.95
