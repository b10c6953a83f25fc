import random
from collections import Counter

import pytest

from sheetarena.analytics import (
    AgreementStats,
    ExpertBattle,
    ExpertEvaluation,
    TaggedLoss,
    aggregate_failure_tags,
    arena_agreement,
    dimension_stats,
    expert_overall,
    krippendorff_alpha,
)
from sheetarena.errors import EmptyInput, InsufficientData, MissingEvaluation, OutOfRange


def make_eval(sheet, rater, *scores):
    return ExpertEvaluation(sheet, rater, *scores)


# --- failure tags ------------------------------------------------------------------


def test_tag_rates_direct_count():
    losses = [
        TaggedLoss("b1", "m", frozenset({1, 7})),
        TaggedLoss("b2", "m", frozenset({7})),
    ]
    table = aggregate_failure_tags(losses)
    assert table.rates["m"][7] == 1.0
    assert table.rates["m"][1] == 0.5
    assert table.avg_tags_per_loss == 1.5


def test_empty_tag_input():
    table = aggregate_failure_tags([])
    assert table.rates == {}
    assert table.avg_tags_per_loss is None


def test_tag_rate_shape_at_scale():
    losses = [
        TaggedLoss(f"b{i}", "maverick", frozenset({2} if i < 86 else {5}))
        for i in range(100)
    ]
    table = aggregate_failure_tags(losses)
    assert table.rates["maverick"][2] == 0.86
    assert table.loss_counts["maverick"] == 100


def test_tag_zero_merges_into_one():
    loss = TaggedLoss("b", "m", frozenset({0, 3}))
    assert loss.tags == frozenset({1, 3})


def test_empty_tags_rejected():
    with pytest.raises(ValueError):
        TaggedLoss("b", "m", frozenset())


def test_rates_are_rates_not_distribution():
    losses = [TaggedLoss("b1", "m", frozenset({1, 2, 3}))]
    table = aggregate_failure_tags(losses)
    assert sum(table.rates["m"].values()) == 3.0  # multi-label rows exceed 1


# --- expert overall -----------------------------------------------------------------


def test_overall_rounds_half_up():
    assert expert_overall((3, 3, 3, 3, 3, 4)) == 3  # mean 3.1667
    assert expert_overall((5, 5, 5, 5, 5, 5)) == 5
    assert expert_overall((3, 3, 3, 4, 4, 4)) == 4  # mean 3.5 -> half-up


def test_overall_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        expert_overall((0, 3, 3, 3, 3, 3))
    with pytest.raises(OutOfRange):
        expert_overall((6, 3, 3, 3, 3, 3))
    with pytest.raises(OutOfRange):
        expert_overall((3, 3, 3))


def test_overall_monotone():
    rng = random.Random(8)
    for _ in range(200):
        scores = [rng.randint(1, 5) for _ in range(6)]
        base = expert_overall(tuple(scores))
        j = rng.randrange(6)
        if scores[j] < 5:
            scores[j] += 1
            assert expert_overall(tuple(scores)) >= base


# --- dimension stats -----------------------------------------------------------------


def test_single_eval_all_threes():
    stats = dimension_stats([make_eval("s1", "r1", 3, 3, 3, 3, 3, 3)])
    for d, s in stats.items():
        assert s.mean == 3.0 and s.stddev == 0.0
        assert s.pct_ge_4 == 0.0 and s.pct_le_2 == 0.0


def test_two_evals_spread():
    evals = [
        make_eval("s1", "r1", 1, 3, 3, 3, 3, 3),
        make_eval("s2", "r1", 5, 3, 3, 3, 3, 3),
    ]
    stats = dimension_stats(evals)
    assert stats["errors_accuracy"].mean == 3.0
    assert stats["errors_accuracy"].pct_ge_4 == 0.5
    assert stats["errors_accuracy"].pct_le_2 == 0.5


def test_fixture_matches_hand_computation():
    # 10 evaluations; errors_accuracy column: 1,2,3,4,5,5,4,3,2,1
    column = [1, 2, 3, 4, 5, 5, 4, 3, 2, 1]
    evals = [
        make_eval(f"s{i}", "r1", c, 3, 3, 3, 3, 3) for i, c in enumerate(column)
    ]
    stats = dimension_stats(evals)
    mean = sum(column) / 10  # 3.0
    var = sum((c - mean) ** 2 for c in column) / 10  # population
    assert stats["errors_accuracy"].mean == pytest.approx(mean)
    assert stats["errors_accuracy"].stddev == pytest.approx(var**0.5)
    assert stats["errors_accuracy"].pct_ge_4 == 0.4
    assert stats["errors_accuracy"].pct_le_2 == 0.4


def test_empty_evals_raise():
    with pytest.raises(EmptyInput):
        dimension_stats([])


# --- krippendorff alpha ----------------------------------------------------------------


def brute_force_alpha(units):
    """Independent pair-enumeration computation of ordinal alpha."""
    flat = [v for unit in units for v in unit]
    n = len(flat)
    freq = Counter(flat)

    def delta2(a, b):
        if a == b:
            return 0.0
        lo, hi = min(a, b), max(a, b)
        between = sum(count for g, count in freq.items() if lo <= g <= hi)
        return (between - (freq[lo] + freq[hi]) / 2.0) ** 2

    observed = sum(
        sum(
            delta2(unit[i], unit[j])
            for i in range(len(unit))
            for j in range(len(unit))
            if i != j
        )
        / (len(unit) - 1)
        for unit in units
    ) / n
    expected = sum(
        delta2(flat[i], flat[j]) for i in range(n) for j in range(n) if i != j
    ) / (n * (n - 1))
    if expected == 0.0:
        return 1.0
    return 1.0 - observed / expected


def test_perfect_agreement_is_one():
    ratings = {
        "r1": {"i1": 2, "i2": 4, "i3": 5},
        "r2": {"i1": 2, "i2": 4, "i3": 5},
        "r3": {"i1": 2, "i2": 4, "i3": 5},
    }
    assert abs(krippendorff_alpha(ratings) - 1.0) <= 1e-12


def test_systematic_disagreement_is_negative():
    ratings = {"r1": {"i1": 1, "i2": 5}, "r2": {"i1": 5, "i2": 1}}
    assert krippendorff_alpha(ratings) < 0


def test_alpha_matches_brute_force_on_fixture():
    # 4 items x 3 raters with missing entries
    ratings = {
        "r1": {"i1": 1, "i2": 2, "i3": 3, "i4": 4},
        "r2": {"i1": 2, "i2": 2, "i3": 4, "i4": 4},
        "r3": {"i1": 1, "i3": 3, "i4": 5},
    }
    units = [[1, 2, 1], [2, 2], [3, 4, 3], [4, 4, 5]]
    assert krippendorff_alpha(ratings) == pytest.approx(brute_force_alpha(units), abs=1e-9)


def test_alpha_matches_brute_force_randomized():
    rng = random.Random(12)
    for _ in range(50):
        raters = [f"r{i}" for i in range(rng.randint(2, 5))]
        items = [f"i{i}" for i in range(rng.randint(2, 8))]
        ratings = {r: {} for r in raters}
        for item in items:
            for rater in raters:
                if rng.random() < 0.8:
                    ratings[rater][item] = rng.randint(1, 5)
        units = []
        for item in items:
            vals = [ratings[r][item] for r in raters if item in ratings[r]]
            if len(vals) >= 2:
                units.append(vals)
        if len(units) < 2:
            continue
        assert krippendorff_alpha(ratings) == pytest.approx(
            brute_force_alpha(units), abs=1e-9
        )


def test_alpha_invariant_under_relabeling():
    ratings = {
        "r1": {"i1": 1, "i2": 2, "i3": 3},
        "r2": {"i1": 2, "i2": 2, "i3": 4},
    }
    renamed = {"x": ratings["r2"], "y": ratings["r1"]}
    assert krippendorff_alpha(ratings) == pytest.approx(krippendorff_alpha(renamed), abs=1e-15)


def test_alpha_insufficient_data():
    with pytest.raises(InsufficientData):
        krippendorff_alpha({"r1": {"i1": 3, "i2": 4}})  # no item has 2 ratings
    with pytest.raises(InsufficientData):
        krippendorff_alpha({"r1": {"i1": 3}, "r2": {"i1": 4}})  # only 1 pairable item


# --- arena agreement ----------------------------------------------------------------------


def test_agreement_simple_cases():
    evals = [
        make_eval("sa", "r1", 4, 4, 4, 4, 4, 4),
        make_eval("sb", "r1", 2, 2, 2, 2, 2, 2),
    ]
    battles = [ExpertBattle("b1", "sa", "sb", winner="a")]
    stats = arena_agreement(battles, evals)
    assert stats.agree_rate == 1.0

    battles = [ExpertBattle("b1", "sa", "sb", winner="b")]
    stats = arena_agreement(battles, evals)
    assert stats.disagree_rate == 1.0


def test_equal_expert_means_tie():
    evals = [
        make_eval("sa", "r1", 3, 3, 3, 3, 3, 3),
        make_eval("sb", "r1", 3, 3, 3, 3, 3, 3),
    ]
    stats = arena_agreement([ExpertBattle("b1", "sa", "sb", "a")], evals)
    assert stats.tie_rate == 1.0


def test_agreement_counting_rates():
    evals = []
    battles = []
    # 4 agree, 3 disagree, 3 expert ties
    for i in range(10):
        sa, sb = f"a{i}", f"b{i}"
        if i < 4:
            evals += [make_eval(sa, "r", 5, 5, 5, 5, 5, 5), make_eval(sb, "r", 1, 1, 1, 1, 1, 1)]
            battles.append(ExpertBattle(f"bt{i}", sa, sb, "a"))
        elif i < 7:
            evals += [make_eval(sa, "r", 1, 1, 1, 1, 1, 1), make_eval(sb, "r", 5, 5, 5, 5, 5, 5)]
            battles.append(ExpertBattle(f"bt{i}", sa, sb, "a"))
        else:
            evals += [make_eval(sa, "r", 3, 3, 3, 3, 3, 3), make_eval(sb, "r", 3, 3, 3, 3, 3, 3)]
            battles.append(ExpertBattle(f"bt{i}", sa, sb, "b"))
    stats = arena_agreement(battles, evals)
    assert stats == AgreementStats(
        agree_rate=0.4,
        disagree_rate=0.3,
        tie_rate=0.3,
        n_battles=10,
        decisive_agreement=4 / 7,
    )
    assert abs(stats.agree_rate + stats.disagree_rate + stats.tie_rate - 1.0) < 1e-12


def test_missing_evaluation_raises():
    evals = [make_eval("sa", "r1", 3, 3, 3, 3, 3, 3)]
    with pytest.raises(MissingEvaluation):
        arena_agreement([ExpertBattle("b1", "sa", "sb", "a")], evals)


def test_multiple_raters_averaged():
    evals = [
        make_eval("sa", "r1", 5, 5, 5, 5, 5, 5),
        make_eval("sa", "r2", 1, 1, 1, 1, 1, 1),  # sa mean overall = 3
        make_eval("sb", "r1", 2, 2, 2, 2, 2, 2),  # sb mean overall = 2
    ]
    stats = arena_agreement([ExpertBattle("b1", "sa", "sb", "a")], evals)
    assert stats.agree_rate == 1.0
