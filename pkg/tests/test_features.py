import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from sheetarena.errors import InsufficientData
from sheetarena.features import (
    FEATURE_NAMES,
    color_family,
    detect_tables,
    extract_features,
    finance_color_score,
    standardize_features,
)
from sheetarena.formulas import evaluate_workbook
from sheetarena.sheetspec import index_to_col, parse_workbook
from helpers import make_doc, make_workbook


def features_of(sheets, **extra):
    wb = make_workbook(sheets, **extra)
    return extract_features(wb, evaluate_workbook(wb)), wb


# --- detect_tables ----------------------------------------------------------------


def test_three_by_three_block_is_one_region():
    cells = {f"{col}{row}": 1 for row in (1, 2, 3) for col in "ABC"}
    wb = make_workbook({"S": cells})
    regions = detect_tables(wb.sheets[0])
    assert len(regions) == 1
    assert regions[0].cell_count == 9


def test_single_row_is_not_a_table():
    cells = {f"{index_to_col(i)}1": 1 for i in range(1, 11)}
    wb = make_workbook({"S": cells})
    assert detect_tables(wb.sheets[0]) == []


def test_two_blocks_is_two_regions_and_parallel():
    cells = {}
    for row in (1, 2):
        for col in ("A", "B"):
            cells[f"{col}{row}"] = 1
        for col in ("E", "F"):
            cells[f"{col}{row}"] = 2
    fv, _ = features_of({"S": cells})
    assert fv.num_tables == 2.0
    assert fv.has_parallel_tables == 1.0


def test_stacked_blocks_are_not_parallel():
    cells = {}
    for row in (1, 2):
        for col in ("A", "B"):
            cells[f"{col}{row}"] = 1
    for row in (5, 6):
        for col in ("A", "B"):
            cells[f"{col}{row}"] = 2
    fv, _ = features_of({"S": cells})
    assert fv.num_tables == 2.0
    assert fv.has_parallel_tables == 0.0


def _oracle_regions(occupied):
    """Brute-force flood fill over a coordinate set; returns qualifying
    (min_row, max_row, min_col, max_col, count) tuples in row-major order."""
    remaining = set(occupied)
    regions = []
    while remaining:
        seed = min(remaining)
        component = {seed}
        frontier = [seed]
        remaining.discard(seed)
        while frontier:
            r, c = frontier.pop()
            for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if (nr, nc) in remaining:
                    remaining.discard((nr, nc))
                    component.add((nr, nc))
                    frontier.append((nr, nc))
        rows = [r for r, _ in component]
        cols = [c for _, c in component]
        span_ok = max(rows) - min(rows) >= 1 and max(cols) - min(cols) >= 1
        if len(component) >= 4 and span_ok:
            regions.append((min(rows), max(rows), min(cols), max(cols), len(component)))
    regions.sort(key=lambda t: (t[0], t[2]))
    return regions


def test_detect_tables_matches_flood_fill_oracle():
    rng = random.Random(7)
    for _ in range(200):
        occupied = {
            (rng.randint(1, 12), rng.randint(1, 12)) for _ in range(rng.randint(0, 40))
        }
        cells = {f"{index_to_col(c)}{r}": 1 for r, c in occupied}
        wb = make_workbook({"S": cells})
        got = [
            (t.min_row, t.max_row, t.min_col, t.max_col, t.cell_count)
            for t in detect_tables(wb.sheets[0])
        ]
        assert got == _oracle_regions(occupied)


# --- finance color score -------------------------------------------------------------


def test_color_families():
    assert color_family("#000000") == "black"
    assert color_family("#0000FF") == "blue"
    assert color_family("#008000") == "green"
    assert color_family("#FF0000") is None
    assert color_family("#FFFFFF") is None
    assert color_family("#808080") is None


def test_full_conformance_scores_one():
    fv, _ = features_of(
        {
            "S": {
                "A1": (5, {"fontColor": "#0000FF"}),
                "A2": ("=A1*2", {"fontColor": "#000000"}),
            }
        }
    )
    assert fv.finance_color_convention == 1.0


def test_full_violation_scores_zero():
    fv, _ = features_of({"S": {"A1": (5, {"fontColor": "green"})}})
    assert fv.finance_color_convention == 0.0


def test_three_of_four_conforming():
    # roles: blue number (ok), black same-sheet formula (ok), green
    # cross-sheet formula (ok), black-fonted number (violation)
    doc = make_doc(
        {
            "S": {
                "A1": (5, {"fontColor": "#0000FF"}),
                "A2": ("=A1*2", {"fontColor": "#000000"}),
                "A3": ("=Data!A1", {"fontColor": "#008000"}),
                "A4": (7, {"fontColor": "#000000"}),
            },
            "Data": {"A1": 1},
        }
    )
    wb = parse_workbook(json.dumps(doc).encode())
    assert finance_color_score(wb, evaluate_workbook(wb)) == 0.75


def test_no_applicable_cells_scores_zero():
    fv, _ = features_of({"S": {"A1": ("label", {"fontColor": "#0000FF"}), "A2": 3}})
    assert fv.finance_color_convention == 0.0


# --- extract_features ------------------------------------------------------------------


def test_pct_text_ratio():
    fv, _ = features_of({"S": {"A1": "a", "A2": "b", "A3": 1, "A4": 2}})
    assert fv.pct_text == 0.5


def test_error_rate():
    fv, _ = features_of({"S": {"A1": "=1/0", "A2": "=1+1"}})
    assert fv.compute_error_rate == 0.5


def test_structure_logs_match_hand_computation():
    cells = {"A1": 1, f"{index_to_col(5)}10": 2}  # used range 10 rows x 5 cols
    fv, _ = features_of({"S": cells})
    assert fv.log_row_count == pytest.approx(math.log(11), abs=1e-12)
    assert fv.log_col_count == pytest.approx(math.log(6), abs=1e-12)
    assert fv.log_aspect_ratio == pytest.approx(math.log(1 + 10 / 5), abs=1e-12)


def test_literal_detection_skips_index_arguments():
    fv, _ = features_of(
        {
            "S": {
                "A1": 1, "B1": 2, "A2": 3, "B2": 4,
                "C1": "=VLOOKUP(A1, A1:B2, 2, FALSE)",  # the 2 is structural
                "C2": "=ROUND(A1, 2)",                   # the 2 is structural
                "C3": "=A1*1.21",                        # magic number
                "C4": "=SUM(A1:B2)",                     # no literal
            }
        }
    )
    assert fv.pct_formulas_with_literals == 0.25


def test_feature_vector_has_29_fields():
    assert len(FEATURE_NAMES) == 29
    fv, _ = features_of({"S": {"A1": 1}})
    assert set(fv.as_dict()) == set(FEATURE_NAMES)


# --- standardize_features -----------------------------------------------------------------


def test_standardize_two_rows():
    matrix = np.array([[1.0], [3.0]])
    standardized, means, stds, flagged = standardize_features(matrix)
    assert standardized[:, 0].tolist() == [-1.0, 1.0]
    assert means[0] == 2.0 and stds[0] == 1.0 and flagged == []


def test_standardize_constant_column_flagged():
    standardized, _, _, flagged = standardize_features(np.array([[2.0], [2.0], [2.0]]))
    assert standardized[:, 0].tolist() == [0.0, 0.0, 0.0]
    assert flagged == [0]


def test_standardize_two_level_column():
    standardized, _, _, _ = standardize_features(np.array([[0.0], [0.0], [10.0], [10.0]]))
    assert standardized[:, 0].tolist() == [-1.0, -1.0, 1.0, 1.0]


def test_standardize_requires_two_rows():
    with pytest.raises(InsufficientData):
        standardize_features(np.array([[1.0, 2.0]]))


# --- randomized invariants ----------------------------------------------------------------


def _random_cells(rng, max_row=10, max_col=8):
    cells = {}
    for _ in range(rng.randint(1, 30)):
        ref = f"{index_to_col(rng.randint(1, max_col))}{rng.randint(1, max_row)}"
        roll = rng.random()
        if roll < 0.4:
            cells[ref] = rng.randint(0, 100)
        elif roll < 0.7:
            cells[ref] = rng.choice(["x", "hello world", "Q3 total"])
        else:
            cells[ref] = rng.choice(["=A1+1", "=SUM(A1:B3)", "=1/0", "=B2*2"])
        if rng.random() < 0.3:
            style = {}
            if rng.random() < 0.5:
                style["fill"] = rng.choice(["#FF0000", "#00FF00"])
            if rng.random() < 0.5:
                style["fontColor"] = rng.choice(["#0000FF", "#000000", "red"])
            if rng.random() < 0.3:
                style["fontWeight"] = "bold"
            if rng.random() < 0.3:
                style["numberFormat"] = "0.00"
            if style:
                cells[ref] = (cells[ref], style)
    return cells


def test_randomized_feature_invariants():
    rng = random.Random(99)
    for _ in range(200):
        cells = _random_cells(rng)
        wb = make_workbook({"S": cells})
        grid = evaluate_workbook(wb)
        fv = extract_features(wb, grid)

        for name, value in fv.as_dict().items():
            if name.startswith("pct_") or name.endswith("_rate"):
                assert 0.0 <= value <= 1.0, (name, value)
            if name.startswith("log_"):
                assert value >= 0.0, (name, value)
        assert fv.has_border in (0.0, 1.0)
        assert fv.has_parallel_tables in (0.0, 1.0)

        # Partition identity, exact in rational arithmetic.
        non_empty = [c for c in wb.sheets[0].cells if not c.is_blank()]
        total = len(non_empty)
        n_text = sum(1 for c in non_empty if c.kind.value == "text")
        n_formula = sum(1 for c in non_empty if c.kind.value == "formula")
        n_number = sum(1 for c in non_empty if c.kind.value == "number")
        assert n_text + n_formula + n_number == total
        if total:
            assert (
                Fraction(n_text, total)
                + Fraction(n_formula, total)
                + Fraction(n_number, total)
                == 1
            )
            assert fv.pct_text + fv.pct_formula + n_number / total == pytest.approx(
                1.0, abs=1e-12
            )

        # Permutation invariance: shuffling the cells array changes nothing.
        shuffled = list(cells.items())
        rng.shuffle(shuffled)
        wb2 = make_workbook({"S": dict(shuffled)})
        fv2 = extract_features(wb2, evaluate_workbook(wb2))
        assert fv == fv2

        # Translation invariance for geometry-free features.
        dr, dc = rng.randint(0, 4), rng.randint(0, 3)
        moved = {}
        for ref, content in cells.items():
            from sheetarena.sheetspec import CellAddress

            addr = CellAddress.parse(ref)
            moved[f"{index_to_col(addr.col + dc)}{addr.row + dr}"] = content
        wb3 = make_workbook({"S": moved})
        fv3 = extract_features(wb3, evaluate_workbook(wb3))
        for name in (
            "num_tables",
            "largest_table_pct",
            "cell_density",
            "pct_text",
            "pct_formula",
            "pct_formulas_with_literals",
            "pct_fill",
            "pct_bold",
            "pct_number_format",
            "pct_font_color",
        ):
            assert getattr(fv, name) == pytest.approx(getattr(fv3, name), abs=1e-12), name
