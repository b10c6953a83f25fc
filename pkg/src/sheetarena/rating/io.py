"""File formats: votes JSONL, feature CSV, leaderboard/significance tables."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .fit import FeatureTable
from .leaderboard import ComparisonRow
from .types import Leaderboard, RatingFit, VoteRecord


def read_votes_jsonl(path: str | Path) -> list[VoteRecord]:
    votes = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                votes.append(VoteRecord.from_json_obj(obj))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad vote record: {exc}") from None
    return votes


def write_votes_jsonl(path: str | Path, votes: Iterable[VoteRecord]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for vote in votes:
            handle.write(json.dumps(vote.to_json_obj(), ensure_ascii=False) + "\n")


def read_feature_csv(path: str | Path) -> FeatureTable:
    """CSV with a leading workbook_id column and one column per feature."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0] != "workbook_id":
            raise ValueError(f"{path}: first column must be workbook_id")
        names = header[1:]
        rows: dict[str, np.ndarray] = {}
        for record in reader:
            if not record:
                continue
            rows[record[0]] = np.array([float(x) for x in record[1:]], dtype=float)
    return FeatureTable(names=names, rows=rows)


def write_feature_csv(path: str | Path, table: FeatureTable) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["workbook_id"] + list(table.names))
        for wid in sorted(table.rows):
            writer.writerow([wid] + [repr(float(x)) for x in table.rows[wid]])


def leaderboard_csv(board: Leaderboard) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["rank", "model", "elo", "n_votes"])
    for row in board.rows:
        writer.writerow([row.rank, row.model, f"{row.elo:.1f}", row.n_votes])
    return out.getvalue()


def leaderboard_json_obj(
    board: Leaderboard,
    fit: RatingFit,
    anchor_rating: float | None = None,
    scale: float | None = None,
) -> dict:
    from .leaderboard import ANCHOR_RATING, ELO_SCALE

    return {
        "elo": {
            "anchor_rating": ANCHOR_RATING if anchor_rating is None else anchor_rating,
            "scale": ELO_SCALE if scale is None else scale,
        },
        "rows": [
            {
                "model": r.model,
                "elo": round(r.elo, 1),
                "n_votes": r.n_votes,
                "rank": r.rank,
                **({"delta_elo": round(r.delta_elo, 1)} if r.delta_elo is not None else {}),
                **({"delta_rank": r.delta_rank} if r.delta_rank is not None else {}),
            }
            for r in board.rows
        ],
        "unranked": [{"model": m, "n_votes": n} for m, n in board.unranked],
        "min_votes": board.min_votes,
        "fit": fit.metadata(),
    }


def significance_csv(fit: RatingFit) -> str:
    """Feature, coefficient, std error, p-value; sorted by |coefficient|."""
    if fit.beta is None:
        raise ValueError("vanilla fit has no feature coefficients")
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["feature", "coefficient", "std_error", "p_value", "significant"])
    ordered = sorted(
        fit.beta.items(), key=lambda kv: -abs(kv[1].coefficient)
    )
    for name, stat in ordered:
        se = "" if math.isinf(stat.std_error) else f"{stat.std_error:.4f}"
        writer.writerow(
            [name, f"{stat.coefficient:+.4f}", se, f"{stat.p_value:.4f}",
             "yes" if stat.significant else "no"]
        )
    return out.getvalue()


def comparison_csv(rows: list[ComparisonRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["model", "baseline_elo", "adjusted_elo", "delta_elo", "delta_rank"])
    for row in rows:
        writer.writerow(
            [
                row.model,
                f"{row.base_elo:.1f}",
                f"{row.adjusted_elo:.1f}",
                f"{row.delta_elo:+.1f}",
                f"{row.delta_rank:+d}",
            ]
        )
    return out.getvalue()


def comparison_markdown(rows: list[ComparisonRow]) -> str:
    lines = [
        "| Model | Baseline Elo | Adjusted Elo | dElo | dRank |",
        "| --- | ---: | ---: | ---: | ---: |",
    ]
    for row in rows:
        lines.append(
            f"| {row.model} | {row.base_elo:.0f} | {row.adjusted_elo:.0f} "
            f"| {row.delta_elo:+.0f} | {row.delta_rank:+d} |"
        )
    return "\n".join(lines) + "\n"
