"""Report bundle: leaderboards, significance, per-domain tables, failure tags."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .analytics import (
    DIMENSION_LABELS,
    ExpertEvaluation,
    FailureTagTable,
    TaggedLoss,
    aggregate_failure_tags,
    dimension_stats,
)
from .categories import CATEGORIES, FINANCE_SEGMENT
from .errors import InsufficientVotes, SheetArenaError
from .rating import (
    FeatureTable,
    FitConfig,
    RatingFit,
    VoteRecord,
    compare_fits,
    fit_bt,
    fit_bt_with_features,
    segment_fit,
    to_elo,
)
from .rating.fit import independent_feature_columns
from .rating.io import (
    comparison_csv,
    comparison_markdown,
    leaderboard_csv,
    leaderboard_json_obj,
    significance_csv,
)


@dataclass
class ReportBundle:
    baseline: RatingFit
    board_csv: str
    board_json: dict
    adjusted: RatingFit | None = None
    comparison_csv: str | None = None
    comparison_md: str | None = None
    significance_csv: str | None = None
    domain_tables: dict[str, str] = field(default_factory=dict)  # segment -> csv
    failure_tags: FailureTagTable | None = None
    dimension_stats_json: dict | None = None

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []

        def emit(name: str, text: str) -> None:
            path = out / name
            path.write_text(text, encoding="utf-8")
            written.append(path)

        emit("leaderboard.csv", self.board_csv)
        emit("leaderboard.json", json.dumps(self.board_json, indent=2) + "\n")
        if self.comparison_csv is not None:
            emit("adjusted_leaderboard.csv", self.comparison_csv)
        if self.comparison_md is not None:
            emit("adjusted_leaderboard.md", self.comparison_md)
        if self.significance_csv is not None:
            emit("significance.csv", self.significance_csv)
        for segment, csv_text in self.domain_tables.items():
            slug = segment.lower().replace(" & ", "_").replace(" ", "_").replace("/", "_")
            emit(f"domain_{slug}.csv", csv_text)
        if self.failure_tags is not None:
            emit("failure_tags.csv", self.failure_tags.to_csv())
        if self.dimension_stats_json is not None:
            emit(
                "expert_dimensions.json",
                json.dumps(self.dimension_stats_json, indent=2) + "\n",
            )
        return written

    def markdown_summary(self) -> str:
        lines = ["# Arena report", "", "## Leaderboard (baseline)", "```",
                 self.board_csv.rstrip(), "```"]
        if self.comparison_md is not None:
            lines += ["", "## Feature-adjusted leaderboard", self.comparison_md.rstrip()]
        if self.significance_csv is not None:
            lines += ["", "## Feature significance", "```", self.significance_csv.rstrip(), "```"]
        for segment, table in self.domain_tables.items():
            lines += ["", f"## Segment: {segment}", "```", table.rstrip(), "```"]
        if self.failure_tags is not None:
            lines += ["", "## Failure tag rates", "```", self.failure_tags.to_csv().rstrip(), "```"]
            if self.failure_tags.avg_tags_per_loss is not None:
                lines.append(
                    f"\nAverage tags per loss: {self.failure_tags.avg_tags_per_loss:.2f}"
                )
        return "\n".join(lines) + "\n"


def domain_significance_csv(fit: RatingFit) -> str:
    import csv as csv_mod

    out = io.StringIO()
    writer = csv_mod.writer(out)
    writer.writerow(["feature", "coefficient", "p_value", "significant"])
    for name, stat in sorted(fit.beta.items(), key=lambda kv: kv[1].p_value):
        writer.writerow(
            [
                name,
                f"{stat.coefficient:+.4f}",
                "" if math.isinf(stat.std_error) else f"{stat.p_value:.4f}",
                "yes" if stat.significant else "no",
            ]
        )
    return out.getvalue()


def build_report(
    votes: list[VoteRecord],
    config: FitConfig,
    features: FeatureTable | None = None,
    min_votes: int = 50,
    by_domain: bool = False,
    segment_floor: int = 30,
    tags: list[TaggedLoss] | None = None,
    evals: list[ExpertEvaluation] | None = None,
) -> ReportBundle:
    baseline = fit_bt(votes, config)
    board = to_elo(baseline, min_votes=min_votes)
    bundle = ReportBundle(
        baseline=baseline,
        board_csv=leaderboard_csv(board),
        board_json=leaderboard_json_obj(board, baseline),
    )

    table = None
    if features is not None:
        table, dropped = independent_feature_columns(features, votes=votes)
        adjusted = fit_bt_with_features(votes, table, config)
        if dropped:
            adjusted.warnings.append(f"dropped linearly dependent feature columns: {dropped}")
        rows = compare_fits(baseline, adjusted)
        bundle.adjusted = adjusted
        bundle.comparison_csv = comparison_csv(rows)
        bundle.comparison_md = comparison_markdown(rows)
        bundle.significance_csv = significance_csv(adjusted)

    if by_domain:
        segments = list(CATEGORIES) + [FINANCE_SEGMENT]
        for segment in segments:
            try:
                seg_fit = segment_fit(
                    votes, segment, config, features=table,
                    min_decisive_votes=segment_floor,
                )
            except (InsufficientVotes, SheetArenaError):
                continue
            if seg_fit.beta is not None:
                bundle.domain_tables[segment] = domain_significance_csv(seg_fit)
            else:
                bundle.domain_tables[segment] = leaderboard_csv(
                    to_elo(seg_fit, min_votes=0)
                )

    if tags is not None:
        bundle.failure_tags = aggregate_failure_tags(tags)

    if evals:
        stats = dimension_stats(evals)
        bundle.dimension_stats_json = {
            DIMENSION_LABELS.get(name, name): {
                "mean": s.mean,
                "stddev": s.stddev,
                "pct_ge_4": s.pct_ge_4,
                "pct_le_2": s.pct_le_2,
            }
            for name, s in stats.items()
        }
    return bundle
