"""Command-line driver.

Subcommands: features | fit | simulate | report | serve.
Exit codes: 0 ok, 2 input error, 3 numerical failure. Values resolve as
flags over config file over SHEETARENA_* environment variables.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import SheetArenaError
from .features.extract import FEATURE_NAMES, extract_features
from .formulas.evaluate import evaluate_workbook
from .rating import FeatureTable, FitConfig
from .rating.io import read_feature_csv, read_votes_jsonl, write_feature_csv, write_votes_jsonl
from .report import build_report
from .sheetspec.parse import parse_workbook
from .simulate import SimulationSpec, simulate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _collect_workbook_paths(inputs: list[str]) -> list[Path]:
    paths: list[Path] = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            paths.extend(sorted(path.glob("*.json")))
        elif path.exists():
            paths.append(path)
        else:
            raise FileNotFoundError(item)
    return paths


def cmd_features(args: argparse.Namespace) -> int:
    try:
        paths = _collect_workbook_paths(args.inputs)
    except FileNotFoundError as exc:
        print(f"error: no such path: {exc}", file=sys.stderr)
        return EXIT_INPUT

    rows: dict[str, list[float]] = {}
    failures = 0
    for path in paths:
        try:
            wb = parse_workbook(path.read_bytes())
            grid = evaluate_workbook(wb)
            rows[path.stem] = extract_features(wb, grid).as_array().tolist()
        except SheetArenaError as exc:
            failures += 1
            print(f"warning: {path}: {exc}", file=sys.stderr)
    table = FeatureTable(names=list(FEATURE_NAMES), rows=rows)
    if args.out:
        write_feature_csv(args.out, table)
    else:
        import csv as csv_mod

        writer = csv_mod.writer(sys.stdout)
        writer.writerow(["workbook_id"] + list(FEATURE_NAMES))
        for wid in sorted(rows):
            writer.writerow([wid] + [repr(x) for x in rows[wid]])
    if paths and failures == len(paths):
        print("error: every input failed to parse", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def _fit_config(args: argparse.Namespace, votes) -> FitConfig:
    anchor = args.anchor
    if anchor is None:
        anchor = os.environ.get("SHEETARENA_ANCHOR")
    if anchor is None:
        models = sorted({v.model_a for v in votes} | {v.model_b for v in votes})
        anchor = models[0]
        print(f"note: no --anchor given; using {anchor!r}", file=sys.stderr)
    return FitConfig(anchor_model=anchor, covariate_mode=args.mode)


def cmd_fit(args: argparse.Namespace) -> int:
    try:
        votes = read_votes_jsonl(args.votes)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.category:
        from .categories import expand_category_filter

        wanted = expand_category_filter(args.category)
        votes = [v for v in votes if v.category in wanted]
    features = None
    if args.adjusted:
        if not args.features:
            print("error: --adjusted requires --features FILE", file=sys.stderr)
            return EXIT_INPUT
        try:
            features = read_feature_csv(args.features)
        except (OSError, ValueError) as exc:
            print(f"error: cannot read features: {exc}", file=sys.stderr)
            return EXIT_INPUT
    try:
        config = _fit_config(args, votes)
        bundle = build_report(
            votes, config, features=features, min_votes=args.min_votes,
            by_domain=args.by_domain,
        )
    except SheetArenaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not bundle.baseline.converged or (
        bundle.adjusted is not None and not bundle.adjusted.converged
    ):
        print("error: fit did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out_dir:
        written = bundle.write(args.out_dir)
        for path in written:
            print(path, file=sys.stderr)
    print(bundle.markdown_summary(), end="")
    return EXIT_OK


def _parse_kv_floats(text: str | None) -> dict[str, float]:
    if not text:
        return {}
    out = {}
    for piece in text.split(","):
        key, _, value = piece.partition("=")
        if not _:
            raise ValueError(f"expected name=value, got {piece!r}")
        out[key.strip()] = float(value)
    return out


def cmd_simulate(args: argparse.Namespace) -> int:
    feature_names = [f.strip() for f in args.features.split(",") if f.strip()] if args.features else []
    try:
        beta = _parse_kv_floats(args.beta)
        feature_means: dict[str, dict[str, float]] = {}
        for assignment in args.feature_mean or []:
            feature, _, rest = assignment.partition(":")
            feature_means.setdefault(feature.strip(), {}).update(_parse_kv_floats(rest))
        beta_by_category: dict[str, dict[str, float]] = {}
        for assignment in args.beta_category or []:
            category, _, rest = assignment.partition(":")
            beta_by_category[category.strip()] = _parse_kv_floats(rest)
        categories = (
            [c.strip() for c in args.categories.split(",")] if args.categories else None
        )
        spec = SimulationSpec.uniform_theta(
            args.models,
            args.theta_lo,
            args.theta_hi,
            args.n_votes,
            seed=args.seed,
            feature_names=feature_names,
            beta=beta,
            feature_means=feature_means,
            feature_sd=args.feature_sd,
            categories=categories,
            beta_by_category=beta_by_category,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    result = simulate(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_votes_jsonl(out / "votes.jsonl", result.votes)
    write_feature_csv(out / "features.csv", result.features)
    (out / "truth.json").write_text(
        json.dumps(result.truth, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(result.votes)} votes to {out}/votes.jsonl", file=sys.stderr)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    try:
        votes = read_votes_jsonl(args.votes)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    features = tags = evals = None
    try:
        if args.features:
            features = read_feature_csv(args.features)
        if args.tags:
            from .analytics import read_tags_jsonl

            tags = read_tags_jsonl(args.tags)
        if args.evals:
            from .analytics import read_evals_csv

            evals = read_evals_csv(args.evals)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        config = _fit_config(args, votes)
        bundle = build_report(
            votes,
            config,
            features=features,
            min_votes=args.min_votes,
            by_domain=True,
            tags=tags,
            evals=evals,
        )
    except SheetArenaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not bundle.baseline.converged:
        print("error: fit did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out_dir:
        for path in bundle.write(args.out_dir):
            print(path, file=sys.stderr)
    print(bundle.markdown_summary(), end="")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import (
        ArenaConfig,
        ArenaService,
        HttpGeneratorClient,
        ReplayGeneratorClient,
        create_app,
    )

    config_path = args.config or os.environ.get("SHEETARENA_CONFIG")
    if not config_path:
        print("error: --config FILE (or SHEETARENA_CONFIG) required", file=sys.stderr)
        return EXIT_INPUT
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        config = ArenaConfig.from_file(config_path, **overrides)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.fixtures:
        generator = ReplayGeneratorClient(args.fixtures)
    else:
        generator = HttpGeneratorClient(timeout=config.generation_timeout)
    service = ArenaService(config, generator)
    app = create_app(service, ui_dir=args.ui)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheetarena",
        description="Spreadsheet arena: features, ratings, simulation, serving.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("features", help="extract the 29 features from workbooks")
    p.add_argument("inputs", nargs="+", help="workbook JSON files or directories")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("fit", help="fit ratings from a votes JSONL file")
    p.add_argument("votes")
    p.add_argument("--adjusted", action="store_true", help="also fit feature covariates")
    p.add_argument("--features", help="feature CSV (from `features` or `simulate`)")
    p.add_argument("--category", help="restrict to one category (or `Finance`)")
    p.add_argument("--mode", choices=["per_battle", "model_mean"], default="per_battle")
    p.add_argument("--anchor", help="anchor model (Elo pinned to 1000)")
    p.add_argument("--min-votes", type=int, default=50)
    p.add_argument("--by-domain", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="accepted for interface stability")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="generate synthetic votes with known truth")
    p.add_argument("--models", type=int, required=True)
    p.add_argument("--n-votes", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta-lo", type=float, default=-2.0)
    p.add_argument("--theta-hi", type=float, default=2.0)
    p.add_argument("--features", help="comma-separated synthetic feature names")
    p.add_argument("--beta", help="name=value,... coefficients")
    p.add_argument("--feature-mean", action="append",
                   help="feature:model=mean,... (repeatable)")
    p.add_argument("--feature-sd", type=float, default=1.0)
    p.add_argument("--categories", help="comma-separated category labels")
    p.add_argument("--beta-category", action="append",
                   help="category:name=value,... (repeatable)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="full report bundle from votes (+tags, +evals)")
    p.add_argument("votes")
    p.add_argument("--features")
    p.add_argument("--tags", help="failure tags JSONL")
    p.add_argument("--evals", help="expert evaluations CSV")
    p.add_argument("--anchor")
    p.add_argument("--mode", choices=["per_battle", "model_mean"], default="per_battle")
    p.add_argument("--min-votes", type=int, default=50)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the arena HTTP service")
    p.add_argument("--config", help="service config JSON (or SHEETARENA_CONFIG)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--fixtures", help="replay-generator fixtures directory")
    p.add_argument("--ui", help="static frontend directory to mount at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
