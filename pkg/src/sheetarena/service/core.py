"""Arena orchestration: prompt intake, generation, battles, votes, boards.

All state mutations flow through a single lock and are appended to the
event log before any response is produced, so a replay of the log (or a
snapshot plus the tail) reconstructs the exact service state. Responses
for open battles never contain model identities; names are revealed only
in the vote acknowledgement.
"""

from __future__ import annotations

import json
import math
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .. import categorize as cat
from ..errors import DuplicateVote, EmptyPrompt, UnknownBattle
from ..formulas.evaluate import evaluate_workbook
from ..matchmaking import MatchRequest, MatchSet, select_matches
from ..rating import (
    FeatureTable,
    FitConfig,
    compare_fits,
    fit_bt,
    fit_bt_with_features,
    to_elo,
)
from ..rating.io import leaderboard_json_obj
from ..rating.types import Outcome, VoteRecord
from ..features.extract import FEATURE_NAMES, extract_features
from ..sheetspec.parse import workbook_from_obj
from ..sheetspec.validate import validate_workbook
from ..errors import MalformedJson, SchemaViolation, SheetArenaError
from . import events as ev
from .config import ArenaConfig
from .events import EventLog
from .generators import GenerationFailure, GeneratorClient
from .state import ArenaState


@dataclass
class GenerationAttempt:
    model_id: str
    document: dict | None
    valid: bool
    error: str | None


@dataclass
class BattleView:
    battle_id: str
    prompt_id: str
    workbook_a: dict
    workbook_b: dict

    def to_json_obj(self) -> dict:
        return {
            "battle_id": self.battle_id,
            "prompt_id": self.prompt_id,
            "workbook_a": self.workbook_a,
            "workbook_b": self.workbook_b,
        }


@dataclass
class SubmissionResult:
    prompt_id: str
    category: str | None
    battles: list[BattleView]
    match: MatchSet = field(repr=False)
    complete: bool = True

    def to_json_obj(self) -> dict:
        obj = {
            "prompt_id": self.prompt_id,
            "category": self.category,
            "battles": [b.to_json_obj() for b in self.battles],
        }
        if not self.complete:
            obj["warning"] = "generation_exhausted: fewer valid pairs than requested"
        return obj


class ArenaService:
    def __init__(
        self,
        config: ArenaConfig,
        generator: GeneratorClient,
        embedding_provider: cat.EmbeddingProvider | None = None,
    ):
        self.config = config
        self.generator = generator
        self.log = EventLog(config.log_path)
        self.state = ArenaState()
        self._lock = threading.RLock()
        self._grid_cache: dict[str, dict] = {}
        self._feature_cache: dict[str, list[float]] = {}
        self._board_cache: dict[tuple, dict] = {}
        self._snapshot_path = config.log_path.with_suffix(".snapshot.json")
        self._recover()

        self._index = None
        self._provider = embedding_provider
        if config.seeds_path is not None:
            seeds = cat.read_seeds_jsonl(config.seeds_path)
            k = min(config.knn_k, len(seeds))
            self._index = cat.build_index(seeds, k=k)
            if self._provider is None:
                self._provider = cat.HashingEmbeddingProvider(
                    dimension=self._index.dimension
                )

    # -- persistence -------------------------------------------------------------

    def _recover(self) -> None:
        """Rebuild state from the latest snapshot plus the log tail."""
        start_index = 0
        if self._snapshot_path.exists():
            with open(self._snapshot_path, "r", encoding="utf-8") as handle:
                snap = json.load(handle)
            if snap.get("events_applied", 0) <= len(self.log):
                self.state = ArenaState.from_snapshot(snap)
                start_index = self.state.version
        for index, event in enumerate(self.log.read_all()):
            if index >= start_index:
                self.state.apply(event)

    def _append(self, event: dict[str, Any]) -> None:
        self.log.append(event)
        self.state.apply(event)
        if (
            self.config.snapshot_every > 0
            and self.state.version % self.config.snapshot_every == 0
        ):
            self.write_snapshot()

    def write_snapshot(self) -> None:
        tmp = self._snapshot_path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(self.state.to_snapshot(), handle, ensure_ascii=False)
        tmp.replace(self._snapshot_path)

    # -- categorization ------------------------------------------------------------

    def _categorize(self, text: str) -> str | None:
        if self._index is None or self._provider is None:
            return None
        embedding = self._provider.embed([text])[0]
        return cat.classify(self._index, embedding).category

    # -- generation -----------------------------------------------------------------

    def _attempt_generation(self, model_id: str, prompt: str) -> GenerationAttempt:
        model = next(m for m in self.config.models if m.model_id == model_id)
        error: str | None = None
        for _ in range(1 + self.config.generation_retries):
            try:
                payload = self.generator.generate(model, prompt)
            except GenerationFailure as exc:
                error = str(exc)
                continue
            try:
                wb = workbook_from_obj(json.loads(payload.decode("utf-8")))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                error = f"malformed JSON: {exc}"
                continue
            except (MalformedJson, SchemaViolation) as exc:
                error = f"schema violation: {exc}"
                continue
            report = validate_workbook(wb)
            if not report.ok:
                first = report.errors[0]
                error = f"validation failed: {first.path}: {first.message}"
                continue
            return GenerationAttempt(
                model_id=model_id,
                document=json.loads(payload.decode("utf-8")),
                valid=True,
                error=None,
            )
        return GenerationAttempt(model_id=model_id, document=None, valid=False, error=error)

    def _generate_all(self, prompt: str) -> dict[str, GenerationAttempt]:
        """One probe generation per roster model, providers in parallel."""
        model_ids = [m.model_id for m in self.config.models]
        with ThreadPoolExecutor(max_workers=max(1, len(model_ids))) as pool:
            futures = {
                mid: pool.submit(self._attempt_generation, mid, prompt)
                for mid in model_ids
            }
            results: dict[str, GenerationAttempt] = {}
            for mid, future in futures.items():
                try:
                    results[mid] = future.result(timeout=self.config.generation_timeout)
                except Exception as exc:  # timeout or crash counts as invalid
                    results[mid] = GenerationAttempt(mid, None, False, f"timed out: {exc}")
        return results

    # -- operations --------------------------------------------------------------------

    def submit_prompt(self, text: str) -> SubmissionResult:
        if not text or not text.strip():
            raise EmptyPrompt("prompt text is empty")
        if len(text) > self.config.max_prompt_chars:
            raise EmptyPrompt(
                f"prompt exceeds {self.config.max_prompt_chars} characters"
            )
        with self._lock:
            prompt_id = self.state.next_prompt_id()
            category = self._categorize(text)
            rng = random.Random(f"{self.config.seed}:{prompt_id}")
            attempts = self._generate_all(text)
            model_ids = [m.model_id for m in self.config.models]

            request = MatchRequest(
                models=tuple(model_ids),
                vote_counts=self.state.vote_counts(model_ids),
                n_pairs=self.config.n_pairs,
                seed=f"{self.config.seed}:{prompt_id}",
            )
            match = select_matches(
                request, validity=lambda pair: attempts[pair[0]].valid and attempts[pair[1]].valid
            )

            ts = self.config.clock()
            self._append(
                {
                    "type": ev.PROMPT_SUBMITTED,
                    "prompt_id": prompt_id,
                    "text": text,
                    "category": category,
                    "ts": ts,
                }
            )
            # Failed probes leave an audit trail; valid generations are
            # materialized per battle side below.
            for model_id in sorted(attempts):
                attempt = attempts[model_id]
                if not attempt.valid:
                    self._append(
                        {
                            "type": ev.GENERATION_STORED,
                            "workbook_id": self.state.next_workbook_id(),
                            "prompt_id": prompt_id,
                            "model_id": model_id,
                            "document": None,
                            "valid": False,
                            "error": attempt.error,
                            "ts": ts,
                        }
                    )

            views: list[BattleView] = []
            for pair in match.pairs:
                model_a, model_b = pair if rng.random() < 0.5 else (pair[1], pair[0])
                side_ids = []
                for model_id in (model_a, model_b):
                    workbook_id = self.state.next_workbook_id()
                    side_ids.append(workbook_id)
                    self._append(
                        {
                            "type": ev.GENERATION_STORED,
                            "workbook_id": workbook_id,
                            "prompt_id": prompt_id,
                            "model_id": model_id,
                            "document": attempts[model_id].document,
                            "valid": True,
                            "error": None,
                            "ts": ts,
                        }
                    )
                battle_id = self.state.next_battle_id()
                self._append(
                    {
                        "type": ev.BATTLE_CREATED,
                        "battle_id": battle_id,
                        "prompt_id": prompt_id,
                        "workbook_a": side_ids[0],
                        "workbook_b": side_ids[1],
                        "ts": ts,
                    }
                )
                views.append(self._battle_view(battle_id))

            return SubmissionResult(
                prompt_id=prompt_id,
                category=category,
                battles=views,
                match=match,
                complete=match.complete,
            )

    def _workbook_view(self, workbook_id: str) -> dict:
        entry = self.state.workbooks[workbook_id]
        if workbook_id not in self._grid_cache:
            wb = workbook_from_obj(entry.document)
            self._grid_cache[workbook_id] = evaluate_workbook(wb).to_json_obj()
        return {
            "workbook_id": workbook_id,
            "document": entry.document,
            "grid": self._grid_cache[workbook_id],
        }

    def _battle_view(self, battle_id: str) -> BattleView:
        battle = self.state.battles[battle_id]
        return BattleView(
            battle_id=battle_id,
            prompt_id=battle.prompt_id,
            workbook_a=self._workbook_view(battle.workbook_a),
            workbook_b=self._workbook_view(battle.workbook_b),
        )

    def get_battle(self, battle_id: str) -> BattleView:
        with self._lock:
            if battle_id not in self.state.battles:
                raise UnknownBattle(battle_id)
            return self._battle_view(battle_id)

    def cast_vote(self, battle_id: str, outcome: Outcome, voter_token: str) -> dict:
        with self._lock:
            battle = self.state.battles.get(battle_id)
            if battle is None:
                raise UnknownBattle(battle_id)
            if voter_token in battle.voter_tokens:
                raise DuplicateVote(f"token already voted on {battle_id}")
            model_a, model_b = self.state.battle_models(battle)
            prompt = self.state.prompts[battle.prompt_id]
            self._append(
                {
                    "type": ev.VOTE_CAST,
                    "battle_id": battle_id,
                    "prompt_id": battle.prompt_id,
                    "category": prompt.category,
                    "model_a": model_a,
                    "model_b": model_b,
                    "workbook_a": battle.workbook_a,
                    "workbook_b": battle.workbook_b,
                    "outcome": outcome.value,
                    "voter_token": voter_token,
                    "ts": self.config.clock(),
                }
            )
            # Post-vote reveal: identities only after the ballot is cast.
            return {
                "ok": True,
                "battle_id": battle_id,
                "outcome": outcome.value,
                "model_a": model_a,
                "model_b": model_b,
            }

    # -- leaderboard ---------------------------------------------------------------------

    def _features_for(self, votes: list[VoteRecord]) -> FeatureTable:
        workbook_ids = sorted(
            {v.workbook_a for v in votes} | {v.workbook_b for v in votes}
        )
        rows = {}
        for wid in workbook_ids:
            if wid not in self._feature_cache:
                wb = workbook_from_obj(self.state.workbooks[wid].document)
                grid = evaluate_workbook(wb)
                self._feature_cache[wid] = extract_features(wb, grid).as_array().tolist()
            rows[wid] = self._feature_cache[wid]
        return FeatureTable(names=list(FEATURE_NAMES), rows=rows)

    def get_leaderboard(
        self,
        category: str | None = None,
        adjusted: bool = False,
        min_votes: int | None = None,
        covariate_mode: str = "per_battle",
    ) -> dict:
        with self._lock:
            votes = list(self.state.votes)
            version = self.state.version
        floor = self.config.min_votes if min_votes is None else min_votes
        key = (version, category, adjusted, floor, covariate_mode)
        if key in self._board_cache:
            return self._board_cache[key]

        if category is not None:
            from ..categories import expand_category_filter

            wanted = expand_category_filter(category)
            votes = [v for v in votes if v.category in wanted]

        decisive = [v for v in votes if v.outcome.decisive]
        reason = None
        if not votes:
            reason = "no votes in segment" if category else "no votes yet"
        elif not decisive:
            reason = "no decisive votes"
        else:
            models = {v.model_a for v in decisive} | {v.model_b for v in decisive}
            if self.config.anchor_model not in models:
                reason = "anchor model has no decisive votes"

        if reason is not None:
            result = {"rows": [], "unranked": [], "min_votes": floor, "reason": reason}
            self._board_cache[key] = result
            return result

        config = FitConfig(
            anchor_model=self.config.anchor_model, covariate_mode=covariate_mode
        )
        try:
            base = fit_bt(votes, config)
            board = to_elo(base, min_votes=floor)
            result = leaderboard_json_obj(board, base)
            if adjusted:
                from ..rating.fit import independent_feature_columns

                table, dropped = independent_feature_columns(
                    self._features_for(decisive), votes=decisive
                )
                adj = fit_bt_with_features(votes, table, config)
                if dropped:
                    adj.warnings.append(
                        f"dropped linearly dependent feature columns: {dropped}"
                    )
                comparison = {
                    row.model: row for row in compare_fits(base, adj)
                }
                for row in result["rows"]:
                    cmp_row = comparison[row["model"]]
                    row["adjusted_elo"] = round(cmp_row.adjusted_elo, 1)
                    row["delta_elo"] = round(cmp_row.delta_elo, 1)
                    row["delta_rank"] = cmp_row.delta_rank
                result["significance"] = {
                    name: {
                        "coefficient": stat.coefficient,
                        # inf (degenerate column) is not valid JSON; use null
                        "std_error": None if math.isinf(stat.std_error) else stat.std_error,
                        "p_value": stat.p_value,
                        "significant": stat.significant,
                    }
                    for name, stat in adj.beta.items()
                }
                result["adjusted_fit"] = adj.metadata()
        except SheetArenaError as exc:
            result = {
                "rows": [],
                "unranked": [],
                "min_votes": floor,
                "reason": f"fit unavailable: {exc}",
            }
        self._board_cache[key] = result
        return result

    def models_public(self) -> list[dict]:
        return [m.public_view() for m in self.config.models]

    def close(self) -> None:
        self.log.close()
