"""Service configuration: model roster, persistence, matchmaking knobs."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable


@dataclass(frozen=True)
class ModelConfig:
    """Public per-model generation settings (name, temperature, max tokens)
    plus provider wiring (endpoint and API-key env var, never the key)."""

    model_id: str
    temperature: float | None = 0.7
    max_tokens: int = 16384
    endpoint: str | None = None
    api_key_env: str | None = None
    api_model_name: str | None = None  # defaults to model_id
    supports_structured_output: bool = True

    def public_view(self) -> dict:
        return {
            "model_id": self.model_id,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }

    @property
    def api_key(self) -> str | None:
        return os.environ.get(self.api_key_env) if self.api_key_env else None


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


@dataclass
class ArenaConfig:
    models: list[ModelConfig]
    anchor_model: str
    log_path: Path
    seed: int = 0
    n_pairs: int = 4
    min_votes: int = 50
    max_prompt_chars: int = 20_000
    generation_timeout: float = 180.0
    generation_retries: int = 1
    snapshot_every: int = 0  # 0 disables snapshots
    seeds_path: Path | None = None  # category seed prompts (JSONL)
    knn_k: int = 5
    embedding_dimension: int = 256
    # Injectable clock so tests get byte-stable responses and logs.
    clock: Callable[[], str] = field(default=utc_now_iso, repr=False)

    def __post_init__(self) -> None:
        self.log_path = Path(self.log_path)
        ids = [m.model_id for m in self.models]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate model ids in roster")
        if self.anchor_model not in ids:
            raise ValueError(f"anchor model {self.anchor_model!r} not in roster")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ArenaConfig":
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        models = [
            ModelConfig(
                model_id=m["model_id"],
                temperature=m.get("temperature", 0.7),
                max_tokens=m.get("max_tokens", 16384),
                endpoint=m.get("endpoint"),
                api_key_env=m.get("api_key_env"),
                api_model_name=m.get("api_model_name"),
                supports_structured_output=m.get("supports_structured_output", True),
            )
            for m in raw["models"]
        ]
        base = dict(
            models=models,
            anchor_model=raw.get("anchor_model", models[0].model_id),
            log_path=Path(raw.get("log_path", "arena-events.jsonl")),
            seed=raw.get("seed", 0),
            n_pairs=raw.get("n_pairs", 4),
            min_votes=raw.get("min_votes", 50),
            generation_timeout=raw.get("generation_timeout", 180.0),
            generation_retries=raw.get("generation_retries", 1),
            snapshot_every=raw.get("snapshot_every", 0),
            seeds_path=Path(raw["seeds_path"]) if raw.get("seeds_path") else None,
            knn_k=raw.get("knn_k", 5),
            embedding_dimension=raw.get("embedding_dimension", 256),
        )
        base.update(overrides)
        return cls(**base)
