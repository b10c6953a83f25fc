"""Workbook generator clients.

Two adapters ship: a generic HTTP adapter for chat-completions-style APIs
(structured outputs where supported, otherwise the schema text is appended
to the system prompt) and a replay adapter that serves fixture documents
for offline tests and demos.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Protocol

from ..sheetspec.schema import SHEETSPEC_JSON_SCHEMA
from .config import ModelConfig

DEFAULT_SYSTEM_PROMPT = """You are an expert spreadsheet builder.

Respond with one JSON object that satisfies the SheetSpec@2 schema and
nothing else: no prose, no markdown fences, no comments.

Formula requirements:
- Excel-compatible A1 notation only.
- Separate function arguments with commas.
- Every sheet, cell, and named range a formula mentions must exist in
  your output.

Styling (fills, fonts, number formats, borders, conditional formats) is
optional; when present it must conform to the schema.

The JSON must parse as-is, with no surrounding text."""


class GenerationFailure(Exception):
    """Provider produced no usable document (error, timeout, empty)."""


class GeneratorClient(Protocol):
    def generate(self, model: ModelConfig, prompt: str) -> bytes:
        """Return candidate document bytes or raise GenerationFailure."""
        ...


def prompt_fingerprint(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


class ReplayGeneratorClient:
    """Serves fixtures from <root>/<model_id>/<prompt fingerprint>.json,
    falling back to <root>/<model_id>/default.json. The offline backend
    for tests and demos."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def generate(self, model: ModelConfig, prompt: str) -> bytes:
        exact = self.root / model.model_id / f"{prompt_fingerprint(prompt)}.json"
        fallback = self.root / model.model_id / "default.json"
        for path in (exact, fallback):
            if path.exists():
                return path.read_bytes()
        raise GenerationFailure(f"no fixture for model {model.model_id!r}")


class StaticGeneratorClient:
    """In-memory stub: model_id -> document bytes or callable(prompt) -> bytes."""

    def __init__(self, documents: dict):
        self.documents = documents

    def generate(self, model: ModelConfig, prompt: str) -> bytes:
        source = self.documents.get(model.model_id)
        if source is None:
            raise GenerationFailure(f"no stub for model {model.model_id!r}")
        payload = source(prompt) if callable(source) else source
        if isinstance(payload, str):
            payload = payload.encode("utf-8")
        return payload


class HttpGeneratorClient:
    """Chat-completions adapter.

    POSTs {model, messages, temperature?, max_tokens, response_format?} to
    the configured endpoint. Models without structured-output support get
    the JSON schema appended to the system prompt instead.
    """

    def __init__(self, system_prompt: str = DEFAULT_SYSTEM_PROMPT, timeout: float = 180.0):
        self.system_prompt = system_prompt
        self.timeout = timeout

    def generate(self, model: ModelConfig, prompt: str) -> bytes:
        import httpx

        if not model.endpoint:
            raise GenerationFailure(f"model {model.model_id!r} has no endpoint configured")
        system = self.system_prompt
        body: dict = {
            "model": model.api_model_name or model.model_id,
            "max_tokens": model.max_tokens,
        }
        if model.temperature is not None:
            body["temperature"] = model.temperature
        if model.supports_structured_output:
            body["response_format"] = {
                "type": "json_schema",
                "json_schema": {"name": "sheetspec_v2", "schema": SHEETSPEC_JSON_SCHEMA},
            }
        else:
            system = (
                system
                + "\n\nThe SheetSpec@2 JSON Schema:\n"
                + json.dumps(SHEETSPEC_JSON_SCHEMA, indent=2)
            )
        body["messages"] = [
            {"role": "system", "content": system},
            {"role": "user", "content": prompt},
        ]
        headers = {"Content-Type": "application/json"}
        if model.api_key:
            headers["Authorization"] = f"Bearer {model.api_key}"
        try:
            response = httpx.post(model.endpoint, json=body, headers=headers, timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
            content = payload["choices"][0]["message"]["content"]
        except Exception as exc:  # noqa: BLE001 - any provider failure invalidates
            raise GenerationFailure(f"{model.model_id}: {exc}") from exc
        if not content or not content.strip():
            raise GenerationFailure(f"{model.model_id}: empty completion")
        return content.encode("utf-8")
