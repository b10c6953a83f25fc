"""Prompt categorization: k-NN over seed-prompt embeddings.

Embeddings come from a pluggable provider; cosine similarity over
unit-normalized vectors decides the top-k neighbors, majority label wins,
and ties fall to the single nearest neighbor.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .categories import CATEGORIES
from .errors import DimensionMismatch, EmptySeedSet

DEFAULT_K = 5


@dataclass(frozen=True)
class SeedPrompt:
    text: str
    category: str
    embedding: tuple[float, ...]


@dataclass
class CategoryIndex:
    embeddings: np.ndarray  # unit-normalized rows
    labels: list[str]
    k: int

    @property
    def dimension(self) -> int:
        return self.embeddings.shape[1]


def build_index(seeds: Sequence[SeedPrompt], k: int = DEFAULT_K) -> CategoryIndex:
    if not seeds:
        raise EmptySeedSet("no seed prompts")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > len(seeds):
        raise ValueError(f"k={k} exceeds seed count {len(seeds)}")
    dimension = len(seeds[0].embedding)
    matrix = np.zeros((len(seeds), dimension))
    labels = []
    for i, seed in enumerate(seeds):
        if len(seed.embedding) != dimension:
            raise DimensionMismatch(
                f"seed {i} has dimension {len(seed.embedding)}, expected {dimension}"
            )
        matrix[i] = seed.embedding
        labels.append(seed.category)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return CategoryIndex(embeddings=matrix / norms, labels=labels, k=k)


@dataclass(frozen=True)
class Classification:
    category: str
    votes: dict[str, int]  # label -> neighbor count among the top k
    nearest: str  # nearest single neighbor's label


def classify(index: CategoryIndex, embedding: Sequence[float]) -> Classification:
    query = np.asarray(embedding, dtype=float)
    if query.shape != (index.dimension,):
        raise DimensionMismatch(
            f"query has dimension {query.shape}, expected ({index.dimension},)"
        )
    norm = np.linalg.norm(query)
    if norm > 0:
        query = query / norm
    similarities = index.embeddings @ query
    # Stable top-k: descending similarity, ascending seed index on ties.
    order = sorted(range(len(similarities)), key=lambda i: (-similarities[i], i))
    top = order[: index.k]
    votes = Counter(index.labels[i] for i in top)
    nearest_label = index.labels[top[0]]
    best = max(votes.values())
    leaders = [label for label, n in votes.items() if n == best]
    category = nearest_label if len(leaders) > 1 else leaders[0]
    return Classification(category=category, votes=dict(votes), nearest=nearest_label)


# --- embedding providers -------------------------------------------------------


class EmbeddingProvider(Protocol):
    dimension: int

    def embed(self, texts: Sequence[str]) -> list[list[float]]: ...


class HashingEmbeddingProvider:
    """Deterministic offline embeddings: hashed character n-grams.

    Not semantically meaningful, but stable across processes, which is all
    tests and offline demos need.
    """

    def __init__(self, dimension: int = 256, ngram: int = 3):
        self.dimension = dimension
        self.ngram = ngram

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        out = []
        for text in texts:
            vector = np.zeros(self.dimension)
            padded = f"  {text.lower()}  "
            for i in range(len(padded) - self.ngram + 1):
                gram = padded[i : i + self.ngram]
                digest = hashlib.sha256(gram.encode("utf-8")).digest()
                bucket = int.from_bytes(digest[:4], "big") % self.dimension
                sign = 1.0 if digest[4] % 2 == 0 else -1.0
                vector[bucket] += sign
            norm = np.linalg.norm(vector)
            if norm > 0:
                vector /= norm
            out.append(vector.tolist())
        return out


class HttpEmbeddingProvider:
    """Adapter for an embeddings endpoint speaking the common JSON shape:
    POST {model, input: [...]} -> {data: [{embedding: [...]}, ...]}.
    """

    def __init__(self, endpoint: str, model: str, dimension: int, api_key: str | None = None,
                 timeout: float = 60.0):
        self.endpoint = endpoint
        self.model = model
        self.dimension = dimension
        self.api_key = api_key
        self.timeout = timeout

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        import httpx

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        response = httpx.post(
            self.endpoint,
            json={"model": self.model, "input": list(texts)},
            headers=headers,
            timeout=self.timeout,
        )
        response.raise_for_status()
        payload = response.json()
        return [item["embedding"] for item in payload["data"]]


# --- seed file I/O --------------------------------------------------------------


def read_seeds_jsonl(path: str | Path) -> list[SeedPrompt]:
    """JSONL of {text, category, embedding: [...]}, one seed per line."""
    seeds = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            category = obj["category"]
            if category not in CATEGORIES:
                raise ValueError(f"{path}:{line_no}: unknown category {category!r}")
            seeds.append(
                SeedPrompt(
                    text=obj["text"],
                    category=category,
                    embedding=tuple(float(x) for x in obj["embedding"]),
                )
            )
    return seeds


def write_seeds_jsonl(path: str | Path, seeds: Sequence[SeedPrompt]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for seed in seeds:
            handle.write(
                json.dumps(
                    {
                        "text": seed.text,
                        "category": seed.category,
                        "embedding": list(seed.embedding),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
