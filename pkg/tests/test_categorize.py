import pytest

from sheetarena.categories import CATEGORIES, expand_category_filter
from sheetarena.categorize import (
    HashingEmbeddingProvider,
    SeedPrompt,
    build_index,
    classify,
    read_seeds_jsonl,
    write_seeds_jsonl,
)
from sheetarena.errors import DimensionMismatch, EmptySeedSet


def seeds_one_per_category(dim=8):
    out = []
    for i, category in enumerate(CATEGORIES):
        embedding = [0.0] * dim
        embedding[i] = 1.0
        out.append(SeedPrompt(text=f"seed {i}", category=category, embedding=tuple(embedding)))
    return out


def test_build_index_shapes():
    index = build_index(seeds_one_per_category(), k=1)
    assert index.embeddings.shape == (6, 8)
    assert index.k == 1


def test_mixed_dimensions_rejected():
    seeds = seeds_one_per_category()
    seeds.append(SeedPrompt(text="bad", category=CATEGORIES[0], embedding=(1.0, 0.0)))
    with pytest.raises(DimensionMismatch):
        build_index(seeds, k=1)


def test_k_bounds():
    with pytest.raises(ValueError):
        build_index(seeds_one_per_category(), k=0)
    with pytest.raises(ValueError):
        build_index(seeds_one_per_category(), k=7)
    with pytest.raises(EmptySeedSet):
        build_index([], k=1)


def test_exact_match_k1():
    index = build_index(seeds_one_per_category(), k=1)
    query = [0.0] * 8
    query[2] = 1.0
    result = classify(index, query)
    assert result.category == CATEGORIES[2]


def test_majority_vote():
    seeds = [
        SeedPrompt("f1", "Professional Finance", (1.0, 0.0)),
        SeedPrompt("f2", "Professional Finance", (0.9, 0.1)),
        SeedPrompt("a1", "Academic & Research", (0.8, 0.2)),
    ]
    index = build_index(seeds, k=3)
    result = classify(index, (1.0, 0.05))
    assert result.category == "Professional Finance"
    assert result.votes == {"Professional Finance": 2, "Academic & Research": 1}


def test_tie_broken_by_nearest_neighbor():
    seeds = [
        SeedPrompt("f", "Professional Finance", (1.0, 0.0)),
        SeedPrompt("a", "Academic & Research", (0.0, 1.0)),
    ]
    index = build_index(seeds, k=2)
    result = classify(index, (0.9, 0.1))  # closer to finance
    assert result.category == "Professional Finance"
    result = classify(index, (0.1, 0.9))
    assert result.category == "Academic & Research"


def test_scale_invariance():
    index = build_index(seeds_one_per_category(), k=3)
    query = [0.3, 0.1, 0.0, 0.5, 0.0, 0.2, 0.0, 0.0]
    base = classify(index, query)
    for c in (0.001, 7.0, 1e6):
        scaled = classify(index, [c * x for x in query])
        assert scaled.category == base.category


def test_every_seed_self_classifies_under_k1():
    provider = HashingEmbeddingProvider(dimension=64)
    texts = [f"prompt about topic {i}" for i in range(12)]
    embeddings = provider.embed(texts)
    seeds = [
        SeedPrompt(t, CATEGORIES[i % 6], tuple(e)) for i, (t, e) in enumerate(zip(texts, embeddings))
    ]
    index = build_index(seeds, k=1)
    for seed in seeds:
        assert classify(index, seed.embedding).category == seed.category


def test_dimension_mismatch_on_query():
    index = build_index(seeds_one_per_category(), k=1)
    with pytest.raises(DimensionMismatch):
        classify(index, (1.0, 0.0))


def test_hashing_provider_is_deterministic():
    p1 = HashingEmbeddingProvider(dimension=32)
    p2 = HashingEmbeddingProvider(dimension=32)
    assert p1.embed(["hello world"]) == p2.embed(["hello world"])
    assert p1.embed(["hello world"]) != p1.embed(["other text"])


def test_seed_jsonl_roundtrip(tmp_path):
    seeds = seeds_one_per_category()
    path = tmp_path / "seeds.jsonl"
    write_seeds_jsonl(path, seeds)
    again = read_seeds_jsonl(path)
    assert again == seeds


def test_finance_filter_expansion():
    assert expand_category_filter("Finance") == {
        "Professional Finance",
        "Corporate Finance & FP&A",
    }
    assert expand_category_filter("SMB & Personal") == {"SMB & Personal"}
