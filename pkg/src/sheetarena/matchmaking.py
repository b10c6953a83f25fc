"""Battle pair selection favoring under-exposed models.

Every unordered pair gets weight ((V(a)+1) * (V(b)+1)) ** -0.5, so pairs of
rarely-seen models sort first; the +1 keeps brand-new models finite. A
seeded shuffle before the stable sort breaks weight ties reproducibly. The
sorted list is walked with a validity oracle until enough accepted pairs
are collected; rejected pairs are recorded.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

Pair = tuple[str, str]

DEFAULT_N_PAIRS = 4


@dataclass(frozen=True)
class MatchRequest:
    models: tuple[str, ...]
    vote_counts: dict[str, int]
    n_pairs: int = DEFAULT_N_PAIRS
    seed: int | str = 0

    def __post_init__(self) -> None:
        if self.n_pairs >= 1 and len(set(self.models)) < 2:
            raise ValueError("need at least 2 eligible models")
        for model, count in self.vote_counts.items():
            if count < 0:
                raise ValueError(f"negative vote count for {model}")


@dataclass
class MatchSet:
    pairs: list[Pair]
    discarded: list[Pair] = field(default_factory=list)
    complete: bool = True  # False when the pair list ran out first


def pair_weight(count_a: int, count_b: int) -> float:
    return ((count_a + 1) * (count_b + 1)) ** -0.5


def ranked_pairs(req: MatchRequest) -> list[Pair]:
    """All unordered pairs, best-first, ties broken by seeded shuffle."""
    models = sorted(set(req.models))
    pairs = list(combinations(models, 2))
    rng = random.Random(req.seed)
    rng.shuffle(pairs)
    counts = req.vote_counts
    pairs.sort(key=lambda p: pair_weight(counts.get(p[0], 0), counts.get(p[1], 0)), reverse=True)
    return pairs


def select_matches(req: MatchRequest, validity: Callable[[Pair], bool]) -> MatchSet:
    """Walk the ranked pair list, keeping pairs the oracle accepts.

    Returns a partial MatchSet with ``complete=False`` when fewer than
    ``n_pairs`` valid pairs exist.
    """
    result = MatchSet(pairs=[])
    for pair in ranked_pairs(req):
        if len(result.pairs) >= req.n_pairs:
            break
        if validity(pair):
            result.pairs.append(pair)
        else:
            result.discarded.append(pair)
    result.complete = len(result.pairs) >= req.n_pairs
    return result
