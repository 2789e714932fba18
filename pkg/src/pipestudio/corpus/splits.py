"""Deterministic corpus splitting."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .formulate import FormulatedSample

DEFAULT_RATIOS = (0.88, 0.06, 0.06)


@dataclass(frozen=True)
class CorpusSplits:
    train: list[FormulatedSample]
    valid: list[FormulatedSample]
    test: list[FormulatedSample]
    ratios: tuple[float, float, float]
    seed: int

    def sizes(self) -> tuple[int, int, int]:
        return (len(self.train), len(self.valid), len(self.test))


def split_corpus(samples: list[FormulatedSample],
                 ratios: tuple[float, float, float] = DEFAULT_RATIOS,
                 seed: int = 0) -> CorpusSplits:
    """Shuffle under the seed, then cut at cumulative ratio boundaries.

    Cut points are floor(n * cumulative_ratio), so e.g. 10 samples at
    (0.88, 0.06, 0.06) come out 8/1/1. The splits are disjoint and their
    union is the input.
    """
    if not samples:
        raise ValueError("empty corpus")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    if any(r < 0 for r in ratios):
        raise ValueError(f"ratios must be non-negative, got {ratios}")
    rng = random.Random(seed)
    shuffled = list(samples)
    rng.shuffle(shuffled)
    n = len(shuffled)
    cut1 = math.floor(n * ratios[0] + 1e-9)
    cut2 = math.floor(n * (ratios[0] + ratios[1]) + 1e-9)
    return CorpusSplits(
        train=shuffled[:cut1],
        valid=shuffled[cut1:cut2],
        test=shuffled[cut2:],
        ratios=tuple(ratios),
        seed=seed,
    )
