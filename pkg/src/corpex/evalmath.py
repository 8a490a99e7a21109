"""Pure ranked-retrieval metric math over binary relevance lists.

Inputs are 0/1 relevance flags in rank order (rank 1 first). Kept free of
document objects so the formulas are trivially testable against
hand-computed values.
"""

from __future__ import annotations

import math
from typing import Sequence


def dcg(rels: Sequence[int]) -> float:
    """Sum of rel_i / log2(i + 1) with ranks starting at 1."""
    return sum(rel / math.log2(i + 2) for i, rel in enumerate(rels))


def ndcg_at(rels: Sequence[int], total_relevant: int, n: int) -> float:
    """DCG over the first n ranks, normalized by the ideal ordering of the
    judged relevant documents; 0.0 when none are relevant."""
    if total_relevant == 0:
        return 0.0
    ideal = dcg([1] * min(total_relevant, n))
    return dcg(rels[:n]) / ideal


def average_precision_and_recall(rels: Sequence[int],
                                 total_relevant: int) -> tuple[float, float]:
    """(AP, recall) for one ranking.

    AP = sum over relevant ranks i of precision@i, divided by the total
    relevant count; recall shares that denominator. Both are 0.0 when
    nothing is relevant or nothing relevant was retrieved.
    """
    if total_relevant == 0:
        return 0.0, 0.0
    hits = 0
    precision_sum = 0.0
    for i, rel in enumerate(rels, start=1):
        if rel:
            hits += 1
            precision_sum += hits / i
    return precision_sum / total_relevant, hits / total_relevant


def precision_recall_points(rels: Sequence[int],
                            total_relevant: int) -> list[tuple[float, float]]:
    """(recall, precision) after each rank; recall is non-decreasing."""
    points = []
    hits = 0
    for i, rel in enumerate(rels, start=1):
        hits += rel
        points.append((hits / total_relevant, hits / i))
    return points
