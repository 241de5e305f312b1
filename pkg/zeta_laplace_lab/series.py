"""Partial-sum acceleration and tail helpers shared by the spectral sums."""
from dataclasses import dataclass
from typing import List, Sequence

import mpmath


@dataclass(frozen=True)
class AcceleratedSum:
    value: mpmath.mpf
    estimate: mpmath.mpf
    depth: int
    partial_sums: int


def partial_sums(terms: Sequence) -> List:
    sums = []
    total = mpmath.mpf(0)
    for term in terms:
        total += term
        sums.append(total)
    return sums


def averaged_sum(sums: Sequence, depth: int) -> AcceleratedSum:
    """Iterated pairwise means of the last depth+1 partial sums.

    The estimate is half the spread of the last pair before the final mean,
    which is what one more averaging level would still move the value by.
    """
    if not sums:
        return AcceleratedSum(mpmath.mpf(0), mpmath.mpf(0), 0, 0)
    depth = max(0, min(depth, len(sums) - 1))
    if depth == 0:
        last = sums[-1]
        estimate = abs(sums[-1] - sums[-2]) if len(sums) > 1 else abs(last)
        return AcceleratedSum(last, estimate, 0, len(sums))
    level = list(sums[-(depth + 1):])
    spread = mpmath.mpf(0)
    while len(level) > 1:
        spread = abs(level[-1] - level[-2])
        level = [(a + b) / 2 for a, b in zip(level, level[1:])]
    return AcceleratedSum(level[0], spread / 2, depth, len(sums))


def accelerate(terms: Sequence, depth: int, method: str = "averaging") -> AcceleratedSum:
    sums = partial_sums(terms)
    if method == "none":
        return averaged_sum(sums, 0)
    if method != "averaging":
        raise ValueError(f"unknown acceleration method {method!r}")
    return averaged_sum(sums, depth)


def shanks_limit(sequence: Sequence):
    """Last diagonal entry of the Shanks table, with the gap to its predecessor as error."""
    sequence = list(sequence)
    if len(sequence) < 3:
        value = sequence[-1]
        err = abs(sequence[-1] - sequence[-2]) if len(sequence) > 1 else mpmath.inf
        return value, err
    try:
        table = mpmath.shanks(sequence)
    except ZeroDivisionError:
        return sequence[-1], abs(sequence[-1] - sequence[-2])
    last_row = table[-1]
    value = last_row[-1]
    previous = last_row[-2] if len(last_row) > 1 else sequence[-2]
    return value, abs(value - previous)
