"""Kullback-Leibler divergence between two contingency tables, in bits."""

from __future__ import annotations

import math

from .core import ContingencyTable


def kl_divergence(true_table: ContingencyTable, implied_table: ContingencyTable) -> float:
    """Extra bits needed to code draws from ``true_table`` with a code built for
    ``implied_table``.

    Cells with zero true mass contribute nothing. A cell with positive true
    mass and zero implied mass makes the divergence ``math.inf``. Round-off
    below zero is clipped, since the exact value is never negative.
    """
    total = 0.0
    for a, b in zip(true_table.as_tuple(), implied_table.as_tuple()):
        if a == 0.0:
            continue
        if b == 0.0:
            return math.inf
        total += a * math.log2(a / b)
    return max(total, 0.0)
