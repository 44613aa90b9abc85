"""Independent brute-force oracles the implementation is checked against.

These deliberately avoid the production dynamic program and ancestor-walk:
the edit-cost oracle enumerates every monotone matching between the two
event sequences, the LCA oracle intersects full ancestor sets.
"""

from __future__ import annotations

from itertools import combinations

from nrts.model import TraceEvent
from nrts.taxonomy import ActionTaxonomy


def brute_force_lca(a: str, b: str, taxonomy: ActionTaxonomy) -> str:
    """Deepest node in the intersection of the two ancestor sets."""
    ancestors_a = set(taxonomy.ancestors_of(a))
    common = [n for n in taxonomy.ancestors_of(b) if n in ancestors_a]
    return max(common, key=taxonomy.depth)


def brute_force_raw_cost(
    seq_a: tuple[TraceEvent, ...],
    seq_b: tuple[TraceEvent, ...],
    substitution_cost,
    indel_cost: float,
) -> float:
    """Minimum edit-script cost over all monotone matchings.

    Every edit script corresponds to a monotone matching: matched pairs are
    match/substitute steps, unmatched events on either side are deletions or
    insertions. Feasible only for short sequences.
    """
    m, n = len(seq_a), len(seq_b)
    best = (m + n) * indel_cost
    for k in range(1, min(m, n) + 1):
        for left in combinations(range(m), k):
            for right in combinations(range(n), k):
                cost = (m + n - 2 * k) * indel_cost
                for i, j in zip(left, right):
                    cost += substitution_cost(seq_a[i], seq_b[j])
                best = min(best, cost)
    return best


def brute_force_distance(
    seq_a: tuple[TraceEvent, ...],
    seq_b: tuple[TraceEvent, ...],
    substitution_cost,
    indel_cost: float,
) -> float:
    m, n = len(seq_a), len(seq_b)
    if m == 0 and n == 0:
        return 0.0
    raw = brute_force_raw_cost(seq_a, seq_b, substitution_cost, indel_cost)
    return raw / (indel_cost * max(m, n))
