"""Semantic trace edit distance against the gold-standard trace.

The distance between two event sequences is a weighted Levenshtein distance:
insertions and deletions cost ``indel_cost``; substituting one event for
another costs a convex blend of taxonomy dissimilarity between the two
actions and a relative duration penalty. The raw alignment cost is
normalized by ``indel_cost * max(len, len)`` so the result lies in [0, 1],
with 0 for identical traces and 1 when one trace is empty.

In the dynamic program every cost carries the ``indel_cost`` unit (the
blended substitution cost is scaled by it), which keeps the normalized
distance inside [0, 1] for every legal configuration and makes the distance
invariant under rescaling all costs and the normalizer together. At the
default ``indel_cost = 1.0`` the costs are exactly the unscaled blend.

Start-time offsets never enter the substitution cost; lateness is surfaced
separately through the phase-compliance report. Measured attribute values
(temperature, SpO2, oxygen) are likewise excluded from the cost and only
reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable

from nrts.model import (
    GoldStandard,
    PhaseReport,
    ProcessTrace,
    TraceEvent,
    Violation,
    phase_compliance,
    validate_trace,
)
from nrts.taxonomy import ActionTaxonomy


@dataclass(frozen=True)
class DistanceConfig:
    """Weights of the scoring model.

    ``alpha`` blends semantic vs temporal substitution cost; ``indel_cost``
    is the price of inserting or deleting one event.
    """

    alpha: float = 0.7
    indel_cost: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 < self.indel_cost <= 1.0:
            raise ValueError(f"indel_cost must be in (0, 1], got {self.indel_cost}")


@dataclass(frozen=True)
class EditOp:
    """One step of the optimal alignment script.

    ``trace_index`` / ``gold_index`` identify the consumed events; a delete
    has no gold index, an insert no trace index. A ``match`` is a zero-cost
    substitution.
    """

    op: str  # "match" | "substitute" | "delete" | "insert"
    trace_index: int | None
    gold_index: int | None
    cost: float

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "trace_index": self.trace_index,
            "gold_index": self.gold_index,
            "cost": self.cost,
        }


@dataclass(frozen=True)
class DistanceResult:
    distance: float
    percent_display: int
    cost_matrix_dims: tuple[int, int]
    optimal_script: tuple[EditOp, ...]

    def __post_init__(self):
        if not 0.0 <= self.distance <= 1.0:
            raise ValueError(f"distance {self.distance} outside [0, 1]")


class TraceValidationError(ValueError):
    """Trace failed validation against the gold standard before scoring."""

    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(v.reason for v in violations))
        self.violations = violations


def percent_display(distance: float) -> int:
    """Round a [0,1] distance to a whole percentage, half-up."""
    return int(
        (Decimal(repr(distance)) * 100).quantize(Decimal("1"), rounding=ROUND_HALF_UP)
    )


def percent_string(distance: float) -> str:
    return f"{percent_display(distance)}%"


def taxonomy_distance(a: str, b: str, taxonomy: ActionTaxonomy) -> float:
    """Wu–Palmer dissimilarity between two actions, in [0, 1].

    1 - 2*depth(lca) / (depth(a) + depth(b)); 0 when the actions are equal
    (including the root, whose depth sum would be zero).
    """
    if a == b:
        taxonomy.depth(a)
        return 0.0
    depth_a = taxonomy.depth(a)
    depth_b = taxonomy.depth(b)
    depth_lca = taxonomy.depth(taxonomy.lca(a, b))
    return 1.0 - 2.0 * depth_lca / (depth_a + depth_b)


def temporal_penalty(duration_a_ms: int, duration_b_ms: int) -> float:
    """Relative duration difference |d1-d2| / max(d1, d2); 0 when both are 0."""
    if duration_a_ms == duration_b_ms:
        return 0.0
    return abs(duration_a_ms - duration_b_ms) / max(duration_a_ms, duration_b_ms)


def event_substitution_cost(
    e1: TraceEvent,
    e2: TraceEvent,
    taxonomy: ActionTaxonomy,
    config: DistanceConfig,
) -> float:
    """Blended cost of substituting one event for another, in [0, 1]."""
    semantic = taxonomy_distance(e1.action, e2.action, taxonomy)
    temporal = temporal_penalty(e1.duration_ms, e2.duration_ms)
    return config.alpha * semantic + (1.0 - config.alpha) * temporal


def align_sequences(
    seq_a: tuple[TraceEvent, ...],
    seq_b: tuple[TraceEvent, ...],
    substitution_cost: Callable[[TraceEvent, TraceEvent], float],
    indel_cost: float,
) -> tuple[float, list[list[float]], tuple[EditOp, ...]]:
    """Minimum-cost alignment of two event sequences.

    Returns (raw cost, full DP matrix of shape (len(a)+1, len(b)+1), one
    optimal edit script). Ties are broken toward match/substitute, then
    delete, then insert, for script stability.
    """
    m, n = len(seq_a), len(seq_b)
    dp = [[0.0] * (n + 1) for _ in range(m + 1)]
    # border cells accumulate the same way the backtrack recomputes them,
    # so cost equality during backtracking is bit-exact
    for i in range(1, m + 1):
        dp[i][0] = dp[i - 1][0] + indel_cost
    for j in range(1, n + 1):
        dp[0][j] = dp[0][j - 1] + indel_cost
    for i in range(1, m + 1):
        row = dp[i]
        above = dp[i - 1]
        event_a = seq_a[i - 1]
        for j in range(1, n + 1):
            substitute = above[j - 1] + substitution_cost(event_a, seq_b[j - 1])
            delete = above[j] + indel_cost
            insert = row[j - 1] + indel_cost
            row[j] = min(substitute, delete, insert)

    script: list[EditOp] = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            cost = substitution_cost(seq_a[i - 1], seq_b[j - 1])
            if dp[i][j] == dp[i - 1][j - 1] + cost:
                op = "match" if cost == 0.0 else "substitute"
                script.append(EditOp(op, i - 1, j - 1, cost))
                i, j = i - 1, j - 1
                continue
        if i > 0 and (j == 0 or dp[i][j] == dp[i - 1][j] + indel_cost):
            script.append(EditOp("delete", i - 1, None, indel_cost))
            i -= 1
            continue
        script.append(EditOp("insert", None, j - 1, indel_cost))
        j -= 1
    script.reverse()
    return dp[m][n], dp, tuple(script)


def normalized_cost(raw_cost: float, m: int, n: int, indel_cost: float) -> float:
    """Normalizer seam: raw alignment cost -> distance in [0, 1].

    The quotient is clamped to [0, 1]: accumulated float round-off in the
    raw cost can exceed the normalizer by an ulp even though the exact
    value never does.
    """
    if m == 0 and n == 0:
        return 0.0
    return min(1.0, max(0.0, raw_cost / (indel_cost * max(m, n))))


def sequence_distance(
    seq_a: tuple[TraceEvent, ...],
    seq_b: tuple[TraceEvent, ...],
    taxonomy: ActionTaxonomy,
    config: DistanceConfig,
) -> DistanceResult:
    """Distance between two raw event sequences (no gold validation)."""

    def cost(e1: TraceEvent, e2: TraceEvent) -> float:
        return config.indel_cost * event_substitution_cost(e1, e2, taxonomy, config)

    raw, dp, script = align_sequences(seq_a, seq_b, cost, config.indel_cost)
    distance = normalized_cost(raw, len(seq_a), len(seq_b), config.indel_cost)
    return DistanceResult(
        distance=distance,
        percent_display=percent_display(distance),
        cost_matrix_dims=(len(seq_a) + 1, len(seq_b) + 1),
        optimal_script=script,
    )


def cost_matrix(
    trace: ProcessTrace, gold: GoldStandard, config: DistanceConfig
) -> list[list[float]]:
    """Full DP matrix for debugging; corner cell is the raw alignment cost."""

    def cost(e1: TraceEvent, e2: TraceEvent) -> float:
        return config.indel_cost * event_substitution_cost(
            e1, e2, gold.taxonomy, config
        )

    _, dp, _ = align_sequences(trace.events, gold.trace.events, cost, config.indel_cost)
    return dp


def trace_distance(
    trace: ProcessTrace, gold: GoldStandard, config: DistanceConfig | None = None
) -> DistanceResult:
    """Score a recorded trace against the gold-standard trace.

    Raises :class:`TraceValidationError` when the trace does not validate
    against the gold taxonomy/checklist.
    """
    config = config or DistanceConfig()
    violations = validate_trace(trace, gold)
    if violations:
        raise TraceValidationError(violations)
    return sequence_distance(trace.events, gold.trace.events, gold.taxonomy, config)


def score_payload(
    trace: ProcessTrace, gold: GoldStandard, config: DistanceConfig | None = None
) -> dict:
    """Distance plus phase-compliance report, as returned by the server."""
    result = trace_distance(trace, gold, config)
    reports: list[PhaseReport] = phase_compliance(trace, gold.schedule)
    return {
        "distance": result.distance,
        "percent_display": result.percent_display,
        "phase_report": [r.to_json() for r in reports],
    }


def format_cost_matrix(dp: list[list[float]]) -> str:
    """Tabular text rendering of a DP matrix (debug artifact)."""
    lines = []
    for row in dp:
        lines.append("  ".join(f"{cell:8.4f}" for cell in row))
    return "\n".join(lines)
