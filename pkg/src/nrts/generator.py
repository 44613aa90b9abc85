"""Synthetic trace generation for desk-scale statistics runs.

Produces the k-traces-per-group corpus shape: n groups each submitting k
traces derived from the gold trace under a simple noise model. With
probability ``noise`` per gold event one mutation is applied, chosen
uniformly among the enabled operations:

    drop      remove the event
    duration  scale the duration by a factor uniform in [0.5, 1.5]
    swap      replace the action with a random taxonomy sibling

Generation is fully deterministic under a fixed seed, including the minted
session id; no wall clock is consulted.
"""

from __future__ import annotations

import dataclasses
import random
from base64 import b32encode

from nrts.model import ChecklistEntry, ChecklistResult, GoldStandard, ProcessTrace

NOISE_OPS = ("drop", "duration", "swap")


def session_id_from_rng(rng: random.Random) -> str:
    raw = rng.getrandbits(128).to_bytes(16, "big")
    return b32encode(raw).decode("ascii").rstrip("=").lower()


def _mutate_events(gold: GoldStandard, noise: float, ops, rng: random.Random):
    events = []
    for event in gold.trace.events:
        if rng.random() >= noise:
            events.append(event)
            continue
        op = ops[rng.randrange(len(ops))]
        if op == "drop":
            continue
        if op == "duration":
            factor = 1.0 + rng.uniform(-0.5, 0.5)
            duration = max(0, round(event.duration_ms * factor))
            events.append(
                dataclasses.replace(event, end_ms=event.start_ms + duration)
            )
            continue
        siblings = gold.taxonomy.siblings_of(event.action)
        if siblings:
            event = dataclasses.replace(
                event, action=siblings[rng.randrange(len(siblings))]
            )
        events.append(event)
    return tuple(events)


def generate_traces(
    gold: GoldStandard,
    groups: int,
    traces_per_group: int,
    noise: float,
    seed: int,
    ops: tuple[str, ...] = NOISE_OPS,
) -> tuple[str, list[tuple[str, ProcessTrace]]]:
    """Generate ``groups * traces_per_group`` traces sharing one session id.

    Returns (session_id, [(file stem, trace), ...]) in a stable order.
    """
    if groups < 1 or traces_per_group < 1:
        raise ValueError("groups and traces-per-group must be >= 1")
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise must be in [0, 1], got {noise}")
    unknown = set(ops) - set(NOISE_OPS)
    if not ops or unknown:
        raise ValueError(f"noise ops must be a non-empty subset of {NOISE_OPS}")

    rng = random.Random(seed)
    session_id = session_id_from_rng(rng)
    checklist = ChecklistResult(
        tuple(ChecklistEntry(item, True) for item in gold.checklist_definition)
    )
    generated = []
    for g in range(1, groups + 1):
        group_id = f"group-{g}"
        for k in range(1, traces_per_group + 1):
            trace = ProcessTrace(
                group_id=group_id,
                events=_mutate_events(gold, noise, ops, rng),
                checklist=checklist,
                session_id=session_id,
            )
            generated.append((f"{group_id}__trace-{k:02d}", trace))
    return session_id, generated
