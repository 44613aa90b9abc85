from __future__ import annotations

import dataclasses
import random

import pytest

from nrts.bundle import load_default_bundle
from nrts.model import (
    ChecklistEntry,
    ChecklistResult,
    GoldStandard,
    ProcessTrace,
    TraceEvent,
)


@pytest.fixture(scope="session")
def default_gold() -> GoldStandard:
    return load_default_bundle()


@pytest.fixture(scope="session")
def five_event_gold(default_gold) -> GoldStandard:
    """Default bundle with the last gold event dropped: deleting k of its
    events from a submission yields an exact distance of k/5."""
    trace = dataclasses.replace(
        default_gold.trace, events=default_gold.trace.events[:-1]
    )
    return dataclasses.replace(default_gold, trace=trace)


def full_checklist(gold: GoldStandard) -> ChecklistResult:
    return ChecklistResult(
        tuple(ChecklistEntry(item, True) for item in gold.checklist_definition)
    )


def trace_from_events(gold: GoldStandard, events, **overrides) -> ProcessTrace:
    kwargs = dict(
        group_id="team-a",
        events=tuple(events),
        checklist=full_checklist(gold),
    )
    kwargs.update(overrides)
    return ProcessTrace(**kwargs)


def missing_last_action(gold: GoldStandard) -> ProcessTrace:
    return trace_from_events(gold, gold.trace.events[:-1])


def random_events(
    rng: random.Random, actions: list[str], count: int
) -> tuple[TraceEvent, ...]:
    events = []
    cursor = 0
    for _ in range(count):
        start = cursor + rng.randrange(0, 20_000)
        duration = rng.randrange(0, 90_000)
        events.append(
            TraceEvent(rng.choice(actions), start, start + duration)
        )
        cursor = start
    return tuple(events)
