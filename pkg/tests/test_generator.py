from __future__ import annotations

import pytest

from nrts.distance import trace_distance
from nrts.generator import generate_traces, session_id_from_rng
from nrts.model import SESSION_ID_RE

import random


def test_zero_noise_reproduces_gold(default_gold):
    _, generated = generate_traces(default_gold, 3, 2, noise=0.0, seed=42)
    assert len(generated) == 6
    for _, trace in generated:
        assert trace.events == default_gold.trace.events
        assert trace_distance(trace, default_gold).distance == 0.0


def test_deterministic_under_seed(default_gold):
    first = generate_traces(default_gold, 4, 3, noise=0.5, seed=7)
    second = generate_traces(default_gold, 4, 3, noise=0.5, seed=7)
    assert first == second
    different = generate_traces(default_gold, 4, 3, noise=0.5, seed=8)
    assert different != first


def test_drop_only_full_noise_empties_traces(default_gold):
    _, generated = generate_traces(
        default_gold, 2, 2, noise=1.0, seed=1, ops=("drop",)
    )
    for _, trace in generated:
        assert trace.events == ()
        assert trace_distance(trace, default_gold).distance == 1.0


def test_all_traces_share_one_session(default_gold):
    session_id, generated = generate_traces(default_gold, 4, 3, noise=0.2, seed=3)
    assert SESSION_ID_RE.match(session_id)
    assert {trace.session_id for _, trace in generated} == {session_id}
    groups = {trace.group_id for _, trace in generated}
    assert groups == {"group-1", "group-2", "group-3", "group-4"}


def test_generated_traces_validate_and_score(default_gold):
    from nrts.model import validate_trace

    _, generated = generate_traces(default_gold, 5, 4, noise=0.6, seed=11)
    for _, trace in generated:
        assert validate_trace(trace, default_gold) == []
        result = trace_distance(trace, default_gold)
        assert 0.0 <= result.distance <= 1.0


def test_duration_perturbation_stays_within_half(default_gold):
    _, generated = generate_traces(
        default_gold, 6, 6, noise=1.0, seed=5, ops=("duration",)
    )
    gold_by_index = default_gold.trace.events
    for _, trace in generated:
        assert len(trace.events) == len(gold_by_index)
        for event, gold_event in zip(trace.events, gold_by_index):
            assert event.action == gold_event.action
            low = gold_event.duration_ms * 0.5 - 1
            high = gold_event.duration_ms * 1.5 + 1
            assert low <= event.duration_ms <= high


def test_swap_uses_taxonomy_siblings(default_gold):
    _, generated = generate_traces(
        default_gold, 6, 6, noise=1.0, seed=9, ops=("swap",)
    )
    taxonomy = default_gold.taxonomy
    swapped = 0
    for _, trace in generated:
        for event, gold_event in zip(trace.events, default_gold.trace.events):
            if event.action != gold_event.action:
                swapped += 1
                assert event.action in taxonomy.siblings_of(gold_event.action)
            assert event.duration_ms == gold_event.duration_ms
    assert swapped > 0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(groups=0, traces_per_group=1, noise=0.1, seed=1),
        dict(groups=1, traces_per_group=0, noise=0.1, seed=1),
        dict(groups=1, traces_per_group=1, noise=-0.1, seed=1),
        dict(groups=1, traces_per_group=1, noise=1.1, seed=1),
        dict(groups=1, traces_per_group=1, noise=0.1, seed=1, ops=("teleport",)),
        dict(groups=1, traces_per_group=1, noise=0.1, seed=1, ops=()),
    ],
)
def test_invalid_parameters_rejected(default_gold, kwargs):
    with pytest.raises(ValueError):
        generate_traces(default_gold, **kwargs)


def test_session_id_from_rng_deterministic():
    assert session_id_from_rng(random.Random(3)) == session_id_from_rng(
        random.Random(3)
    )
    assert SESSION_ID_RE.match(session_id_from_rng(random.Random(3)))
