from __future__ import annotations

import dataclasses

import pytest

from nrts.model import (
    ChecklistEntry,
    ChecklistResult,
    ConfigurationError,
    EventAttributes,
    GoldStandard,
    Phase,
    PhaseSchedule,
    ProcessTrace,
    SESSION_ID_RE,
    TemperatureReading,
    TraceEvent,
    new_session_id,
    phase_compliance,
    validate_trace,
)

from conftest import trace_from_events


class TestTemperatureReading:
    def test_exactly_ten_grades(self):
        assert len(TemperatureReading) == 10

    @pytest.mark.parametrize(
        "value", [35.5, 36.0, 36.5, 37.0, 37.5, 38.0, 38.5, 39.0, 39.5]
    )
    def test_grades_round_trip(self, value):
        reading = TemperatureReading.from_wire(value)
        assert reading.to_wire() == value

    def test_over_40_sentinel(self):
        assert TemperatureReading.from_wire("OVER_40") is TemperatureReading.OVER_40
        assert TemperatureReading.OVER_40.to_wire() == "OVER_40"

    def test_integer_grade_accepted(self):
        assert TemperatureReading.from_wire(37) is TemperatureReading.T37_0

    @pytest.mark.parametrize("value", [40.0, 35.0, 36.2, 41, "36.5", True, None])
    def test_off_grade_rejected(self, value):
        # 40.0 exactly sits in the unrepresentable gap between the top
        # grade and OVER_40, so it must be rejected like any other off-grade.
        with pytest.raises(ValueError):
            TemperatureReading.from_wire(value)


class TestTraceEvent:
    def test_duration_derived(self):
        event = TraceEvent("dry_infant", 1000, 31000)
        assert event.duration_ms == 30000

    def test_end_before_start_rejected(self):
        with pytest.raises(ValueError):
            TraceEvent("dry_infant", 1000, 999)

    def test_negative_start_rejected(self):
        with pytest.raises(ValueError):
            TraceEvent("dry_infant", -1, 10)

    @pytest.mark.parametrize("bad", [1.5, "0", True, None])
    def test_non_integer_timestamps_rejected(self, bad):
        with pytest.raises(ValueError):
            TraceEvent("dry_infant", bad, 10)

    def test_empty_action_rejected(self):
        with pytest.raises(ValueError):
            TraceEvent("", 0, 10)

    def test_attribute_ranges(self):
        EventAttributes(spo2_percent=0, oxygen_percent=100)
        with pytest.raises(ValueError):
            EventAttributes(spo2_percent=101)
        with pytest.raises(ValueError):
            EventAttributes(oxygen_percent=-1)
        with pytest.raises(ValueError):
            EventAttributes(spo2_percent=True)


class TestProcessTrace:
    def test_requires_group_id(self, default_gold):
        with pytest.raises(ValueError):
            trace_from_events(default_gold, default_gold.trace.events, group_id="")

    def test_session_id_grammar_enforced(self, default_gold):
        with pytest.raises(ValueError):
            trace_from_events(
                default_gold, default_gold.trace.events, session_id="UPPERCASE"
            )
        trace = trace_from_events(
            default_gold, default_gold.trace.events, session_id="a" * 26
        )
        assert trace.session_id == "a" * 26

    def test_duplicate_checklist_items_rejected(self):
        with pytest.raises(ValueError):
            ChecklistResult(
                (ChecklistEntry("towels_ready", True), ChecklistEntry("towels_ready", False))
            )


def test_new_session_id_grammar_and_uniqueness():
    ids = {new_session_id() for _ in range(64)}
    assert len(ids) == 64
    for session_id in ids:
        assert SESSION_ID_RE.match(session_id)


class TestPhaseSchedule:
    def test_deadlines_must_not_decrease(self):
        with pytest.raises(ValueError):
            PhaseSchedule(
                (Phase("p1", 60000, ("a",)), Phase("p2", 30000, ("b",)))
            )

    def test_deadline_must_be_positive(self):
        with pytest.raises(ValueError):
            PhaseSchedule((Phase("p1", 0, ("a",)),))

    def test_action_in_at_most_one_phase(self):
        with pytest.raises(ValueError):
            PhaseSchedule(
                (Phase("p1", 60000, ("a",)), Phase("p2", 60000, ("a",)))
            )

    def test_duplicate_phase_ids_rejected(self):
        with pytest.raises(ValueError):
            PhaseSchedule(
                (Phase("p1", 60000, ("a",)), Phase("p1", 90000, ("b",)))
            )

    def test_equal_deadlines_allowed(self, default_gold):
        deadlines = [p.deadline_ms for p in default_gold.schedule.phases]
        assert deadlines == sorted(deadlines)


class TestGoldStandard:
    def test_schedule_action_must_resolve(self, default_gold):
        schedule = PhaseSchedule((Phase("p1", 60000, ("warp-drive",)),))
        with pytest.raises(ConfigurationError):
            dataclasses.replace(default_gold, schedule=schedule)

    def test_gold_trace_must_validate(self, default_gold):
        bad_event = TraceEvent("warp-drive", 0, 1000)
        bad_trace = dataclasses.replace(default_gold.trace, events=(bad_event,))
        with pytest.raises(ConfigurationError):
            dataclasses.replace(default_gold, trace=bad_trace)

    def test_duplicate_checklist_definition_rejected(self, default_gold):
        with pytest.raises(ConfigurationError):
            dataclasses.replace(
                default_gold, checklist_definition=("towels_ready", "towels_ready")
            )


class TestValidateTrace:
    def test_gold_trace_is_valid(self, default_gold):
        assert validate_trace(default_gold.trace, default_gold) == []

    def test_unknown_action_flagged_at_event(self, default_gold):
        events = list(default_gold.trace.events)
        events[2] = dataclasses.replace(events[2], action="warp-drive")
        trace = trace_from_events(default_gold, events)
        report = validate_trace(trace, default_gold)
        assert len(report) == 1
        assert report[0].where == "event"
        assert report[0].index == 2
        assert "warp-drive" in report[0].reason

    def test_ordering_violation_at_second_event(self, default_gold):
        trace = trace_from_events(
            default_gold,
            (
                TraceEvent("dry_infant", 5000, 6000),
                TraceEvent("stimulate", 1000, 2000),
            ),
        )
        report = validate_trace(trace, default_gold)
        assert [(v.where, v.index) for v in report] == [("event", 1)]

    def test_unknown_checklist_item_flagged(self, default_gold):
        checklist = ChecklistResult((ChecklistEntry("bring_snacks", True),))
        trace = trace_from_events(
            default_gold, default_gold.trace.events, checklist=checklist
        )
        report = validate_trace(trace, default_gold)
        assert [(v.where, v.index) for v in report] == [("checklist", 0)]

    def test_deterministic(self, default_gold):
        events = (
            TraceEvent("warp-drive", 5000, 6000),
            TraceEvent("stimulate", 1000, 2000),
        )
        trace = trace_from_events(default_gold, events)
        first = validate_trace(trace, default_gold)
        second = validate_trace(trace, default_gold)
        assert first == second
        assert len(first) == 2


class TestPhaseCompliance:
    def test_gold_trace_all_on_time(self, default_gold):
        for report in phase_compliance(default_gold.trace, default_gold.schedule):
            assert report.actions_late == ()
            assert report.actions_missing == ()
            assert len(report.actions_on_time) > 0

    def test_deadline_boundary_is_inclusive(self, default_gold):
        schedule = PhaseSchedule((Phase("p1", 60000, ("dry_infant",)),))
        on_time = trace_from_events(
            default_gold, (TraceEvent("dry_infant", 60000, 61000),)
        )
        late = trace_from_events(
            default_gold, (TraceEvent("dry_infant", 61000, 62000),)
        )
        assert phase_compliance(on_time, schedule)[0].actions_on_time == ("dry_infant",)
        assert phase_compliance(late, schedule)[0].actions_late == ("dry_infant",)

    def test_three_phase_fixture_enumerated_by_hand(self, default_gold):
        # 5-event fixture, hand-enumerated: phase-1 actions both start
        # within 60s; ppv_mask starts at 70s (late); of the phase-3 pair,
        # measure_spo2 never occurs.
        schedule = PhaseSchedule(
            (
                Phase("phase-1", 60000, ("dry_infant", "stimulate")),
                Phase("phase-2", 60000, ("ppv_mask",)),
                Phase("phase-3", 180000, ("assess_heart_rate", "measure_spo2")),
            )
        )
        trace = trace_from_events(
            default_gold,
            (
                TraceEvent("dry_infant", 0, 30000),
                TraceEvent("stimulate", 30000, 45000),
                TraceEvent("ppv_mask", 70000, 100000),
                TraceEvent("assess_heart_rate", 100000, 120000),
                TraceEvent("assess_breathing", 120000, 130000),
            ),
        )
        reports = phase_compliance(trace, schedule)
        assert reports[0].actions_on_time == ("dry_infant", "stimulate")
        assert reports[1].actions_late == ("ppv_mask",)
        assert reports[2].actions_on_time == ("assess_heart_rate",)
        assert reports[2].actions_missing == ("measure_spo2",)

    def test_partition_property(self, default_gold):
        trace = trace_from_events(
            default_gold,
            (
                TraceEvent("dry_infant", 61000, 62000),
                TraceEvent("ppv_mask", 70000, 100000),
            ),
        )
        for report in phase_compliance(trace, default_gold.schedule):
            phase = next(
                p
                for p in default_gold.schedule.phases
                if p.phase_id == report.phase_id
            )
            partition = (
                report.actions_on_time + report.actions_late + report.actions_missing
            )
            assert sorted(partition) == sorted(phase.action_ids)
            assert len(partition) == len(set(partition))

    def test_repeated_action_uses_earliest_start(self, default_gold):
        schedule = PhaseSchedule((Phase("p1", 60000, ("dry_infant",)),))
        trace = trace_from_events(
            default_gold,
            (
                TraceEvent("dry_infant", 50000, 52000),
                TraceEvent("dry_infant", 90000, 95000),
            ),
        )
        assert phase_compliance(trace, schedule)[0].actions_on_time == ("dry_infant",)
