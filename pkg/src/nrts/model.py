"""Domain model for recorded simulation traces and the gold-standard bundle.

All types are immutable after construction and safe to share across threads.
Per-value invariants (timestamp ordering inside an event, attribute ranges,
temperature grades) are enforced at construction; invariants that depend on
the gold standard (action resolution, checklist membership, event ordering)
are checked by :func:`validate_trace` and reported as data, not raised.
"""

from __future__ import annotations

import enum
import re
import secrets
from base64 import b32encode
from dataclasses import dataclass

from nrts.taxonomy import ActionTaxonomy

SESSION_ID_RE = re.compile(r"^[a-z2-7]{26}$")


def new_session_id() -> str:
    """Mint a 128-bit random session token, base32 lower-case, 26 chars."""
    return b32encode(secrets.token_bytes(16)).decode("ascii").rstrip("=").lower()


class TemperatureReading(enum.Enum):
    """Body temperature grade: 35.5 to 39.5 in 0.5 steps, or over 40.

    Readings in the gap (39.5, 40.0] are unrepresentable by design; the
    measurement vocabulary has no grade for exactly 40.0.
    """

    T35_5 = 35.5
    T36_0 = 36.0
    T36_5 = 36.5
    T37_0 = 37.0
    T37_5 = 37.5
    T38_0 = 38.0
    T38_5 = 38.5
    T39_0 = 39.0
    T39_5 = 39.5
    OVER_40 = "OVER_40"

    @classmethod
    def from_wire(cls, value: object) -> "TemperatureReading":
        if value == "OVER_40":
            return cls.OVER_40
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            for member in cls:
                if member is not cls.OVER_40 and member.value == float(value):
                    return member
        raise ValueError(
            f"temperature must be one of the 0.5-step grades 35.5..39.5 "
            f"or 'OVER_40', got {value!r}"
        )

    def to_wire(self) -> float | str:
        return self.value


def _check_percent(name: str, value: int | None) -> None:
    if value is None:
        return
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if not 0 <= value <= 100:
        raise ValueError(f"{name} must be in 0..100, got {value}")


@dataclass(frozen=True)
class EventAttributes:
    """Optional measured values attached to one executed action."""

    temperature: TemperatureReading | None = None
    spo2_percent: int | None = None
    oxygen_percent: int | None = None

    def __post_init__(self):
        _check_percent("spo2_percent", self.spo2_percent)
        _check_percent("oxygen_percent", self.oxygen_percent)

    def is_empty(self) -> bool:
        return (
            self.temperature is None
            and self.spo2_percent is None
            and self.oxygen_percent is None
        )


@dataclass(frozen=True)
class TraceEvent:
    """One executed action with start/end timestamps in ms from scenario start."""

    action: str
    start_ms: int
    end_ms: int
    attributes: EventAttributes | None = None

    def __post_init__(self):
        if not isinstance(self.action, str) or not self.action:
            raise ValueError(f"action must be a non-empty string, got {self.action!r}")
        for name in ("start_ms", "end_ms"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{name} must be an integer, got {value!r}")
        if self.start_ms < 0:
            raise ValueError(f"start_ms must be >= 0, got {self.start_ms}")
        if self.end_ms < self.start_ms:
            raise ValueError(
                f"end_ms {self.end_ms} precedes start_ms {self.start_ms}"
            )

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


@dataclass(frozen=True)
class ChecklistEntry:
    item_id: str
    done: bool


@dataclass(frozen=True)
class ChecklistResult:
    """Pre-resuscitation checklist outcome: ordered (item, done) pairs."""

    items: tuple[ChecklistEntry, ...] = ()

    def __post_init__(self):
        seen = set()
        for entry in self.items:
            if entry.item_id in seen:
                raise ValueError(f"duplicate checklist item {entry.item_id!r}")
            seen.add(entry.item_id)


@dataclass(frozen=True)
class ProcessTrace:
    """One team's recorded run: ordered timed events plus session metadata.

    ``recorded_at`` is a wall-clock ISO-8601 stamp applied at ingestion; it is
    absent on traces that have not been submitted yet.
    """

    group_id: str
    events: tuple[TraceEvent, ...]
    checklist: ChecklistResult
    session_id: str | None = None
    notes: str = ""
    recorded_at: str | None = None

    def __post_init__(self):
        if not isinstance(self.group_id, str) or not self.group_id:
            raise ValueError("group_id must be a non-empty string")
        if self.session_id is not None and not SESSION_ID_RE.match(self.session_id):
            raise ValueError(
                f"session_id {self.session_id!r} does not match ^[a-z2-7]{{26}}$"
            )


@dataclass(frozen=True)
class Phase:
    phase_id: str
    deadline_ms: int
    action_ids: tuple[str, ...]


@dataclass(frozen=True)
class PhaseSchedule:
    """Deadline windows assigning actions to time bounds, in schedule order."""

    phases: tuple[Phase, ...]

    def __post_init__(self):
        previous_deadline = 0
        seen_phases: set[str] = set()
        seen_actions: set[str] = set()
        for phase in self.phases:
            if phase.phase_id in seen_phases:
                raise ValueError(f"duplicate phase id {phase.phase_id!r}")
            seen_phases.add(phase.phase_id)
            if phase.deadline_ms <= 0:
                raise ValueError(
                    f"phase {phase.phase_id!r} deadline must be positive"
                )
            if phase.deadline_ms < previous_deadline:
                raise ValueError(
                    f"phase {phase.phase_id!r} deadline decreases"
                )
            previous_deadline = phase.deadline_ms
            for action in phase.action_ids:
                if action in seen_actions:
                    raise ValueError(
                        f"action {action!r} assigned to more than one phase"
                    )
                seen_actions.add(action)

    def all_action_ids(self) -> tuple[str, ...]:
        return tuple(a for phase in self.phases for a in phase.action_ids)


class ConfigurationError(ValueError):
    """Gold-standard bundle is internally inconsistent."""


@dataclass(frozen=True)
class GoldStandard:
    """Reference trace plus phase schedule, checklist definition and taxonomy."""

    trace: ProcessTrace
    schedule: PhaseSchedule
    checklist_definition: tuple[str, ...]
    taxonomy: ActionTaxonomy

    def __post_init__(self):
        seen = set()
        for item in self.checklist_definition:
            if item in seen:
                raise ConfigurationError(f"duplicate checklist item {item!r}")
            seen.add(item)
        for action in self.schedule.all_action_ids():
            if action not in self.taxonomy:
                raise ConfigurationError(
                    f"schedule action {action!r} not in taxonomy"
                )
        gold_violations = _validate_against(
            self.trace, self.taxonomy, self.checklist_definition
        )
        if gold_violations:
            first = gold_violations[0]
            raise ConfigurationError(f"gold trace invalid: {first.reason}")


@dataclass(frozen=True)
class Violation:
    """One validation finding; ``index`` locates the event or checklist entry."""

    where: str  # "event" | "checklist"
    index: int
    reason: str

    def to_json(self) -> dict:
        return {"where": self.where, "index": self.index, "reason": self.reason}


def _validate_against(
    trace: ProcessTrace,
    taxonomy: ActionTaxonomy,
    checklist_definition: tuple[str, ...],
) -> list[Violation]:
    violations: list[Violation] = []
    previous_start = None
    for i, event in enumerate(trace.events):
        if event.action not in taxonomy:
            violations.append(
                Violation("event", i, f"unknown action {event.action!r}")
            )
        if previous_start is not None and event.start_ms < previous_start:
            violations.append(
                Violation(
                    "event",
                    i,
                    f"start_ms {event.start_ms} precedes previous start "
                    f"{previous_start}",
                )
            )
        previous_start = event.start_ms
    known_items = set(checklist_definition)
    for i, entry in enumerate(trace.checklist.items):
        if entry.item_id not in known_items:
            violations.append(
                Violation("checklist", i, f"unknown checklist item {entry.item_id!r}")
            )
    return violations


def validate_trace(trace: ProcessTrace, gold: GoldStandard) -> list[Violation]:
    """Check ordering, taxonomy resolution and checklist membership.

    Violations are data, not failures; an empty report means the trace is
    valid against this gold standard.
    """
    return _validate_against(trace, gold.taxonomy, gold.checklist_definition)


@dataclass(frozen=True)
class PhaseReport:
    phase_id: str
    actions_on_time: tuple[str, ...]
    actions_late: tuple[str, ...]
    actions_missing: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "phase_id": self.phase_id,
            "actions_on_time": list(self.actions_on_time),
            "actions_late": list(self.actions_late),
            "actions_missing": list(self.actions_missing),
        }


def phase_compliance(
    trace: ProcessTrace, schedule: PhaseSchedule
) -> list[PhaseReport]:
    """Partition each phase's actions into on-time, late and missing.

    An action is on time when some event with that action starts at or before
    the phase deadline; late when its earliest event starts after it; missing
    when no event carries it.
    """
    earliest_start: dict[str, int] = {}
    for event in trace.events:
        if event.action not in earliest_start:
            earliest_start[event.action] = event.start_ms
        else:
            earliest_start[event.action] = min(
                earliest_start[event.action], event.start_ms
            )
    reports = []
    for phase in schedule.phases:
        on_time, late, missing = [], [], []
        for action in phase.action_ids:
            start = earliest_start.get(action)
            if start is None:
                missing.append(action)
            elif start <= phase.deadline_ms:
                on_time.append(action)
            else:
                late.append(action)
        reports.append(
            PhaseReport(phase.phase_id, tuple(on_time), tuple(late), tuple(missing))
        )
    return reports
