"""Wire representation of process traces.

The same JSON object is used on the HTTP API and in trace files::

    {"session_id": "...",          optional, ^[a-z2-7]{26}$
     "group_id": "team-a",
     "checklist": [{"item": "warmer_preheated", "done": true}, ...],
     "events": [{"action": "dry_infant", "start_ms": 0, "end_ms": 30000,
                 "attributes": {"temperature": 36.5, "spo2_percent": 85,
                                "oxygen_percent": 30}}, ...],
     "temperature": 36.5,          optional session-level reading
     "notes": "...",               optional
     "@context": {...}}            accepted and ignored

Unknown keys are rejected at every level except the JSON-LD ``@context``
member, which is tolerated at the top level.
"""

from __future__ import annotations

import dataclasses
import json

from nrts.model import (
    ChecklistEntry,
    ChecklistResult,
    EventAttributes,
    ProcessTrace,
    TemperatureReading,
    TraceEvent,
)
from nrts.taxonomy import ActionTaxonomy

TEMPERATURE_ACTION_ID = "measure_temperature"

_TOP_KEYS = {"session_id", "group_id", "checklist", "events", "temperature",
             "notes", "@context"}
_EVENT_KEYS = {"action", "start_ms", "end_ms", "attributes"}
_ATTRIBUTE_KEYS = {"temperature", "spo2_percent", "oxygen_percent"}


class WireFormatError(ValueError):
    """Trace JSON does not map onto the domain model; ``problems`` lists why."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


def _parse_attributes(obj: object, where: str, problems: list[str]) -> EventAttributes | None:
    if not isinstance(obj, dict):
        problems.append(f"{where}: attributes must be an object")
        return None
    unknown = set(obj) - _ATTRIBUTE_KEYS
    if unknown:
        problems.append(f"{where}: unknown attribute keys {sorted(unknown)}")
        return None
    temperature = None
    if "temperature" in obj:
        try:
            temperature = TemperatureReading.from_wire(obj["temperature"])
        except ValueError as exc:
            problems.append(f"{where}: {exc}")
            return None
    try:
        return EventAttributes(
            temperature=temperature,
            spo2_percent=obj.get("spo2_percent"),
            oxygen_percent=obj.get("oxygen_percent"),
        )
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return None


def _parse_event(obj: object, index: int, problems: list[str]) -> TraceEvent | None:
    where = f"events[{index}]"
    if not isinstance(obj, dict):
        problems.append(f"{where}: must be an object")
        return None
    unknown = set(obj) - _EVENT_KEYS
    if unknown:
        problems.append(f"{where}: unknown keys {sorted(unknown)}")
        return None
    missing = {"action", "start_ms", "end_ms"} - set(obj)
    if missing:
        problems.append(f"{where}: missing keys {sorted(missing)}")
        return None
    attributes = None
    if "attributes" in obj:
        attributes = _parse_attributes(obj["attributes"], where, problems)
        if attributes is None:
            return None
        if attributes.is_empty():
            attributes = None
    try:
        return TraceEvent(
            action=obj["action"],
            start_ms=obj["start_ms"],
            end_ms=obj["end_ms"],
            attributes=attributes,
        )
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return None


def _parse_checklist(obj: object, problems: list[str]) -> ChecklistResult | None:
    if not isinstance(obj, list):
        problems.append("checklist: must be a list of {item, done} objects")
        return None
    entries = []
    for i, entry in enumerate(obj):
        if (
            not isinstance(entry, dict)
            or set(entry) != {"item", "done"}
            or not isinstance(entry.get("item"), str)
            or not isinstance(entry.get("done"), bool)
        ):
            problems.append(f"checklist[{i}]: must be {{item: string, done: bool}}")
            return None
        entries.append(ChecklistEntry(entry["item"], entry["done"]))
    try:
        return ChecklistResult(tuple(entries))
    except ValueError as exc:
        problems.append(f"checklist: {exc}")
        return None


def parse_wire_trace(obj: object) -> tuple[ProcessTrace, TemperatureReading | None]:
    """Map a wire JSON object onto (ProcessTrace, session-level temperature).

    Raises :class:`WireFormatError` carrying every structural problem found.
    The session-level temperature, if any, is returned separately so the
    caller can fold it into the trace via :func:`apply_session_temperature`.
    """
    problems: list[str] = []
    if not isinstance(obj, dict):
        raise WireFormatError(["trace body must be a JSON object"])
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        problems.append(f"unknown keys {sorted(unknown)}")
    missing = {"group_id", "checklist", "events"} - set(obj)
    if missing:
        problems.append(f"missing keys {sorted(missing)}")
    if problems:
        raise WireFormatError(problems)

    checklist = _parse_checklist(obj["checklist"], problems)
    events = []
    if isinstance(obj["events"], list):
        for i, event_obj in enumerate(obj["events"]):
            event = _parse_event(event_obj, i, problems)
            if event is not None:
                events.append(event)
    else:
        problems.append("events: must be a list")

    session_temperature = None
    if "temperature" in obj:
        try:
            session_temperature = TemperatureReading.from_wire(obj["temperature"])
        except ValueError as exc:
            problems.append(str(exc))

    notes = obj.get("notes", "")
    if not isinstance(notes, str):
        problems.append("notes: must be a string")
        notes = ""
    session_id = obj.get("session_id")
    if session_id is not None and not isinstance(session_id, str):
        problems.append("session_id: must be a string")
        session_id = None

    if problems or checklist is None:
        raise WireFormatError(problems)
    try:
        trace = ProcessTrace(
            group_id=obj["group_id"],
            events=tuple(events),
            checklist=checklist,
            session_id=session_id,
            notes=notes,
        )
    except ValueError as exc:
        raise WireFormatError([str(exc)]) from exc
    return trace, session_temperature


def apply_session_temperature(
    trace: ProcessTrace,
    session_temperature: TemperatureReading | None,
    taxonomy: ActionTaxonomy,
) -> ProcessTrace:
    """Copy a session-level temperature onto a synthetic measurement event.

    The trace stays the single source of truth: the value is appended as a
    zero-duration ``measure_temperature`` event, and only when no existing
    event already carries a temperature. When the active taxonomy has no
    such action the trace is returned unchanged.
    """
    if session_temperature is None or TEMPERATURE_ACTION_ID not in taxonomy:
        return trace
    for event in trace.events:
        if event.attributes is not None and event.attributes.temperature is not None:
            return trace
    at = max((e.end_ms for e in trace.events), default=0)
    synthetic = TraceEvent(
        action=TEMPERATURE_ACTION_ID,
        start_ms=at,
        end_ms=at,
        attributes=EventAttributes(temperature=session_temperature),
    )
    return dataclasses.replace(trace, events=trace.events + (synthetic,))


def event_to_wire(event: TraceEvent) -> dict:
    obj: dict = {
        "action": event.action,
        "start_ms": event.start_ms,
        "end_ms": event.end_ms,
    }
    if event.attributes is not None and not event.attributes.is_empty():
        attributes: dict = {}
        if event.attributes.temperature is not None:
            attributes["temperature"] = event.attributes.temperature.to_wire()
        if event.attributes.spo2_percent is not None:
            attributes["spo2_percent"] = event.attributes.spo2_percent
        if event.attributes.oxygen_percent is not None:
            attributes["oxygen_percent"] = event.attributes.oxygen_percent
        obj["attributes"] = attributes
    return obj


def trace_to_wire(trace: ProcessTrace) -> dict:
    """Serialize a trace to its wire JSON object (stable key order)."""
    obj: dict = {}
    if trace.session_id is not None:
        obj["session_id"] = trace.session_id
    obj["group_id"] = trace.group_id
    obj["checklist"] = [
        {"item": e.item_id, "done": e.done} for e in trace.checklist.items
    ]
    obj["events"] = [event_to_wire(e) for e in trace.events]
    if trace.notes:
        obj["notes"] = trace.notes
    return obj


def load_trace_file(path) -> tuple[ProcessTrace, TemperatureReading | None]:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise WireFormatError([f"malformed trace JSON: {exc}"]) from exc
    return parse_wire_trace(obj)


def dump_trace_file(path, trace: ProcessTrace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(trace_to_wire(trace), fh, indent=2, ensure_ascii=False)
        fh.write("\n")
