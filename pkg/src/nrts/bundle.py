"""Gold-standard bundle: taxonomy + phase schedule + checklist + gold trace.

On disk a bundle is a directory of four UTF-8 JSON files::

    taxonomy.json    {"root": ..., "nodes": {child: parent, ...}}
    schedule.json    {"phases": [{"phase_id", "deadline_ms", "action_ids"}]}
    checklist.json   {"items": ["warmer_preheated", ...]}
    gold_trace.json  wire-format trace (see nrts.wire)

The same four objects travel as one JSON document on PUT /api/v1/gold.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from nrts.model import ConfigurationError, GoldStandard, Phase, PhaseSchedule
from nrts.taxonomy import TaxonomyError, taxonomy_from_document
from nrts.wire import WireFormatError, parse_wire_trace

BUNDLE_FILES = ("taxonomy.json", "schedule.json", "checklist.json", "gold_trace.json")


class BundleError(ValueError):
    """Gold-standard bundle cannot be loaded or does not validate."""


def _schedule_from_json(doc: object) -> PhaseSchedule:
    if not isinstance(doc, dict) or set(doc) != {"phases"} or not isinstance(doc["phases"], list):
        raise BundleError("schedule must be {'phases': [...]}")
    phases = []
    for i, entry in enumerate(doc["phases"]):
        if (
            not isinstance(entry, dict)
            or set(entry) != {"phase_id", "deadline_ms", "action_ids"}
            or not isinstance(entry.get("phase_id"), str)
            or not isinstance(entry.get("deadline_ms"), int)
            or not isinstance(entry.get("action_ids"), list)
            or not all(isinstance(a, str) for a in entry["action_ids"])
        ):
            raise BundleError(
                f"phases[{i}] must be {{phase_id, deadline_ms, action_ids}}"
            )
        phases.append(
            Phase(entry["phase_id"], entry["deadline_ms"], tuple(entry["action_ids"]))
        )
    try:
        return PhaseSchedule(tuple(phases))
    except ValueError as exc:
        raise BundleError(f"invalid schedule: {exc}") from exc


def _checklist_from_json(doc: object) -> tuple[str, ...]:
    if (
        not isinstance(doc, dict)
        or set(doc) != {"items"}
        or not isinstance(doc["items"], list)
        or not all(isinstance(i, str) and i for i in doc["items"])
    ):
        raise BundleError("checklist must be {'items': [non-empty strings]}")
    return tuple(doc["items"])


def bundle_from_json(doc: object) -> GoldStandard:
    """Assemble and validate a gold standard from one combined JSON object."""
    if not isinstance(doc, dict):
        raise BundleError("bundle must be a JSON object")
    missing = {"taxonomy", "schedule", "checklist", "gold_trace"} - set(doc)
    if missing:
        raise BundleError(f"bundle missing members {sorted(missing)}")
    unknown = set(doc) - {"taxonomy", "schedule", "checklist", "gold_trace"}
    if unknown:
        raise BundleError(f"bundle has unknown members {sorted(unknown)}")
    try:
        taxonomy = taxonomy_from_document(doc["taxonomy"])
    except TaxonomyError as exc:
        raise BundleError(f"invalid taxonomy: {exc}") from exc
    schedule = _schedule_from_json(doc["schedule"])
    checklist_definition = _checklist_from_json(doc["checklist"])
    try:
        gold_trace, _ = parse_wire_trace(doc["gold_trace"])
    except WireFormatError as exc:
        raise BundleError(f"invalid gold trace: {exc}") from exc
    try:
        return GoldStandard(
            trace=gold_trace,
            schedule=schedule,
            checklist_definition=checklist_definition,
            taxonomy=taxonomy,
        )
    except ConfigurationError as exc:
        raise BundleError(str(exc)) from exc


def bundle_to_json(gold: GoldStandard) -> dict:
    from nrts.wire import trace_to_wire

    return {
        "taxonomy": gold.taxonomy.to_document(),
        "schedule": {
            "phases": [
                {
                    "phase_id": p.phase_id,
                    "deadline_ms": p.deadline_ms,
                    "action_ids": list(p.action_ids),
                }
                for p in gold.schedule.phases
            ]
        },
        "checklist": {"items": list(gold.checklist_definition)},
        "gold_trace": trace_to_wire(gold.trace),
    }


def _read_json(path: Path) -> object:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BundleError(f"cannot read {path.name}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"malformed JSON in {path.name}: {exc}") from exc


def load_bundle(directory) -> GoldStandard:
    """Load and validate a gold-standard bundle directory."""
    directory = Path(directory)
    taxonomy_doc, schedule_doc, checklist_doc, trace_doc = (
        _read_json(directory / name) for name in BUNDLE_FILES
    )
    return bundle_from_json(
        {
            "taxonomy": taxonomy_doc,
            "schedule": schedule_doc,
            "checklist": checklist_doc,
            "gold_trace": trace_doc,
        }
    )


def save_bundle(gold: GoldStandard, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    doc = bundle_to_json(gold)
    for name, member in zip(
        BUNDLE_FILES, ("taxonomy", "schedule", "checklist", "gold_trace")
    ):
        path = directory / name
        path.write_text(
            json.dumps(doc[member], indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )


def default_bundle_path() -> Path:
    """Directory of the bundle shipped with the package."""
    return Path(resources.files("nrts").joinpath("data", "default_bundle"))


def load_default_bundle() -> GoldStandard:
    return load_bundle(default_bundle_path())
