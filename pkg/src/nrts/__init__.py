"""Trace capture and scoring platform for simulation training sessions.

A server ingests timed process traces recorded during training scenarios,
scores each one against a gold-standard trace with a semantic trace edit
distance in [0, 1], persists them per session and group, and serves
debriefing statistics. A CLI drives it offline and over HTTP.
"""

from nrts.bundle import BundleError, load_bundle, load_default_bundle, save_bundle
from nrts.distance import (
    DistanceConfig,
    DistanceResult,
    EditOp,
    TraceValidationError,
    event_substitution_cost,
    percent_display,
    percent_string,
    score_payload,
    taxonomy_distance,
    trace_distance,
)
from nrts.model import (
    ChecklistEntry,
    ChecklistResult,
    ConfigurationError,
    EventAttributes,
    GoldStandard,
    Phase,
    PhaseReport,
    PhaseSchedule,
    ProcessTrace,
    TemperatureReading,
    TraceEvent,
    Violation,
    new_session_id,
    phase_compliance,
    validate_trace,
)
from nrts.store import FileSessionStore, SessionStats, SessionStore
from nrts.taxonomy import ActionTaxonomy, TaxonomyError, parse_taxonomy
from nrts.wire import (
    WireFormatError,
    apply_session_temperature,
    parse_wire_trace,
    trace_to_wire,
)

__version__ = "0.1.0"

__all__ = [
    "ActionTaxonomy",
    "BundleError",
    "ChecklistEntry",
    "ChecklistResult",
    "ConfigurationError",
    "DistanceConfig",
    "DistanceResult",
    "EditOp",
    "EventAttributes",
    "FileSessionStore",
    "GoldStandard",
    "Phase",
    "PhaseReport",
    "PhaseSchedule",
    "ProcessTrace",
    "SessionStats",
    "SessionStore",
    "TaxonomyError",
    "TemperatureReading",
    "TraceEvent",
    "TraceValidationError",
    "Violation",
    "WireFormatError",
    "apply_session_temperature",
    "event_substitution_cost",
    "load_bundle",
    "load_default_bundle",
    "new_session_id",
    "parse_taxonomy",
    "parse_wire_trace",
    "percent_display",
    "percent_string",
    "phase_compliance",
    "save_bundle",
    "score_payload",
    "taxonomy_distance",
    "trace_distance",
    "trace_to_wire",
    "validate_trace",
]
