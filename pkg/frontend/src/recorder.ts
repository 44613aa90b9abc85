/** Live-session state: checklist, tap-to-start/tap-to-stop action timers,
 * phase navigation, temperature and notes, and serialization to the wire
 * trace the server scores.
 *
 * The UI performs no scoring; this module only captures what happened.
 */

import { Clock, systemClock } from './clock.js';
import { PhaseDefinition, TemperatureValue, WireEvent, WireTrace } from './types.js';

export interface CompletedInterval {
  startMs: number;
  endMs: number;
}

export interface ActionTiming {
  status: 'idle' | 'running';
  runningSinceMs?: number;
  intervals: CompletedInterval[];
}

export class SessionRecorder {
  readonly phases: PhaseDefinition[];
  readonly checklistItems: string[];

  private clock: Clock;
  private checklist = new Map<string, boolean>();
  private timings = new Map<string, ActionTiming>();
  private scenarioStartEpochMs: number | null = null;
  private lastClockMs = 0;
  private phaseIndex = 0;

  sessionId: string | null = null;
  groupId = '';
  temperature: TemperatureValue | null = null;
  notes = '';

  constructor(
    definition: { phases: PhaseDefinition[]; checklistItems: string[] },
    clock: Clock = systemClock,
  ) {
    this.phases = definition.phases;
    this.checklistItems = definition.checklistItems;
    this.clock = clock;
    for (const item of definition.checklistItems) {
      this.checklist.set(item, false);
    }
  }

  // -- checklist ----------------------------------------------------------

  setChecklistItem(item: string, done: boolean): void {
    if (!this.checklist.has(item)) {
      throw new Error(`unknown checklist item ${item}`);
    }
    this.checklist.set(item, done);
  }

  checklistState(): { item: string; done: boolean }[] {
    return this.checklistItems.map((item) => ({
      item,
      done: this.checklist.get(item) ?? false,
    }));
  }

  // -- scenario clock ------------------------------------------------------

  startScenario(): void {
    if (this.scenarioStartEpochMs === null) {
      this.scenarioStartEpochMs = this.clock.now();
      this.lastClockMs = 0;
    }
  }

  get started(): boolean {
    return this.scenarioStartEpochMs !== null;
  }

  /** Milliseconds since scenario start; monotone even if the wall clock
   * steps backwards. */
  clockMs(): number {
    if (this.scenarioStartEpochMs === null) {
      return 0;
    }
    const elapsed = this.clock.now() - this.scenarioStartEpochMs;
    this.lastClockMs = Math.max(this.lastClockMs, elapsed);
    return this.lastClockMs;
  }

  // -- action timers -------------------------------------------------------

  /** Tap an action button: first tap starts its timer, tapping the same
   * action again closes the interval at the current clock. Returns the new
   * status. Actions are repeatable. */
  tapAction(actionId: string): 'running' | 'completed' | 'ignored' {
    if (!this.started) {
      return 'ignored';
    }
    const now = this.clockMs();
    const timing = this.timings.get(actionId) ?? { status: 'idle' as const, intervals: [] };
    if (timing.status === 'running') {
      const startMs = timing.runningSinceMs ?? now;
      timing.intervals.push({ startMs, endMs: Math.max(startMs, now) });
      timing.status = 'idle';
      delete timing.runningSinceMs;
      this.timings.set(actionId, timing);
      return 'completed';
    }
    timing.status = 'running';
    timing.runningSinceMs = now;
    this.timings.set(actionId, timing);
    return 'running';
  }

  actionTiming(actionId: string): ActionTiming {
    return (
      this.timings.get(actionId) ?? { status: 'idle', intervals: [] }
    );
  }

  runningActions(): string[] {
    return [...this.timings.entries()]
      .filter(([, t]) => t.status === 'running')
      .map(([action]) => action);
  }

  // -- phase navigation ----------------------------------------------------

  get currentPhase(): PhaseDefinition | undefined {
    return this.phases[this.phaseIndex];
  }

  get currentPhaseIndex(): number {
    return this.phaseIndex;
  }

  nextPhase(): void {
    this.phaseIndex = Math.min(this.phaseIndex + 1, this.phases.length - 1);
  }

  previousPhase(): void {
    this.phaseIndex = Math.max(this.phaseIndex - 1, 0);
  }

  // -- trailer fields ------------------------------------------------------

  setTemperature(value: TemperatureValue | null): void {
    this.temperature = value;
  }

  setNotes(text: string): void {
    this.notes = text;
  }

  // -- serialization -------------------------------------------------------

  /** Completed intervals only, ordered by start time. */
  completedEvents(): WireEvent[] {
    const events: WireEvent[] = [];
    for (const [action, timing] of this.timings) {
      for (const interval of timing.intervals) {
        events.push({
          action,
          start_ms: Math.round(interval.startMs),
          end_ms: Math.round(interval.endMs),
        });
      }
    }
    events.sort((a, b) => a.start_ms - b.start_ms);
    return events;
  }

  toWireTrace(): WireTrace {
    const trace: WireTrace = {
      ...(this.sessionId ? { session_id: this.sessionId } : {}),
      group_id: this.groupId,
      checklist: this.checklistState(),
      events: this.completedEvents(),
    };
    if (this.temperature !== null) {
      trace.temperature = this.temperature;
    }
    if (this.notes !== '') {
      trace.notes = this.notes;
    }
    return trace;
  }
}
