/** Wire shapes shared with the scoring server. */

export type TemperatureValue = number | 'OVER_40';

export interface WireEvent {
  action: string;
  start_ms: number;
  end_ms: number;
}

export interface WireTrace {
  session_id?: string;
  group_id: string;
  checklist: { item: string; done: boolean }[];
  events: WireEvent[];
  temperature?: TemperatureValue;
  notes?: string;
}

export interface PhaseDefinition {
  phase_id: string;
  deadline_ms: number;
  action_ids: string[];
}

export interface GoldBundle {
  taxonomy: { root: string; nodes?: Record<string, string> };
  schedule: { phases: PhaseDefinition[] };
  checklist: { items: string[] };
  gold_trace: WireTrace;
}

export interface PhaseReport {
  phase_id: string;
  actions_on_time: string[];
  actions_late: string[];
  actions_missing: string[];
}

export interface ScoreResponse {
  session_id: string;
  distance: number;
  percent_display: number;
  phase_report: PhaseReport[];
}

export interface GroupStats {
  group_id: string;
  traces: number;
  mean_distance: number;
}

export interface SessionStats {
  per_group: GroupStats[];
  session_mean_distance: number | null;
  per_action_mean_duration_ms: Record<string, number>;
}

export const TEMPERATURE_GRADES: TemperatureValue[] = [
  35.5, 36.0, 36.5, 37.0, 37.5, 38.0, 38.5, 39.0, 39.5, 'OVER_40',
];
