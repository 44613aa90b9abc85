/** Pure view formatting; all values originate from server responses. */

import { ScoreResponse, SessionStats } from './types.js';

export const SESSION_ID_PATTERN = /^[a-z2-7]{26}$/;

export function isValidSessionId(value: string): boolean {
  return SESSION_ID_PATTERN.test(value);
}

/** The score headline, e.g. 76 -> "76%". */
export function formatPercent(percentDisplay: number): string {
  return `${percentDisplay}%`;
}

/** Statistics cell: 4-decimal distance plus percent, e.g. "0.4667 (47%)". */
export function formatDistanceCell(distance: number): string {
  return `${distance.toFixed(4)} (${Math.round(distance * 100)}%)`;
}

export function formatClock(scenarioMs: number): string {
  const totalSeconds = Math.floor(scenarioMs / 1000);
  const minutes = String(Math.floor(totalSeconds / 60)).padStart(2, '0');
  const seconds = String(totalSeconds % 60).padStart(2, '0');
  return `${minutes}:${seconds}`;
}

export function formatDurationMs(ms: number): string {
  return `${(ms / 1000).toFixed(1)} s`;
}

/** Rendered score text shown on the final screen. */
export function renderScoreText(score: ScoreResponse): string {
  return formatPercent(score.percent_display);
}

export interface StatsRow {
  group: string;
  traces: number;
  mean: string;
}

export interface StatsView {
  rows: StatsRow[];
  sessionMean: string;
  actionDurations: { action: string; duration: string }[];
}

/** Table model for the statistics page; "no traces yet" for empty sessions. */
export function statsView(stats: SessionStats): StatsView {
  return {
    rows: stats.per_group.map((g) => ({
      group: g.group_id,
      traces: g.traces,
      mean: formatDistanceCell(g.mean_distance),
    })),
    sessionMean:
      stats.session_mean_distance === null
        ? 'no traces yet'
        : formatDistanceCell(stats.session_mean_distance),
    actionDurations: Object.entries(stats.per_action_mean_duration_ms).map(
      ([action, ms]) => ({ action, duration: formatDurationMs(ms) }),
    ),
  };
}
