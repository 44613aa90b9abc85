/** Thin client for the scoring server; every number the UI shows comes
 * from these responses. */

import { GoldBundle, ScoreResponse, SessionStats, WireTrace } from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorCode: string,
    message: string,
    readonly violations?: { where: string; index: number | null; reason: string }[],
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: any = {};
  try {
    body = await response.json();
  } catch {
    // non-JSON error body; fall through to defaults
  }
  return new ApiError(
    response.status,
    body.error_code ?? 'unknown_error',
    body.message ?? `server returned ${response.status}`,
    body.violations,
  );
}

async function requestJson<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    throw await parseError(response);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, '')}${path}`;
  }

  getGold(): Promise<{ revision: string; bundle: GoldBundle }> {
    return requestJson(this.url('/api/v1/gold'));
  }

  createSession(): Promise<{ session_id: string }> {
    return requestJson(this.url('/api/v1/sessions'), { method: 'POST' });
  }

  submitTrace(trace: WireTrace): Promise<ScoreResponse> {
    return requestJson(this.url('/api/v1/traces'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(trace),
    });
  }

  getStats(sessionId: string): Promise<SessionStats> {
    return requestJson(
      this.url(`/api/v1/sessions/${encodeURIComponent(sessionId)}/stats`),
    );
  }
}
