/** DOM wiring for the instructor UI.
 *
 * Screen flow: start -> pre-resuscitation checklist -> phase screens with
 * tap-to-start/tap-to-stop action timers (back/forward navigation) ->
 * temperature dialog -> notes -> send -> score -> statistics lookup.
 */

import { ApiClient, ApiError } from './api.js';
import { SessionRecorder } from './recorder.js';
import {
  formatClock,
  formatPercent,
  isValidSessionId,
  renderScoreText,
  statsView,
} from './format.js';
import { GoldBundle, ScoreResponse, TEMPERATURE_GRADES, WireTrace } from './types.js';

const PENDING_KEY = 'nrts_pending_traces';

function loadPending(): WireTrace[] {
  try {
    return JSON.parse(localStorage.getItem(PENDING_KEY) ?? '[]');
  } catch {
    return [];
  }
}

function savePending(traces: WireTrace[]): void {
  localStorage.setItem(PENDING_KEY, JSON.stringify(traces));
}

class App {
  private api = new ApiClient('');
  private recorder: SessionRecorder | null = null;
  private bundle: GoldBundle | null = null;
  private score: ScoreResponse | null = null;
  private tick: number | null = null;

  constructor(private root: HTMLElement) {}

  start(): void {
    this.showStart();
  }

  private swap(html: string): HTMLElement {
    if (this.tick !== null) {
      clearInterval(this.tick);
      this.tick = null;
    }
    this.root.innerHTML = html;
    return this.root;
  }

  private showStart(): void {
    const pending = loadPending();
    const el = this.swap(`
      <h1>Resuscitation Training Recorder</h1>
      <label>Group / team id <input id="group" placeholder="team-a"></label>
      <button id="start" class="primary">Start a new simulation session</button>
      <button id="stats-link" class="link">View session statistics</button>
      ${pending.length ? `<button id="retry">Re-send ${pending.length} saved trace(s)</button>` : ''}
      <p id="message" class="muted"></p>
    `);
    el.querySelector<HTMLButtonElement>('#start')!.onclick = () => this.beginSession();
    el.querySelector<HTMLButtonElement>('#stats-link')!.onclick = () => this.showStats();
    el.querySelector<HTMLButtonElement>('#retry')?.addEventListener('click', () =>
      this.retryPending(),
    );
  }

  private async beginSession(): Promise<void> {
    const group = this.root.querySelector<HTMLInputElement>('#group')!.value.trim();
    const message = this.root.querySelector<HTMLElement>('#message')!;
    if (!group) {
      message.textContent = 'enter a group id first';
      return;
    }
    try {
      this.bundle = (await this.api.getGold()).bundle;
    } catch (error) {
      message.textContent =
        error instanceof ApiError && error.status === 404
          ? 'no gold standard installed on the server yet'
          : 'server unreachable';
      return;
    }
    this.recorder = new SessionRecorder({
      phases: this.bundle.schedule.phases,
      checklistItems: this.bundle.checklist.items,
    });
    this.recorder.groupId = group;
    try {
      this.recorder.sessionId = (await this.api.createSession()).session_id;
    } catch {
      this.recorder.sessionId = null; // server will mint one on submit
    }
    this.showChecklist();
  }

  private showChecklist(): void {
    const recorder = this.recorder!;
    const rows = recorder
      .checklistState()
      .map(
        ({ item, done }) => `
        <li><label><input type="checkbox" data-item="${item}" ${done ? 'checked' : ''}>
        ${item.replaceAll('_', ' ')}</label></li>`,
      )
      .join('');
    const el = this.swap(`
      <h2>Pre-resuscitation checklist</h2>
      <ul class="checklist">${rows}</ul>
      <button id="begin" class="primary">Start recording</button>
    `);
    el.querySelectorAll<HTMLInputElement>('input[type=checkbox]').forEach((box) => {
      box.onchange = () => recorder.setChecklistItem(box.dataset.item!, box.checked);
    });
    el.querySelector<HTMLButtonElement>('#begin')!.onclick = () => {
      recorder.startScenario();
      this.showPhase();
    };
  }

  private showPhase(): void {
    const recorder = this.recorder!;
    const phase = recorder.currentPhase!;
    const isFirst = recorder.currentPhaseIndex === 0;
    const isLast = recorder.currentPhaseIndex === recorder.phases.length - 1;
    const buttons = phase.action_ids
      .map((action) => `<button class="action" data-action="${action}"></button>`)
      .join('');
    const el = this.swap(`
      <div class="phase-head">
        <h2>${phase.phase_id.replaceAll('-', ' ')}</h2>
        <span id="clock" class="clock"></span>
      </div>
      <div class="actions">${buttons}</div>
      <div class="nav">
        <button id="back" ${isFirst ? 'disabled' : ''}>&larr; Back</button>
        ${isLast
          ? '<button id="forward" class="primary">End</button>'
          : '<button id="forward">Forward &rarr;</button>'}
      </div>
    `);

    const paint = () => {
      el.querySelector('#clock')!.textContent = formatClock(recorder.clockMs());
      el.querySelectorAll<HTMLButtonElement>('button.action').forEach((button) => {
        const action = button.dataset.action!;
        const timing = recorder.actionTiming(action);
        const label = action.replaceAll('_', ' ');
        const count = timing.intervals.length;
        button.classList.toggle('running', timing.status === 'running');
        button.textContent =
          timing.status === 'running'
            ? `${label} ■ stop`
            : count
              ? `${label} (${count})`
              : label;
      });
    };
    el.querySelectorAll<HTMLButtonElement>('button.action').forEach((button) => {
      button.onclick = () => {
        recorder.tapAction(button.dataset.action!);
        paint();
      };
    });
    el.querySelector<HTMLButtonElement>('#back')!.onclick = () => {
      recorder.previousPhase();
      this.showPhase();
    };
    el.querySelector<HTMLButtonElement>('#forward')!.onclick = () => {
      if (isLast) {
        this.showTemperature();
      } else {
        recorder.nextPhase();
        this.showPhase();
      }
    };
    paint();
    this.tick = window.setInterval(paint, 250);
  }

  private showTemperature(): void {
    const recorder = this.recorder!;
    const buttons = TEMPERATURE_GRADES.map(
      (grade) =>
        `<button class="grade" data-grade="${grade}">
          ${grade === 'OVER_40' ? 'over 40 °C' : `${Number(grade).toFixed(1)} °C`}
        </button>`,
    ).join('');
    const el = this.swap(`
      <h2>Body temperature</h2>
      <div class="grades">${buttons}</div>
      <button id="skip" class="link">Skip</button>
    `);
    el.querySelectorAll<HTMLButtonElement>('button.grade').forEach((button) => {
      button.onclick = () => {
        const raw = button.dataset.grade!;
        recorder.setTemperature(raw === 'OVER_40' ? 'OVER_40' : Number(raw));
        this.showNotes();
      };
    });
    el.querySelector<HTMLButtonElement>('#skip')!.onclick = () => this.showNotes();
  }

  private showNotes(): void {
    const recorder = this.recorder!;
    const el = this.swap(`
      <h2>Notes and comments</h2>
      <textarea id="notes" rows="6" placeholder="observations for the debriefing">${recorder.notes}</textarea>
      <button id="send" class="primary">Send Data</button>
      <p id="message" class="error"></p>
    `);
    el.querySelector<HTMLTextAreaElement>('#notes')!.oninput = (event) =>
      recorder.setNotes((event.target as HTMLTextAreaElement).value);
    el.querySelector<HTMLButtonElement>('#send')!.onclick = () => this.send();
  }

  private async send(): Promise<void> {
    const recorder = this.recorder!;
    const message = this.root.querySelector<HTMLElement>('#message')!;
    const button = this.root.querySelector<HTMLButtonElement>('#send')!;
    button.disabled = true;
    const trace = recorder.toWireTrace();
    try {
      this.score = await this.api.submitTrace(trace);
      this.showScore();
    } catch (error) {
      button.disabled = false;
      if (error instanceof ApiError) {
        const details = (error.violations ?? [])
          .map((v) => `${v.where}[${v.index}]: ${v.reason}`)
          .join('; ');
        message.textContent = `${error.message}${details ? `: ${details}` : ''}`;
      } else {
        savePending([...loadPending(), trace]);
        message.textContent =
          'server unreachable: trace saved locally, re-send from the start screen';
      }
    }
  }

  private async retryPending(): Promise<void> {
    const pending = loadPending();
    const remaining: WireTrace[] = [];
    let sent = 0;
    for (const trace of pending) {
      try {
        await this.api.submitTrace(trace);
        sent += 1;
      } catch (error) {
        // a server-side rejection is final, only network failures stay queued
        if (!(error instanceof ApiError)) {
          remaining.push(trace);
        }
      }
    }
    savePending(remaining);
    this.showStart();
    this.root.querySelector<HTMLElement>('#message')!.textContent =
      `re-sent ${sent} trace(s), ${remaining.length} still pending`;
  }

  private showScore(): void {
    const score = this.score!;
    const problems = score.phase_report
      .flatMap((report) => [
        ...report.actions_late.map((a) => `<li>${a.replaceAll('_', ' ')}: late in ${report.phase_id}</li>`),
        ...report.actions_missing.map((a) => `<li>${a.replaceAll('_', ' ')}: missing from ${report.phase_id}</li>`),
      ])
      .join('');
    const el = this.swap(`
      <h2>Distance from the gold standard</h2>
      <div class="score">${renderScoreText(score)}</div>
      <p class="muted">distance ${score.distance.toFixed(4)}</p>
      ${problems ? `<ul class="problems">${problems}</ul>` : '<p>All actions on time.</p>'}
      <p>Session id: <code id="sid">${score.session_id}</code>
         <button id="copy">Copy</button></p>
      <button id="to-stats" class="primary">View session statistics</button>
      <button id="again" class="link">Start another run</button>
    `);
    el.querySelector<HTMLButtonElement>('#copy')!.onclick = () => {
      void navigator.clipboard?.writeText(score.session_id);
    };
    el.querySelector<HTMLButtonElement>('#to-stats')!.onclick = () =>
      this.showStats(score.session_id);
    el.querySelector<HTMLButtonElement>('#again')!.onclick = () => this.showStart();
  }

  private showStats(prefill = ''): void {
    const el = this.swap(`
      <h2>Session statistics</h2>
      <form id="lookup">
        <input id="session-id" placeholder="session id" value="${prefill}" spellcheck="false">
        <button class="primary">Show</button>
      </form>
      <p id="message" class="error"></p>
      <div id="table"></div>
      <button id="home" class="link">Back</button>
    `);
    el.querySelector<HTMLButtonElement>('#home')!.onclick = () => this.showStart();
    const form = el.querySelector<HTMLFormElement>('#lookup')!;
    form.onsubmit = (event) => {
      event.preventDefault();
      void this.lookupStats();
    };
    if (prefill) {
      void this.lookupStats();
    }
  }

  private async lookupStats(): Promise<void> {
    const input = this.root.querySelector<HTMLInputElement>('#session-id')!;
    const message = this.root.querySelector<HTMLElement>('#message')!;
    const table = this.root.querySelector<HTMLElement>('#table')!;
    table.innerHTML = '';
    const sessionId = input.value.trim();
    if (!isValidSessionId(sessionId)) {
      message.textContent = 'session ids are 26 lower-case base32 characters';
      return;
    }
    message.textContent = '';
    try {
      const stats = await this.api.getStats(sessionId);
      const view = statsView(stats);
      if (view.rows.length === 0) {
        table.innerHTML = '<p class="muted">no traces yet</p>';
        return;
      }
      table.innerHTML = `
        <table>
          <thead><tr><th>group</th><th>traces</th><th>mean distance</th></tr></thead>
          <tbody>
            ${view.rows
              .map((row) => `<tr><td>${row.group}</td><td>${row.traces}</td><td>${row.mean}</td></tr>`)
              .join('')}
          </tbody>
          <tfoot><tr><td>session mean</td><td></td><td>${view.sessionMean}</td></tr></tfoot>
        </table>
        <h3>Mean action durations</h3>
        <table>
          <tbody>
            ${view.actionDurations
              .map((d) => `<tr><td>${d.action.replaceAll('_', ' ')}</td><td>${d.duration}</td></tr>`)
              .join('')}
          </tbody>
        </table>`;
    } catch (error) {
      message.textContent =
        error instanceof ApiError && error.status === 404
          ? 'session not found'
          : 'server unreachable';
    }
  }
}

const root = document.getElementById('app');
if (root) {
  new App(root).start();
}

export { App, formatPercent };
