/**
 * DOM wiring for the clarification wizard: intent form, question card with
 * yes/no controls, visible Q&A history, live pool dashboard (size sparkline
 * and per-axis disagreement counters), and the final dependency-graph view.
 */

import { ClarifyClient, ServiceError, UiSessionView } from './api';
import { renderGraph } from './graph';
import { Store } from './state';

const AXES = ['resource', 'topology', 'attribute'] as const;

function el(doc: Document, tag: string, attrs: Record<string, string> = {}, text = ''): HTMLElement {
  const node = doc.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function sparkline(doc: Document, sizes: number[]): HTMLElement {
  const wrap = el(doc, 'div', { class: 'sparkline', id: 'pool-sparkline' });
  const max = Math.max(1, ...sizes);
  for (const size of sizes) {
    const bar = el(doc, 'span', {
      class: 'spark-bar',
      'data-size': String(size),
      title: `${size} candidates`,
    });
    bar.style.height = `${Math.round((size / max) * 32) + 2}px`;
    wrap.appendChild(bar);
  }
  return wrap;
}

function renderDashboard(doc: Document, view: UiSessionView): HTMLElement {
  const dash = el(doc, 'section', { id: 'dashboard' });
  dash.appendChild(el(doc, 'h2', {}, 'Pool'));
  dash.appendChild(
    el(doc, 'p', { id: 'pool-size' }, `${view.poolStats.pool_size} candidate(s) remain`),
  );
  dash.appendChild(
    el(
      doc,
      'p',
      { id: 'budget' },
      `round ${Math.min(view.round, view.budgetK)} of ${view.budgetK}` +
        (view.poolStats.regen_count ? ` · ${view.poolStats.regen_count} regeneration(s)` : ''),
    ),
  );
  const counters = el(doc, 'ul', { id: 'axis-counters' });
  view.poolStats.disagreement_counts.forEach((count, i) => {
    counters.appendChild(
      el(doc, 'li', { 'data-axis': AXES[i] }, `${AXES[i]}: ${count}`),
    );
  });
  dash.appendChild(counters);
  dash.appendChild(sparkline(doc, view.poolSizes));
  return dash;
}

function renderHistory(doc: Document, view: UiSessionView): HTMLElement {
  const section = el(doc, 'section', { id: 'history-panel' });
  section.appendChild(el(doc, 'h2', {}, 'Answers'));
  const list = el(doc, 'ol', { id: 'history' });
  for (const entry of view.history) {
    const item = el(doc, 'li', { 'data-round': String(entry.round) });
    item.appendChild(el(doc, 'span', { class: 'q' }, entry.question));
    item.appendChild(el(doc, 'span', { class: 'a' }, ` — ${entry.answer}`));
    list.appendChild(item);
  }
  section.appendChild(list);
  return section;
}

function renderFinal(doc: Document, view: UiSessionView): HTMLElement {
  const section = el(doc, 'section', { id: 'final' });
  section.appendChild(el(doc, 'h2', {}, 'Proposed configuration'));
  const spec = view.finalSpec!;
  section.appendChild(renderGraph(spec, doc));
  const raw = el(doc, 'pre', { id: 'final-json' });
  raw.textContent = JSON.stringify(spec, null, 2);
  section.appendChild(raw);
  return section;
}

export interface App {
  start(intent: string, budgetK: number): Promise<void>;
  answer(value: 'yes' | 'no'): Promise<void>;
  readonly store: Store;
}

export function createApp(
  root: HTMLElement,
  client: ClarifyClient,
  store: Store = new Store(),
): App {
  const doc = root.ownerDocument;

  function render(): void {
    const { view, busy, error } = store.get();
    root.textContent = '';

    const banner = el(doc, 'div', { id: 'banner', role: 'alert' });
    if (error) banner.textContent = error;
    else banner.setAttribute('hidden', '');
    root.appendChild(banner);

    if (view === null) {
      const form = el(doc, 'form', { id: 'intent-form' });
      const input = el(doc, 'input', {
        id: 'intent',
        type: 'text',
        placeholder: 'Describe the infrastructure you need…',
      });
      const go = el(doc, 'button', { type: 'submit' }, busy ? 'Starting…' : 'Start');
      if (busy) go.setAttribute('disabled', '');
      form.appendChild(input);
      form.appendChild(go);
      form.addEventListener('submit', (ev) => {
        ev.preventDefault();
        const intent = (input as HTMLInputElement).value.trim();
        if (intent) void app.start(intent, 5);
      });
      root.appendChild(form);
      return;
    }

    if (view.currentQuestion !== null) {
      const card = el(doc, 'section', { id: 'question-card' });
      card.appendChild(el(doc, 'p', { id: 'question' }, view.currentQuestion));
      for (const value of ['yes', 'no'] as const) {
        const btn = el(doc, 'button', { id: `answer-${value}`, type: 'button' }, value);
        if (busy) btn.setAttribute('disabled', '');
        btn.addEventListener('click', () => void app.answer(value));
        card.appendChild(btn);
      }
      root.appendChild(card);
    } else if (view.finalSpec !== null) {
      root.appendChild(renderFinal(doc, view));
    }

    root.appendChild(renderDashboard(doc, view));
    root.appendChild(renderHistory(doc, view));
  }

  async function guard(work: () => Promise<UiSessionView>): Promise<void> {
    if (store.get().busy) return; // double-submit guard
    store.set({ busy: true, error: null });
    try {
      const view = await work();
      store.set({ view, busy: false });
    } catch (err) {
      const message =
        err instanceof ServiceError ? err.message : 'service unreachable — retry';
      // 409/422 and transport errors surface inline without losing history
      store.set({ busy: false, error: message });
    }
  }

  const app: App = {
    store,
    start: (intent, budgetK) =>
      guard(() => client.startSession(intent, { budgetK })),
    answer: (value) => {
      const view = store.get().view;
      if (!view || view.currentQuestion === null) return Promise.resolve();
      return guard(() => client.submitAnswer(view, value));
    },
  };

  store.subscribe(render);
  render();
  return app;
}
