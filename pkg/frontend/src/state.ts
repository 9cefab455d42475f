/** Minimal observable store for the single active session per tab. */

import type { UiSessionView } from './api';

export interface AppState {
  view: UiSessionView | null;
  /** true while a request is in flight; answer controls are disabled */
  busy: boolean;
  error: string | null;
}

type Listener = (state: AppState) => void;

export class Store {
  private state: AppState = { view: null, busy: false, error: null };
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  set(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }
}
