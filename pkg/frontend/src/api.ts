/**
 * Typed client for the clarification service.
 *
 * The UI is a pure view over the service: every mutation response carries the
 * complete next view, so no state is derived client-side beyond appending the
 * just-answered question to the visible history. GET /sessions/{id} exists
 * only for reload recovery.
 */

export interface SpecJson {
  resources: Record<string, string>;
  topology: Record<string, string[]>;
  attributes: Record<string, Record<string, string>>;
}

export interface PoolStats {
  pool_size: number;
  disagreement_counts: [number, number, number];
  rounds_used: number;
  budget_k: number;
  regen_count: number;
}

export interface HistoryEntry {
  question: string;
  answer: 'yes' | 'no';
  round: number;
}

/** Mirror of the server's session state as the UI renders it. */
export interface UiSessionView {
  sessionId: string;
  currentQuestion: string | null;
  round: number;
  budgetK: number;
  poolStats: PoolStats;
  history: HistoryEntry[];
  finalSpec: SpecJson | null;
  /** pool sizes observed so far, for the sparkline */
  poolSizes: number[];
}

export interface StartOptions {
  budgetK?: number;
  poolSize?: number;
  rrEnabled?: boolean;
  seed?: number;
}

export class ServiceError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ServiceError> {
  let code = 'unknown';
  let message = `service returned ${resp.status}`;
  try {
    const body = await resp.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    /* non-JSON error body; keep defaults */
  }
  return new ServiceError(resp.status, code, message);
}

export class ClarifyClient {
  constructor(private readonly baseUrl: string) {}

  async startSession(intent: string, opts: StartOptions = {}): Promise<UiSessionView> {
    const payload: Record<string, unknown> = { intent };
    if (opts.budgetK !== undefined) payload.budget_k = opts.budgetK;
    if (opts.poolSize !== undefined) payload.pool_size = opts.poolSize;
    if (opts.rrEnabled !== undefined) payload.rr_enabled = opts.rrEnabled;
    if (opts.seed !== undefined) payload.seed = opts.seed;

    const resp = await fetch(`${this.baseUrl}/sessions`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    });
    if (!resp.ok) throw await parseError(resp);
    const body = await resp.json();
    const stats: PoolStats = body.pool_stats;
    return {
      sessionId: body.session_id,
      currentQuestion: body.first_question ?? null,
      round: body.round ?? stats.rounds_used,
      budgetK: stats.budget_k,
      poolStats: stats,
      history: [],
      finalSpec: body.final_spec ?? null,
      poolSizes: [stats.pool_size],
    };
  }

  /** POST the answer and fold the response into the next view. */
  async submitAnswer(
    view: UiSessionView,
    answer: 'yes' | 'no',
  ): Promise<UiSessionView> {
    if (view.currentQuestion === null) {
      throw new ServiceError(409, 'wrong_state', 'no question pending');
    }
    const resp = await fetch(`${this.baseUrl}/sessions/${view.sessionId}/answer`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ answer }),
    });
    if (!resp.ok) throw await parseError(resp);
    const body = await resp.json();
    const stats: PoolStats = body.pool_stats;
    const answered: HistoryEntry = {
      question: view.currentQuestion,
      answer,
      round: view.round,
    };
    return {
      sessionId: view.sessionId,
      currentQuestion: body.next_question ?? null,
      round: body.round ?? stats.rounds_used,
      budgetK: stats.budget_k,
      poolStats: stats,
      history: [...view.history, answered],
      finalSpec: body.final_spec ?? null,
      poolSizes: [...view.poolSizes, stats.pool_size],
    };
  }

  /** Reload recovery: rebuild the identical view from the server's state. */
  async getSession(sessionId: string): Promise<UiSessionView> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}`);
    if (!resp.ok) throw await parseError(resp);
    const body = await resp.json();
    const stats: PoolStats = body.pool_stats;
    const trace: Array<{ pool_size: number }> = body.trace ?? [];
    return {
      sessionId: body.session_id,
      currentQuestion: body.current_question ?? null,
      round: stats.rounds_used + 1,
      budgetK: body.budget_k,
      poolStats: stats,
      history: body.history,
      finalSpec: body.final_spec ?? null,
      poolSizes: trace.map((r) => r.pool_size),
    };
  }
}
