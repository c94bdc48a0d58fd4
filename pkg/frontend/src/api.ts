/** HTTP client for the local verdict service. */

import type { HealthResponse, HistoryAck, UserAction, Verdict } from "./protocol.js";

/** The service could not produce a verdict (down, timed out, or 5xx). */
export class ServiceUnavailable extends Error {}

/** The service rejected the request itself (malformed URL or body). */
export class BadRequest extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  fetchFn?: FetchLike;
  historyRetries?: number;
  retryDelayMs?: number;
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export class ServiceClient {
  readonly baseUrl: string;
  private fetchFn: FetchLike;
  private historyRetries: number;
  private retryDelayMs: number;

  constructor(baseUrl: string, options: ClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = options.fetchFn ?? ((input, init) => fetch(input, init));
    this.historyRetries = options.historyRetries ?? 3;
    this.retryDelayMs = options.retryDelayMs ?? 250;
  }

  private async post(path: string, payload: unknown): Promise<Response> {
    try {
      return await this.fetchFn(this.baseUrl + path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (err) {
      throw new ServiceUnavailable(String(err));
    }
  }

  async predict(url: string): Promise<Verdict> {
    const resp = await this.post("/predict", { url });
    if (resp.status === 400) {
      throw new BadRequest(`service rejected ${url}`);
    }
    if (!resp.ok) {
      throw new ServiceUnavailable(`predict returned ${resp.status}`);
    }
    return (await resp.json()) as Verdict;
  }

  /**
   * Report the user's decision; retried so every accept/decline lands
   * at-least-once even across transient service hiccups.
   */
  async reportAction(verdictId: string, action: UserAction,
                     verdict?: Verdict): Promise<HistoryAck> {
    const payload = verdict
      ? { verdict, user_action: action }
      : { verdict_id: verdictId, user_action: action };
    let lastError: unknown = null;
    for (let attempt = 0; attempt <= this.historyRetries; attempt++) {
      try {
        const resp = await this.post("/history", payload);
        if (resp.ok) {
          return (await resp.json()) as HistoryAck;
        }
        if (resp.status === 400) {
          throw new BadRequest(`history rejected action ${action}`);
        }
        lastError = new ServiceUnavailable(`history returned ${resp.status}`);
      } catch (err) {
        if (err instanceof BadRequest) {
          throw err;
        }
        lastError = err;
      }
      if (attempt < this.historyRetries) {
        await sleep(this.retryDelayMs * (attempt + 1));
      }
    }
    throw lastError instanceof Error ? lastError : new ServiceUnavailable("history failed");
  }

  async health(): Promise<HealthResponse> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + "/health");
    } catch (err) {
      throw new ServiceUnavailable(String(err));
    }
    if (!resp.ok) {
      throw new ServiceUnavailable(`health returned ${resp.status}`);
    }
    return (await resp.json()) as HealthResponse;
  }
}
