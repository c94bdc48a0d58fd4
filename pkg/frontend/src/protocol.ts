/** Wire types of the local verdict service (JSON over loopback HTTP). */

export interface Verdict {
  protocol_version: number;
  verdict_id: string;
  url: string;
  class: "safe" | "deceptive";
  score: number;
  features: Record<string, number>;
  model_id: string;
  latency_ms: number;
  timestamp: string;
}

export type UserAction = "visited" | "declined" | "none";

export interface HistoryAck {
  ok: boolean;
  stored_at: number;
  protocol_version: number;
}

export interface HistoryEntry {
  verdict: Partial<Verdict> & { verdict_id?: string };
  user_action: UserAction;
  stored_at: number;
}

export interface HealthResponse {
  status: string;
  model_id: string;
  uptime_s: number;
  protocol_version: number;
}
