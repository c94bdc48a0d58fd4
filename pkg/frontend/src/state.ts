/** Hover/verdict/confirm state machine for one page.
 *
 * Invariants enforced here: the confirm phase is only reachable from
 * showing_verdict, a new link supersedes (cancels) any in-flight query,
 * and at most one query per link is outstanding.
 */

import type { Verdict } from "./protocol.js";

export type UiPhase = "idle" | "querying" | "showing_verdict" | "confirming";

export interface HoverState {
  currentLink: string | null;
  verdict: Verdict | null;
  /** Set when the service could not answer; distinct from verdict=null while querying. */
  unavailable: boolean;
  phase: UiPhase;
}

export class HoverFlow {
  state: HoverState = { currentLink: null, verdict: null, unavailable: false, phase: "idle" };
  private generation = 0;

  /**
   * Enter the querying phase for a link. Returns a generation token the
   * caller must hand back with the answer, or null when the same link is
   * already being queried (single-flight).
   */
  beginQuery(url: string): number | null {
    if (this.state.phase === "querying" && this.state.currentLink === url) {
      return null;
    }
    this.generation += 1;
    this.state = { currentLink: url, verdict: null, unavailable: false, phase: "querying" };
    return this.generation;
  }

  /** Apply a verdict (or null for service-unavailable). Stale answers are dropped. */
  applyVerdict(url: string, generation: number, verdict: Verdict | null): boolean {
    if (generation !== this.generation || this.state.currentLink !== url
        || this.state.phase !== "querying") {
      return false;
    }
    this.state = {
      currentLink: url,
      verdict,
      unavailable: verdict === null,
      phase: "showing_verdict",
    };
    return true;
  }

  /** Confirming is only reachable from showing_verdict. */
  openConfirm(): boolean {
    if (this.state.phase !== "showing_verdict") {
      return false;
    }
    this.state = { ...this.state, phase: "confirming" };
    return true;
  }

  /** Leave the confirm box after the user chose; back to idle. */
  finishConfirm(): boolean {
    if (this.state.phase !== "confirming") {
      return false;
    }
    this.reset();
    return true;
  }

  /** Escape hatch from any phase; also invalidates outstanding queries. */
  dismiss(): void {
    this.reset();
  }

  private reset(): void {
    this.generation += 1;
    this.state = { currentLink: null, verdict: null, unavailable: false, phase: "idle" };
  }
}
