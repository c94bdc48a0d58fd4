/** Link interception and the verdict flow.
 *
 * Anchor clicks never navigate directly: the click is captured, the URL
 * goes to the verdict service, the popup shows safe/deceptive, and a
 * confirm box gates the actual navigation (opened in a new window).
 * Hovering shows the verdict popup without the confirm box. Without a
 * reachable service the flow fails closed unless configured otherwise.
 */

import { BadRequest, ServiceClient } from "./api.js";
import type { Settings } from "./settings.js";
import { isAllowlisted } from "./settings.js";
import { HoverFlow } from "./state.js";
import { Overlay } from "./overlay.js";
import type { UserAction, Verdict } from "./protocol.js";

export interface GuardOptions {
  doc: Document;
  client: ServiceClient;
  settings: Settings;
  /** Navigation sink; defaults to window.open in a new window. */
  openWindow?: (url: string) => void;
  hoverDebounceMs?: number;
}

interface PendingHover {
  url: string;
  timer: ReturnType<typeof setTimeout>;
}

export class LinkGuard {
  readonly flow = new HoverFlow();
  readonly overlay: Overlay;
  private doc: Document;
  private client: ServiceClient;
  private settings: Settings;
  private openWindow: (url: string) => void;
  private hoverDebounceMs: number;
  private pendingHover: PendingHover | null = null;
  private navigateIntent = false;
  private listeners: Array<[string, EventListener]> = [];

  constructor(options: GuardOptions) {
    this.doc = options.doc;
    this.client = options.client;
    this.settings = options.settings;
    this.openWindow = options.openWindow
      ?? ((url) => (this.doc.defaultView ?? window).open(url, "_blank", "noopener"));
    this.hoverDebounceMs = options.hoverDebounceMs ?? 300;
    this.overlay = new Overlay(this.doc);
  }

  /** Capture-phase listeners catch dynamically added anchors too. */
  attach(): this {
    const on = (type: string, fn: EventListener) => {
      this.doc.addEventListener(type, fn, true);
      this.listeners.push([type, fn]);
    };
    on("click", (e) => this.onClick(e as MouseEvent));
    on("mouseover", (e) => this.onHover(e as MouseEvent));
    on("mouseout", (e) => this.onHoverEnd(e as MouseEvent));
    on("keydown", (e) => this.onKey(e as KeyboardEvent));
    return this;
  }

  dispose(): void {
    for (const [type, fn] of this.listeners) {
      this.doc.removeEventListener(type, fn, true);
    }
    this.listeners = [];
    this.overlay.dispose();
  }

  private linkFrom(event: Event): string | null {
    const target = event.target as Element | null;
    const anchor = target?.closest?.("a");
    if (!anchor) {
      return null;
    }
    const href = anchor.getAttribute("href");
    if (!href) {
      return null;
    }
    let resolved: URL;
    try {
      resolved = new URL(href, this.doc.baseURI);
    } catch {
      return null;
    }
    if (resolved.protocol !== "http:" && resolved.protocol !== "https:") {
      return null;
    }
    return resolved.toString();
  }

  private onClick(event: MouseEvent): void {
    const url = this.linkFrom(event);
    if (url === null) {
      return; // non-anchor clicks stay untouched
    }
    if (isAllowlisted(url, this.settings.allowlist)) {
      return; // allowlist hit: the flow is bypassed entirely
    }
    event.preventDefault();
    event.stopPropagation();
    this.cancelPendingHover();

    const { phase, currentLink } = this.flow.state;
    if (currentLink === url && phase === "showing_verdict") {
      this.requestConfirm();
      return;
    }
    if (currentLink === url && (phase === "querying" || phase === "confirming")) {
      this.navigateIntent = true;
      return;
    }
    this.navigateIntent = true;
    void this.query(url);
  }

  private onHover(event: MouseEvent): void {
    const url = this.linkFrom(event);
    if (url === null || isAllowlisted(url, this.settings.allowlist)) {
      return;
    }
    if (this.flow.state.currentLink === url && this.flow.state.phase !== "idle") {
      return; // already in flight or shown for this link
    }
    this.cancelPendingHover();
    const timer = setTimeout(() => {
      this.pendingHover = null;
      this.navigateIntent = false;
      void this.query(url);
    }, this.hoverDebounceMs);
    this.pendingHover = { url, timer };
  }

  private onHoverEnd(event: MouseEvent): void {
    const url = this.linkFrom(event);
    if (url !== null && this.pendingHover?.url === url) {
      this.cancelPendingHover();
    }
  }

  private onKey(event: KeyboardEvent): void {
    if (event.key !== "Escape") {
      return;
    }
    const { phase, verdict } = this.flow.state;
    if (phase === "idle") {
      return;
    }
    if (verdict && phase !== "querying") {
      void this.report(verdict, "none");
    }
    this.flow.dismiss();
    this.navigateIntent = false;
    this.overlay.hide();
  }

  private cancelPendingHover(): void {
    if (this.pendingHover) {
      clearTimeout(this.pendingHover.timer);
      this.pendingHover = null;
    }
  }

  private async query(url: string): Promise<void> {
    const generation = this.flow.beginQuery(url);
    if (generation === null) {
      return; // single-flight: this link is already being queried
    }
    this.overlay.showQuerying(url);
    let verdict: Verdict | null = null;
    try {
      verdict = await this.client.predict(url);
    } catch (err) {
      if (err instanceof BadRequest) {
        this.flow.dismiss();
        this.overlay.hide();
        return;
      }
      verdict = null; // service unreachable or out of time
    }
    if (!this.flow.applyVerdict(url, generation, verdict)) {
      return; // superseded by a newer hover/click
    }
    const confirmable = verdict !== null || this.settings.failOpen;
    this.overlay.showVerdict(url, verdict, confirmable, () => this.requestConfirm());
    if (this.navigateIntent && confirmable) {
      this.requestConfirm();
    }
    this.navigateIntent = false;
  }

  private requestConfirm(): void {
    const { currentLink, verdict, unavailable } = this.flow.state;
    if (currentLink === null) {
      return;
    }
    if (unavailable && !this.settings.failOpen) {
      return; // fail-closed: no confirm box without a verdict
    }
    if (!this.flow.openConfirm()) {
      return; // confirming is only reachable from showing_verdict
    }
    const url = currentLink;
    this.overlay.showConfirm(url, verdict, {
      onAccept: () => this.finish(url, verdict, "visited"),
      onDecline: () => this.finish(url, verdict, "declined"),
    });
  }

  private finish(url: string, verdict: Verdict | null, action: UserAction): void {
    if (!this.flow.finishConfirm()) {
      return;
    }
    if (action === "visited") {
      this.openWindow(url);
    }
    if (verdict) {
      void this.report(verdict, action);
    }
    this.overlay.hide();
    this.navigateIntent = false;
  }

  private async report(verdict: Verdict, action: UserAction): Promise<void> {
    try {
      await this.client.reportAction(verdict.verdict_id, action, verdict);
    } catch {
      // at-least-once delivery already retried inside the client
    }
  }
}

export function initLinkGuard(options: GuardOptions): LinkGuard {
  return new LinkGuard(options).attach();
}
