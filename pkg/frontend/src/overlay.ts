/** Popup and confirm box rendered inside a closed shadow root.
 *
 * Page scripts cannot reach into the closed root (the reference lives in
 * this closure only), so the verdict UI cannot be spoofed or suppressed
 * from the page. At most one panel is visible at a time.
 */

import type { Verdict } from "./protocol.js";

export type PanelKind = "none" | "querying" | "verdict" | "confirm";

export interface ConfirmHandlers {
  onAccept: () => void;
  onDecline: () => void;
}

const PANEL_STYLE = `
  .panel {
    position: fixed; bottom: 16px; right: 16px; z-index: 2147483647;
    max-width: 360px; padding: 12px 16px; border-radius: 8px;
    font: 13px/1.45 system-ui, sans-serif; color: #111;
    background: #fff; border: 2px solid #888;
    box-shadow: 0 4px 18px rgba(0,0,0,.25); word-break: break-all;
  }
  .panel.safe { border-color: #1a7f37; background: #ecf9ef; }
  .panel.deceptive { border-color: #b3261e; background: #fdecea; }
  .panel.unavailable { border-color: #b26a00; background: #fff4e0; }
  .panel .headline { font-weight: 700; margin-bottom: 4px; }
  .panel .url { color: #444; font-size: 12px; margin-bottom: 8px; }
  .panel button {
    margin-right: 8px; padding: 4px 12px; border-radius: 6px;
    border: 1px solid #666; background: #f3f3f3; cursor: pointer;
  }
  .panel button.primary { background: #1a56b0; border-color: #1a56b0; color: #fff; }
`;

export class Overlay {
  /** Exposed for tests; unreachable from page scripts. */
  readonly root: ShadowRoot;
  private host: HTMLElement;
  private kind: PanelKind = "none";

  constructor(private doc: Document) {
    this.host = doc.createElement("phishlens-overlay");
    this.root = this.host.attachShadow({ mode: "closed" });
    const style = doc.createElement("style");
    style.textContent = PANEL_STYLE;
    this.root.appendChild(style);
    (doc.body ?? doc.documentElement).appendChild(this.host);
  }

  visible(): PanelKind {
    return this.kind;
  }

  private panel(): HTMLElement {
    let panel = this.root.querySelector<HTMLElement>(".panel");
    if (!panel) {
      panel = this.doc.createElement("div");
      panel.className = "panel";
      this.root.appendChild(panel);
    }
    panel.className = "panel";
    panel.textContent = "";
    return panel;
  }

  showQuerying(url: string): void {
    const panel = this.panel();
    this.kind = "querying";
    panel.appendChild(this.line("headline", "Checking link..."));
    panel.appendChild(this.line("url", url));
  }

  showVerdict(url: string, verdict: Verdict | null,
              confirmable: boolean, onConfirmRequest: () => void): void {
    const panel = this.panel();
    this.kind = "verdict";
    if (verdict === null) {
      panel.classList.add("unavailable");
      panel.appendChild(this.line("headline", "Verdict unavailable"));
      panel.appendChild(this.line("url", url));
      panel.appendChild(this.line(
        "note", confirmable ? "The verdict service is not answering."
          : "The verdict service is not answering; navigation stays blocked."));
    } else if (verdict.class === "deceptive") {
      panel.classList.add("deceptive");
      panel.appendChild(this.line("headline", "Deceptive site"));
      panel.appendChild(this.line("url", url));
      panel.appendChild(this.line("note", `phishing score ${verdict.score.toFixed(2)}`));
    } else {
      panel.classList.add("safe");
      panel.appendChild(this.line("headline", "Safe site"));
      panel.appendChild(this.line("url", url));
      panel.appendChild(this.line("note", `phishing score ${verdict.score.toFixed(2)}`));
    }
    if (confirmable) {
      const visit = this.button("Visit site...", "primary");
      visit.id = "plens-open-confirm";
      visit.addEventListener("click", onConfirmRequest);
      panel.appendChild(visit);
    }
  }

  showConfirm(url: string, verdict: Verdict | null, handlers: ConfirmHandlers): void {
    const panel = this.panel();
    this.kind = "confirm";
    panel.classList.add(verdict?.class === "deceptive" ? "deceptive"
      : verdict ? "safe" : "unavailable");
    panel.appendChild(this.line("headline", "Do you want to visit this site?"));
    panel.appendChild(this.line("url", url));
    if (verdict?.class === "deceptive") {
      panel.appendChild(this.line("note", "This link looks deceptive."));
    }
    const accept = this.button("Visit", "primary");
    accept.id = "plens-accept";
    accept.addEventListener("click", handlers.onAccept);
    const decline = this.button("Go back", "");
    decline.id = "plens-decline";
    decline.addEventListener("click", handlers.onDecline);
    panel.appendChild(accept);
    panel.appendChild(decline);
  }

  hide(): void {
    this.kind = "none";
    this.root.querySelector(".panel")?.remove();
  }

  dispose(): void {
    this.host.remove();
  }

  private line(cls: string, text: string): HTMLElement {
    const div = this.doc.createElement("div");
    div.className = cls;
    div.textContent = text;
    return div;
  }

  private button(label: string, cls: string): HTMLButtonElement {
    const btn = this.doc.createElement("button");
    if (cls) {
      btn.className = cls;
    }
    btn.type = "button";
    btn.textContent = label;
    return btn;
  }
}
