import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ServiceClient } from "../src/api.js";
import { LinkGuard } from "../src/content.js";
import { DEFAULT_SETTINGS, type Settings } from "../src/settings.js";
import type { UserAction, Verdict } from "../src/protocol.js";

const verdictFor = (url: string, cls: "safe" | "deceptive"): Verdict => ({
  protocol_version: 1,
  verdict_id: "id-" + url,
  url,
  class: cls,
  score: cls === "deceptive" ? 0.93 : 0.04,
  features: { Have_At: 0 },
  model_id: "sha256:m",
  latency_ms: 3,
  timestamp: "2025-06-01T00:00:00+00:00",
});

interface FakeService {
  client: ServiceClient;
  predictCalls: string[];
  history: Array<{ verdict_id: string; action: UserAction }>;
  down: boolean;
}

function fakeService(classify: (url: string) => "safe" | "deceptive"): FakeService {
  const state: FakeService = {
    predictCalls: [],
    history: [],
    down: false,
    client: undefined as unknown as ServiceClient,
  };
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    if (state.down) {
      throw new TypeError("connection refused");
    }
    const body = init?.body ? JSON.parse(String(init.body)) : {};
    if (input.endsWith("/predict")) {
      state.predictCalls.push(body.url);
      return new Response(JSON.stringify(verdictFor(body.url, classify(body.url))),
                          { status: 200 });
    }
    if (input.endsWith("/history")) {
      state.history.push({
        verdict_id: body.verdict?.verdict_id ?? body.verdict_id,
        action: body.user_action,
      });
      return new Response(JSON.stringify({ ok: true, stored_at: 1, protocol_version: 1 }),
                          { status: 200 });
    }
    return new Response("{}", { status: 404 });
  };
  state.client = new ServiceClient("http://127.0.0.1:1", {
    fetchFn, historyRetries: 1, retryDelayMs: 1,
  });
  return state;
}

function addAnchor(href: string, text = "link"): HTMLAnchorElement {
  const a = document.createElement("a");
  a.setAttribute("href", href);
  a.textContent = text;
  document.body.appendChild(a);
  return a;
}

function click(el: Element): MouseEvent {
  const event = new MouseEvent("click", { bubbles: true, cancelable: true });
  el.dispatchEvent(event);
  return event;
}

function hover(el: Element): void {
  el.dispatchEvent(new MouseEvent("mouseover", { bubbles: true, cancelable: true }));
}

const flushAsync = () => new Promise((resolve) => setTimeout(resolve, 0));

describe("LinkGuard", () => {
  let service: FakeService;
  let guard: LinkGuard;
  let opened: string[];

  function arm(settingsOverride: Partial<Settings> = {},
               classify: (url: string) => "safe" | "deceptive" = () => "safe") {
    service = fakeService(classify);
    opened = [];
    guard = new LinkGuard({
      doc: document,
      client: service.client,
      settings: { ...DEFAULT_SETTINGS, allowlist: [], ...settingsOverride },
      openWindow: (url) => opened.push(url),
      hoverDebounceMs: 300,
    }).attach();
  }

  beforeEach(() => {
    document.body.innerHTML = "";
  });

  afterEach(() => {
    guard?.dispose();
    vi.useRealTimers();
  });

  it("captured anchor clicks never navigate directly", async () => {
    arm();
    const a = addAnchor("http://shop.test/item");
    const event = click(a);
    expect(event.defaultPrevented).toBe(true);
    await flushAsync();
    expect(opened).toEqual([]); // nothing navigates without an explicit confirm
    expect(guard.overlay.visible()).toBe("confirm"); // click intent surfaces the box
  });

  it("click on a deceptive link shows a warning popup then the confirm box", async () => {
    arm({}, () => "deceptive");
    const a = addAnchor("http://evil.test/login");
    click(a);
    await flushAsync();
    expect(guard.overlay.visible()).toBe("confirm");
    const panel = guard.overlay.root.querySelector(".panel")!;
    expect(panel.className).toContain("deceptive");
    expect(panel.textContent).toContain("Do you want to visit");
  });

  it("accept opens a new window and logs visited", async () => {
    arm({}, () => "deceptive");
    click(addAnchor("http://evil.test/a"));
    await flushAsync();
    (guard.overlay.root.querySelector("#plens-accept") as HTMLElement).click();
    await flushAsync();
    expect(opened).toEqual(["http://evil.test/a"]);
    expect(service.history).toEqual([
      { verdict_id: "id-http://evil.test/a", action: "visited" }]);
    expect(guard.flow.state.phase).toBe("idle");
  });

  it("decline opens nothing and logs declined", async () => {
    arm({}, () => "deceptive");
    click(addAnchor("http://evil.test/b"));
    await flushAsync();
    (guard.overlay.root.querySelector("#plens-decline") as HTMLElement).click();
    await flushAsync();
    expect(opened).toEqual([]);
    expect(service.history).toEqual([
      { verdict_id: "id-http://evil.test/b", action: "declined" }]);
  });

  it("escape dismisses the popup and logs action none", async () => {
    vi.useFakeTimers();
    arm();
    const a = addAnchor("http://site.test/");
    hover(a);
    await vi.advanceTimersByTimeAsync(301);
    vi.useRealTimers();
    await flushAsync();
    expect(guard.overlay.visible()).toBe("verdict");
    document.dispatchEvent(new KeyboardEvent("keydown", { key: "Escape", bubbles: true }));
    await flushAsync();
    expect(guard.flow.state.phase).toBe("idle");
    expect(guard.overlay.visible()).toBe("none");
    expect(service.history).toEqual([
      { verdict_id: "id-http://site.test/", action: "none" }]);
  });

  it("hover shows the verdict popup without a confirm box", async () => {
    vi.useFakeTimers();
    arm();
    hover(addAnchor("http://calm.test/"));
    await vi.advanceTimersByTimeAsync(301);
    vi.useRealTimers();
    await flushAsync();
    expect(guard.overlay.visible()).toBe("verdict");
    const panel = guard.overlay.root.querySelector(".panel")!;
    expect(panel.className).toContain("safe");
  });

  it("debounces hover sweeps: only the last link is queried", async () => {
    vi.useFakeTimers();
    arm();
    const first = addAnchor("http://one.test/");
    const second = addAnchor("http://two.test/");
    hover(first);
    await vi.advanceTimersByTimeAsync(120); // cursor moves on before the debounce fires
    hover(second);
    await vi.advanceTimersByTimeAsync(301);
    vi.useRealTimers();
    await flushAsync();
    expect(service.predictCalls).toEqual(["http://two.test/"]);
  });

  it("mouseout cancels a pending hover query", async () => {
    vi.useFakeTimers();
    arm();
    const a = addAnchor("http://brief.test/");
    hover(a);
    a.dispatchEvent(new MouseEvent("mouseout", { bubbles: true }));
    await vi.advanceTimersByTimeAsync(500);
    vi.useRealTimers();
    await flushAsync();
    expect(service.predictCalls).toEqual([]);
  });

  it("keeps a single outstanding query per link", async () => {
    arm();
    const a = addAnchor("http://spam.test/");
    click(a);
    click(a);
    click(a);
    await flushAsync();
    expect(service.predictCalls).toEqual(["http://spam.test/"]);
  });

  it("captures dynamically added anchors", async () => {
    arm();
    await flushAsync();
    const late = addAnchor("http://late.test/");
    const event = click(late);
    expect(event.defaultPrevented).toBe(true);
    await flushAsync();
    expect(service.predictCalls).toEqual(["http://late.test/"]);
  });

  it("bypasses the flow for allowlisted sites", async () => {
    arm({ allowlist: ["trusted.test"] });
    const event = click(addAnchor("http://docs.trusted.test/page"));
    expect(event.defaultPrevented).toBe(false);
    await flushAsync();
    expect(service.predictCalls).toEqual([]);
  });

  it("leaves non-anchor clicks untouched", () => {
    arm();
    const button = document.createElement("button");
    document.body.appendChild(button);
    const event = click(button);
    expect(event.defaultPrevented).toBe(false);
  });

  it("fail-closed: a down service blocks navigation entirely", async () => {
    arm();
    service.down = true;
    const a = addAnchor("http://unknown.test/");
    click(a);
    await flushAsync();
    expect(guard.overlay.visible()).toBe("verdict");
    const panel = guard.overlay.root.querySelector(".panel")!;
    expect(panel.className).toContain("unavailable");
    expect(panel.textContent).toContain("blocked");
    expect(guard.overlay.root.querySelector("#plens-open-confirm")).toBeNull();
    click(a); // a second click still cannot reach the confirm box
    await flushAsync();
    expect(guard.overlay.visible()).not.toBe("confirm");
    expect(opened).toEqual([]);
  });

  it("fail-open: a down service still requires the explicit confirm", async () => {
    arm({ failOpen: true });
    service.down = true;
    click(addAnchor("http://unknown.test/"));
    await flushAsync();
    expect(guard.overlay.visible()).toBe("confirm");
    (guard.overlay.root.querySelector("#plens-accept") as HTMLElement).click();
    await flushAsync();
    expect(opened).toEqual(["http://unknown.test/"]);
    expect(service.history).toEqual([]); // no verdict to attach the action to
  });
});
