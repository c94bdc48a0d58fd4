/**
 * End-to-end flow against the real verdict service: a model is trained
 * through the primary CLI, the service is started offline over the
 * fixture corpus, and the extension flow drives it over HTTP.
 */

import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { spawn, spawnSync, type ChildProcess } from "node:child_process";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { LinkGuard } from "../src/content.js";
import { DEFAULT_SETTINGS } from "../src/settings.js";
import type { HistoryEntry } from "../src/protocol.js";

const REPO_ROOT = resolve(__dirname, "..", "..");
const FIXTURES = join(REPO_ROOT, "fixtures");
const PYTHON = process.env.PYTHON ?? "python3";

const DECEPTIVE_URL = "http://evil.com@paypal-login.com/signin";
const SAFE_URL = "https://acmebank.com/";

let workdir: string;
let server: ChildProcess;
let baseUrl: string;

function extractFlags(): string[] {
  return [
    "--offline",
    "--evidence-dir", join(FIXTURES, "snapshots"),
    "--whois-dir", join(FIXTURES, "whois"),
    "--rank-snapshot", join(FIXTURES, "rank.csv"),
    "--now", "2025-06-01",
  ];
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "phishlens-ext-"));

  const matrix = join(FIXTURES, "golden_matrix.csv");
  const model = join(workdir, "model.json");
  const grid = join(workdir, "grid.json");
  const { writeFileSync } = await import("node:fs");
  writeFileSync(grid, JSON.stringify({ n_trees: [25] }));
  const train = spawnSync(PYTHON, [
    "-m", "phishlens", "train", "--matrix", matrix, "--model-kind", "random_forest",
    "--grid", grid, "--seed", "13", "--folds", "5", "--out", model,
  ], { cwd: REPO_ROOT, encoding: "utf-8" });
  expect(train.status, train.stderr).toBe(0);

  server = spawn(PYTHON, [
    "-m", "phishlens", "serve", "--model", model, "--port", "0",
    "--history-dir", join(workdir, "history"),
    "--allow-origin", "http://app.test",  // the extension page's origin
    ...extractFlags(),
  ], { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "inherit"] });

  baseUrl = await new Promise<string>((resolvePort, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start")), 20000);
    server.stdout!.on("data", (chunk: Buffer) => {
      const line = chunk.toString();
      const match = line.match(/listening on (http:\/\/[\d.]+:\d+)/);
      if (match) {
        clearTimeout(timer);
        resolvePort(match[1]!);
      }
    });
    server.on("exit", (code) => reject(new Error(`service exited early: ${code}`)));
  });
});

afterAll(() => {
  server?.kill("SIGKILL");
  rmSync(workdir, { recursive: true, force: true });
});

function addAnchor(href: string): HTMLAnchorElement {
  const a = document.createElement("a");
  a.setAttribute("href", href);
  a.textContent = href;
  document.body.appendChild(a);
  return a;
}

function click(el: Element): MouseEvent {
  const event = new MouseEvent("click", { bubbles: true, cancelable: true });
  el.dispatchEvent(event);
  return event;
}

async function waitFor(cond: () => boolean | Promise<boolean>, ms = 10000): Promise<void> {
  const deadline = Date.now() + ms;
  while (!(await cond())) {
    if (Date.now() > deadline) {
      throw new Error("condition not reached");
    }
    await new Promise((r) => setTimeout(r, 25));
  }
}

async function fetchHistory(): Promise<HistoryEntry[]> {
  const resp = await fetch(baseUrl + "/history");
  const payload = await resp.json();
  return payload.entries as HistoryEntry[];
}

describe("extension flow against the live service", () => {
  it("health reports the loaded model", async () => {
    const client = new ServiceClient(baseUrl);
    const health = await client.health();
    expect(health.status).toBe("ok");
    expect(health.model_id).toMatch(/^sha256:/);
  });

  it("deceptive fixture URL: warning popup, confirm, accept opens window, history visited", async () => {
    document.body.innerHTML = "";
    const opened: string[] = [];
    const guard = new LinkGuard({
      doc: document,
      client: new ServiceClient(baseUrl),
      settings: { ...DEFAULT_SETTINGS, serviceBaseUrl: baseUrl, allowlist: [] },
      openWindow: (url) => opened.push(url),
    }).attach();
    try {
      const event = click(addAnchor(DECEPTIVE_URL));
      expect(event.defaultPrevented).toBe(true); // never navigates directly
      await waitFor(() => guard.overlay.visible() === "confirm");
      const panel = guard.overlay.root.querySelector(".panel")!;
      expect(panel.className).toContain("deceptive");
      expect(opened).toEqual([]);
      (guard.overlay.root.querySelector("#plens-accept") as HTMLElement).click();
      expect(opened).toEqual([DECEPTIVE_URL]);
      await waitFor(async () => (await fetchHistory()).length >= 1);
      const entries = await fetchHistory();
      expect(entries[0]!.user_action).toBe("visited");
      expect(entries[0]!.verdict.url).toBe(DECEPTIVE_URL);
      expect(entries[0]!.verdict.class).toBe("deceptive");
    } finally {
      guard.dispose();
    }
  });

  it("safe fixture URL: safe popup, decline logs declined and opens nothing", async () => {
    document.body.innerHTML = "";
    const opened: string[] = [];
    const guard = new LinkGuard({
      doc: document,
      client: new ServiceClient(baseUrl),
      settings: { ...DEFAULT_SETTINGS, serviceBaseUrl: baseUrl, allowlist: [] },
      openWindow: (url) => opened.push(url),
    }).attach();
    try {
      click(addAnchor(SAFE_URL));
      await waitFor(() => guard.overlay.visible() === "confirm");
      const before = (await fetchHistory()).length;
      const panel = guard.overlay.root.querySelector(".panel")!;
      expect(panel.className).toContain("safe");
      (guard.overlay.root.querySelector("#plens-decline") as HTMLElement).click();
      expect(opened).toEqual([]);
      await waitFor(async () => (await fetchHistory()).length > before);
      const entries = await fetchHistory();
      expect(entries[0]!.user_action).toBe("declined");
      expect(entries[0]!.verdict.class).toBe("safe");
    } finally {
      guard.dispose();
    }
  });

  it("service down blocks navigation (fail-closed)", async () => {
    document.body.innerHTML = "";
    const opened: string[] = [];
    const deadPort = baseUrl.replace(/:\d+$/, ":1");
    const guard = new LinkGuard({
      doc: document,
      client: new ServiceClient(deadPort, { historyRetries: 0, retryDelayMs: 1 }),
      settings: { ...DEFAULT_SETTINGS, serviceBaseUrl: deadPort, allowlist: [] },
      openWindow: (url) => opened.push(url),
    }).attach();
    try {
      const a = addAnchor("http://whatever.test/");
      click(a);
      await waitFor(() => guard.overlay.visible() === "verdict");
      const panel = guard.overlay.root.querySelector(".panel")!;
      expect(panel.className).toContain("unavailable");
      click(a); // still no confirm box reachable
      await new Promise((r) => setTimeout(r, 50));
      expect(guard.overlay.visible()).not.toBe("confirm");
      expect(opened).toEqual([]);
    } finally {
      guard.dispose();
    }
  });
});
