import { describe, expect, it } from "vitest";

import { renderOptions } from "../src/options.js";
import { DEFAULT_SETTINGS, SettingsStore, isAllowlisted } from "../src/settings.js";
import { ServiceClient } from "../src/api.js";

function memoryStore(): SettingsStore {
  const map = new Map<string, string>();
  return new SettingsStore({
    get: async (k) => map.get(k) ?? null,
    set: async (k, v) => {
      map.set(k, v);
    },
  });
}

const flush = () => new Promise((r) => setTimeout(r, 0));

describe("SettingsStore", () => {
  it("defaults apply when nothing is stored", async () => {
    const settings = await memoryStore().load();
    expect(settings).toEqual({ ...DEFAULT_SETTINGS, allowlist: [] });
    expect(settings.failOpen).toBe(false); // fail-closed is the default
  });

  it("round trips and resets", async () => {
    const store = memoryStore();
    await store.save({ serviceBaseUrl: "http://127.0.0.1:9999",
                       failOpen: true, allowlist: ["ok.test"] });
    expect((await store.load()).serviceBaseUrl).toBe("http://127.0.0.1:9999");
    const reset = await store.reset();
    expect(reset).toEqual({ ...DEFAULT_SETTINGS, allowlist: [] });
    expect(await store.load()).toEqual({ ...DEFAULT_SETTINGS, allowlist: [] });
  });

  it("a changed service URL flows into the client used for later queries", async () => {
    const store = memoryStore();
    await store.save({ ...DEFAULT_SETTINGS, serviceBaseUrl: "http://127.0.0.1:4242/" });
    const settings = await store.load();
    const client = new ServiceClient(settings.serviceBaseUrl);
    expect(client.baseUrl).toBe("http://127.0.0.1:4242");
  });

  it("allowlist matching is per-site including subdomains", () => {
    expect(isAllowlisted("http://docs.trusted.test/x", ["trusted.test"])).toBe(true);
    expect(isAllowlisted("http://trusted.test/", ["trusted.test"])).toBe(true);
    expect(isAllowlisted("http://nottrusted.test/", ["trusted.test"])).toBe(false);
    expect(isAllowlisted("not a url", ["trusted.test"])).toBe(false);
  });
});

describe("options page", () => {
  it("saves edited values and restores defaults on reset", async () => {
    const store = memoryStore();
    const container = document.createElement("div");
    document.body.appendChild(container);
    renderOptions(document, store, container);
    await flush();

    const baseUrl = container.querySelector<HTMLInputElement>("#plens-base-url")!;
    const failOpen = container.querySelector<HTMLInputElement>("#plens-fail-open")!;
    const allowlist = container.querySelector<HTMLTextAreaElement>("#plens-allowlist")!;
    expect(baseUrl.value).toBe(DEFAULT_SETTINGS.serviceBaseUrl);

    baseUrl.value = "http://127.0.0.1:9001/";
    failOpen.checked = true;
    allowlist.value = "one.test\n\n two.test ";
    (container.querySelector("#plens-save") as HTMLElement).click();
    await flush();

    const saved = await store.load();
    expect(saved.serviceBaseUrl).toBe("http://127.0.0.1:9001");
    expect(saved.failOpen).toBe(true);
    expect(saved.allowlist).toEqual(["one.test", "two.test"]);

    (container.querySelector("#plens-reset") as HTMLElement).click();
    await flush();
    expect(await store.load()).toEqual({ ...DEFAULT_SETTINGS, allowlist: [] });
    expect(baseUrl.value).toBe(DEFAULT_SETTINGS.serviceBaseUrl);
  });
});
