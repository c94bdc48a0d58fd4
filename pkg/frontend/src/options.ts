/** Options page: service base URL, fail-open toggle, per-site allowlist. */

import { SettingsStore } from "./settings.js";

export function renderOptions(doc: Document, store: SettingsStore,
                              container: HTMLElement): { refresh(): Promise<void> } {
  container.innerHTML = `
    <h1>PhishLens options</h1>
    <label>Verdict service URL
      <input id="plens-base-url" type="url" size="40">
    </label>
    <label>
      <input id="plens-fail-open" type="checkbox">
      Offer the confirm box even when the service is unreachable (fail-open)
    </label>
    <label>Allowlisted sites (one hostname per line)
      <textarea id="plens-allowlist" rows="6" cols="40"></textarea>
    </label>
    <div>
      <button id="plens-save" type="button">Save</button>
      <button id="plens-reset" type="button">Reset to defaults</button>
    </div>
    <p id="plens-status" role="status"></p>
  `;

  const baseUrl = container.querySelector<HTMLInputElement>("#plens-base-url")!;
  const failOpen = container.querySelector<HTMLInputElement>("#plens-fail-open")!;
  const allowlist = container.querySelector<HTMLTextAreaElement>("#plens-allowlist")!;
  const status = container.querySelector<HTMLElement>("#plens-status")!;

  async function refresh(): Promise<void> {
    const settings = await store.load();
    baseUrl.value = settings.serviceBaseUrl;
    failOpen.checked = settings.failOpen;
    allowlist.value = settings.allowlist.join("\n");
  }

  container.querySelector("#plens-save")!.addEventListener("click", () => {
    void (async () => {
      await store.save({
        serviceBaseUrl: baseUrl.value.trim().replace(/\/+$/, ""),
        failOpen: failOpen.checked,
        allowlist: allowlist.value.split("\n").map((s) => s.trim()).filter(Boolean),
      });
      status.textContent = "Saved.";
    })();
  });

  container.querySelector("#plens-reset")!.addEventListener("click", () => {
    void (async () => {
      await store.reset();
      await refresh();
      status.textContent = "Defaults restored.";
    })();
  });

  void refresh();
  return { refresh };
}

if (typeof document !== "undefined" && document.getElementById("plens-options-root")) {
  renderOptions(document, new SettingsStore(),
                document.getElementById("plens-options-root") as HTMLElement);
}
