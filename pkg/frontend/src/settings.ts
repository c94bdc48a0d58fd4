/** Extension options with a chrome.storage backend when available. */

export interface Settings {
  serviceBaseUrl: string;
  /** When the service is unreachable: false blocks navigation entirely
   * (fail-closed, the default), true still offers the confirm box. */
  failOpen: boolean;
  /** Hostnames whose links bypass the verdict flow. */
  allowlist: string[];
}

export const DEFAULT_SETTINGS: Settings = {
  serviceBaseUrl: "http://127.0.0.1:8970",
  failOpen: false,
  allowlist: [],
};

const STORAGE_KEY = "phishlens.settings";

interface KeyValueBackend {
  get(key: string): Promise<string | null>;
  set(key: string, value: string): Promise<void>;
}

declare const chrome: any;

function chromeBackend(): KeyValueBackend | null {
  if (typeof chrome === "undefined" || !chrome?.storage?.sync) {
    return null;
  }
  const area = chrome.storage.sync;
  return {
    get: (key) =>
      new Promise((resolve) => area.get([key], (items: any) => resolve(items?.[key] ?? null))),
    set: (key, value) =>
      new Promise((resolve) => area.set({ [key]: value }, () => resolve())),
  };
}

function memoryBackend(): KeyValueBackend {
  const store = new Map<string, string>();
  return {
    get: async (key) => store.get(key) ?? null,
    set: async (key, value) => {
      store.set(key, value);
    },
  };
}

export class SettingsStore {
  private backend: KeyValueBackend;

  constructor(backend?: KeyValueBackend) {
    this.backend = backend ?? chromeBackend() ?? memoryBackend();
  }

  async load(): Promise<Settings> {
    const raw = await this.backend.get(STORAGE_KEY);
    if (!raw) {
      return { ...DEFAULT_SETTINGS, allowlist: [] };
    }
    try {
      const parsed = JSON.parse(raw);
      return {
        serviceBaseUrl: typeof parsed.serviceBaseUrl === "string"
          ? parsed.serviceBaseUrl : DEFAULT_SETTINGS.serviceBaseUrl,
        failOpen: Boolean(parsed.failOpen),
        allowlist: Array.isArray(parsed.allowlist)
          ? parsed.allowlist.filter((x: unknown) => typeof x === "string") : [],
      };
    } catch {
      return { ...DEFAULT_SETTINGS, allowlist: [] };
    }
  }

  async save(settings: Settings): Promise<void> {
    await this.backend.set(STORAGE_KEY, JSON.stringify(settings));
  }

  async reset(): Promise<Settings> {
    const defaults = { ...DEFAULT_SETTINGS, allowlist: [] };
    await this.save(defaults);
    return defaults;
  }
}

/** True when the URL's hostname is the entry or a subdomain of it. */
export function isAllowlisted(url: string, allowlist: readonly string[]): boolean {
  let host: string;
  try {
    host = new URL(url).hostname.toLowerCase();
  } catch {
    return false;
  }
  return allowlist.some((entry) => {
    const e = entry.trim().toLowerCase();
    return e !== "" && (host === e || host.endsWith("." + e));
  });
}
