/** Content-script entry point: load options, arm the link guard. */

import { ServiceClient } from "./api.js";
import { initLinkGuard } from "./content.js";
import { SettingsStore } from "./settings.js";

async function boot(): Promise<void> {
  const settings = await new SettingsStore().load();
  const client = new ServiceClient(settings.serviceBaseUrl);
  initLinkGuard({ doc: document, client, settings });
}

void boot();
