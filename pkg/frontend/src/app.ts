// App bootstrap: one profile + one session per browser, panels wired to the
// service API, language applied from the server catalog on every switch.

import { SousChefApi } from "./api.js";
import { captureFrame, startPreview } from "./camera.js";
import { ChatPanel } from "./chatPanel.js";
import { applyCatalog, applyDirection } from "./i18n.js";
import { renderOverlay } from "./overlay.js";
import { PantryPanel } from "./pantry.js";
import { RecipesPanel } from "./recipesPanel.js";
import { SettingsPanel } from "./settings.js";
import { StepPanel } from "./stepPanel.js";
import type { LanguageTag, UserProfile } from "./types.js";

const DEFAULT_API_BASE = "http://127.0.0.1:8017";

function apiBase(): string {
  const override = (window as unknown as Record<string, unknown>).SOUS_CHEF_API_BASE;
  return typeof override === "string"
    ? override
    : localStorage.getItem("sous_chef_api_base") ?? DEFAULT_API_BASE;
}

async function ensureProfile(api: SousChefApi): Promise<UserProfile> {
  const storedId = localStorage.getItem("sous_chef_profile_id");
  if (storedId) {
    try {
      return await api.getProfile(storedId);
    } catch {
      localStorage.removeItem("sous_chef_profile_id");
    }
  }
  const profile = await api.createProfile({
    dietary_restrictions: [],
    allergies: [],
    favorite_cuisines: [],
    cooking_level: 1,
    language: "en",
  });
  localStorage.setItem("sous_chef_profile_id", profile.id);
  return profile;
}

export async function boot(): Promise<void> {
  const api = new SousChefApi(apiBase());
  let profile = await ensureProfile(api);
  const session = await api.createSession(profile.id);

  const scanRoot = document.getElementById("scan-view")!;
  const video = scanRoot.querySelector<HTMLVideoElement>("video")!;
  const overlay = scanRoot.querySelector<HTMLElement>(".overlay")!;
  const notice = scanRoot.querySelector<HTMLElement>(".scan-notice")!;

  const pantry = new PantryPanel(
    document.getElementById("pantry-panel")!,
    api,
    () => session.id,
  );
  const recipes = new RecipesPanel(
    document.getElementById("recipes-panel")!,
    api,
    () => session.id,
    () => profile,
    (recipe) => steps.setRecipe(recipe),
  );
  const chat = new ChatPanel(
    document.getElementById("chat-panel")!,
    api,
    () => session.id,
    () => profile.language,
  );
  const steps = new StepPanel(
    document.getElementById("step-panel")!,
    api,
    () => session.id,
  );
  const settings = new SettingsPanel(
    document.getElementById("settings-panel")!,
    api,
    (updated) => {
      profile = updated;
      void switchLanguage(updated.language);
    },
  );
  settings.populate(profile);

  async function switchLanguage(tag: LanguageTag): Promise<void> {
    const catalog = await api.catalog(tag);
    applyDirection(catalog, document);
    applyCatalog(catalog, document);
  }
  await switchLanguage(profile.language);

  // One in-flight scan at a time; the button re-enables when labels land.
  const scanButton = scanRoot.querySelector<HTMLButtonElement>(".scan-button")!;
  scanButton.addEventListener("click", async () => {
    scanButton.disabled = true;
    try {
      const frame = captureFrame(video);
      const response = await api.scan(session.id, {
        imageB64: frame.imageB64,
        mimeType: frame.mimeType,
        viewportWidth: video.clientWidth || frame.width,
        viewportHeight: video.clientHeight || frame.height,
      });
      renderOverlay(overlay, response.labels, {
        width: video.clientWidth || frame.width,
        height: video.clientHeight || frame.height,
      });
      notice.hidden = !response.nothing_detected;
      pantry.render(response.pantry);
    } finally {
      scanButton.disabled = false;
    }
  });

  const generateButton = document.querySelector<HTMLButtonElement>(".generate-button");
  generateButton?.addEventListener("click", async () => {
    generateButton.disabled = true;
    try {
      recipes.render(await api.generateRecipes(session.id, 3));
    } finally {
      generateButton.disabled = false;
    }
  });

  const checkButton = document.querySelector<HTMLButtonElement>(".step-check-button");
  checkButton?.addEventListener("click", async () => {
    checkButton.disabled = true;
    try {
      await steps.check(captureFrame(video));
    } finally {
      checkButton.disabled = false;
    }
  });

  void startPreview(video).catch(() => {
    notice.hidden = false;
  });
}

if (typeof document !== "undefined" && document.getElementById("scan-view")) {
  void boot();
}
