// UI fixture run against the real service started by globalSetup
// (mock provider, bundled fixtures). This is the release checklist for the
// web app: scan overlay bounds, pantry parity with the server, full
// language switching over the real markup, and allergen badging.

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { SousChefApi } from "../src/api.js";
import { applyCatalog, applyDirection } from "../src/i18n.js";
import { renderOverlay } from "../src/overlay.js";
import { PantryPanel } from "../src/pantry.js";
import { RecipesPanel } from "../src/recipesPanel.js";
import { ChatPanel } from "../src/chatPanel.js";
import { StepPanel } from "../src/stepPanel.js";
import { LANGUAGE_TAGS, type Session, type UserProfile } from "../src/types.js";

const FRONTEND_ROOT = join(__dirname, "..");
const SNAPSHOTS = join(FRONTEND_ROOT, "..", "src", "sous_chef", "fixtures", "snapshots");

let api: SousChefApi;

function loadMarkup(): void {
  const html = readFileSync(join(FRONTEND_ROOT, "index.html"), "utf-8");
  const body = html.slice(html.indexOf("<body>") + 6, html.indexOf("</body>"));
  document.body.innerHTML = body.replace(/<script[\s\S]*?<\/script>/g, "");
}

function snapshotB64(name: string): string {
  return readFileSync(join(SNAPSHOTS, name)).toString("base64");
}

async function newSession(profile: Omit<UserProfile, "id">): Promise<{
  profile: UserProfile;
  session: Session;
}> {
  const created = await api.createProfile(profile);
  const session = await api.createSession(created.id);
  return { profile: created, session };
}

beforeAll(() => {
  const base = process.env.SOUS_CHEF_TEST_API;
  if (!base) throw new Error("globalSetup did not provide SOUS_CHEF_TEST_API");
  api = new SousChefApi(base);
});

describe("scan view", () => {
  it("renders exactly 5 in-bounds labels for five_items", async () => {
    loadMarkup();
    const { session } = await newSession({
      dietary_restrictions: [], allergies: [], favorite_cuisines: [],
      cooking_level: 1, language: "en",
    });
    const view = { width: 390, height: 844 };
    const response = await api.scan(session.id, {
      imageB64: snapshotB64("counter.png"),
      mimeType: "image/png",
      viewportWidth: view.width,
      viewportHeight: view.height,
      fixture: "five_items",
    });
    expect(response.labels.length).toBe(5);
    expect(response.nothing_detected).toBe(false);

    const overlay = document.querySelector<HTMLElement>("#scan-view .overlay")!;
    renderOverlay(overlay, response.labels, view);
    const boxes = [...overlay.querySelectorAll<HTMLElement>(".label-box")];
    expect(boxes.length).toBe(5);
    const names = boxes.map((box) => box.querySelector(".label-name")!.textContent);
    expect(names).toEqual(["Tomato", "Egg", "Onion", "Flour", "Milk"]);
    for (const box of boxes) {
      const x = parseFloat(box.style.left);
      const y = parseFloat(box.style.top);
      const w = parseFloat(box.style.width);
      const h = parseFloat(box.style.height);
      expect(x).toBeGreaterThanOrEqual(0);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(x + w).toBeLessThanOrEqual(view.width);
      expect(y + h).toBeLessThanOrEqual(view.height);
    }
  });

  it("shows the empty notice when nothing is detected", async () => {
    loadMarkup();
    const { session } = await newSession({
      dietary_restrictions: [], allergies: [], favorite_cuisines: [],
      cooking_level: 1, language: "en",
    });
    const response = await api.scan(session.id, {
      imageB64: snapshotB64("counter.png"),
      mimeType: "image/png",
      viewportWidth: 390,
      viewportHeight: 844,
      fixture: "empty_counter",
    });
    expect(response.nothing_detected).toBe(true);
    expect(response.labels.length).toBe(0);
  });
});

describe("pantry panel", () => {
  it("manual add and remove keep the panel equal to server state", async () => {
    loadMarkup();
    const { session } = await newSession({
      dietary_restrictions: [], allergies: [], favorite_cuisines: [],
      cooking_level: 1, language: "en",
    });
    const panel = new PantryPanel(
      document.getElementById("pantry-panel")!,
      api,
      () => session.id,
    );
    const scan = await api.scan(session.id, {
      imageB64: snapshotB64("counter.png"),
      mimeType: "image/png",
      viewportWidth: 390,
      viewportHeight: 844,
      fixture: "five_items",
    });
    panel.render(scan.pantry);

    const domKeys = () =>
      [...document.querySelectorAll<HTMLElement>(".pantry-item")].map(
        (item) => item.dataset.key,
      );
    const serverKeys = async () =>
      (await api.getSession(session.id)).ingredients.map((i) => i.canonical_key);

    expect(domKeys()).toEqual(["tomato", "egg", "onion", "flour", "milk"]);
    expect(domKeys()).toEqual(await serverKeys());

    await panel.add("Basil");
    expect(domKeys()).toEqual(await serverKeys());
    expect(domKeys()).toContain("basil");

    await panel.remove("milk");
    expect(domKeys()).toEqual(await serverKeys());
    expect(domKeys()).not.toContain("milk");
  });
});

describe("language switching", () => {
  it("re-renders every static string for all 8 tags, with direction", async () => {
    loadMarkup();
    for (const tag of LANGUAGE_TAGS) {
      const catalog = await api.catalog(tag);
      applyDirection(catalog, document);
      const missing = applyCatalog(catalog, document);
      expect(missing, `missing keys for ${tag}`).toEqual([]);

      // Audit: every annotated element shows exactly the catalog entry.
      const annotated = [...document.querySelectorAll<HTMLElement>("[data-i18n]")];
      expect(annotated.length).toBeGreaterThan(10);
      for (const el of annotated) {
        expect(el.textContent, `${el.dataset.i18n} in ${tag}`).toBe(
          catalog.strings[el.dataset.i18n!],
        );
      }
      for (const el of document.querySelectorAll<HTMLElement>("[data-i18n-placeholder]")) {
        expect(el.getAttribute("placeholder")).toBe(
          catalog.strings[el.dataset.i18nPlaceholder!],
        );
      }
      expect(document.documentElement.getAttribute("dir")).toBe(
        tag === "ar" || tag === "fa" ? "rtl" : "ltr",
      );
    }
  });
});

describe("recipes panel", () => {
  it("badges allergens and surfaces the discarded hit recipes", async () => {
    loadMarkup();
    const { profile, session } = await newSession({
      dietary_restrictions: [], allergies: ["peanut"], favorite_cuisines: [],
      cooking_level: 3, language: "en",
    });
    await api.scan(session.id, {
      imageB64: snapshotB64("counter.png"),
      mimeType: "image/png",
      viewportWidth: 390,
      viewportHeight: 844,
      fixture: "five_items",
    });
    await api.pantryAdd(session.id, "Peanut Butter");

    const panel = new RecipesPanel(
      document.getElementById("recipes-panel")!,
      api,
      () => session.id,
      () => profile,
    );
    panel.render(await api.generateRecipes(session.id, 3, "allergen_block"));

    const cards = [...document.querySelectorAll<HTMLElement>(".recipe-card")];
    expect(cards.map((c) => c.querySelector("h3")!.textContent)).toEqual([
      "Tomato Omelette",
    ]);
    // every card shows its declared allergens beside it
    const badge = cards[0].querySelector<HTMLElement>(".allergen-badge")!;
    expect(badge.hidden).toBe(false);
    expect(badge.textContent).toContain("egg");

    // the fixture recipes that carry hits are visibly badged as discarded
    const notices = [...document.querySelectorAll<HTMLElement>(".discard-notice")];
    const titles = notices.map((n) => n.dataset.title);
    expect(titles).toContain("Peanut Butter Pancakes");
    expect(titles).toContain("Milk Flatbread");
    for (const notice of notices) {
      expect(notice.classList.contains("allergen-hit")).toBe(true);
      expect(notice.querySelector(".allergen-badge")!.textContent).toContain("peanut");
    }
  });

  it("select, step check, chat, and shopping list against the service", async () => {
    loadMarkup();
    const { profile, session } = await newSession({
      dietary_restrictions: ["vegetarian"], allergies: [],
      favorite_cuisines: ["italian"], cooking_level: 2, language: "en",
    });
    await api.scan(session.id, {
      imageB64: snapshotB64("counter.png"),
      mimeType: "image/png",
      viewportWidth: 390,
      viewportHeight: 844,
      fixture: "five_items",
    });

    const steps = new StepPanel(
      document.getElementById("step-panel")!,
      api,
      () => session.id,
    );
    const panel = new RecipesPanel(
      document.getElementById("recipes-panel")!,
      api,
      () => session.id,
      () => profile,
      (recipe) => steps.setRecipe(recipe),
    );
    panel.render(await api.generateRecipes(session.id, 3, "veg_three"));
    expect(document.querySelectorAll(".recipe-card").length).toBe(3);

    const first = panel.offered()[0];
    await panel.select(first.id);
    expect(
      document.querySelector<HTMLElement>(".recipe-card.selected h3")!.textContent,
    ).toBe("Tomato Omelette");
    expect(document.querySelector(".step-text")!.textContent).toBe(first.steps[0]);

    const feedback = await steps.check(
      { imageB64: snapshotB64("workspace.jpg"), mimeType: "image/jpeg",
        width: 96, height: 72 },
      "diced_ok",
    );
    expect(feedback?.verdict).toBe("correct");
    const banner = document.querySelector<HTMLElement>(".step-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.classList.contains("correct")).toBe(true);

    const chat = new ChatPanel(
      document.getElementById("chat-panel")!,
      api,
      () => session.id,
      () => profile.language,
    );
    await chat.send("Which should I make first?", "text", "suggest_reply");
    const turns = [...document.querySelectorAll<HTMLElement>(".chat-turn")];
    expect(turns.length).toBe(2);
    expect(turns[1].classList.contains("assistant")).toBe(true);
    expect(turns[1].textContent).toContain("Tomato Omelette");

    await api.pantryRemove(session.id, "milk");
    const items = await panel.shoppingList(first.id);
    expect(items.map((i) => i.canonical_key)).toEqual(["milk"]);
    expect(document.querySelector(".shopping-list li")!.textContent).toBe(
      "Milk: 2 tbsp",
    );
  });
});
