// Recipe panel: auto-arranged cards, each with nutrition facts and allergen
// badges beside it, plus select / rate / shopping-list actions. Recipes the
// service discarded render as notices with their reasons, so a blocked
// allergen is visible rather than silently missing.

import type { SousChefApi } from "./api.js";
import type {
  DiscardedRecipe,
  GenerateResponse,
  Recipe,
  RequiredIngredient,
  UserProfile,
} from "./types.js";

/** Client-side mirror of the service's conservative allergen screen. */
export function allergenHits(recipe: Recipe, profile: UserProfile): string[] {
  const hits: string[] = [];
  for (const allergy of profile.allergies) {
    const needle = allergy.trim().toLowerCase();
    if (!needle) continue;
    const declared = recipe.allergens.some((entry) => entry.toLowerCase().includes(needle));
    const inIngredient = recipe.required.some((entry) =>
      entry.canonical_key.includes(needle),
    );
    if (declared || inIngredient) hits.push(allergy);
  }
  return hits;
}

export class RecipesPanel {
  selectedId: string | null = null;
  private recipes: Recipe[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SousChefApi,
    private readonly sessionId: () => string,
    private readonly profile: () => UserProfile,
    private readonly onSelect?: (recipe: Recipe) => void,
  ) {}

  offered(): Recipe[] {
    return this.recipes;
  }

  render(response: GenerateResponse): void {
    this.recipes = [...this.recipes, ...response.accepted];
    const cards = this.root.querySelector<HTMLElement>(".recipe-cards");
    if (cards) {
      cards.replaceChildren();
      for (const recipe of this.recipes) {
        cards.appendChild(this.renderCard(recipe));
      }
    }
    const notices = this.root.querySelector<HTMLElement>(".discard-notices");
    if (notices) {
      notices.replaceChildren();
      for (const discarded of response.discarded) {
        notices.appendChild(this.renderDiscard(discarded));
      }
    }
  }

  private renderCard(recipe: Recipe): HTMLElement {
    const doc = this.root.ownerDocument;
    const card = doc.createElement("article");
    card.className = "recipe-card";
    card.dataset.recipeId = recipe.id;
    if (recipe.id === this.selectedId) card.classList.add("selected");

    const title = doc.createElement("h3");
    title.textContent = recipe.title;
    card.appendChild(title);

    const meta = doc.createElement("p");
    meta.className = "recipe-meta";
    meta.textContent = `${recipe.cuisine} · ${recipe.servings}`;
    card.appendChild(meta);

    const ingredients = doc.createElement("ul");
    ingredients.className = "recipe-required";
    for (const entry of recipe.required) {
      const li = doc.createElement("li");
      li.textContent = `${entry.display_name}: ${entry.amount}`;
      ingredients.appendChild(li);
    }
    card.appendChild(ingredients);

    card.appendChild(this.renderNutrition(recipe));
    card.appendChild(this.renderAllergens(recipe));

    const actions = doc.createElement("div");
    actions.className = "recipe-actions";

    const select = doc.createElement("button");
    select.type = "button";
    select.className = "recipe-select";
    select.setAttribute("data-i18n", "select_recipe_button");
    select.textContent = "Cook this";
    select.addEventListener("click", () => void this.select(recipe.id));
    actions.appendChild(select);

    const rating = doc.createElement("select");
    rating.className = "recipe-rate";
    for (let stars = 1; stars <= 5; stars++) {
      const option = doc.createElement("option");
      option.value = String(stars);
      option.textContent = "★".repeat(stars);
      rating.appendChild(option);
    }
    if (recipe.rating) rating.value = String(recipe.rating);
    rating.addEventListener("change", () =>
      void this.api.rateRecipe(this.sessionId(), recipe.id, Number(rating.value)),
    );
    actions.appendChild(rating);

    card.appendChild(actions);
    return card;
  }

  private renderNutrition(recipe: Recipe): HTMLElement {
    const doc = this.root.ownerDocument;
    const block = doc.createElement("dl");
    block.className = "nutrition";
    const rows: Array<[string, number | null, string]> = [
      ["calories_label", recipe.nutrition.calories, "kcal"],
      ["fat_label", recipe.nutrition.fat_g, "g"],
      ["carbohydrates_label", recipe.nutrition.carbohydrates_g, "g"],
      ["fiber_label", recipe.nutrition.fiber_g, "g"],
      ["protein_label", recipe.nutrition.protein_g, "g"],
    ];
    for (const [key, value, unit] of rows) {
      if (value === null) continue;
      const dt = doc.createElement("dt");
      dt.setAttribute("data-i18n", key);
      const dd = doc.createElement("dd");
      dd.textContent = unit === "kcal" ? String(value) : `${value} ${unit}`;
      block.append(dt, dd);
    }
    for (const [vitamin, amount] of Object.entries(recipe.nutrition.vitamins)) {
      const dt = doc.createElement("dt");
      dt.textContent = vitamin;
      const dd = doc.createElement("dd");
      dd.textContent = amount;
      block.append(dt, dd);
    }
    return block;
  }

  private renderAllergens(recipe: Recipe): HTMLElement {
    const doc = this.root.ownerDocument;
    const badge = doc.createElement("p");
    badge.className = "allergen-badge";
    if (recipe.allergens.length === 0) {
      badge.hidden = true;
      return badge;
    }
    const label = doc.createElement("span");
    label.setAttribute("data-i18n", "allergen_warning_label");
    label.textContent = "Possible allergens";
    const list = doc.createElement("span");
    list.className = "allergen-list";
    list.textContent = recipe.allergens.join(", ");
    badge.append(label, doc.createTextNode(": "), list);
    if (allergenHits(recipe, this.profile()).length > 0) {
      badge.classList.add("allergen-hit");
    }
    return badge;
  }

  private renderDiscard(discarded: DiscardedRecipe): HTMLElement {
    const doc = this.root.ownerDocument;
    const notice = doc.createElement("div");
    notice.className = "discard-notice";
    notice.dataset.title = discarded.title;

    const reasons: string[] = [];
    if (discarded.validation.missing_ingredients.length) {
      reasons.push(`missing: ${discarded.validation.missing_ingredients.join(", ")}`);
    }
    if (!discarded.validation.nutrition_complete) reasons.push("incomplete nutrition");
    reasons.push(...discarded.validation.schema_errors);

    const hits = discarded.allergens.hits;
    if (hits.length) {
      notice.classList.add("allergen-hit");
      const badge = doc.createElement("span");
      badge.className = "allergen-badge allergen-hit";
      badge.textContent = [...new Set(hits.map((h) => h.allergen))].join(", ");
      notice.appendChild(badge);
    }
    const text = doc.createElement("span");
    text.textContent = `${discarded.title}${reasons.length ? ` (${reasons.join("; ")})` : ""}`;
    notice.appendChild(text);
    return notice;
  }

  async select(recipeId: string): Promise<Recipe> {
    const response = await this.api.selectRecipe(this.sessionId(), recipeId);
    this.selectedId = response.selected_recipe;
    this.root.querySelectorAll(".recipe-card").forEach((card) => {
      card.classList.toggle(
        "selected",
        (card as HTMLElement).dataset.recipeId === this.selectedId,
      );
    });
    this.onSelect?.(response.recipe);
    return response.recipe;
  }

  async shoppingList(recipeId: string): Promise<RequiredIngredient[]> {
    const response = await this.api.shoppingList(this.sessionId(), recipeId);
    const list = this.root.querySelector<HTMLElement>(".shopping-list");
    if (list) {
      list.replaceChildren();
      for (const item of response.items) {
        const li = this.root.ownerDocument.createElement("li");
        li.textContent = `${item.display_name}: ${item.amount}`;
        list.appendChild(li);
      }
      const empty = this.root.querySelector<HTMLElement>(".shopping-empty");
      if (empty) empty.hidden = response.items.length > 0;
    }
    return response.items;
  }
}
