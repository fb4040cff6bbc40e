// Pantry panel: the ingredient list with remove buttons and a manual-add
// field. The rendered list always mirrors the last server-returned pantry;
// the client never edits its own copy.

import type { SousChefApi } from "./api.js";
import type { Ingredient } from "./types.js";

export class PantryPanel {
  private pantry: Ingredient[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SousChefApi,
    private readonly sessionId: () => string,
    private readonly onChange?: (pantry: Ingredient[]) => void,
  ) {
    const form = root.querySelector<HTMLFormElement>(".pantry-add-form");
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const input = form.querySelector<HTMLInputElement>("input");
      const name = input?.value.trim();
      if (!name) return;
      void this.add(name).then(() => {
        if (input) input.value = "";
      });
    });
  }

  current(): Ingredient[] {
    return this.pantry;
  }

  render(pantry: Ingredient[]): void {
    this.pantry = pantry;
    const list = this.root.querySelector<HTMLElement>(".pantry-list");
    if (!list) return;
    list.replaceChildren();
    for (const ingredient of pantry) {
      const item = this.root.ownerDocument.createElement("li");
      item.className = "pantry-item";
      item.dataset.key = ingredient.canonical_key;

      const name = this.root.ownerDocument.createElement("span");
      name.className = "pantry-name";
      name.textContent = ingredient.display_name;
      if (ingredient.source === "manual") name.classList.add("manual");

      const remove = this.root.ownerDocument.createElement("button");
      remove.className = "pantry-remove";
      remove.type = "button";
      remove.textContent = "×";
      remove.addEventListener("click", () => void this.remove(ingredient.canonical_key));

      item.append(name, remove);
      list.appendChild(item);
    }
    const empty = this.root.querySelector<HTMLElement>(".pantry-empty");
    if (empty) empty.hidden = pantry.length > 0;
    this.onChange?.(pantry);
  }

  async add(name: string): Promise<void> {
    const response = await this.api.pantryAdd(this.sessionId(), name);
    this.render(response.pantry);
  }

  async remove(canonicalKey: string): Promise<void> {
    const response = await this.api.pantryRemove(this.sessionId(), canonicalKey);
    this.render(response.pantry);
  }
}
