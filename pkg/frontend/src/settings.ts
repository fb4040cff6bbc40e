// Settings page: language picker (all eight), dietary restrictions,
// allergies, favorite cuisines, cooking level. Saving PUTs the profile and
// hands the new language to the app so every static string re-renders.

import type { SousChefApi } from "./api.js";
import { languageLabel } from "./i18n.js";
import { LANGUAGE_TAGS, type LanguageTag, type UserProfile } from "./types.js";

function splitList(value: string): string[] {
  return value
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

export class SettingsPanel {
  constructor(
    private readonly root: HTMLElement,
    private readonly api: SousChefApi,
    private readonly onSaved: (profile: UserProfile) => void,
  ) {
    const picker = root.querySelector<HTMLSelectElement>(".language-picker");
    if (picker) {
      picker.replaceChildren();
      for (const tag of LANGUAGE_TAGS) {
        const option = root.ownerDocument.createElement("option");
        option.value = tag;
        option.textContent = languageLabel(tag);
        picker.appendChild(option);
      }
    }
    root.querySelector<HTMLFormElement>(".settings-form")?.addEventListener(
      "submit",
      (event) => {
        event.preventDefault();
        void this.save();
      },
    );
  }

  private field(name: string): HTMLInputElement | HTMLSelectElement | null {
    return this.root.querySelector(`[name="${name}"]`);
  }

  populate(profile: UserProfile): void {
    (this.field("language") as HTMLSelectElement | null)?.setAttribute(
      "data-profile-id",
      profile.id,
    );
    const set = (name: string, value: string) => {
      const el = this.field(name);
      if (el) el.value = value;
    };
    set("language", profile.language);
    set("dietary_restrictions", profile.dietary_restrictions.join(", "));
    set("allergies", profile.allergies.join(", "));
    set("favorite_cuisines", profile.favorite_cuisines.join(", "));
    set("cooking_level", String(profile.cooking_level));
  }

  read(): Omit<UserProfile, "id"> {
    return {
      language: (this.field("language")?.value ?? "en") as LanguageTag,
      dietary_restrictions: splitList(this.field("dietary_restrictions")?.value ?? ""),
      allergies: splitList(this.field("allergies")?.value ?? ""),
      favorite_cuisines: splitList(this.field("favorite_cuisines")?.value ?? ""),
      cooking_level: Number(this.field("cooking_level")?.value ?? "1"),
    };
  }

  async save(): Promise<void> {
    const profileId = this.field("language")?.getAttribute("data-profile-id");
    if (!profileId) return;
    const updated = await this.api.updateProfile(profileId, this.read());
    this.onSaved(updated);
  }
}
