// Static-string rendering from the service catalogs. Every fixed string in
// the markup carries a data-i18n attribute; switching language re-renders
// them all from the catalog with no hard-coded residue.

import type { Catalog, LanguageTag } from "./types.js";

export function isRtl(catalog: Catalog): boolean {
  return catalog.direction === "rtl";
}

/**
 * Apply a catalog to every annotated element under `root`.
 *
 * - `data-i18n="key"` sets textContent
 * - `data-i18n-placeholder="key"` sets the placeholder attribute
 * - `data-i18n-title="key"` sets the title attribute
 *
 * Returns the list of keys that had no catalog entry (a bug upstream:
 * catalogs are validated complete at service startup).
 */
export function applyCatalog(catalog: Catalog, root: ParentNode): string[] {
  const missing: string[] = [];
  const lookup = (key: string): string | null => {
    const value = catalog.strings[key];
    if (value === undefined) {
      missing.push(key);
      return null;
    }
    return value;
  };

  root.querySelectorAll<HTMLElement>("[data-i18n]").forEach((el) => {
    const value = lookup(el.dataset.i18n!);
    if (value !== null) el.textContent = value;
  });
  root.querySelectorAll<HTMLElement>("[data-i18n-placeholder]").forEach((el) => {
    const value = lookup(el.dataset.i18nPlaceholder!);
    if (value !== null) el.setAttribute("placeholder", value);
  });
  root.querySelectorAll<HTMLElement>("[data-i18n-title]").forEach((el) => {
    const value = lookup(el.dataset.i18nTitle!);
    if (value !== null) el.setAttribute("title", value);
  });
  return missing;
}

/** Set document direction and language for the whole page. */
export function applyDirection(catalog: Catalog, doc: Document): void {
  doc.documentElement.setAttribute("lang", catalog.language);
  doc.documentElement.setAttribute("dir", catalog.direction);
}

export function languageLabel(tag: LanguageTag): string {
  // Self-names so the picker is readable in any current language.
  const names: Record<LanguageTag, string> = {
    en: "English",
    es: "Español",
    fr: "Français",
    zh: "中文",
    ja: "日本語",
    ar: "العربية",
    fa: "فارسی",
    hi: "हिन्दी",
  };
  return names[tag];
}
