// Wire types mirroring the service's JSON schemas. The client never invents
// state of its own: everything rendered comes from one of these payloads.

export type LanguageTag = "en" | "es" | "fr" | "zh" | "ja" | "ar" | "fa" | "hi";

export const LANGUAGE_TAGS: LanguageTag[] = [
  "en", "es", "fr", "zh", "ja", "ar", "fa", "hi",
];

export interface UserProfile {
  id: string;
  dietary_restrictions: string[];
  allergies: string[];
  favorite_cuisines: string[];
  cooking_level: number;
  language: LanguageTag;
}

export interface Ingredient {
  display_name: string;
  canonical_key: string;
  quantity: string | null;
  source: "scanned" | "manual";
  first_seen: string;
}

export interface NormBox {
  y_min: number;
  x_min: number;
  y_max: number;
  x_max: number;
}

export interface PxRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface PxPoint {
  x: number;
  y: number;
}

export interface ProjectedLabel {
  name: string;
  bbox: NormBox;
  confidence: number | null;
  rect_px: PxRect;
  anchor_px: PxPoint;
}

export interface ScanResponse {
  labels: ProjectedLabel[];
  pantry: Ingredient[];
  nothing_detected: boolean;
  dropped_count: number;
}

export interface NutritionFacts {
  calories: number | null;
  fat_g: number | null;
  carbohydrates_g: number | null;
  fiber_g: number | null;
  protein_g: number | null;
  vitamins: Record<string, string>;
}

export interface RequiredIngredient {
  canonical_key: string;
  display_name: string;
  amount: string;
}

export interface Recipe {
  id: string;
  title: string;
  cuisine: string;
  servings: number;
  required: RequiredIngredient[];
  steps: string[];
  nutrition: NutritionFacts;
  allergens: string[];
  rating: number | null;
}

export interface AllergenHit {
  allergen: string;
  matched_in: "declared_allergen_list" | "ingredient_name";
}

export interface DiscardedRecipe {
  title: string;
  validation: {
    recipe_id: string;
    ok: boolean;
    missing_ingredients: string[];
    nutrition_complete: boolean;
    schema_errors: string[];
  };
  allergens: { recipe_id: string; hits: AllergenHit[] };
}

export interface GenerateResponse {
  accepted: Recipe[];
  discarded: DiscardedRecipe[];
  shortfall: number;
}

export interface ChatTurn {
  role: "user" | "assistant";
  modality: "text" | "voice_transcript";
  content: string;
  timestamp: string;
  unanswered: boolean;
}

export interface StepFeedback {
  step_index: number;
  verdict: "correct" | "needs_adjustment";
  explanation: string;
}

export interface Timer {
  id: string;
  label: string;
  duration_s: number;
  started_at: string;
  state: "running" | "paused" | "expired";
  remaining_s: number;
}

export interface Session {
  id: string;
  profile_id: string;
  created_at: string;
  ingredients: Ingredient[];
  offered_recipes: Recipe[];
  selected_recipe: string | null;
  chat_history: ChatTurn[];
}

export interface Catalog {
  language: LanguageTag;
  direction: "ltr" | "rtl";
  strings: Record<string, string>;
}
