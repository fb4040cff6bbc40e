// Fetch client for the service HTTP API. No secrets live here: the browser
// talks only to the service, never to a model provider.

import type {
  Catalog,
  ChatTurn,
  GenerateResponse,
  Ingredient,
  LanguageTag,
  Recipe,
  RequiredIngredient,
  ScanResponse,
  Session,
  StepFeedback,
  Timer,
  UserProfile,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  code: string;
  detail: unknown;

  constructor(status: number, code: string, message: string, detail?: unknown) {
    super(message);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

export interface ScanUpload {
  imageB64: string;
  mimeType: string;
  viewportWidth: number;
  viewportHeight: number;
  fixture?: string;
}

export class SousChefApi {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const error = (payload as { error?: { code?: string; message?: string; detail?: unknown } }).error ?? {};
      throw new ApiError(
        response.status,
        error.code ?? "unknown",
        error.message ?? `request failed with ${response.status}`,
        error.detail,
      );
    }
    return payload as T;
  }

  createProfile(profile: Omit<UserProfile, "id">): Promise<UserProfile> {
    return this.request("POST", "/profiles", profile);
  }

  updateProfile(id: string, profile: Omit<UserProfile, "id">): Promise<UserProfile> {
    return this.request("PUT", `/profiles/${id}`, profile);
  }

  getProfile(id: string): Promise<UserProfile> {
    return this.request("GET", `/profiles/${id}`);
  }

  createSession(profileId: string): Promise<Session> {
    return this.request("POST", "/sessions", { profile_id: profileId });
  }

  getSession(id: string): Promise<Session> {
    return this.request("GET", `/sessions/${id}`);
  }

  scan(sessionId: string, upload: ScanUpload): Promise<ScanResponse> {
    return this.request("POST", `/sessions/${sessionId}/scan`, {
      image_b64: upload.imageB64,
      mime_type: upload.mimeType,
      viewport_width_px: upload.viewportWidth,
      viewport_height_px: upload.viewportHeight,
      fixture: upload.fixture,
    });
  }

  pantryAdd(sessionId: string, name: string): Promise<{ pantry: Ingredient[] }> {
    return this.request("POST", `/sessions/${sessionId}/pantry`, {
      action: "add",
      name,
    });
  }

  pantryRemove(sessionId: string, canonicalKey: string): Promise<{ pantry: Ingredient[] }> {
    return this.request("POST", `/sessions/${sessionId}/pantry`, {
      action: "remove",
      canonical_key: canonicalKey,
    });
  }

  generateRecipes(sessionId: string, count: number, fixture?: string): Promise<GenerateResponse> {
    return this.request("POST", `/sessions/${sessionId}/recipes`, { count, fixture });
  }

  selectRecipe(sessionId: string, recipeId: string): Promise<{ selected_recipe: string; recipe: Recipe }> {
    return this.request("POST", `/sessions/${sessionId}/recipes/${recipeId}/select`);
  }

  rateRecipe(sessionId: string, recipeId: string, stars: number): Promise<{ recipe: Recipe }> {
    return this.request("POST", `/sessions/${sessionId}/recipes/${recipeId}/rate`, { stars });
  }

  shoppingList(sessionId: string, recipeId: string): Promise<{ items: RequiredIngredient[] }> {
    return this.request("POST", `/sessions/${sessionId}/recipes/${recipeId}/shopping-list`);
  }

  chat(
    sessionId: string,
    text: string,
    modality: "text" | "voice_transcript" = "text",
    fixture?: string,
  ): Promise<{ turn: ChatTurn; history_length: number }> {
    return this.request("POST", `/sessions/${sessionId}/chat`, { text, modality, fixture });
  }

  stepCheck(
    sessionId: string,
    recipeId: string,
    stepIndex: number,
    imageB64: string,
    mimeType: string,
    fixture?: string,
  ): Promise<{ feedback: StepFeedback; recipe_id: string }> {
    return this.request("POST", `/sessions/${sessionId}/step-check`, {
      recipe_id: recipeId,
      step_index: stepIndex,
      image_b64: imageB64,
      mime_type: mimeType,
      fixture,
    });
  }

  createTimer(sessionId: string, label: string, durationS: number): Promise<Timer> {
    return this.request("POST", `/sessions/${sessionId}/timers`, {
      label,
      duration_s: durationS,
    });
  }

  pollTimer(timerId: string): Promise<Timer> {
    return this.request("GET", `/timers/${timerId}`);
  }

  pauseTimer(timerId: string): Promise<Timer> {
    return this.request("POST", `/timers/${timerId}/pause`);
  }

  resumeTimer(timerId: string): Promise<Timer> {
    return this.request("POST", `/timers/${timerId}/resume`);
  }

  catalog(language: LanguageTag): Promise<Catalog> {
    return this.request("GET", `/i18n/${language}`);
  }
}
