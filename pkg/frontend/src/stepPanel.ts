// Step panel: shows the current step of the selected recipe, posts a fresh
// snapshot for checking, and styles the feedback banner by verdict. Timer
// widgets live here too; they poll the service once a second.

import type { SousChefApi } from "./api.js";
import type { CapturedFrame } from "./camera.js";
import type { Recipe, StepFeedback, Timer } from "./types.js";

export class StepPanel {
  private recipe: Recipe | null = null;
  private stepIndex = 0;
  private timerIds: string[] = [];
  private pollHandle: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SousChefApi,
    private readonly sessionId: () => string,
  ) {
    root.querySelector(".step-prev")?.addEventListener("click", () => this.move(-1));
    root.querySelector(".step-next")?.addEventListener("click", () => this.move(1));
  }

  setRecipe(recipe: Recipe): void {
    this.recipe = recipe;
    this.stepIndex = 0;
    this.renderStep();
  }

  currentStep(): { recipe: Recipe; index: number } | null {
    return this.recipe ? { recipe: this.recipe, index: this.stepIndex } : null;
  }

  private move(delta: number): void {
    if (!this.recipe) return;
    const next = this.stepIndex + delta;
    if (next < 0 || next >= this.recipe.steps.length) return;
    this.stepIndex = next;
    this.renderStep();
  }

  private renderStep(): void {
    const text = this.root.querySelector<HTMLElement>(".step-text");
    const counter = this.root.querySelector<HTMLElement>(".step-counter");
    if (!this.recipe) return;
    if (text) text.textContent = this.recipe.steps[this.stepIndex];
    if (counter) {
      counter.textContent = `${this.stepIndex + 1} / ${this.recipe.steps.length}`;
    }
    this.clearBanner();
  }

  private clearBanner(): void {
    const banner = this.root.querySelector<HTMLElement>(".step-banner");
    if (banner) {
      banner.hidden = true;
      banner.classList.remove("correct", "needs_adjustment");
    }
  }

  async check(frame: CapturedFrame, fixture?: string): Promise<StepFeedback | null> {
    if (!this.recipe) return null;
    const response = await this.api.stepCheck(
      this.sessionId(),
      this.recipe.id,
      this.stepIndex,
      frame.imageB64,
      frame.mimeType,
      fixture,
    );
    this.showFeedback(response.feedback);
    return response.feedback;
  }

  showFeedback(feedback: StepFeedback): void {
    const banner = this.root.querySelector<HTMLElement>(".step-banner");
    if (!banner) return;
    banner.hidden = false;
    banner.classList.remove("correct", "needs_adjustment");
    banner.classList.add(feedback.verdict);
    banner.textContent = feedback.explanation;
  }

  // ---- timers ----

  async addTimer(label: string, durationS: number): Promise<Timer> {
    const timer = await this.api.createTimer(this.sessionId(), label, durationS);
    this.timerIds.push(timer.id);
    this.renderTimer(timer);
    if (this.pollHandle === null) {
      this.pollHandle = setInterval(() => void this.refreshTimers(), 1000);
    }
    return timer;
  }

  async refreshTimers(): Promise<void> {
    for (const timerId of this.timerIds) {
      this.renderTimer(await this.api.pollTimer(timerId));
    }
  }

  private renderTimer(timer: Timer): void {
    const list = this.root.querySelector<HTMLElement>(".timer-list");
    if (!list) return;
    let item = list.querySelector<HTMLElement>(`[data-timer-id="${timer.id}"]`);
    if (!item) {
      item = this.root.ownerDocument.createElement("li");
      item.dataset.timerId = timer.id;
      const name = this.root.ownerDocument.createElement("span");
      name.className = "timer-label";
      const remaining = this.root.ownerDocument.createElement("span");
      remaining.className = "timer-remaining";
      const toggle = this.root.ownerDocument.createElement("button");
      toggle.className = "timer-toggle";
      toggle.type = "button";
      toggle.addEventListener("click", () => void this.toggle(timer.id));
      item.append(name, remaining, toggle);
      list.appendChild(item);
    }
    item.querySelector(".timer-label")!.textContent = timer.label;
    const mins = Math.floor(timer.remaining_s / 60);
    const secs = timer.remaining_s % 60;
    item.querySelector(".timer-remaining")!.textContent =
      `${mins}:${String(secs).padStart(2, "0")}`;
    item.dataset.state = timer.state;
    const toggle = item.querySelector<HTMLButtonElement>(".timer-toggle")!;
    toggle.textContent = timer.state === "paused" ? "▶" : "⏸";
    toggle.disabled = timer.state === "expired";
  }

  private async toggle(timerId: string): Promise<void> {
    const timer = await this.api.pollTimer(timerId);
    if (timer.state === "running") this.renderTimer(await this.api.pauseTimer(timerId));
    else if (timer.state === "paused") this.renderTimer(await this.api.resumeTimer(timerId));
  }
}
