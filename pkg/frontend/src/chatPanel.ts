// Chat panel: typed messages plus a push-to-talk button that feeds the same
// endpoint with a transcript. One request in flight at a time; the send and
// talk controls stay disabled until the reply lands.

import type { SousChefApi } from "./api.js";
import { listenOnce, speechAvailable } from "./speech.js";
import type { ChatTurn } from "./types.js";

export class ChatPanel {
  private busy = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SousChefApi,
    private readonly sessionId: () => string,
    private readonly language: () => string,
  ) {
    const form = root.querySelector<HTMLFormElement>(".chat-form");
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const input = form.querySelector<HTMLInputElement>("input");
      const text = input?.value.trim();
      if (!text) return;
      void this.send(text, "text").then(() => {
        if (input) input.value = "";
      });
    });

    const talk = root.querySelector<HTMLButtonElement>(".push-to-talk");
    if (talk && !speechAvailable()) talk.disabled = true;
    talk?.addEventListener("click", () => {
      void listenOnce(this.language())
        .then((transcript) => this.send(transcript, "voice_transcript"))
        .catch((error: Error) => this.note(error.message));
    });
  }

  appendTurn(turn: ChatTurn): void {
    const log = this.root.querySelector<HTMLElement>(".chat-log");
    if (!log) return;
    const entry = this.root.ownerDocument.createElement("p");
    entry.className = `chat-turn ${turn.role}`;
    if (turn.modality === "voice_transcript") entry.classList.add("voice");
    entry.textContent = turn.content;
    log.appendChild(entry);
    log.scrollTop = log.scrollHeight;
  }

  private note(message: string): void {
    const log = this.root.querySelector<HTMLElement>(".chat-log");
    if (!log) return;
    const entry = this.root.ownerDocument.createElement("p");
    entry.className = "chat-note";
    entry.textContent = message;
    log.appendChild(entry);
  }

  private setBusy(value: boolean): void {
    this.busy = value;
    this.root
      .querySelectorAll<HTMLButtonElement>("button, input")
      .forEach((el) => (el.disabled = value));
  }

  async send(text: string, modality: "text" | "voice_transcript", fixture?: string): Promise<void> {
    if (this.busy) return;
    this.setBusy(true);
    this.appendTurn({
      role: "user",
      modality,
      content: text,
      timestamp: new Date().toISOString(),
      unanswered: false,
    });
    try {
      const response = await this.api.chat(this.sessionId(), text, modality, fixture);
      this.appendTurn(response.turn);
    } catch (error) {
      this.note((error as Error).message);
    } finally {
      this.setBusy(false);
    }
  }
}
