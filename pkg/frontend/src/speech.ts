// Push-to-talk via the browser's speech recognition. The service only ever
// sees the final transcript; audio never leaves the page.

type RecognitionCtor = new () => SpeechRecognitionLike;

interface SpeechRecognitionLike {
  lang: string;
  interimResults: boolean;
  maxAlternatives: number;
  onresult: ((event: { results: ArrayLike<ArrayLike<{ transcript: string }>> }) => void) | null;
  onerror: ((event: { error: string }) => void) | null;
  onend: (() => void) | null;
  start(): void;
  stop(): void;
}

function recognitionCtor(): RecognitionCtor | null {
  const w = window as unknown as Record<string, unknown>;
  return (w.SpeechRecognition as RecognitionCtor | undefined)
    ?? (w.webkitSpeechRecognition as RecognitionCtor | undefined)
    ?? null;
}

export function speechAvailable(): boolean {
  return recognitionCtor() !== null;
}

/**
 * Listen once and resolve with the transcript. Rejects if recognition is
 * unsupported, errors, or hears nothing.
 */
export function listenOnce(lang: string): Promise<string> {
  const Ctor = recognitionCtor();
  if (!Ctor) {
    return Promise.reject(new Error("speech recognition not supported in this browser"));
  }
  return new Promise((resolve, reject) => {
    const recognition = new Ctor();
    recognition.lang = lang;
    recognition.interimResults = false;
    recognition.maxAlternatives = 1;
    let transcript = "";
    recognition.onresult = (event) => {
      transcript = event.results[0][0].transcript;
    };
    recognition.onerror = (event) => reject(new Error(`speech error: ${event.error}`));
    recognition.onend = () => {
      if (transcript.trim()) resolve(transcript);
      else reject(new Error("no speech detected"));
    };
    recognition.start();
  });
}
