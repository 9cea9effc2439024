// Swipe/tap annotation mechanics. Left means "not biased", right means
// "biased"; buttons mirror the swipes one-to-one so every action has a
// non-gesture path. A card accepts exactly one submission; later gestures
// on a settled or in-flight card are ignored.

import type { SentenceCard, SentenceLabel, SubmitResponse } from "./types.js";

export type Gesture = "swipe_left" | "swipe_right" | "button_left" | "button_right";

export interface SubmissionPayload {
  label: SentenceLabel;
  marked_tokens: number[];
}

const GESTURE_LABELS: Record<Gesture, SentenceLabel> = {
  swipe_left: "not_biased",
  button_left: "not_biased",
  swipe_right: "biased",
  button_right: "biased",
};

export function gestureToAnnotation(gesture: Gesture, marks: Iterable<number>): SubmissionPayload {
  return {
    label: GESTURE_LABELS[gesture],
    marked_tokens: [...new Set(marks)].sort((a, b) => a - b),
  };
}

export type CardPhase = "open" | "submitting" | "settled";

// Per-card annotation state machine. Marks toggle while the card is open;
// stopword tokens are not tappable. submit() hands out the payload once and
// locks the card; the verdict can only arrive via settle(server response).
export class AnnotationCard {
  readonly card: SentenceCard;
  private markSet = new Set<number>();
  private phase: CardPhase = "open";
  private response: SubmitResponse | null = null;

  constructor(card: SentenceCard) {
    this.card = card;
  }

  get state(): CardPhase {
    return this.phase;
  }

  get marks(): number[] {
    return [...this.markSet].sort((a, b) => a - b);
  }

  get serverResponse(): SubmitResponse | null {
    return this.response;
  }

  toggleMark(index: number): boolean {
    if (this.phase !== "open") return false;
    const token = this.card.tokens.find((t) => t.index === index);
    if (!token || token.is_stopword) return false;
    if (this.markSet.has(index)) {
      this.markSet.delete(index);
    } else {
      this.markSet.add(index);
    }
    return true;
  }

  submit(gesture: Gesture): SubmissionPayload | null {
    if (this.phase !== "open") return null;
    this.phase = "submitting";
    return gestureToAnnotation(gesture, this.markSet);
  }

  settle(response: SubmitResponse): void {
    if (this.phase !== "submitting") return;
    this.response = response;
    this.phase = "settled";
  }

  // transport failure: reopen so the player can retry (no verdict was shown)
  abort(): void {
    if (this.phase === "submitting") this.phase = "open";
  }
}
