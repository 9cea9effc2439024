// Feedback rendering. Pure mapping from server verdicts to visual state:
// hits green, wrong marks red, missed words black-outlined, delayed feedback
// yellow everywhere. The ground-truth label shows above the card on a miss.
// Nothing here computes a verdict or a reward; it only restyles what the
// server said.

import type { PaperEntryView, SentenceVerdict, SubmitResponse, TokenVerdict } from "./types.js";

export type TokenColor = "green" | "red" | "black_outline" | "yellow" | "none";
export type CardColor = "green" | "red" | "yellow";
export type CardIcon = "check" | "cross" | "dash";

export interface CardVisual {
  cardColor: CardColor;
  icon: CardIcon;
  showTruthAboveCard: boolean;
  tokenColors: Record<number, TokenColor>;
  accuracyText: string | null;
  rewardText: string | null;
}

const TOKEN_COLORS: Record<TokenVerdict, TokenColor> = {
  hit: "green",
  wrong: "red",
  missed: "black_outline",
  stopword_adjacent_ok: "green",
  pending: "yellow",
  untouched: "none",
};

const CARD_BY_VERDICT: Record<SentenceVerdict, { color: CardColor; icon: CardIcon }> = {
  hit: { color: "green", icon: "check" },
  miss: { color: "red", icon: "cross" },
  pending: { color: "yellow", icon: "dash" },
};

export function renderFeedback(response: SubmitResponse): CardVisual {
  const card = CARD_BY_VERDICT[response.sentence_verdict];
  const tokenColors: Record<number, TokenColor> = {};
  for (const [index, verdict] of Object.entries(response.token_verdicts)) {
    tokenColors[Number(index)] = TOKEN_COLORS[verdict];
  }
  return {
    cardColor: card.color,
    icon: card.icon,
    showTruthAboveCard: response.sentence_verdict === "miss",
    tokenColors,
    accuracyText:
      response.combined_accuracy === null
        ? null
        : `${Math.round(response.combined_accuracy * 100)}% correct`,
    rewardText:
      response.feedback_kind === "delayed"
        ? null
        : `$${response.reward_currency + response.round_bonus}`,
  };
}

export function paperEntryIcon(entry: PaperEntryView): CardIcon {
  if (entry.status === "hit") return "check";
  if (entry.status === "miss") return "cross";
  return "dash"; // pending, resolvable, and collected word-only entries
}

export function paperEntryColor(entry: PaperEntryView): CardColor {
  if (entry.status === "hit") return "green";
  if (entry.status === "miss") return "red";
  return "yellow";
}

// Yellow dot on the navigation bar when resolved feedback waits uncollected.
export function paperBadgeVisible(newFeedback: boolean): boolean {
  return newFeedback;
}
