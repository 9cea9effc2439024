import { describe, expect, it } from "vitest";

import {
  paperBadgeVisible,
  paperEntryColor,
  paperEntryIcon,
  renderFeedback,
} from "../src/feedback.js";
import type { PaperEntryView, SubmitResponse } from "../src/types.js";

function response(overrides: Partial<SubmitResponse>): SubmitResponse {
  return {
    feedback_kind: "direct",
    sentence_verdict: "hit",
    token_verdicts: {},
    combined_accuracy: 1,
    word_hits: 0,
    reward_currency: 10,
    reward_xp: 10,
    round_completed: false,
    round_bonus: 0,
    ...overrides,
  };
}

describe("renderFeedback", () => {
  it("sentence hit turns the card green with a check", () => {
    const v = renderFeedback(response({ sentence_verdict: "hit" }));
    expect(v.cardColor).toBe("green");
    expect(v.icon).toBe("check");
    expect(v.showTruthAboveCard).toBe(false);
  });

  it("miss turns the card red with a cross and the truth label above", () => {
    const v = renderFeedback(response({ sentence_verdict: "miss", reward_currency: 0 }));
    expect(v.cardColor).toBe("red");
    expect(v.icon).toBe("cross");
    expect(v.showTruthAboveCard).toBe(true);
  });

  it("word verdicts map to green/red/black-outline", () => {
    const v = renderFeedback(response({
      sentence_verdict: "miss",
      token_verdicts: { "2": "hit", "5": "wrong", "7": "missed", "3": "stopword_adjacent_ok", "1": "untouched" },
    }));
    expect(v.tokenColors[2]).toBe("green");
    expect(v.tokenColors[5]).toBe("red");
    expect(v.tokenColors[7]).toBe("black_outline");
    expect(v.tokenColors[3]).toBe("green"); // stopword next to biased words reads as right
    expect(v.tokenColors[1]).toBe("none");
  });

  it("delayed feedback is yellow everywhere with a dash", () => {
    const v = renderFeedback(response({
      feedback_kind: "delayed",
      sentence_verdict: "pending",
      token_verdicts: { "2": "pending" },
      combined_accuracy: null,
      reward_currency: 0,
    }));
    expect(v.cardColor).toBe("yellow");
    expect(v.icon).toBe("dash");
    expect(v.tokenColors[2]).toBe("yellow");
    expect(v.accuracyText).toBeNull();
    expect(v.rewardText).toBeNull(); // nothing to collect yet
  });

  it("accuracy and reward text mirror the server values only", () => {
    const v = renderFeedback(response({ combined_accuracy: 0.8, reward_currency: 12, round_bonus: 30 }));
    expect(v.accuracyText).toBe("80% correct");
    expect(v.rewardText).toBe("$42");
  });
});

describe("paper section", () => {
  const entry = (status: PaperEntryView["status"]): PaperEntryView => ({
    sentence_id: "s1",
    mode: "publish",
    status,
    collected: status === "hit" || status === "miss",
    reward_currency: 0,
    reward_xp: 0,
  });

  it("icons: green check on hit, red cross on miss, yellow dash while waiting", () => {
    expect(paperEntryIcon(entry("hit"))).toBe("check");
    expect(paperEntryColor(entry("hit"))).toBe("green");
    expect(paperEntryIcon(entry("miss"))).toBe("cross");
    expect(paperEntryColor(entry("miss"))).toBe("red");
    expect(paperEntryIcon(entry("pending"))).toBe("dash");
    expect(paperEntryColor(entry("pending"))).toBe("yellow");
    expect(paperEntryIcon(entry("resolvable"))).toBe("dash");
  });

  it("navigation badge follows the server's new_feedback flag", () => {
    expect(paperBadgeVisible(true)).toBe(true);
    expect(paperBadgeVisible(false)).toBe(false);
  });
});
