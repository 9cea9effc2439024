// Wire types mirroring the REST service. The client never invents values for
// any of these: verdicts, rewards, and labels always arrive from the server.

export type SentenceLabel = "biased" | "not_biased";

export type TokenVerdict =
  | "hit"
  | "wrong"
  | "missed"
  | "stopword_adjacent_ok"
  | "pending"
  | "untouched";

export type SentenceVerdict = "hit" | "miss" | "pending";

export type FeedbackKind = "direct" | "delayed";

export interface TokenView {
  index: number;
  surface: string;
  is_stopword: boolean;
}

export interface SentenceCard {
  id: string;
  text: string;
  tokens: TokenView[];
  shown_annotation?: { label: SentenceLabel; marked_tokens: number[] };
}

export interface RoundView {
  id: string;
  mode: string;
  topic: string | null;
  breaking: boolean;
  cursor: number;
  completed: boolean;
  timer_remaining: number | null;
  sentences: SentenceCard[];
}

export interface SubmitResponse {
  feedback_kind: FeedbackKind;
  sentence_verdict: SentenceVerdict;
  token_verdicts: Record<string, TokenVerdict>;
  combined_accuracy: number | null;
  word_hits: number;
  reward_currency: number;
  reward_xp: number;
  round_completed: boolean;
  round_bonus: number;
}

export interface PlayerView {
  id: string;
  currency: number;
  xp: number;
  level: number;
  skill: number;
  tutorial_level: number;
  tutorial_complete: boolean;
  assessment_done: boolean;
  unlocked_modes: string[];
  streak_days: number;
}

export interface TopicView {
  id: string;
  name: string;
  unlocked: boolean;
  price: number;
  quota_remaining: number;
}

export interface PaperEntryView {
  sentence_id: string;
  mode: string;
  status: "hit" | "miss" | "pending" | "resolvable" | "resolved";
  collected: boolean;
  reward_currency: number;
  reward_xp: number;
}

export interface PaperView {
  new_feedback: boolean;
  entries: PaperEntryView[];
}

export interface TutorialLevelView {
  level: number;
  objective: string;
  dialogue: string[];
  plant_stage: number;
  sentences: { ref: string; text: string; tokens: TokenView[] }[];
}

export interface ApiError {
  code: string;
  message: string;
  retryable: boolean;
}
