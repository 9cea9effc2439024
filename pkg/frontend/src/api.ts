// Typed client over the REST service. The API base address comes from one
// environment-style variable (BIASGAME_API), resolved once at construction.
// State-changing calls attach a generated request id so retries are
// idempotent server-side.

import type {
  ApiError,
  PaperView,
  PlayerView,
  RoundView,
  SentenceLabel,
  SubmitResponse,
  TopicView,
  TutorialLevelView,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(readonly status: number, readonly detail: ApiError) {
    super(`${detail.code}: ${detail.message}`);
  }
}

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; json(): Promise<unknown>; text(): Promise<unknown> }>;

function defaultBase(): string {
  const fromGlobal = (globalThis as Record<string, unknown>)["BIASGAME_API"];
  if (typeof fromGlobal === "string" && fromGlobal) return fromGlobal;
  const env = (globalThis as { process?: { env?: Record<string, string | undefined> } }).process?.env;
  return env?.["BIASGAME_API"] ?? "http://127.0.0.1:8000";
}

let requestCounter = 0;

function nextRequestId(): string {
  requestCounter += 1;
  return `ui-${Date.now()}-${requestCounter}`;
}

export class ApiClient {
  private token: string | null = null;
  readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base?: string, fetchFn?: FetchLike) {
    this.base = (base ?? defaultBase()).replace(/\/$/, "");
    this.fetchFn = fetchFn ?? (globalThis.fetch as unknown as FetchLike);
  }

  setToken(token: string): void {
    this.token = token;
  }

  private headers(): Record<string, string> {
    const h: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) h["Authorization"] = `Bearer ${this.token}`;
    return h;
  }

  private async request<T>(method: string, path: string, body?: Record<string, unknown>): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method, headers: this.headers() };
    if (body !== undefined) {
      init.body = JSON.stringify({ request_id: nextRequestId(), ...body });
    }
    const resp = await this.fetchFn(`${this.base}${path}`, init);
    const data = (await resp.json()) as unknown;
    if (resp.status >= 400) {
      throw new ApiRequestError(resp.status, data as ApiError);
    }
    return data as T;
  }

  async register(profile: {
    gender: string;
    age: number;
    education: string;
    english: string;
    leaning: number;
    news_frequency: string;
    outlets?: string[];
  }): Promise<{ token: string; player: PlayerView }> {
    const out = await this.request<{ token: string; player: PlayerView }>("POST", "/players", profile);
    this.setToken(out.token);
    return out;
  }

  me(): Promise<PlayerView> {
    return this.request("GET", "/players/me");
  }

  tutorialLevel(level: number): Promise<TutorialLevelView> {
    return this.request("GET", `/tutorial/${level}`);
  }

  submitTutorial(level: number, answers: { ref: string; label: SentenceLabel; marked_tokens: number[] }[]) {
    return this.request<{
      level: number;
      verdicts: boolean[];
      tutorial_complete: boolean;
      next_level: number | null;
      unlocked_modes: string[];
    }>("POST", `/tutorial/${level}`, { answers });
  }

  startRound(mode: string, topic?: string, breaking = false): Promise<RoundView> {
    return this.request("POST", "/rounds", { mode, topic: topic ?? null, breaking });
  }

  startAssessment(): Promise<RoundView> {
    return this.request("POST", "/assessment", {});
  }

  submitSentence(roundId: string, sentenceId: string, label: SentenceLabel, marks: number[]): Promise<SubmitResponse> {
    return this.request("POST", `/rounds/${roundId}/sentence`, {
      sentence_id: sentenceId,
      label,
      marked_tokens: marks,
    });
  }

  quickNext(roundId: string, sentenceId: string) {
    return this.request<{ finished: boolean; timer_remaining: number; next_sentence: string | null }>(
      "POST", `/rounds/${roundId}/sentence`, { sentence_id: sentenceId, action: "next" });
  }

  tap(roundId: string, sentenceId: string, tokenIndex: number) {
    return this.request<{
      verdict: string;
      timer_delta: number;
      currency_delta: number;
      timer_remaining: number;
    }>("POST", `/rounds/${roundId}/tap`, { sentence_id: sentenceId, token_index: tokenIndex });
  }

  critique(roundId: string, sentenceId: string, decision: "agree" | "disagree",
           label?: SentenceLabel, marks?: number[]): Promise<SubmitResponse> {
    return this.request("POST", `/rounds/${roundId}/critique`, {
      sentence_id: sentenceId,
      decision,
      label: label ?? null,
      marked_tokens: marks ?? [],
    });
  }

  paper(unresolved?: boolean): Promise<PaperView> {
    const query = unresolved === undefined ? "" : `?unresolved=${unresolved}`;
    return this.request("GET", `/players/me/paper${query}`);
  }

  collect(sentenceId: string) {
    return this.request<{ collected: unknown[] }>(
      "POST", `/players/me/paper/${sentenceId}/collect`, {});
  }

  topics(): Promise<TopicView[]> {
    return this.request("GET", "/topics");
  }

  purchase(item: "topic" | "quota_refill", topicId: string): Promise<PlayerView> {
    return this.request("POST", "/purchases", { item, topic_id: topicId });
  }
}
