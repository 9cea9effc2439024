// Screen state machine. Round screens stay unreachable until the tutorial is
// complete; locked modes render as disabled tiles with a lock icon.

import type { PlayerView, RoundView } from "./types.js";

export type Screen =
  | "onboarding"
  | "survey"
  | "tutorial"
  | "home"
  | "round"
  | "summary"
  | "paper"
  | "shop"
  | "missing_content";

export interface ViewState {
  screen: Screen;
  player: PlayerView | null;
  round: RoundView | null;
}

export const ALL_MODES = ["context", "publish", "quickwords", "coop", "critique"] as const;

export interface ModeTile {
  mode: string;
  enabled: boolean;
  locked: boolean;
}

export function initialState(): ViewState {
  return { screen: "onboarding", player: null, round: null };
}

export function homeTiles(player: PlayerView): ModeTile[] {
  return ALL_MODES.map((mode) => ({
    mode,
    enabled: player.unlocked_modes.includes(mode),
    locked: !player.unlocked_modes.includes(mode),
  }));
}

export function canNavigate(state: ViewState, target: Screen): boolean {
  if (state.player === null) {
    return target === "onboarding" || target === "survey";
  }
  if (!state.player.tutorial_complete) {
    // pre-completion players live in the tutorial; no rounds, no shop
    return target === "tutorial" || target === "missing_content";
  }
  if (target === "round") {
    return state.round !== null;
  }
  return target !== "onboarding" && target !== "survey";
}

export type ViewEvent =
  | { kind: "registered"; player: PlayerView }
  | { kind: "player_updated"; player: PlayerView }
  | { kind: "tutorial_complete"; player: PlayerView }
  | { kind: "round_started"; round: RoundView }
  | { kind: "round_finished" }
  | { kind: "navigate"; target: Screen }
  | { kind: "content_missing" };

export function reduce(state: ViewState, event: ViewEvent): ViewState {
  switch (event.kind) {
    case "registered":
      return { screen: "tutorial", player: event.player, round: null };
    case "player_updated":
      return { ...state, player: event.player };
    case "tutorial_complete":
      return { screen: "home", player: event.player, round: null };
    case "round_started":
      if (!state.player?.tutorial_complete) return state;
      return { ...state, screen: "round", round: event.round };
    case "round_finished":
      return { ...state, screen: "summary", round: state.round };
    case "content_missing":
      return { ...state, screen: "missing_content" };
    case "navigate":
      return canNavigate(state, event.target) ? { ...state, screen: event.target } : state;
  }
}
