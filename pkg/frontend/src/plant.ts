// The pedagogical plant: dialogue frames per tutorial level and a growth
// stage that only ever moves forward with the player's level.

import type { TutorialLevelView } from "./types.js";

export const PLANT_STAGES = ["seed", "sprout", "seedling", "budding", "blossom"] as const;
export type PlantStage = (typeof PLANT_STAGES)[number];

export interface DialogueFrame {
  line: string;
  lineIndex: number;
  lastLine: boolean;
  objective: string;
  stage: PlantStage;
}

export function plantStage(level: number): PlantStage {
  const idx = Math.max(0, Math.min(PLANT_STAGES.length - 1, level - 1));
  return PLANT_STAGES[idx]!;
}

export class MissingContentError extends Error {
  readonly code = "missing_content";
}

export function plantDialogue(content: TutorialLevelView | null, step: number): DialogueFrame {
  if (content === null || content.dialogue.length === 0) {
    throw new MissingContentError("tutorial content unavailable");
  }
  const lineIndex = Math.max(0, Math.min(content.dialogue.length - 1, step));
  return {
    line: content.dialogue[lineIndex]!,
    lineIndex,
    lastLine: lineIndex === content.dialogue.length - 1,
    objective: content.objective,
    stage: plantStage(content.plant_stage),
  };
}
