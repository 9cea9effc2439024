export * from "./types.js";
export * from "./gestures.js";
export * from "./feedback.js";
export * from "./plant.js";
export * from "./viewstate.js";
export * from "./api.js";
