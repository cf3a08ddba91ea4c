export * from "./types.js";
export * from "./colors.js";
export * from "./geometry.js";
export * from "./client.js";
export * from "./state.js";
export * from "./review.js";
export * from "./panels/projection.js";
export * from "./panels/distribution.js";
export * from "./panels/boxplots.js";
export * from "./panels/tableHeatmap.js";
export * from "./panels/inversePolar.js";
export * from "./panels/tracker.js";
