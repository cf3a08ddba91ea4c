/** Shared visual encodings: class fills, type outlines, sampling bins, and
 * the 10-bin diverging scale used by the table heatmap. */

import type { InstanceTypeName } from "./types.js";

export const CLASS_PALETTE = [
  "#7b3294", // purple
  "#e66101", // orange
  "#0571b0", // blue
  "#008837", // green
  "#c51b7d", // magenta
  "#a6611a", // brown
];

export function classColor(classIndex: number): string {
  return CLASS_PALETTE[classIndex % CLASS_PALETTE.length];
}

/** 4-step grayscale outline, safe lightest to outlier darkest. */
export const TYPE_GRAYSCALE: Record<InstanceTypeName, string> = {
  safe: "#d9d9d9",
  borderline: "#969696",
  rare: "#525252",
  outlier: "#000000",
};

export const US_COLOR = "#8b0000"; // dark red removal bin
export const OS_COLOR = "#006400"; // dark green addition bin

export const METRIC_COLORS = {
  balanced_accuracy: "#17becf", // bright turquoise
  f1_macro: "#c20078", // deep magenta
};

/** Brown-to-teal diverging scale, darkest brown at 0 to darkest teal at 1. */
export const DIVERGING_10 = [
  "#543005", "#8c510a", "#bf812d", "#dfc27d", "#f6e8c3",
  "#c7eae5", "#80cdc1", "#35978f", "#01665e", "#003c30",
];

/** Bin a normalized value into the 10 diverging bins; out-of-range values
 * clamp, which only ever happens for test rows displayed against train
 * normalization. */
export function divergingBin(value: number): number {
  const clamped = Math.min(Math.max(value, 0), 1);
  return Math.min(Math.floor(clamped * 10), 9);
}

export function divergingColor(value: number): string {
  return DIVERGING_10[divergingBin(value)];
}
