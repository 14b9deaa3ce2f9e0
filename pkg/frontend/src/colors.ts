// Adjacent tokens cycle through distinct hues so boundaries stay visible even
// in unfamiliar scripts; coloring is positional, not per token id.
export const CHIP_COLORS = [
  "#bfdbfe", // blue
  "#bbf7d0", // green
  "#fde68a", // amber
  "#fbcfe8", // pink
  "#c7d2fe", // indigo
  "#a7f3d0", // teal
  "#fecaca", // red
  "#e9d5ff", // purple
];

export function colorForIndex(index: number): string {
  return CHIP_COLORS[index % CHIP_COLORS.length];
}
