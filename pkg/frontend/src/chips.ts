import { colorForIndex } from "./colors.js";
import type { TokenizeResult, TokenPiece } from "./types.js";

/** Display model for one token chip. */
export interface Chip {
  text: string;
  id: number;
  color: string;
  special: boolean;
  byteSpan: [number, number];
  hover: string;
}

/** Build the chip row for one tokenizer's result. Pure; no metrics recomputed. */
export function buildChips(result: TokenizeResult): Chip[] {
  return result.breakdown.map((piece, index) => ({
    text: piece.display,
    id: piece.id,
    color: colorForIndex(index),
    special: piece.special,
    byteSpan: piece.byte_span,
    hover: `id ${piece.id} · bytes ${piece.byte_span[0]}..${piece.byte_span[1]}`,
  }));
}

/**
 * Check that non-special chips exactly tile the normalized source text:
 * contiguous byte spans, no gaps or overlaps, covering every byte.
 */
export function chipsTileSource(chips: Chip[], sourceText: string): boolean {
  const totalBytes = new TextEncoder().encode(sourceText).length;
  let position = 0;
  for (const chip of chips) {
    if (chip.special) {
      if (chip.byteSpan[0] !== chip.byteSpan[1]) return false;
      continue;
    }
    if (chip.byteSpan[0] !== position || chip.byteSpan[1] < chip.byteSpan[0]) return false;
    position = chip.byteSpan[1];
  }
  return position === totalBytes;
}

/** Null when the payload looks like a tokenize response, else a message. */
export function validateTokenizeResponse(data: unknown): string | null {
  if (typeof data !== "object" || data === null) return "response is not an object";
  const results = (data as { results?: unknown }).results;
  if (!Array.isArray(results)) return "response has no results array";
  for (const entry of results) {
    const result = entry as Partial<TokenizeResult>;
    if (typeof result.name !== "string") return "result missing tokenizer name";
    if (typeof result.token_count !== "number") return "result missing token_count";
    if (!Array.isArray(result.breakdown)) return "result missing breakdown";
    for (const piece of result.breakdown as Partial<TokenPiece>[]) {
      if (typeof piece.display !== "string" || typeof piece.id !== "number")
        return "breakdown item malformed";
      if (!Array.isArray(piece.byte_span) || piece.byte_span.length !== 2)
        return "breakdown item has no byte span";
    }
  }
  return null;
}
