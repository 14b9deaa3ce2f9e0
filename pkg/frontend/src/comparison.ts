import type { CompareResponse, ReportRow } from "./types.js";

/** One table row, carrying only server-derived numbers. */
export interface RowView {
  name: string;
  vocabSize: number;
  avgNsl: number;
  avgNslDisplay: string;
  totalTokens: number;
  coverage: number;
  tokensPerSec: number;
  isBaseline: boolean;
}

export type SortKey = "name" | "vocabSize" | "avgNsl" | "totalTokens" | "coverage";

export function buildRows(report: CompareResponse): RowView[] {
  return report.rows.map((row: ReportRow) => ({
    name: row.name,
    vocabSize: row.vocab_size,
    avgNsl: row.avg_nsl,
    avgNslDisplay: row.avg_nsl_display,
    totalTokens: row.total_tokens,
    coverage: row.coverage,
    tokensPerSec: row.throughput.tokens_per_sec,
    isBaseline: row.name === report.baseline,
  }));
}

/** Stable sort; default view is avg NSL ascending (lower is better). */
export function sortRows(rows: RowView[], key: SortKey = "avgNsl", ascending = true): RowView[] {
  const decorated = rows.map((row, index) => ({ row, index }));
  decorated.sort((a, b) => {
    const left = a.row[key];
    const right = b.row[key];
    let order: number;
    if (typeof left === "string" && typeof right === "string") {
      order = left < right ? -1 : left > right ? 1 : 0;
    } else {
      order = (left as number) - (right as number);
    }
    if (order === 0) order = a.index - b.index;
    return ascending ? order : -order;
  });
  return decorated.map((entry) => entry.row);
}

export interface Bar {
  name: string;
  value: number;
  label: string;
  widthPercent: number;
  isBaseline: boolean;
}

/** Horizontal NSL bars scaled to the worst (largest) value. */
export function buildBars(rows: RowView[]): Bar[] {
  const largest = Math.max(...rows.map((row) => row.avgNsl), 0);
  return sortRows(rows, "avgNsl", true).map((row) => ({
    name: row.name,
    value: row.avgNsl,
    label: row.avgNslDisplay,
    widthPercent: largest > 0 ? (row.avgNsl / largest) * 100 : 0,
    isBaseline: row.isBaseline,
  }));
}

export function validateCompareResponse(data: unknown): string | null {
  if (typeof data !== "object" || data === null) return "response is not an object";
  const report = data as Partial<CompareResponse>;
  if (typeof report.baseline !== "string") return "report missing baseline";
  if (!Array.isArray(report.rows)) return "report missing rows";
  for (const row of report.rows as Partial<ReportRow>[]) {
    if (typeof row.name !== "string") return "row missing name";
    if (typeof row.avg_nsl !== "number") return "row missing avg_nsl";
    if (typeof row.avg_nsl_display !== "string") return "row missing avg_nsl_display";
    if (typeof row.total_tokens !== "number") return "row missing total_tokens";
  }
  return null;
}
