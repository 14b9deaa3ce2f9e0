/** Response shapes of the tokenizer service; the UI never recomputes these. */

export interface TokenPiece {
  display: string;
  id: number;
  byte_span: [number, number];
  special: boolean;
}

export interface TokenizeResult {
  name: string;
  token_count: number;
  source_text: string;
  breakdown: TokenPiece[];
}

export interface TokenizeResponse {
  results: TokenizeResult[];
}

export interface TokenizerInfo {
  name: string;
  vocab_size: number;
  algorithm: string;
  fallback: string;
}

export interface ThroughputInfo {
  bytes_processed: number;
  tokens_emitted: number;
  wall_time: number;
  bytes_per_sec: number;
  tokens_per_sec: number;
}

export interface ReportRow {
  name: string;
  vocab_size: number;
  avg_nsl: number;
  avg_nsl_display: string;
  avg_nsl_exact: string;
  total_tokens: number;
  coverage: number;
  throughput: ThroughputInfo;
  length_histogram: { bucket_width: number; counts: number[] };
}

export interface CompareResponse {
  baseline: string;
  metadata: {
    timestamp: string;
    corpus_hash: string;
    record_count: number;
    tool_version: string;
  };
  rows: ReportRow[];
}
