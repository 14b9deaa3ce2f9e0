import type { CompareResponse, TokenizeResponse, TokenizerInfo } from "./types.js";

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    } catch {
      // keep the status code
    }
    throw new Error(`request failed: ${detail}`);
  }
  return (await response.json()) as T;
}

export function fetchTokenizers(): Promise<TokenizerInfo[]> {
  return request<TokenizerInfo[]>("/api/tokenizers");
}

export function tokenize(text: string, tokenizers: string[]): Promise<TokenizeResponse> {
  return request<TokenizeResponse>("/api/tokenize", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ text, tokenizers }),
  });
}

export function compare(
  texts: string[],
  tokenizers: string[],
  baseline: string,
): Promise<CompareResponse> {
  return request<CompareResponse>("/api/compare", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ texts, tokenizers, baseline }),
  });
}
