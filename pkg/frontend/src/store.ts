import type { CompareResponse, TokenizeResponse, TokenizerInfo } from "./types.js";

export interface PlaygroundState {
  text: string;
  available: TokenizerInfo[];
  selected: string[];
  baseline: string;
  tokenizeResponse: TokenizeResponse | null;
  compareResponse: CompareResponse | null;
  error: string | null;
}

export function initialState(): PlaygroundState {
  return {
    text: "",
    available: [],
    selected: [],
    baseline: "codepoints",
    tokenizeResponse: null,
    compareResponse: null,
    error: null,
  };
}

type Listener = (state: PlaygroundState) => void;

/** Single mutation point; every update funnels through here serially. */
export class Store {
  private state: PlaygroundState;
  private listeners: Listener[] = [];

  constructor(state: PlaygroundState = initialState()) {
    this.state = state;
  }

  get(): PlaygroundState {
    return this.state;
  }

  update(patch: Partial<PlaygroundState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }
}

/**
 * Runs at most one task at a time. A task submitted while another is running
 * becomes the single pending task (newer submissions replace it), and runs as
 * soon as the current one settles — so typing triggers at most one in-flight
 * request, always ending with the latest input.
 */
export class SingleFlight {
  private running = false;
  private pending: (() => Promise<void>) | null = null;

  async submit(task: () => Promise<void>): Promise<void> {
    if (this.running) {
      this.pending = task;
      return;
    }
    this.running = true;
    try {
      await task();
    } finally {
      this.running = false;
      const next = this.pending;
      this.pending = null;
      if (next) await this.submit(next);
    }
  }

  get busy(): boolean {
    return this.running;
  }
}

/** Trailing-edge debouncer for keystroke bursts. */
export class Debouncer {
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(private readonly delayMs: number) {}

  schedule(action: () => void): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      action();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
  }
}
