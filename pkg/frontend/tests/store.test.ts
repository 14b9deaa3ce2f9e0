import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Debouncer, SingleFlight, Store, initialState } from "../src/store.js";

function deferred<T>() {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

describe("SingleFlight", () => {
  it("runs a single task immediately", async () => {
    const flight = new SingleFlight();
    let ran = 0;
    await flight.submit(async () => {
      ran += 1;
    });
    expect(ran).toBe(1);
  });

  it("never has two tasks in flight at once", async () => {
    const flight = new SingleFlight();
    let active = 0;
    let peak = 0;
    const gates = [deferred<void>(), deferred<void>(), deferred<void>()];
    const task = (gate: Promise<void>) => async () => {
      active += 1;
      peak = Math.max(peak, active);
      await gate;
      active -= 1;
    };
    const first = flight.submit(task(gates[0].promise));
    const second = flight.submit(task(gates[1].promise));
    const third = flight.submit(task(gates[2].promise));
    expect(flight.busy).toBe(true);
    gates.forEach((gate) => gate.resolve());
    await Promise.all([first, second, third]);
    expect(peak).toBe(1);
  });

  it("coalesces queued submissions to the latest", async () => {
    const flight = new SingleFlight();
    const gate = deferred<void>();
    const seen: string[] = [];
    const running = flight.submit(async () => {
      seen.push("first");
      await gate.promise;
    });
    void flight.submit(async () => {
      seen.push("second");
    });
    void flight.submit(async () => {
      seen.push("third");
    });
    gate.resolve();
    await running;
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(seen).toEqual(["first", "third"]);
  });

  it("releases the slot when a task throws", async () => {
    const flight = new SingleFlight();
    await expect(
      flight.submit(async () => {
        throw new Error("boom");
      }),
    ).rejects.toThrow("boom");
    expect(flight.busy).toBe(false);
    let ran = false;
    await flight.submit(async () => {
      ran = true;
    });
    expect(ran).toBe(true);
  });
});

describe("Debouncer", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("fires once on the trailing edge of a burst", () => {
    const debouncer = new Debouncer(300);
    let fired = 0;
    for (let i = 0; i < 5; i++) {
      debouncer.schedule(() => {
        fired += 1;
      });
      vi.advanceTimersByTime(100);
    }
    expect(fired).toBe(0);
    vi.advanceTimersByTime(300);
    expect(fired).toBe(1);
  });

  it("cancel drops the pending action", () => {
    const debouncer = new Debouncer(100);
    let fired = 0;
    debouncer.schedule(() => {
      fired += 1;
    });
    debouncer.cancel();
    vi.advanceTimersByTime(500);
    expect(fired).toBe(0);
  });
});

describe("Store", () => {
  it("serializes updates through one subscription point", () => {
    const store = new Store(initialState());
    const texts: string[] = [];
    store.subscribe((state) => texts.push(state.text));
    store.update({ text: "a" });
    store.update({ text: "ab" });
    expect(texts).toEqual(["a", "ab"]);
    expect(store.get().baseline).toBe("codepoints");
  });

  it("patches do not clobber unrelated fields", () => {
    const store = new Store(initialState());
    store.update({ selected: ["x"] });
    store.update({ text: "hello" });
    expect(store.get().selected).toEqual(["x"]);
  });
});
