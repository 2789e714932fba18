import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce, HYPERPARAM_DEBOUNCE_MS } from "../src/debounce";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst into the trailing call", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 400);
    push(1);
    vi.advanceTimersByTime(100);
    push(2);
    vi.advanceTimersByTime(100);
    push(3);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(400);
    expect(calls).toEqual([3]);
  });

  it("fires again for a second burst", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 400);
    push(1);
    vi.advanceTimersByTime(400);
    push(2);
    vi.advanceTimersByTime(400);
    expect(calls).toEqual([1, 2]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 400);
    push(1);
    push.cancel();
    vi.advanceTimersByTime(1000);
    expect(calls).toEqual([]);
  });

  it("flush runs the pending call immediately", () => {
    const calls: number[] = [];
    const push = debounce((v: number) => calls.push(v), 400);
    push(7);
    push.flush();
    expect(calls).toEqual([7]);
  });

  it("default hyper-parameter delay is 400ms", () => {
    expect(HYPERPARAM_DEBOUNCE_MS).toBe(400);
  });
});
