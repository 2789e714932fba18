import { describe, expect, it } from "vitest";

import { CanvasState, PipelineSync } from "../src/state";
import type { WireGraph } from "../src/types";

const WIRE: WireGraph = {
  blocks: [
    { id: "b1", operator: "SimpleImputer", args: [{ name: "strategy", value: "mean" }], x: 10, y: 10 },
    { id: "b2", operator: "StandardScaler", args: [], x: 190, y: 10 },
    { id: "b3", operator: "PCA", args: [{ name: "n_components", value: { mask: true } }], x: 30, y: 80 },
  ],
  chain: ["b1", "b2"],
};

describe("CanvasState", () => {
  it("round-trips the wire form without loss", () => {
    const state = CanvasState.fromWire(WIRE);
    expect(state.toWire()).toEqual(WIRE);
  });

  it("separates chained and detached blocks", () => {
    const state = CanvasState.fromWire(WIRE);
    expect(state.chainBlocks().map((b) => b.operator)).toEqual(["SimpleImputer", "StandardScaler"]);
    expect(state.detachedBlocks().map((b) => b.id)).toEqual(["b3"]);
  });

  it("detach keeps the block on the canvas", () => {
    const state = CanvasState.fromWire(WIRE);
    expect(state.detachBlock("b2")).toBe(true);
    expect(state.chain).toEqual(["b1"]);
    expect(state.blocks.has("b2")).toBe(true);
    expect(state.detachBlock("b2")).toBe(false); // already detached
  });

  it("attach appends detached blocks to the chain end", () => {
    const state = CanvasState.fromWire(WIRE);
    expect(state.attachBlock("b3")).toBe(true);
    expect(state.chain).toEqual(["b1", "b2", "b3"]);
    expect(state.attachBlock("b3")).toBe(false); // already chained
  });

  it("delete removes from both canvas and chain", () => {
    const state = CanvasState.fromWire(WIRE);
    state.selection = "b1";
    expect(state.deleteBlock("b1")).toBe(true);
    expect(state.chain).toEqual(["b2"]);
    expect(state.selection).toBeNull();
  });

  it("new blocks get fresh non-colliding ids", () => {
    const state = CanvasState.fromWire(WIRE);
    const a = state.addBlock("PCA", true);
    const b = state.addBlock("SVC", false);
    expect(a.id).not.toBe(b.id);
    expect(state.blocks.size).toBe(5);
    expect(state.chain).toContain(a.id);
    expect(state.chain).not.toContain(b.id);
  });

  it("setArg updates block arguments", () => {
    const state = CanvasState.fromWire(WIRE);
    state.setArg("b1", "strategy", "median");
    expect(state.toWire().blocks[0].args).toEqual([{ name: "strategy", value: "median" }]);
  });
});

describe("PipelineSync", () => {
  function instrumented() {
    const sent: WireGraph[] = [];
    const applied: unknown[] = [];
    let release: (() => void) | null = null;
    const sync = new PipelineSync(
      (graph) =>
        new Promise((resolve) => {
          sent.push(graph);
          release = () => resolve({ echo: graph.chain });
        }),
      (result) => applied.push(result),
    );
    return { sync, sent, applied, releaseNext: () => release && release() };
  }

  it("keeps one request in flight and applies the latest result", async () => {
    const { sync, sent, applied, releaseNext } = instrumented();
    const g = (chain: string[]): WireGraph => ({ blocks: [], chain });

    sync.submit(g(["a"]));
    sync.submit(g(["a", "b"]));   // queued, supersedes nothing yet
    sync.submit(g(["a", "b", "c"])); // replaces the queued mutation
    expect(sent.length).toBe(1);

    releaseNext(); // finish request 1 -> stale, a newer mutation is queued
    await Promise.resolve();
    await Promise.resolve();
    expect(sent.length).toBe(2);
    expect(sent[1].chain).toEqual(["a", "b", "c"]); // latest wins

    releaseNext();
    await Promise.resolve();
    await Promise.resolve();
    expect(applied).toEqual([{ echo: ["a", "b", "c"] }]); // stale response discarded
  });
});
