/** Canvas state: a client-side mirror of the block-graph wire form plus
 * selection and request bookkeeping. All mutations are local; the app layer
 * decides when a mutation must be pushed to the server. */

import type { WireGraph, WireValue } from "./types";

export interface BlockState {
  id: string;
  operator: string;
  args: Map<string, WireValue>;
  x: number;
  y: number;
}

export class CanvasState {
  blocks = new Map<string, BlockState>();
  chain: string[] = [];
  selection: string | null = null;
  pendingRequest = false;
  private counter = 0;

  static fromWire(graph: WireGraph): CanvasState {
    const state = new CanvasState();
    for (const block of graph.blocks) {
      state.blocks.set(block.id, {
        id: block.id,
        operator: block.operator,
        args: new Map(block.args.map((a) => [a.name, a.value])),
        x: block.x,
        y: block.y,
      });
    }
    state.chain = [...graph.chain];
    state.counter = graph.blocks.length;
    return state;
  }

  toWire(): WireGraph {
    return {
      blocks: [...this.blocks.values()].map((b) => ({
        id: b.id,
        operator: b.operator,
        args: [...b.args.entries()].map(([name, value]) => ({ name, value })),
        x: b.x,
        y: b.y,
      })),
      chain: [...this.chain],
    };
  }

  private freshId(): string {
    do {
      this.counter += 1;
    } while (this.blocks.has(`c${this.counter}`));
    return `c${this.counter}`;
  }

  /** Drop a new operator block; chained when attach=true, else detached. */
  addBlock(operator: string, attach: boolean, x = 40, y = 40): BlockState {
    const block: BlockState = { id: this.freshId(), operator, args: new Map(), x, y };
    this.blocks.set(block.id, block);
    if (attach) this.chain.push(block.id);
    return block;
  }

  /** Detach from the chain but keep the block on the canvas (disabled). */
  detachBlock(id: string): boolean {
    const at = this.chain.indexOf(id);
    if (at < 0) return false;
    this.chain.splice(at, 1);
    return true;
  }

  /** Re-attach a detached block at the end (or a given chain position). */
  attachBlock(id: string, position?: number): boolean {
    if (!this.blocks.has(id) || this.chain.includes(id)) return false;
    const at = position === undefined ? this.chain.length : position;
    this.chain.splice(at, 0, id);
    return true;
  }

  deleteBlock(id: string): boolean {
    if (!this.blocks.delete(id)) return false;
    this.detachBlock(id);
    if (this.selection === id) this.selection = null;
    return true;
  }

  setArg(id: string, name: string, value: WireValue): void {
    this.blocks.get(id)?.args.set(name, value);
  }

  isChained(id: string): boolean {
    return this.chain.includes(id);
  }

  chainBlocks(): BlockState[] {
    return this.chain.map((id) => this.blocks.get(id)!).filter(Boolean);
  }

  detachedBlocks(): BlockState[] {
    const chained = new Set(this.chain);
    return [...this.blocks.values()].filter((b) => !chained.has(b.id));
  }
}

/** Serializes pipeline PUTs: one in flight, newest mutation supersedes any
 * queued one, and stale responses are discarded by sequence number. */
export class PipelineSync {
  private seq = 0;
  private applied = 0;
  private inFlight = false;
  private queued: { graph: WireGraph; seq: number } | null = null;

  constructor(private readonly send: (graph: WireGraph) => Promise<unknown>,
              private readonly onResult: (result: unknown) => void) {}

  submit(graph: WireGraph): void {
    this.seq += 1;
    if (this.inFlight) {
      this.queued = { graph, seq: this.seq };  // latest wins
      return;
    }
    void this.dispatch(graph, this.seq);
  }

  private async dispatch(graph: WireGraph, seq: number): Promise<void> {
    this.inFlight = true;
    let result: unknown = null;
    try {
      result = await this.send(graph);
    } finally {
      this.inFlight = false;
    }
    if (seq > this.applied && this.queued === null) {
      this.applied = seq;
      this.onResult(result);
    }
    // stale responses (a newer mutation is queued or already applied) are dropped
    if (this.queued !== null) {
      const next = this.queued;
      this.queued = null;
      void this.dispatch(next.graph, next.seq);
    }
  }

  get busy(): boolean {
    return this.inFlight;
  }
}
