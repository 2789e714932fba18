/** Application wiring: one session, one canvas, liveness on every mutation.
 *
 * Mutation rules:
 *   - chain mutations (attach/detach/delete/drop/NL auto-append) push the
 *     pipeline immediately;
 *   - hyper-parameter edits push through a 400 ms debounce;
 *   - one request in flight, latest mutation wins, stale responses dropped.
 */

import { StudioClient } from "./api";
import { renderCanvas } from "./canvas";
import { debounce, HYPERPARAM_DEBOUNCE_MS } from "./debounce";
import { renderPalette } from "./palette";
import { renderParamPane } from "./params";
import { CanvasState, PipelineSync } from "./state";
import { renderRun, renderTable } from "./tables";
import type { Diagnostic, Literal, PaletteEntry, PutResponse, RunPayload } from "./types";

export interface AppElements {
  palette: HTMLElement;
  canvas: HTMLElement;
  params: HTMLElement;
  before: HTMLElement;
  after: HTMLElement;
  score: HTMLElement;
  diagnostics: HTMLElement;
  query: HTMLInputElement;
  predictButton: HTMLButtonElement;
  resetButton: HTMLButtonElement;
  runButton: HTMLButtonElement;
  status: HTMLElement;
}

export class App {
  state = new CanvasState();
  sessionId = "";
  mode: "nl" | "keyword" = "nl";
  kinds = new Map<string, string>();
  highlighted = new Set<string>();
  diagnostics: Diagnostic[] = [];
  private readonly sync: PipelineSync;
  private readonly debouncedPush: ReturnType<typeof debounce<[]>>;

  constructor(
    readonly client: StudioClient,
    readonly el: AppElements,
    debounceMs: number = HYPERPARAM_DEBOUNCE_MS,
  ) {
    this.sync = new PipelineSync(
      (graph) => this.client.putPipeline(this.sessionId, graph),
      (result) => this.applyPutResponse(result as PutResponse),
    );
    this.debouncedPush = debounce(() => this.pushPipeline(), debounceMs);

    this.el.predictButton.addEventListener("click", () => void this.submitQuery());
    this.el.query.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void this.submitQuery();
    });
    this.el.resetButton.addEventListener("click", () => void this.resetPalette());
    this.el.runButton.addEventListener("click", () => this.pushPipeline());
  }

  async init(dataset: string, mode: "nl" | "keyword", seed = 0): Promise<void> {
    this.mode = mode;
    const session = await this.client.createSession(dataset, mode, seed);
    this.sessionId = session.session_id;
    renderTable(this.el.before, session.before);
    this.el.query.placeholder =
      mode === "nl" ? "Describe an operation (Predict Pipeline)" : "Keyword filter";
    this.el.predictButton.textContent = mode === "nl" ? "Predict Pipeline" : "Search";
    const palette = await this.client.getPalette(this.sessionId);
    for (const entry of palette.operators) this.kinds.set(entry.name, entry.kind);
    this.renderPalette(palette.operators);
    this.renderCanvas();
  }

  // -- rendering ------------------------------------------------------------

  private renderPalette(entries: PaletteEntry[]): void {
    renderPalette(this.el.palette, entries, {
      onAdd: (operator) => this.addOperator(operator, true),
      onResetHint: () => void this.resetPalette(),
    });
  }

  renderCanvas(): void {
    renderCanvas(this.el.canvas, this.state, this.kinds as Map<string, string>, this.diagnostics, {
      onSelect: (id) => void this.selectBlock(id),
      onDetach: (id) => {
        if (this.state.detachBlock(id)) this.chainMutated();
      },
      onAttach: (id) => {
        if (this.state.attachBlock(id)) this.chainMutated();
      },
      onDelete: (id) => {
        const wasChained = this.state.isChained(id);
        if (this.state.deleteBlock(id) && wasChained) this.chainMutated();
        else this.renderCanvas();
      },
      onDropOperator: (operator, attach) => this.addOperator(operator, attach),
    });
  }

  private applyPutResponse(response: PutResponse | null): void {
    if (!response) return;
    this.state.pendingRequest = false;
    this.diagnostics = response.diagnostics;
    this.renderRun(response.run);
    this.renderCanvas();
    this.el.status.textContent = response.diagnostics.some((d) => d.severity === "error")
      ? "pipeline has errors"
      : "";
  }

  private renderRun(run: RunPayload | null): void {
    renderRun(
      { before: this.el.before, after: this.el.after, score: this.el.score, diagnostics: this.el.diagnostics },
      run,
    );
  }

  // -- mutations --------------------------------------------------------------

  addOperator(operator: string, attach: boolean): void {
    const offset = 60 + 30 * this.state.detachedBlocks().length;
    this.state.addBlock(operator, attach, attach ? 40 : 260, attach ? 40 : offset);
    if (attach) this.chainMutated();
    else this.renderCanvas();  // detached drop: no request
  }

  /** Chain changed: render optimistically and push in the same tick. */
  private chainMutated(): void {
    this.renderCanvas();
    this.pushPipeline();
  }

  pushPipeline(): void {
    this.debouncedPush.cancel();
    this.state.pendingRequest = true;
    this.sync.submit(this.state.toWire());
  }

  async selectBlock(id: string): Promise<void> {
    this.state.selection = id;
    this.renderCanvas();
    const block = this.state.blocks.get(id);
    if (!block) return;
    const schema = await this.client.getOperator(block.operator).catch(() => null);
    if (!schema) {
      this.el.params.textContent = "";
      return;
    }
    renderParamPane(this.el.params, schema, block.args, this.highlighted, {
      onCommit: (param, value) => this.commitParam(id, param, value),
    });
  }

  commitParam(blockId: string, param: string, value: Literal): void {
    this.state.setArg(blockId, param, value);
    this.renderCanvas();
    this.state.pendingRequest = true;
    this.debouncedPush();  // edits coalesce into one PUT
  }

  // -- query box -----------------------------------------------------------------

  async submitQuery(): Promise<void> {
    const text = this.el.query.value;
    const response = await this.client.postQuery(this.sessionId, text);
    if (this.mode === "keyword") {
      const palette = await this.client.getPalette(this.sessionId);
      this.renderPalette(palette.operators);
      return;
    }
    const prediction = response.prediction;
    if (!prediction || prediction.candidates.length === 0) {
      this.el.status.textContent = "no matching operators";
      return;
    }
    this.el.status.textContent = "";
    if (response.graph) {
      this.state = CanvasState.fromWire(response.graph);
      this.highlighted = new Set(prediction.highlighted_params);
      this.diagnostics = response.run?.diagnostics ?? [];
      this.renderCanvas();
      const appended = this.state.chain[this.state.chain.length - 1];
      if (appended) await this.selectBlock(appended);
    }
    this.renderRun(response.run ?? null);
    const palette = await this.client.getPalette(this.sessionId);
    this.renderPalette(palette.operators);
  }

  async resetPalette(): Promise<void> {
    const palette = await this.client.resetPalette(this.sessionId);
    this.renderPalette(palette.operators);
  }
}
