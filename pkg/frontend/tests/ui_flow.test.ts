/** Scripted UI acceptance flow against a live backend process:
 *  palette colors, NL auto-append of PCA(n_components=2), exactly one
 *  debounced PUT per edit burst, Reset Palette keeps the chain. */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { StudioClient } from "../src/api";
import { App, type AppElements } from "../src/app";

const PORT = 8800 + Math.floor(Math.random() * 150);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(timeoutMs = 45_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/operators/PCA`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("backend did not come up");
}

function buildDom(): AppElements {
  document.body.innerHTML = `
    <input id="query" />
    <button id="predict-btn"></button>
    <button id="reset-btn"></button>
    <button id="run-btn"></button>
    <span id="status"></span>
    <aside id="palette"></aside>
    <section id="canvas"></section>
    <aside id="params"></aside>
    <div id="before"></div>
    <div id="after"></div>
    <span id="score"></span>
    <div id="diagnostics"></div>`;
  const grab = (id: string) => document.getElementById(id) as HTMLElement;
  return {
    palette: grab("palette"),
    canvas: grab("canvas"),
    params: grab("params"),
    before: grab("before"),
    after: grab("after"),
    score: grab("score"),
    diagnostics: grab("diagnostics"),
    query: grab("query") as HTMLInputElement,
    predictButton: grab("predict-btn") as HTMLButtonElement,
    resetButton: grab("reset-btn") as HTMLButtonElement,
    runButton: grab("run-btn") as HTMLButtonElement,
    status: grab("status"),
  };
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

beforeAll(async () => {
  server = spawn("python3", ["-m", "pipestudio.cli", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

describe("scripted studio flow against a live server", () => {
  it("palette, NL auto-append, debounced edit, reset palette", async () => {
    const client = new StudioClient(BASE);
    const el = buildDom();
    const app = new App(client, el);
    await app.init("nan-iris", "nl", 0);

    // 1. palette renders blocks colored by kind
    const transformers = el.palette.querySelectorAll(".palette-block.kind-transformer");
    const predictors = el.palette.querySelectorAll(".palette-block.kind-predictor");
    expect(transformers.length).toBeGreaterThan(0);
    expect(predictors.length).toBeGreaterThan(0);
    const fullPaletteSize = el.palette.querySelectorAll(".palette-block").length;
    expect(fullPaletteSize).toBeGreaterThanOrEqual(73);

    // Before table shows the target column leftmost
    const firstHeader = el.before.querySelector("th");
    expect(firstHeader?.textContent).toBe("species");
    expect(firstHeader?.classList.contains("target-col")).toBe(true);

    // 2. NL query auto-appends PCA with n_components=2 and filters the palette
    el.query.value = "PCA with 2 components";
    await app.submitQuery();
    expect(app.state.chain.length).toBe(1);
    const block = el.canvas.querySelector<HTMLElement>(".canvas-block");
    expect(block?.dataset.operator).toBe("PCA");
    expect(block?.textContent).toContain("n_components=2");
    const filtered = el.palette.querySelectorAll(".palette-block");
    expect(filtered.length).toBeLessThan(fullPaletteSize);
    expect(filtered[0].textContent).toBe("PCA");
    // highlighted hyper-parameter is rendered distinctly in the pane
    const highlighted = el.params.querySelector<HTMLElement>(".param-row.highlight");
    expect(highlighted?.dataset.param).toBe("random_state");

    // 3. a burst of hyper-parameter edits triggers exactly one debounced PUT
    const putsBefore = client.putCount;
    const input = el.params.querySelector<HTMLInputElement>('[data-param="n_components"] input')!;
    input.value = "3";
    input.dispatchEvent(new Event("input"));
    input.value = "4";
    input.dispatchEvent(new Event("input"));
    input.value = "3";
    input.dispatchEvent(new Event("input"));
    expect(client.putCount).toBe(putsBefore); // still inside the debounce window
    await sleep(700);
    expect(client.putCount).toBe(putsBefore + 1);
    const args = app.state.blocks.get(app.state.chain[0])!.args;
    expect(args.get("n_components")).toBe(3);

    // 4. Reset Palette restores the full palette without clearing the chain
    el.resetButton.click();
    await sleep(300);
    expect(el.palette.querySelectorAll(".palette-block").length).toBe(fullPaletteSize);
    expect(app.state.chain.length).toBe(1);
    expect(el.canvas.querySelector<HTMLElement>(".canvas-block")?.dataset.operator).toBe("PCA");
  });

  it("chain mutations run the pipeline and render server results", async () => {
    const client = new StudioClient(BASE);
    const el = buildDom();
    const app = new App(client, el);
    await app.init("nan-iris", "nl", 0);

    app.addOperator("SimpleImputer", true);
    await sleep(300);
    app.addOperator("StandardScaler", true);
    await sleep(300);
    app.addOperator("DecisionTreeClassifier", true);
    await sleep(500);

    // liveness: the after table and score come from the server run
    expect(el.after.querySelectorAll("td").length).toBeGreaterThan(0);
    expect(el.score.textContent).toMatch(/score: \d\.\d{4}/);

    // detach the predictor: score display clears, preview remains
    const treeId = app.state.chain[2];
    app.state.detachBlock(treeId);
    app.pushPipeline();
    await sleep(500);
    expect(el.score.textContent).toBe("");
    expect(el.after.querySelectorAll("td").length).toBeGreaterThan(0);
    const dimmed = el.canvas.querySelector<HTMLElement>(".canvas-block.dimmed");
    expect(dimmed?.dataset.operator).toBe("DecisionTreeClassifier");

    // dropping a block on empty canvas stays detached and sends no request
    const puts = client.putCount;
    app.addOperator("PCA", false);
    await sleep(100);
    expect(client.putCount).toBe(puts);
  });
});
