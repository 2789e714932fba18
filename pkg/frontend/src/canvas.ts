/** Block canvas: the Start anchor, the attached chain, and detached blocks.
 * Rendering is pure DOM from CanvasState; mutation callbacks go to the app. */

import type { CanvasState, BlockState } from "./state";
import type { Diagnostic } from "./types";

export interface CanvasHandlers {
  onSelect: (id: string) => void;
  onDetach: (id: string) => void;
  onAttach: (id: string) => void;
  onDelete: (id: string) => void;
  onDropOperator: (operator: string, attach: boolean) => void;
}

function blockLabel(block: BlockState): string {
  const args = [...block.args.entries()]
    .map(([name, value]) => `${name}=${renderValue(value)}`)
    .join(", ");
  return `${block.operator}(${args})`;
}

function renderValue(value: unknown): string {
  if (value === null) return "None";
  if (typeof value === "object" && value !== null) {
    if ("mask" in (value as object)) return "MASK";
    if ("expr" in (value as object)) return String((value as { expr: string }).expr);
  }
  if (typeof value === "string") return `'${value}'`;
  if (value === true) return "True";
  if (value === false) return "False";
  return String(value);
}

function blockNode(
  block: BlockState,
  state: CanvasState,
  kinds: Map<string, string>,
  diagnostics: Diagnostic[],
  handlers: CanvasHandlers,
  chained: boolean,
  stepIndex: number,
): HTMLElement {
  const node = document.createElement("div");
  const kind = kinds.get(block.operator) ?? "utility";
  node.className = `canvas-block kind-${kind}${chained ? "" : " dimmed"}`;
  if (state.selection === block.id) node.classList.add("selected");
  node.dataset.blockId = block.id;
  node.dataset.operator = block.operator;

  const label = document.createElement("span");
  label.className = "block-label";
  label.textContent = blockLabel(block);
  node.appendChild(label);

  const stepDiags = chained
    ? diagnostics.filter((d) => d.step === stepIndex)
    : [];
  for (const diag of stepDiags) {
    const line = document.createElement("div");
    line.className = `block-diagnostic ${diag.severity}`;
    line.textContent = diag.message;
    node.appendChild(line);
  }

  const controls = document.createElement("span");
  controls.className = "block-controls";
  const toggle = document.createElement("button");
  toggle.className = chained ? "detach" : "attach";
  toggle.textContent = chained ? "detach" : "attach";
  toggle.addEventListener("click", (event) => {
    event.stopPropagation();
    (chained ? handlers.onDetach : handlers.onAttach)(block.id);
  });
  const remove = document.createElement("button");
  remove.className = "delete";
  remove.textContent = "delete";
  remove.addEventListener("click", (event) => {
    event.stopPropagation();
    handlers.onDelete(block.id);
  });
  controls.append(toggle, remove);
  node.appendChild(controls);

  node.addEventListener("click", () => handlers.onSelect(block.id));
  return node;
}

export function renderCanvas(
  container: HTMLElement,
  state: CanvasState,
  kinds: Map<string, string>,
  diagnostics: Diagnostic[],
  handlers: CanvasHandlers,
): void {
  container.textContent = "";

  const start = document.createElement("div");
  start.className = "start-block";
  start.textContent = "Start";
  container.appendChild(start);

  const chainHost = document.createElement("div");
  chainHost.className = "chain";
  state.chainBlocks().forEach((block, index) => {
    chainHost.appendChild(blockNode(block, state, kinds, diagnostics, handlers, true, index));
  });
  container.appendChild(chainHost);

  const detachedHost = document.createElement("div");
  detachedHost.className = "detached";
  for (const block of state.detachedBlocks()) {
    detachedHost.appendChild(blockNode(block, state, kinds, diagnostics, handlers, false, -1));
  }
  container.appendChild(detachedHost);

  container.addEventListener("dragover", (event) => event.preventDefault());
  container.addEventListener("drop", (event) => {
    event.preventDefault();
    const operator = event.dataTransfer?.getData("text/operator");
    if (!operator) return;
    const target = event.target as HTMLElement;
    const attach = chainHost.contains(target) || target === start || start.contains(target);
    handlers.onDropOperator(operator, attach);
  });
}
