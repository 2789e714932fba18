/** Palette panel: one draggable block per operator, colored by kind. */

import type { PaletteEntry } from "./types";

export interface PaletteHandlers {
  onAdd: (operator: string) => void;
  onResetHint: () => void;
}

export function renderPalette(
  container: HTMLElement,
  entries: PaletteEntry[],
  handlers: PaletteHandlers,
): void {
  container.textContent = "";
  if (entries.length === 0) {
    const notice = document.createElement("div");
    notice.className = "palette-empty";
    notice.textContent = "No matches.";
    const hint = document.createElement("button");
    hint.className = "reset-hint";
    hint.textContent = "Reset Palette";
    hint.addEventListener("click", handlers.onResetHint);
    notice.appendChild(hint);
    container.appendChild(notice);
    return;
  }
  for (const entry of entries) {
    const block = document.createElement("div");
    block.className = `palette-block kind-${entry.kind}${entry.executable ? "" : " inert"}`;
    block.textContent = entry.name;
    block.dataset.operator = entry.name;
    block.draggable = true;
    block.title = entry.executable ? entry.name : `${entry.name} (not executable)`;
    block.addEventListener("dragstart", (event) => {
      event.dataTransfer?.setData("text/operator", entry.name);
    });
    // double-click is the keyboard/test-friendly way to add a block
    block.addEventListener("dblclick", () => handlers.onAdd(entry.name));
    container.appendChild(block);
  }
}
