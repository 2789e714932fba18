/** Before/After data tables and the score display. Every number shown here
 * came from a server run result; the UI computes nothing itself. */

import type { RunPayload, TablePayload } from "./types";

export function renderTable(container: HTMLElement, payload: TablePayload): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "data-table";
  const head = table.createTHead().insertRow();
  for (const column of payload.columns) {
    const cell = document.createElement("th");
    cell.textContent = column.name;
    cell.className = column.name === payload.target ? "target-col" : column.kind;
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const row of payload.rows) {
    const tr = body.insertRow();
    row.forEach((value, i) => {
      const cell = tr.insertCell();
      if (value === null) {
        cell.textContent = "NaN";
        cell.className = "missing";
      } else {
        cell.textContent = typeof value === "number" ? formatNumber(value) : value;
        cell.className = payload.columns[i]?.kind ?? "";
      }
    });
  }
  container.appendChild(table);
}

function formatNumber(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(4);
}

export function renderRun(
  stage: { before: HTMLElement; after: HTMLElement; score: HTMLElement; diagnostics: HTMLElement },
  run: RunPayload | null,
): void {
  if (run === null) {
    stage.score.textContent = "";
    return;
  }
  renderTable(stage.before, run.before);
  renderTable(stage.after, run.after);
  stage.score.textContent = run.score === null ? "" : `score: ${run.score.toFixed(4)}`;
  stage.diagnostics.textContent = "";
  for (const diag of run.diagnostics) {
    const line = document.createElement("div");
    line.className = `diagnostic ${diag.severity}`;
    line.textContent = `[${diag.severity}] ${diag.message}`;
    stage.diagnostics.appendChild(line);
  }
}
