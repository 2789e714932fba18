/** Hyper-parameter pane: every parameter with description-on-hover and its
 * default, validated client-side before any request leaves the browser. */

import type { HyperparamSchema, Literal, OperatorSchema, WireValue } from "./types";
import { isMask } from "./types";

export type Validation = { ok: true; value: Literal } | { ok: false; reason: string };

export function validateInput(schema: HyperparamSchema, raw: string | boolean): Validation {
  if (schema.type === "boolean") {
    return { ok: true, value: raw === true || raw === "true" };
  }
  const text = String(raw).trim();
  if (text === "" || text === "None") {
    if (schema.nullable) return { ok: true, value: null };
    return { ok: false, reason: `${schema.name} needs a value` };
  }
  if (schema.type === "integer") {
    if (!/^-?\d+$/.test(text)) return { ok: false, reason: `${schema.name} must be an integer` };
    return checkRange(schema, parseInt(text, 10));
  }
  if (schema.type === "real") {
    const value = Number(text);
    if (!Number.isFinite(value)) return { ok: false, reason: `${schema.name} must be a number` };
    return checkRange(schema, value);
  }
  if (schema.type === "enum") {
    if (!schema.choices?.includes(text)) {
      return { ok: false, reason: `${schema.name} must be one of ${schema.choices?.join(", ")}` };
    }
    return { ok: true, value: text };
  }
  return { ok: false, reason: `unknown type ${schema.type}` };
}

function checkRange(schema: HyperparamSchema, value: number): Validation {
  if (schema.min !== undefined && value < schema.min) {
    return { ok: false, reason: `${schema.name} must be at least ${schema.min}` };
  }
  if (schema.max !== undefined && value > schema.max) {
    return { ok: false, reason: `${schema.name} must be at most ${schema.max}` };
  }
  return { ok: true, value };
}

export interface ParamPaneHandlers {
  /** Called with a schema-valid value; the app updates state and schedules a PUT. */
  onCommit: (param: string, value: Literal) => void;
}

function currentText(value: WireValue | undefined, schema: HyperparamSchema): string {
  const effective = value === undefined || isMask(value) ? schema.default : value;
  if (effective === null || typeof effective === "object") return "";
  return String(effective);
}

export function renderParamPane(
  container: HTMLElement,
  operator: OperatorSchema,
  values: Map<string, WireValue>,
  highlighted: Set<string>,
  handlers: ParamPaneHandlers,
): void {
  container.textContent = "";
  const title = document.createElement("h3");
  title.textContent = operator.name;
  title.title = operator.summary;
  container.appendChild(title);

  if (operator.hyperparams.length === 0) {
    const none = document.createElement("div");
    none.className = "no-params";
    none.textContent = "No hyper-parameters.";
    container.appendChild(none);
    return;
  }

  for (const schema of operator.hyperparams) {
    const row = document.createElement("div");
    row.className = "param-row";
    if (highlighted.has(schema.name)) row.classList.add("highlight");
    row.dataset.param = schema.name;

    const label = document.createElement("label");
    label.textContent = schema.name;
    label.title = schema.description;  // description on hover
    row.appendChild(label);

    const error = document.createElement("span");
    error.className = "param-error";

    const commit = (raw: string | boolean) => {
      const outcome = validateInput(schema, raw);
      if (!outcome.ok) {
        error.textContent = outcome.reason;
        row.classList.add("invalid");
        return;  // inline violation, no request
      }
      error.textContent = "";
      row.classList.remove("invalid");
      handlers.onCommit(schema.name, outcome.value);
    };

    if (schema.type === "boolean") {
      const input = document.createElement("input");
      input.type = "checkbox";
      const value = values.get(schema.name);
      input.checked = value === undefined || isMask(value) ? schema.default === true : value === true;
      input.addEventListener("change", () => commit(input.checked));
      row.appendChild(input);
    } else if (schema.type === "enum") {
      const select = document.createElement("select");
      const options = [...(schema.nullable ? [""] : []), ...(schema.choices ?? [])];
      for (const choice of options) {
        const option = document.createElement("option");
        option.value = choice;
        option.textContent = choice === "" ? "(none)" : choice;
        select.appendChild(option);
      }
      select.value = currentText(values.get(schema.name), schema);
      select.addEventListener("change", () => commit(select.value));
      row.appendChild(select);
    } else {
      const input = document.createElement("input");
      input.type = "text";
      input.value = currentText(values.get(schema.name), schema);
      input.placeholder = schema.default === null ? "None" : String(schema.default);
      input.addEventListener("input", () => commit(input.value));
      row.appendChild(input);
    }

    row.appendChild(error);
    container.appendChild(row);
  }
}
