/** Wire types shared with the HTTP backend. */

export type Literal = number | string | boolean | null;

/** Argument values: a literal, an unresolved {mask}, or a bare-name {expr}. */
export type WireValue = Literal | { mask: true } | { expr: string };

export interface WireArg {
  name: string;
  value: WireValue;
}

export interface WireBlock {
  id: string;
  operator: string;
  args: WireArg[];
  x: number;
  y: number;
}

export interface WireGraph {
  blocks: WireBlock[];
  chain: string[];
}

export interface TablePayload {
  columns: { name: string; kind: "numeric" | "categorical" }[];
  rows: (number | string | null)[][];
  target: string;
}

export interface Diagnostic {
  severity: "error" | "warning";
  code: string;
  message: string;
  step?: number;
  param?: string;
}

export interface RunPayload {
  before: TablePayload;
  after: TablePayload;
  score: number | null;
  diagnostics: Diagnostic[];
}

export interface PaletteEntry {
  name: string;
  kind: "transformer" | "predictor" | "utility";
  executable: boolean;
}

export interface PalettePayload {
  operators: PaletteEntry[];
  filtered: boolean;
}

export interface HyperparamSchema {
  name: string;
  description: string;
  type: "integer" | "real" | "boolean" | "enum";
  default: Literal;
  min?: number;
  max?: number;
  choices?: string[];
  nullable?: boolean;
}

export interface OperatorSchema {
  name: string;
  kind: PaletteEntry["kind"];
  summary: string;
  executable: boolean;
  hyperparams: HyperparamSchema[];
}

export interface PredictionPayload {
  candidates: { invocation: string; operator: string; score: number }[];
  relevant_operators: string[];
  auto_append: string | null;
  highlighted_params: string[];
}

export interface SessionPayload {
  session_id: string;
  dataset: string;
  mode: "nl" | "keyword";
  seed: number;
  before: TablePayload;
}

export interface QueryResponse {
  mode: "nl" | "keyword";
  prediction?: PredictionPayload;
  operators?: string[];
  graph?: WireGraph;
  run?: RunPayload | null;
}

export interface PutResponse {
  diagnostics: Diagnostic[];
  run: RunPayload | null;
}

export function isMask(value: WireValue): value is { mask: true } {
  return typeof value === "object" && value !== null && "mask" in value;
}

export function isExpr(value: WireValue): value is { expr: string } {
  return typeof value === "object" && value !== null && "expr" in value;
}
