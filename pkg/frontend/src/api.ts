/** Typed REST client for the session backend; the UI's only network access. */

import type {
  OperatorSchema,
  PalettePayload,
  PutResponse,
  QueryResponse,
  SessionPayload,
  WireGraph,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const err = (body as { error?: { code?: string; message?: string } }).error ?? {};
    throw new ApiError(response.status, err.code ?? "http-error", err.message ?? response.statusText);
  }
  return body as T;
}

export class StudioClient {
  /** PUT /pipeline counter; the UI asserts debounced edits coalesce. */
  putCount = 0;

  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async createSession(dataset: string, mode: "nl" | "keyword", seed = 0): Promise<SessionPayload> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ dataset, mode, seed }),
    });
    return unwrap<SessionPayload>(response);
  }

  async getPalette(sessionId: string): Promise<PalettePayload> {
    return unwrap(await fetch(this.url(`/sessions/${sessionId}/palette`)));
  }

  async postQuery(sessionId: string, text: string): Promise<QueryResponse> {
    const response = await fetch(this.url(`/sessions/${sessionId}/query`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return unwrap<QueryResponse>(response);
  }

  async resetPalette(sessionId: string): Promise<PalettePayload> {
    const response = await fetch(this.url(`/sessions/${sessionId}/palette/reset`), { method: "POST" });
    return unwrap<PalettePayload>(response);
  }

  async putPipeline(sessionId: string, graph: WireGraph): Promise<PutResponse> {
    this.putCount += 1;
    const response = await fetch(this.url(`/sessions/${sessionId}/pipeline`), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(graph),
    });
    return unwrap<PutResponse>(response);
  }

  async getOperator(name: string): Promise<OperatorSchema> {
    return unwrap(await fetch(this.url(`/operators/${name}`)));
  }
}
