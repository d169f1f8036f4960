/**
 * Typed client for the session service. Every number the page shows comes
 * out of these payloads; the client never recomputes pipeline math.
 */

import type {
  CenterDoc,
  ConsistencyDoc,
  GeodesicDoc,
  SessionConfig,
  SessionState,
  SummaryDoc,
  TreeDocument,
} from "./documents.js";

interface ErrorBody {
  error?: string;
  message?: string;
  hint?: string;
  detail?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(body.message ?? body.detail ?? `request failed with status ${status}`);
    this.name = "ApiError";
  }

  /** One line for the status bar, hint included when the server sent one. */
  describe(): string {
    const kind = this.body.error ? `${this.body.error}: ` : "";
    const hint = this.body.hint ? ` (${this.body.hint})` : "";
    return `${kind}${this.message}${hint}`;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface GeodesicRequest {
  member: number;
  steps?: number;
  mode?: "geodesic" | "linear";
  withConsistency?: boolean;
}

function query(params: Record<string, string | number | boolean | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) search.set(key, String(value));
  }
  const text = search.toString();
  return text ? `?${text}` : "";
}

export class ApiClient {
  constructor(
    private readonly base = "",
    private readonly fetcher: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async send<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const init: RequestInit = { method, signal };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "content-type": "application/json" };
    }
    const res = await this.fetcher(this.base + path, init);
    const data = await res.json().catch(() => ({}));
    if (!res.ok) throw new ApiError(res.status, data as ErrorBody);
    return data as T;
  }

  createSession(config?: Partial<SessionConfig>): Promise<{ id: string; config: SessionConfig }> {
    return this.send("POST", "/sessions", config ? { config } : {});
  }

  getSession(id: string): Promise<SessionState> {
    return this.send("GET", `/sessions/${id}`);
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return this.send("DELETE", `/sessions/${id}`);
  }

  setConfig(id: string, patch: Partial<SessionConfig>): Promise<{ config: SessionConfig }> {
    return this.send("PUT", `/sessions/${id}/config`, patch);
  }

  addTree(id: string, doc: TreeDocument): Promise<{ index: number; count: number }> {
    return this.send("POST", `/sessions/${id}/trees`, doc);
  }

  replaceTree(id: string, index: number, doc: TreeDocument): Promise<{ index: number }> {
    return this.send("PUT", `/sessions/${id}/trees/${index}`, doc);
  }

  computeCenter(id: string, signal?: AbortSignal): Promise<CenterDoc> {
    return this.send("POST", `/sessions/${id}/center`, undefined, signal);
  }

  getSummary(id: string): Promise<SummaryDoc> {
    return this.send("GET", `/sessions/${id}/summary`);
  }

  getConsistency(
    id: string,
    options: { delta?: number; g?: number } = {},
    signal?: AbortSignal,
  ): Promise<ConsistencyDoc> {
    const q = query({ delta: options.delta, g: options.g });
    return this.send("GET", `/sessions/${id}/consistency${q}`, undefined, signal);
  }

  geodesic(id: string, req: GeodesicRequest, signal?: AbortSignal): Promise<GeodesicDoc> {
    const q = query({
      member: req.member,
      steps: req.steps,
      mode: req.mode,
      with_consistency: req.withConsistency,
    });
    return this.send("POST", `/sessions/${id}/geodesic${q}`, undefined, signal);
  }

  getEmbedding(id: string): Promise<TreeDocument> {
    return this.send("GET", `/sessions/${id}/embedding`);
  }
}

/**
 * At most one expensive request in flight; starting a new one aborts the
 * previous, and reconfiguring the session cancels outright.
 */
export class Inflight {
  private controller: AbortController | null = null;

  begin(): AbortSignal {
    this.controller?.abort();
    this.controller = new AbortController();
    return this.controller.signal;
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }

  get active(): boolean {
    return this.controller !== null && !this.controller.signal.aborted;
  }
}

/** True for the rejection produced by an Inflight cancellation. */
export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
