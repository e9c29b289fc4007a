/**
 * Typed client for the splsql service endpoints. The encode preview uses
 * latest-wins sequencing: responses to superseded requests are dropped (and
 * the requests aborted), so the overlay never shows a stale preview.
 */

import type { Rect } from "./cellmath.js";

export type EntityKind = "point" | "line" | "area";

export interface EntityBody {
  kind: EntityKind;
  name: string;
  coords: [number, number][];
  holes?: [number, number][][];
  level?: number;
}

export interface CellsResponse {
  codes: string[];
  rects: Rect[];
}

export interface QueryResponse {
  columns: string[];
  kinds: string[];
  rows: (string | null)[][];
  sqlstate: string;
  rowcount?: number;
}

export interface TableInfo {
  name: string;
  columns: [string, string][];
  rows: number;
}

export interface CatalogResponse {
  tables: TableInfo[];
  window: [number, number, number, number];
  default_level: number;
}

export type BindingValue = string | number | null | { code: string };

export interface ServiceError {
  sqlstate: string;
  message: string;
  position?: [number, number];
}

export class ApiError extends Error {
  readonly sqlstate: string;
  readonly position?: [number, number];

  constructor(detail: ServiceError, readonly status: number) {
    super(detail.message);
    this.sqlstate = detail.sqlstate;
    this.position = detail.position;
  }
}

async function asJson<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(body as ServiceError, response.status);
  }
  return body as T;
}

export class Client {
  constructor(readonly baseUrl: string = "", readonly fetchFn: typeof fetch = fetch) {}

  private post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    return this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    }).then((r) => asJson<T>(r));
  }

  tables(): Promise<CatalogResponse> {
    return this.fetchFn(`${this.baseUrl}/tables`).then((r) => asJson<CatalogResponse>(r));
  }

  encode(body: EntityBody, signal?: AbortSignal): Promise<CellsResponse> {
    return this.post("/encode", body, signal);
  }

  saveEntity(body: EntityBody): Promise<{ stored_codes: number; warning?: string }> {
    return this.post("/entities", body);
  }

  entityCells(table: string, name: string): Promise<CellsResponse> {
    const path = `/entities/${encodeURIComponent(table)}/${encodeURIComponent(name)}/cells`;
    return this.fetchFn(`${this.baseUrl}${path}`).then((r) => asJson<CellsResponse>(r));
  }

  deleteEntity(table: string, name: string): Promise<{ removed_rows: number }> {
    const path = `/entities/${encodeURIComponent(table)}/${encodeURIComponent(name)}`;
    return this.fetchFn(`${this.baseUrl}${path}`, { method: "DELETE" }).then((r) =>
      asJson<{ removed_rows: number }>(r),
    );
  }

  runQuery(sql: string, bindings?: Record<string, BindingValue>): Promise<QueryResponse> {
    return this.post("/query", bindings ? { sql, bindings } : { sql });
  }
}

/** Serializes /encode calls so only the newest response is ever delivered. */
export class EncodePreviewer {
  private seq = 0;
  private controller: AbortController | null = null;

  constructor(private readonly client: Client) {}

  /** Resolves with the preview, or null when a newer request superseded it. */
  async preview(body: EntityBody): Promise<CellsResponse | null> {
    const ticket = ++this.seq;
    this.controller?.abort();
    this.controller = new AbortController();
    try {
      const result = await this.client.encode(body, this.controller.signal);
      return ticket === this.seq ? result : null;
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return null;
      if (ticket !== this.seq) return null;
      throw err;
    }
  }
}
