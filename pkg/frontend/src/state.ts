/**
 * Editor state: active tool, in-progress vertices, chosen level, entity
 * list, and the active overlay. The overlay records where its cells came
 * from; anything shown for a saved entity must carry source "server", never
 * a local preview echo.
 */

import { cellRect, type Rect } from "./cellmath.js";
import type { EntityBody, EntityKind } from "./api.js";

export type Tool = EntityKind | "select";

export interface Overlay {
  source: "preview" | "server" | "query";
  codes: string[];
  rects: Rect[];
}

export interface EntityRef {
  table: string;
  name: string;
}

export const MAX_LEVEL = 16;

const MIN_VERTICES: Record<EntityKind, number> = { point: 1, line: 2, area: 3 };

/**
 * Cells to highlight for a query result: every non-null value of every
 * CODE column, with its unit-square rect.
 */
export function overlayFromResult(
  kinds: string[],
  rows: (string | null)[][],
): { codes: string[]; rects: Rect[] } {
  const codeColumns = kinds.map((k, i) => (k === "CODE" ? i : -1)).filter((i) => i >= 0);
  const codes: string[] = [];
  for (const row of rows) {
    for (const i of codeColumns) {
      const value = row[i];
      if (value !== null) codes.push(value);
    }
  }
  return { codes, rects: codes.map(cellRect) };
}

export class EditorState {
  tool: Tool = "line";
  vertices: [number, number][] = []; // world coordinates
  level = 5;
  entities: EntityRef[] = [];
  overlay: Overlay | null = null;
  window: [number, number, number, number] = [0, 0, 1, 1];

  setWindow(window: [number, number, number, number]): void {
    this.window = window;
  }

  setTool(tool: Tool): void {
    if (tool !== this.tool) {
      this.tool = tool;
      this.vertices = [];
      if (this.overlay?.source === "preview") this.overlay = null;
    }
  }

  setLevel(level: number): void {
    this.level = Math.min(MAX_LEVEL, Math.max(1, Math.round(level)));
  }

  addVertex(x: number, y: number): void {
    if (this.tool === "select") return;
    if (this.tool === "point") this.vertices = [[x, y]];
    else this.vertices.push([x, y]);
  }

  undoVertex(): void {
    this.vertices.pop();
    if (this.vertices.length === 0 && this.overlay?.source === "preview") {
      this.overlay = null;
    }
  }

  clearDraft(): void {
    this.vertices = [];
    if (this.overlay?.source === "preview") this.overlay = null;
  }

  get drawKind(): EntityKind | null {
    return this.tool === "select" ? null : this.tool;
  }

  /** Enough vertices for the active tool to request an encode preview. */
  canPreview(): boolean {
    const kind = this.drawKind;
    return kind !== null && this.vertices.length >= MIN_VERTICES[kind];
  }

  /** Request body for /encode and /entities for the current draft. */
  draftBody(name: string): EntityBody {
    const kind = this.drawKind;
    if (kind === null || !this.canPreview()) {
      throw new Error("draft geometry is not complete");
    }
    return { kind, name, coords: this.vertices.map(([x, y]) => [x, y]), level: this.level };
  }

  setPreviewOverlay(codes: string[], rects: Rect[]): void {
    this.overlay = { source: "preview", codes, rects };
  }

  setServerOverlay(codes: string[], rects: Rect[]): void {
    this.overlay = { source: "server", codes, rects };
  }

  setQueryOverlay(codes: string[], rects: Rect[]): void {
    this.overlay = { source: "query", codes, rects };
  }

  clearOverlay(): void {
    this.overlay = null;
  }

  setEntities(entities: EntityRef[]): void {
    this.entities = entities;
  }
}
