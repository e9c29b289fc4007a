/**
 * DOM wiring for the map editor. Draw with the point/line/area tools, watch
 * the live cell preview, save named entities (server truth redraws them),
 * and run queries whose CODE results highlight on the canvas.
 */

import { ApiError, Client, EncodePreviewer, type BindingValue } from "./api.js";
import { canvasToUnit, unitToWorld, type Rect } from "./cellmath.js";
import { intersectLinesQuery, linesThroughPointQuery, type PickedQuery } from "./pickers.js";
import { draw } from "./render.js";
import { EditorState, overlayFromResult, type EntityRef, type Tool } from "./state.js";

const ENTITY_TABLES: [string, string][] = [
  ["POINTS", "POINT"],
  ["LINES", "LINE"],
  ["AREAS", "AREA"],
];

const KIND_TO_TABLE: Record<string, string> = { point: "POINTS", line: "LINES", area: "AREAS" };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class App {
  readonly state = new EditorState();
  readonly client = new Client("");
  readonly previewer = new EncodePreviewer(this.client);
  readonly canvas = el<HTMLCanvasElement>("map");
  readonly ctx = this.canvas.getContext("2d")!;

  async start(): Promise<void> {
    const catalog = await this.client.tables();
    this.state.setWindow(catalog.window);
    this.state.setLevel(catalog.default_level);
    el<HTMLInputElement>("level").value = String(this.state.level);
    this.wire();
    await this.refreshEntities();
    this.redraw();
    this.status(`window ${catalog.window.join(", ")} - level ${this.state.level}`);
  }

  // -- ui plumbing ------------------------------------------------------------

  status(text: string, isError = false): void {
    const bar = el<HTMLDivElement>("status");
    bar.textContent = text;
    bar.className = isError ? "error" : "";
  }

  redraw(): void {
    draw(this.ctx, this.state);
    const badge = el<HTMLSpanElement>("cell-count");
    badge.textContent = this.state.overlay ? `${this.state.overlay.codes.length} cells` : "";
  }

  wire(): void {
    for (const tool of ["point", "line", "area", "select"] as Tool[]) {
      el<HTMLButtonElement>(`tool-${tool}`).addEventListener("click", () => {
        this.state.setTool(tool);
        document
          .querySelectorAll(".tool")
          .forEach((b) => b.classList.toggle("active", b.id === `tool-${tool}`));
        this.redraw();
      });
    }
    el<HTMLInputElement>("level").addEventListener("change", (ev) => {
      this.state.setLevel(Number((ev.target as HTMLInputElement).value));
      (ev.target as HTMLInputElement).value = String(this.state.level);
      void this.previewDraft();
    });
    this.canvas.addEventListener("click", (ev) => {
      const bounds = this.canvas.getBoundingClientRect();
      const [u, v] = canvasToUnit(
        ((ev.clientX - bounds.left) * this.canvas.width) / bounds.width,
        ((ev.clientY - bounds.top) * this.canvas.height) / bounds.height,
        this.canvas.width,
        this.canvas.height,
      );
      const [x, y] = unitToWorld(u, v, this.state.window);
      this.state.addVertex(x, y);
      void this.previewDraft();
    });
    document.addEventListener("keydown", (ev) => {
      if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLTextAreaElement) return;
      if (ev.key === "Backspace" || ev.key === "u") {
        this.state.undoVertex();
        void this.previewDraft();
      } else if (ev.key === "Escape") {
        this.state.clearDraft();
        this.redraw();
      }
    });
    el<HTMLButtonElement>("save").addEventListener("click", () => void this.saveDraft());
    el<HTMLButtonElement>("run").addEventListener("click", () => void this.runSqlBox());
    el<HTMLButtonElement>("pick-intersect").addEventListener("click", () => {
      const a = el<HTMLSelectElement>("pick-line-a").value;
      const b = el<HTMLSelectElement>("pick-line-b").value;
      if (a && b) void this.runPicked(intersectLinesQuery(a, b));
    });
    el<HTMLButtonElement>("pick-through").addEventListener("click", () => {
      const p = el<HTMLSelectElement>("pick-point").value;
      if (p) void this.runPicked(linesThroughPointQuery(p));
    });
  }

  // -- editing ------------------------------------------------------------------

  async previewDraft(): Promise<void> {
    if (!this.state.canPreview()) {
      if (this.state.overlay?.source === "preview") this.state.clearOverlay();
      this.redraw();
      return;
    }
    try {
      const preview = await this.previewer.preview(this.state.draftBody("preview"));
      if (preview === null) return; // superseded by a newer request
      this.state.setPreviewOverlay(preview.codes, preview.rects as Rect[]);
      this.status(`preview: ${preview.codes.length} cells at level ${this.state.level}`);
    } catch (err) {
      this.state.clearOverlay();
      this.status(this.describe(err), true);
    }
    this.redraw();
  }

  async saveDraft(): Promise<void> {
    const name = el<HTMLInputElement>("entity-name").value.trim();
    if (!name) {
      this.status("give the entity a name before saving", true);
      return;
    }
    if (!this.state.canPreview()) {
      this.status("draw the geometry first", true);
      return;
    }
    const body = this.state.draftBody(name);
    const table = KIND_TO_TABLE[body.kind];
    const exists = this.state.entities.some((e) => e.table === table && e.name === name);
    if (exists && !window.confirm(`Replace the stored geometry of '${name}'?`)) {
      return;
    }
    try {
      const saved = await this.client.saveEntity(body);
      // Server truth: show what the service stored, not the local preview.
      const cells = await this.client.entityCells(table, name);
      this.state.clearDraft();
      this.state.setServerOverlay(cells.codes, cells.rects as Rect[]);
      await this.refreshEntities();
      this.status(
        saved.warning ?? `saved '${name}' (${saved.stored_codes} cells)`,
        Boolean(saved.warning),
      );
    } catch (err) {
      this.status(this.describe(err), true);
    }
    this.redraw();
  }

  async refreshEntities(): Promise<void> {
    const refs: EntityRef[] = [];
    for (const [table, column] of ENTITY_TABLES) {
      const result = await this.client.runQuery(`SELECT ${column} FROM ${table}`);
      for (const row of result.rows) {
        if (row[0] !== null) refs.push({ table, name: row[0] });
      }
    }
    this.state.setEntities(refs);
    this.renderEntityList();
    this.renderPickers();
  }

  renderEntityList(): void {
    const list = el<HTMLUListElement>("entities");
    list.innerHTML = "";
    for (const ref of this.state.entities) {
      const item = document.createElement("li");
      const show = document.createElement("a");
      show.textContent = `${ref.table.toLowerCase()}: ${ref.name}`;
      show.href = "#";
      show.addEventListener("click", (ev) => {
        ev.preventDefault();
        void this.showEntity(ref);
      });
      const remove = document.createElement("button");
      remove.textContent = "x";
      remove.title = `delete ${ref.name}`;
      remove.addEventListener("click", () => void this.removeEntity(ref));
      item.append(show, remove);
      list.append(item);
    }
  }

  renderPickers(): void {
    const lines = this.state.entities.filter((e) => e.table === "LINES").map((e) => e.name);
    const points = this.state.entities.filter((e) => e.table === "POINTS").map((e) => e.name);
    for (const [id, names] of [
      ["pick-line-a", lines],
      ["pick-line-b", lines],
      ["pick-point", points],
    ] as [string, string[]][]) {
      const select = el<HTMLSelectElement>(id);
      const previous = select.value;
      select.innerHTML = "";
      for (const name of names) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        select.append(option);
      }
      if (names.includes(previous)) select.value = previous;
    }
  }

  async showEntity(ref: EntityRef): Promise<void> {
    try {
      const cells = await this.client.entityCells(ref.table, ref.name);
      this.state.setServerOverlay(cells.codes, cells.rects as Rect[]);
      this.status(`${ref.name}: ${cells.codes.length} cells`);
    } catch (err) {
      this.status(this.describe(err), true);
    }
    this.redraw();
  }

  async removeEntity(ref: EntityRef): Promise<void> {
    if (!window.confirm(`Delete '${ref.name}' from ${ref.table}?`)) return;
    try {
      await this.client.deleteEntity(ref.table, ref.name);
      this.state.clearOverlay();
      await this.refreshEntities();
      this.status(`deleted '${ref.name}'`);
    } catch (err) {
      this.status(this.describe(err), true);
    }
    this.redraw();
  }

  // -- queries ---------------------------------------------------------------------

  async runPicked(picked: PickedQuery): Promise<void> {
    el<HTMLTextAreaElement>("sql").value = picked.sql;
    el<HTMLTextAreaElement>("bindings").value = JSON.stringify(picked.bindings, null, 1);
    await this.runSqlBox();
  }

  async runSqlBox(): Promise<void> {
    const sql = el<HTMLTextAreaElement>("sql").value;
    const bindingsText = el<HTMLTextAreaElement>("bindings").value.trim();
    let bindings: Record<string, BindingValue> | undefined;
    if (bindingsText) {
      try {
        bindings = JSON.parse(bindingsText);
      } catch (err) {
        this.status(`bindings are not valid JSON: ${String(err)}`, true);
        return;
      }
    }
    try {
      const result = await this.client.runQuery(sql, bindings);
      this.renderResult(result);
      // Overlay only changes on success; errors leave the map as it was.
      const highlight = overlayFromResult(result.kinds, result.rows);
      this.state.setQueryOverlay(highlight.codes, highlight.rects);
      this.redraw();
      this.status(`SQLSTATE ${result.sqlstate} - ${result.rows.length} rows`);
    } catch (err) {
      if (err instanceof ApiError && err.position) {
        const [line, col] = err.position;
        this.status(`[${err.sqlstate}] ${err.message} (line ${line}, column ${col})`, true);
        this.markSqlPosition(line, col);
      } else {
        this.status(this.describe(err), true);
      }
    }
  }

  markSqlPosition(line: number, col: number): void {
    const box = el<HTMLTextAreaElement>("sql");
    const lines = box.value.split("\n");
    let offset = 0;
    for (let i = 0; i < line - 1 && i < lines.length; i++) offset += lines[i].length + 1;
    offset += col - 1;
    box.focus();
    box.setSelectionRange(offset, Math.min(offset + 1, box.value.length));
  }

  renderResult(result: { columns: string[]; rows: (string | null)[][] }): void {
    const table = el<HTMLTableElement>("result");
    table.innerHTML = "";
    const head = table.createTHead().insertRow();
    for (const column of result.columns) {
      const cell = document.createElement("th");
      cell.textContent = column;
      head.append(cell);
    }
    const body = table.createTBody();
    for (const row of result.rows) {
      const tr = body.insertRow();
      for (const value of row) {
        tr.insertCell().textContent = value ?? "";
      }
    }
  }

  describe(err: unknown): string {
    if (err instanceof ApiError) return `[${err.sqlstate}] ${err.message}`;
    return String(err);
  }
}

new App().start().catch((err) => {
  document.getElementById("status")!.textContent = `failed to reach the service: ${err}`;
});
