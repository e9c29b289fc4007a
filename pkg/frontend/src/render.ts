/**
 * Canvas rendering: window frame, level grid, overlay cells, draft
 * geometry. The canvas is the unit square mapped to the database window
 * (whole-window fit, no pan/zoom), so rect math stays exact.
 */

import { rectToCanvas, snapRect, worldToUnit, type Rect } from "./cellmath.js";
import type { EditorState } from "./state.js";

const OVERLAY_STYLE = {
  preview: { fill: "rgba(245, 176, 65, 0.35)", stroke: "#af601a" },
  server: { fill: "rgba(127, 179, 213, 0.35)", stroke: "#2471a3" },
  query: { fill: "rgba(88, 214, 141, 0.45)", stroke: "#1e8449" },
} as const;

export function draw(ctx: CanvasRenderingContext2D, state: EditorState): void {
  const { width, height } = ctx.canvas;
  const dpr = (globalThis as { devicePixelRatio?: number }).devicePixelRatio ?? 1;
  ctx.clearRect(0, 0, width, height);

  // level grid
  const n = 1 << Math.min(state.level, 7); // finer grids are visual noise
  ctx.strokeStyle = "#e3e3e3";
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (let i = 1; i < n; i++) {
    const x = (i * width) / n;
    const y = (i * height) / n;
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
  }
  ctx.stroke();

  // overlay cells
  if (state.overlay) {
    const style = OVERLAY_STYLE[state.overlay.source];
    ctx.fillStyle = style.fill;
    ctx.strokeStyle = style.stroke;
    for (const rect of state.overlay.rects) {
      const [x0, y0, x1, y1] = snapRect(rectToCanvas(rect as Rect, width, height), dpr);
      ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
      ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
    }
  }

  // draft geometry in world coordinates
  if (state.vertices.length) {
    const pts = state.vertices.map(([wx, wy]) => {
      const [u, v] = worldToUnit(wx, wy, state.window);
      return [u * width, v * height] as [number, number];
    });
    ctx.strokeStyle = "#c0392b";
    ctx.fillStyle = "#c0392b";
    ctx.lineWidth = 2;
    if (pts.length > 1) {
      ctx.beginPath();
      ctx.moveTo(pts[0][0], pts[0][1]);
      for (const [x, y] of pts.slice(1)) ctx.lineTo(x, y);
      if (state.tool === "area" && pts.length > 2) ctx.closePath();
      ctx.stroke();
    }
    for (const [x, y] of pts) {
      ctx.beginPath();
      ctx.arc(x, y, 3.5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  // window frame
  ctx.strokeStyle = "#555";
  ctx.lineWidth = 1.5;
  ctx.strokeRect(0, 0, width, height);
}
