/**
 * Cell-code geometry on the client side.
 *
 * A code is a base-4 digit string addressing one quadtree cell; the server
 * spells the root cell "@" in wire formats. Rects are [x0, y0, x1, y1] in
 * unit-square coordinates (y growing downward), matching the service.
 */

export type Rect = [number, number, number, number];

/** Normalize a wire code: "@" means the root (empty digit string). */
export function normalizeCode(code: string): string {
  if (code === "@") return "";
  if (!/^[0-3]*$/.test(code)) throw new Error(`bad cell code: ${code}`);
  if (code.length > 16) throw new Error(`cell code too deep: ${code}`);
  return code;
}

/** Unit-square rect of a cell code (digit 0=NW, 1=NE, 2=SW, 3=SE). */
export function cellRect(code: string): Rect {
  const digits = normalizeCode(code);
  let x = 0;
  let y = 0;
  for (const ch of digits) {
    const d = ch.charCodeAt(0) - 48;
    x = x * 2 + (d & 1);
    y = y * 2 + (d >> 1);
  }
  const s = Math.pow(0.5, digits.length);
  return [x * s, y * s, (x + 1) * s, (y + 1) * s];
}

/** Scale a unit-square rect onto a width x height canvas. */
export function rectToCanvas(rect: Rect, width: number, height: number): Rect {
  return [rect[0] * width, rect[1] * height, rect[2] * width, rect[3] * height];
}

/**
 * Snap a canvas rect to whole device pixels. Each edge moves less than one
 * device pixel, so a snapped overlay stays within 1px of the exact rect.
 */
export function snapRect(rect: Rect, devicePixelRatio = 1): Rect {
  const snap = (v: number) => Math.round(v * devicePixelRatio) / devicePixelRatio;
  return [snap(rect[0]), snap(rect[1]), snap(rect[2]), snap(rect[3])];
}

/** Canvas pixel -> unit-square coordinates. */
export function canvasToUnit(px: number, py: number, width: number, height: number): [number, number] {
  return [px / width, py / height];
}

/** Unit-square -> world coordinates under the database window. */
export function unitToWorld(
  u: number,
  v: number,
  window: [number, number, number, number],
): [number, number] {
  const [minX, minY, maxX, maxY] = window;
  return [minX + u * (maxX - minX), minY + v * (maxY - minY)];
}

/** World -> unit-square coordinates under the database window. */
export function worldToUnit(
  x: number,
  y: number,
  window: [number, number, number, number],
): [number, number] {
  const [minX, minY, maxX, maxY] = window;
  return [(x - minX) / (maxX - minX), (y - minY) / (maxY - minY)];
}
