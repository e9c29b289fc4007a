/**
 * Query pickers. Each one writes the bundled procedure's body query into
 * the editable SQL box (host parameters intact) and fills the bindings, so
 * running a picker teaches the language rather than hiding it.
 */

import type { BindingValue } from "./api.js";

export interface PickedQuery {
  sql: string;
  bindings: Record<string, BindingValue>;
}

/** Cells shared by two named lines (the two-line intersection query). */
export function intersectLinesQuery(lineA: string, lineB: string): PickedQuery {
  const sql = [
    "SELECT CODE",
    "FROM LINES",
    "WHERE LINE = :line_a_param",
    "INTERSECT",
    "SELECT CODE",
    "FROM LINES",
    "WHERE LINE = :line_b_param",
  ].join("\n");
  return { sql, bindings: { line_a_param: lineA, line_b_param: lineB } };
}

/** All lines whose codes cover every code of a named point (division). */
export function linesThroughPointQuery(pointName: string): PickedQuery {
  const sql = [
    "SELECT LINE",
    "      FROM LINES",
    "MINUS",
    "(SELECT LINE",
    "      FROM ((SELECT *",
    "            FROM (SELECT LINE FROM LINES),",
    "                 (SELECT CODE FROM POINTS",
    "                  WHERE POINT = :point_a_param))",
    "      MINUS",
    "      LINES))",
  ].join("\n");
  return { sql, bindings: { point_a_param: pointName } };
}
