/**
 * Turns CSV rows into the series that get plotted. Everything shown in a
 * figure traces back to these structures; no physics is recomputed here.
 */

import type { ConvergenceRow, ObservablesRow } from "./csv.js";

export interface Curve {
  name: string;
  points: [number, number][];
}

export interface ConvergenceSeries {
  methods: Curve[];
  guides: Curve[];
}

export type ObservablesMode = "values" | "deltas";

export interface ObservablesSeries {
  mode: ObservablesMode;
  panels: Curve[];
}

/** Per-method curves (NaN rows dropped) plus O(h^2) and O(h^4) guide lines. */
export function buildConvergenceSeries(rows: ConvergenceRow[]): ConvergenceSeries {
  const byMethod = new Map<string, ConvergenceRow[]>();
  for (const row of rows) {
    const bucket = byMethod.get(row.method) ?? [];
    bucket.push(row);
    byMethod.set(row.method, bucket);
  }

  const methods: Curve[] = [];
  for (const [name, bucket] of byMethod) {
    const points = bucket
      .filter((r) => Number.isFinite(r.error) && r.error > 0 && r.h > 0)
      .sort((a, b) => b.h - a.h)
      .map((r) => [r.h, r.error] as [number, number]);
    methods.push({ name, points });
  }

  const finite = methods.flatMap((m) => m.points);
  const guides: Curve[] = [];
  if (finite.length > 0) {
    const hs = [...new Set(finite.map((p) => p[0]))].sort((a, b) => b - a);
    // anchor the slow guide to the shallowest curve at its largest h and the
    // fast guide to the steepest curve at its smallest h
    const largestH = Math.max(...finite.map((p) => p[0]));
    const smallestH = Math.min(...finite.map((p) => p[0]));
    const c2 = Math.max(
      ...finite.filter((p) => p[0] === largestH).map((p) => p[1] / largestH ** 2),
    );
    const c4 = Math.min(
      ...finite.filter((p) => p[0] === smallestH).map((p) => p[1] / smallestH ** 4),
    );
    guides.push({ name: "O(h^2)", points: hs.map((h) => [h, c2 * h ** 2]) });
    guides.push({ name: "O(h^4)", points: hs.map((h) => [h, c4 * h ** 4]) });
  }
  return { methods, guides };
}

const PANEL_KEYS = ["norm", "momentum", "energy", "energy_linear"] as const;

/** One curve per tracked quantity; deltas mode subtracts the first row. */
export function buildObservablesSeries(
  rows: ObservablesRow[],
  mode: ObservablesMode = "values",
): ObservablesSeries {
  if (rows.length === 0) {
    throw new Error("observables CSV has no data rows");
  }
  const base = rows[0];
  const panels: Curve[] = PANEL_KEYS.map((key) => ({
    name: key,
    points: rows
      .filter((r) => Number.isFinite(r[key]))
      .map((r) => [r.t, mode === "deltas" ? r[key] - base[key] : r[key]] as [number, number]),
  })).filter((curve) => curve.points.length > 0);
  return { mode, panels };
}

/** Log-log least-squares slope of a curve, for structural checks. */
export function curveSlope(curve: Curve): number {
  const pts = curve.points.filter((p) => p[0] > 0 && p[1] > 0);
  if (pts.length < 2) return NaN;
  const xs = pts.map((p) => Math.log(p[0]));
  const ys = pts.map((p) => Math.log(p[1]));
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) ** 2;
  }
  return num / den;
}
