/** Log-log SVG figures for the three proxlab CSV kinds. */

import { CsvError, num, parseCsv, requireColumns, Table } from "./csv.js";
import { extent, LogScale } from "./scale.js";
import { document as svgDocument, el, polygonPoints, polylinePoints, text } from "./svg.js";

export type FigureKind = "sweep" | "analytic" | "bestloss";

const WIDTH = 760;
const HEIGHT = 520;
const MARGIN = { left: 78, right: 170, top: 42, bottom: 56 };

const PALETTE = ["#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

const PROGRAM_LABELS: Record<string, string> = {
  ls: "constrained LS",
  qp: "penalized QP",
  bp: "residual BP",
};

interface Series {
  label: string;
  points: Array<[number, number]>; // data coordinates, positive
}

function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom, // svg y grows downward; y0 is the axis floor
    y1: MARGIN.top,
  };
}

function axes(xs: LogScale, ys: LogScale, xLabel: string, yLabel: string): string[] {
  const a = plotArea();
  const parts: string[] = [];
  parts.push(el("rect", {
    x: a.x0, y: a.y1, width: a.x1 - a.x0, height: a.y0 - a.y1,
    fill: "none", stroke: "#333", "stroke-width": 1,
  }));
  for (const t of xs.ticks()) {
    const px = xs.map(t.value);
    parts.push(el("line", { x1: px, y1: a.y0, x2: px, y2: a.y1, stroke: "#ddd", "stroke-width": 0.6 }));
    parts.push(text("text", { x: px, y: a.y0 + 18, "text-anchor": "middle", "font-size": 11, fill: "#333" }, t.label));
  }
  for (const t of ys.ticks()) {
    const py = ys.map(t.value);
    parts.push(el("line", { x1: a.x0, y1: py, x2: a.x1, y2: py, stroke: "#ddd", "stroke-width": 0.6 }));
    parts.push(text("text", { x: a.x0 - 6, y: py + 4, "text-anchor": "end", "font-size": 11, fill: "#333" }, t.label));
  }
  parts.push(text("text", {
    x: (a.x0 + a.x1) / 2, y: HEIGHT - 14, "text-anchor": "middle", "font-size": 13, fill: "#111",
  }, xLabel));
  parts.push(text("text", {
    x: 20, y: (a.y0 + a.y1) / 2, "text-anchor": "middle", "font-size": 13, fill: "#111",
    transform: `rotate(-90 20 ${(a.y0 + a.y1) / 2})`,
  }, yLabel));
  return parts;
}

function legend(entries: Array<{ label: string; color: string; dashed?: boolean }>): string[] {
  const a = plotArea();
  const parts: string[] = [];
  entries.forEach((entry, i) => {
    const y = a.y1 + 12 + i * 20;
    parts.push(el("line", {
      x1: a.x1 + 12, y1: y, x2: a.x1 + 40, y2: y,
      stroke: entry.color, "stroke-width": 2,
      ...(entry.dashed ? { "stroke-dasharray": "5,4" } : {}),
    }));
    parts.push(text("text", { x: a.x1 + 46, y: y + 4, "font-size": 12, fill: "#111" }, entry.label));
  });
  return parts;
}

function drawSeries(series: Series[], xs: LogScale, ys: LogScale): string[] {
  const parts: string[] = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts: Array<[number, number]> = s.points.map(([x, y]) => [xs.map(x), ys.map(y)]);
    if (pts.length === 1) {
      parts.push(el("circle", { cx: pts[0][0], cy: pts[0][1], r: 4, fill: color }));
    } else {
      parts.push(el("polyline", {
        points: polylinePoints(pts), fill: "none", stroke: color, "stroke-width": 1.6,
      }));
    }
  });
  return parts;
}

function scalesFor(series: Series[]): { xs: LogScale; ys: LogScale } {
  const a = plotArea();
  const allX = series.flatMap((s) => s.points.map((p) => p[0]));
  const allY = series.flatMap((s) => s.points.map((p) => p[1]));
  const [xLo, xHi] = extent(allX);
  const [yLo, yHi] = extent(allY);
  return {
    xs: new LogScale(xLo, xHi, a.x0, a.x1),
    ys: new LogScale(yLo, yHi, a.y0, a.y1),
  };
}

function positivePoints(rows: Array<[number, number]>): Array<[number, number]> {
  // Log axes cannot place zeros; drop nonpositive losses (exact recoveries).
  return rows.filter(([x, y]) => x > 0 && y > 0);
}

export function renderSweep(csvText: string): string {
  const table = parseCsv(csvText);
  const cols = requireColumns(table, ["program", "rho", "mean_nnse", "k", "N", "s", "eta"]);
  const byProgram = new Map<string, Array<[number, number]>>();
  for (const row of table.rows) {
    const program = row[cols.get("program")!];
    if (!byProgram.has(program)) byProgram.set(program, []);
    byProgram.get(program)!.push([num(row, cols, "rho"), num(row, cols, "mean_nnse")]);
  }
  const series: Series[] = [];
  for (const [program, pts] of byProgram) {
    const kept = positivePoints(pts).sort((p, q) => p[0] - q[0]);
    if (kept.length > 0) {
      series.push({ label: PROGRAM_LABELS[program] ?? program, points: kept });
    }
  }
  if (series.length === 0) {
    throw new CsvError("no positive (rho, mean_nnse) points to draw");
  }
  const { xs, ys } = scalesFor(series);
  const meta = table.rows[0];
  const title = `average loss vs normalized parameter (N=${meta[cols.get("N")!]}, ` +
    `s=${meta[cols.get("s")!]}, eta=${Number(meta[cols.get("eta")!])}, k=${meta[cols.get("k")!]})`;
  return svgDocument(WIDTH, HEIGHT, [
    ...axes(xs, ys, "rho (parameter / optimal parameter)", "mean nnse"),
    ...drawSeries(series, xs, ys),
    ...legend(series.map((s, i) => ({ label: s.label, color: PALETTE[i % PALETTE.length] }))),
    text("text", { x: WIDTH / 2, y: 24, "text-anchor": "middle", "font-size": 14, fill: "#111" }, title),
  ]);
}

export function renderAnalytic(csvText: string): string {
  const table = parseCsv(csvText);
  const cols = requireColumns(table, ["quantity", "grid_var", "grid_value", "s", "N", "u_or_lambda", "value"]);
  const bySeries = new Map<string, Array<[number, number]>>();
  let gridVar = "grid value";
  for (const row of table.rows) {
    gridVar = row[cols.get("grid_var")!];
    const quantity = row[cols.get("quantity")!];
    const s = row[cols.get("s")!];
    const key = gridVar === "N"
      ? `${quantity} s=${s} u=${Number(row[cols.get("u_or_lambda")!])}`
      : `${quantity} s=${s}`;
    if (!bySeries.has(key)) bySeries.set(key, []);
    bySeries.get(key)!.push([num(row, cols, "grid_value"), Math.abs(num(row, cols, "value"))]);
  }
  const series: Series[] = [];
  for (const [label, pts] of bySeries) {
    const kept = positivePoints(pts).sort((p, q) => p[0] - q[0]);
    if (kept.length > 0) series.push({ label, points: kept });
  }
  if (series.length === 0) {
    throw new CsvError("no positive analytic values to draw");
  }
  const { xs, ys } = scalesFor(series);
  return svgDocument(WIDTH, HEIGHT, [
    ...axes(xs, ys, gridVar === "N" ? "dimension N" : "threshold", "|value|"),
    ...drawSeries(series, xs, ys),
    ...legend(series.map((s, i) => ({ label: s.label, color: PALETTE[i % PALETTE.length] }))),
    text("text", { x: WIDTH / 2, y: 24, "text-anchor": "middle", "font-size": 14, fill: "#111" },
      "closed-form risk curves"),
  ]);
}

export function renderBestloss(csvText: string): string {
  const table = parseCsv(csvText);
  const cols = requireColumns(table, ["N", "mean_best_nnse", "std_best_nnse", "k", "n_sigma", "s", "eta"]);
  const rows = table.rows
    .map((row) => ({
      n: num(row, cols, "N"),
      mean: num(row, cols, "mean_best_nnse"),
      std: num(row, cols, "std_best_nnse"),
    }))
    .filter((r) => r.n > 0 && r.mean > 0)
    .sort((a, b) => a.n - b.n);
  if (rows.length === 0) {
    throw new CsvError("no positive best-loss rows to draw");
  }
  const mean: Series = { label: "mean best loss", points: rows.map((r) => [r.n, r.mean]) };
  // Ribbon bounds clamped away from zero so the log axis stays valid; a
  // zero std column collapses the ribbon onto the mean line.
  const ribbonLow = rows.map((r): [number, number] => [r.n, Math.max(r.mean - r.std, r.mean * 1e-3)]);
  const ribbonHigh = rows.map((r): [number, number] => [r.n, r.mean + r.std]);
  const refLow: Series = { label: "N^0.3", points: rows.map((r) => [r.n, r.n ** 0.3]) };
  const refHigh: Series = { label: "2 N^(1/3)", points: rows.map((r) => [r.n, 2 * r.n ** (1 / 3)]) };

  const all = [mean, refLow, refHigh,
    { label: "", points: ribbonHigh }, { label: "", points: ribbonLow }];
  const { xs, ys } = scalesFor(all);
  const ribbon = el("polygon", {
    points: polygonPoints(
      ribbonHigh.map(([x, y]): [number, number] => [xs.map(x), ys.map(y)]),
      ribbonLow.map(([x, y]): [number, number] => [xs.map(x), ys.map(y)]),
    ),
    fill: "#bbbbbb",
    "fill-opacity": 0.45,
    stroke: "none",
  });
  const meanPts = mean.points.map(([x, y]): [number, number] => [xs.map(x), ys.map(y)]);
  const meanMark = meanPts.length === 1
    ? el("circle", { cx: meanPts[0][0], cy: meanPts[0][1], r: 4, fill: "#1f77b4" })
    : el("polyline", { points: polylinePoints(meanPts), fill: "none", stroke: "#1f77b4", "stroke-width": 1.8 });
  const refs = [refLow, refHigh].map((s, i) =>
    el("polyline", {
      points: polylinePoints(s.points.map(([x, y]): [number, number] => [xs.map(x), ys.map(y)])),
      fill: "none", stroke: i === 0 ? "#555555" : "#999999",
      "stroke-width": 1.2, "stroke-dasharray": "5,4",
    }));
  return svgDocument(WIDTH, HEIGHT, [
    ...axes(xs, ys, "dimension N", "best nnse over the radius grid"),
    ribbon,
    ...refs,
    meanMark,
    ...legend([
      { label: "mean best loss", color: "#1f77b4" },
      { label: "mean +- std", color: "#bbbbbb" },
      { label: "N^0.3", color: "#555555", dashed: true },
      { label: "2 N^(1/3)", color: "#999999", dashed: true },
    ]),
    text("text", { x: WIDTH / 2, y: 24, "text-anchor": "middle", "font-size": 14, fill: "#111" },
      "best residual-program loss vs dimension"),
  ]);
}

export function render(kind: FigureKind, csvText: string): string {
  switch (kind) {
    case "sweep":
      return renderSweep(csvText);
    case "analytic":
      return renderAnalytic(csvText);
    case "bestloss":
      return renderBestloss(csvText);
  }
}
