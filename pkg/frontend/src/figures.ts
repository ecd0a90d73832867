import { readCsv, requireColumns, finiteColumn, datasetFile, Table } from "./csv";
import { fdHistogram } from "./bins";
import { Scene, linearScale, logScale, plotArea } from "./svg";

export interface Figure {
  svg: string;
  /** Recorded into the output image metadata. */
  meta: Record<string, unknown>;
}

export const FIGURES = ["fig1", "fig2", "fig3", "fig4"] as const;
export type FigureId = (typeof FIGURES)[number];

/** Render one figure analogue from a completed run directory. */
export function buildFigure(figure: string, dir: string): Figure {
  switch (figure) {
    case "fig1":
      return histogramFigure(dir, "estimate", "estimated rate", "estimate histogram");
    case "fig2":
      return scalingFigure(dir);
    case "fig3":
      return boundChainFigure(dir);
    case "fig4":
      return heatmapFigure(dir);
    default:
      throw new Error(`unknown figure id: ${figure} (expected ${FIGURES.join(", ")})`);
  }
}

function histogramFigure(dir: string, column: string, xLabel: string, title: string): Figure {
  const file = datasetFile(dir, "trials.csv");
  const table = readCsv(file);
  requireColumns(table, file, [column]);
  const values = finiteColumn(table, column);
  if (values.length === 0) {
    throw new Error(`${file}: no finite values in column '${column}'`);
  }
  const hist = fdHistogram(values);
  const area = plotArea();
  const xs = linearScale(hist.edges[0], hist.edges[hist.edges.length - 1], area.x0, area.x1);
  const ys = linearScale(0, Math.max(...hist.counts), area.y0, area.y1);
  const scene = new Scene();
  for (let i = 0; i < hist.counts.length; i++) {
    const x = xs(hist.edges[i]);
    const w = xs(hist.edges[i + 1]) - x;
    const y = ys(hist.counts[i]);
    scene.rect(x, y, w, area.y0 - y, "#4878a8", "#2b4a68");
  }
  scene.axes(xs, ys, xLabel, "count", title);
  return {
    svg: scene.render(),
    meta: {
      figure: "fig1",
      column,
      n: values.length,
      bin_rule: hist.rule,
      bin_width: hist.binWidth,
      bin_edges: hist.edges,
    },
  };
}

function scalingFigure(dir: string): Figure {
  const file = datasetFile(dir, "summary.csv");
  const table = readCsv(file);
  requireColumns(table, file, ["s", "mean_abs_error"]);
  const pts = table.rows
    .filter((r) => Number.isFinite(r.s) && r.s > 0 && r.mean_abs_error > 0)
    .map((r) => [r.s, r.mean_abs_error] as [number, number]);
  if (pts.length === 0) {
    throw new Error(`${file}: no positive (s, mean_abs_error) pairs`);
  }
  pts.sort((a, b) => a[0] - b[0]);
  const area = plotArea();
  const sLo = pts[0][0];
  const sHi = pts[pts.length - 1][0];
  const eVals = pts.map((p) => p[1]);
  // Include the reference line y = 2x + 1 (log10) in the y extent.
  const refLo = 10 * sLo * sLo;
  const refHi = 10 * sHi * sHi;
  const yLo = Math.min(...eVals, refLo);
  const yHi = Math.max(...eVals, refHi);
  const xs = logScale(sLo, sHi, area.x0, area.x1);
  const ys = logScale(yLo, yHi, area.y0, area.y1);
  const scene = new Scene();
  scene.line(xs(sLo), ys(refLo), xs(sHi), ys(refHi), "#b03030", 1.5, "6,4");
  scene.polyline(pts.map(([s, e]) => [xs(s), ys(e)]), "#2b4a68");
  for (const [s, e] of pts) scene.circle(xs(s), ys(e), 4, "#4878a8");
  scene.text(area.x1 - 10, area.y1 + 18, "ref: y = 2x + 1 (log10)", 11, "end");
  scene.axes(xs, ys, "perturbation strength s", "mean |error|", "error scaling");
  return {
    svg: scene.render(),
    meta: { figure: "fig2", points: pts, reference: "log10(y) = 2 log10(s) + 1" },
  };
}

const CHAIN_SERIES: [string, string][] = [
  ["mean_oracle", "#888888"],
  ["mean_bound_new", "#2b4a68"],
  ["mean_bound_robust", "#4878a8"],
  ["mean_bound_robust_user", "#b03030"],
];

function boundChainFigure(dir: string): Figure {
  const file = datasetFile(dir, "summary.csv");
  const table = readCsv(file);
  requireColumns(table, file, ["s", ...CHAIN_SERIES.map(([c]) => c)]);
  const rows = table.rows.filter((r) => Number.isFinite(r.s) && r.s > 0);
  if (rows.length === 0) {
    throw new Error(`${file}: no sweep rows with positive s`);
  }
  rows.sort((a, b) => a.s - b.s);
  const area = plotArea();
  const xs = logScale(rows[0].s, rows[rows.length - 1].s, area.x0, area.x1);
  const all: number[] = [];
  for (const [col] of CHAIN_SERIES) {
    for (const r of rows) if (Number.isFinite(r[col])) all.push(r[col]);
  }
  const ys = linearScale(0, Math.max(...all), area.y0, area.y1);
  const scene = new Scene();
  let legendY = area.y1 + 14;
  for (const [col, color] of CHAIN_SERIES) {
    const pts = rows
      .filter((r) => Number.isFinite(r[col]))
      .map((r) => [xs(r.s), ys(r[col])] as [number, number]);
    if (pts.length === 0) continue;
    scene.polyline(pts, color);
    for (const [px, py] of pts) scene.circle(px, py, 3, color);
    scene.line(area.x0 + 10, legendY, area.x0 + 34, legendY, color, 2);
    scene.text(area.x0 + 40, legendY + 4, col.replace("mean_", ""), 11);
    legendY += 16;
  }
  scene.axes(xs, ys, "perturbation strength s", "diamond-norm bound", "bound chain");
  return {
    svg: scene.render(),
    meta: { figure: "fig3", series: CHAIN_SERIES.map(([c]) => c), n_points: rows.length },
  };
}

function heatmapFigure(dir: string): Figure {
  const file = datasetFile(dir, "summary.csv");
  const table = readCsv(file);
  requireColumns(table, file, ["p", "r_lo", "r_hi", "mean_bound_new"]);
  const rows = table.rows;
  if (rows.length === 0) {
    throw new Error(`${file}: no aggregate rows`);
  }
  // Prefer the improvement fraction when the external bound was plugged in.
  const haveImprovement =
    table.columns.includes("improvement_fraction") &&
    rows.some((r) => Number.isFinite(r.improvement_fraction));
  const valueCol = haveImprovement ? "improvement_fraction" : "mean_bound_new";
  const ps = [...new Set(rows.map((r) => r.p))].sort((a, b) => a - b);
  const bins = [...new Set(rows.map((r) => r.r_lo))].sort((a, b) => a - b);
  const area = plotArea();
  const cellW = (area.x1 - area.x0) / bins.length;
  const cellH = (area.y0 - area.y1) / ps.length;
  const vals = rows.map((r) => r[valueCol]).filter(Number.isFinite);
  const vLo = Math.min(...vals);
  const vHi = Math.max(...vals);
  const scene = new Scene();
  for (const r of rows) {
    const i = bins.indexOf(r.r_lo);
    const j = ps.indexOf(r.p);
    const x = area.x0 + i * cellW;
    const y = area.y0 - (j + 1) * cellH;
    const t = vHi > vLo ? (r[valueCol] - vLo) / (vHi - vLo) : 0.5;
    scene.rect(x, y, cellW, cellH, shade(t), "#ffffff");
    scene.text(x + cellW / 2, y + cellH / 2 + 4, Number(r[valueCol].toPrecision(3)).toString(), 11, "middle");
  }
  for (let i = 0; i < bins.length; i++) {
    scene.text(area.x0 + (i + 0.5) * cellW, area.y0 + 20, Number(bins[i].toPrecision(3)).toString(), 11, "middle");
  }
  for (let j = 0; j < ps.length; j++) {
    scene.text(area.x0 - 8, area.y0 - (j + 0.5) * cellH + 4, Number(ps[j].toPrecision(3)).toString(), 11, "end");
  }
  scene.text((area.x0 + area.x1) / 2, 460, "error-rate bin (lower edge)", 13, "middle");
  scene.text(20, (area.y0 + area.y1) / 2, "perturbation level p", 13, "middle", -90);
  scene.text(360, 22, `per-bin ${valueCol}`, 15, "middle");
  return {
    svg: scene.render(),
    meta: { figure: "fig4", value: valueCol, p_values: ps, r_bins: bins },
  };
}

function shade(t: number): string {
  // white -> steel blue ramp
  const mix = (a: number, b: number) => Math.round(a + (b - a) * t);
  const r = mix(255, 43);
  const g = mix(255, 74);
  const b = mix(255, 104);
  return `rgb(${r},${g},${b})`;
}
