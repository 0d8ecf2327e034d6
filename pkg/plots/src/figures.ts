/** Renderers: one pure function per figure kind, CSV text in, SVG text out. */

import { readFileSync } from "node:fs";

import {
  CsvFormatError,
  numericColumn,
  parseStampedCsv,
  slopeComments,
  StampedCsv,
} from "./csv.js";
import { FigureSpec, KIND_SCHEMA, RecipeError } from "./recipe.js";
import {
  axes,
  fmt,
  frame,
  finish,
  label,
  leastSquares,
  polyline,
  scatter,
} from "./svg.js";

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

function readInput(path: string, schema: string): StampedCsv {
  return parseStampedCsv(readFileSync(path, "utf-8"), schema);
}

/** Power-law guide through the geometric center of (xs, ys), annotated. */
function powerGuide(
  f: ReturnType<typeof frame>,
  xs: number[],
  ys: number[],
  exponent: number,
  text: string,
  color = "#555555"
): void {
  const logc = (vals: number[]) =>
    vals.reduce((a, b) => a + Math.log(b), 0) / vals.length;
  const cx = logc(xs);
  const cy = logc(ys);
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const y = (x: number) => Math.exp(cy + exponent * (Math.log(x) - cx));
  polyline(f, [x0, x1], [y(x0), y(x1)], color, {
    dash: "6 4",
    cssClass: "guide",
  });
  label(f, f.x.toPixel(x1) - 60, f.y.toPixel(y(x1)) - 6, text, color);
}

function renderHistory(fig: FigureSpec): string {
  const csv = readInput(fig.inputs[0].path, KIND_SCHEMA.history);
  const t = numericColumn(csv, "t");
  const norm = numericColumn(csv, "l2_norm");
  const amp = numericColumn(csv, "amplitude");
  const f = frame(t, norm.concat(amp), fig.xScale ?? "linear", fig.yScale ?? "linear");
  axes(f, fig.id, "t", "L2 norm / amplitude");
  polyline(f, t, norm, PALETTE[0]);
  polyline(f, t, amp, PALETTE[1], { dash: "2 3" });
  return finish(f);
}

function renderErrors(fig: FigureSpec): string {
  const csv = readInput(fig.inputs[0].path, KIND_SCHEMA.errors);
  const rows = csv.rows.filter((r) => (r.l2_error as number) > 0);
  if (rows.length === 0) throw new CsvFormatError("no positive errors to plot");
  const t = rows.map((r) => r.t as number);
  const err = rows.map((r) => r.l2_error as number);
  const f = frame(t, err, fig.xScale ?? "linear", fig.yScale ?? "log");
  axes(f, fig.id, "t", "L2 error");
  polyline(f, t, err, PALETTE[0]);
  return finish(f);
}

const UNSIGNED = "(?:\\d+(?:\\.\\d+)?|\\.\\d+)(?:[eE][+-]?\\d+)?";
const LAMBDA_RE = new RegExp(`^lambda_max=([+-]?${UNSIGNED})([+-]${UNSIGNED})j$`);

function lambdaMaxFromComments(csv: StampedCsv, path: string): number {
  for (const c of csv.comments) {
    const m = LAMBDA_RE.exec(c);
    if (m) return Number(m[1]);
  }
  throw new CsvFormatError(`${path}: no lambda_max comment`);
}

function renderGrowthScaling(fig: FigureSpec): string {
  const dts: number[] = [];
  const lams: number[] = [];
  for (const inp of fig.inputs) {
    const csv = readInput(inp.path, KIND_SCHEMA["growth-scaling"]);
    dts.push(inp.dt as number);
    lams.push(lambdaMaxFromComments(csv, inp.path));
  }
  if (lams.some((v) => v <= 0)) {
    throw new CsvFormatError("growth-scaling needs positive growth rates");
  }
  const f = frame(dts, lams, "log", "log");
  axes(f, fig.id, "dt", "Re(lambda_max)");
  scatter(f, dts, lams, PALETTE[0]);
  const fit = leastSquares(dts.map(Math.log), lams.map(Math.log));
  powerGuide(f, dts, lams, fit.slope, `fit slope=${fit.slope.toFixed(3)}`, PALETTE[0]);
  for (const g of fig.guides ?? []) {
    powerGuide(f, dts, lams, g.exponent, g.label ?? `slope=${fmt(g.exponent)}`);
  }
  return finish(f);
}

function renderEndpointConvergence(fig: FigureSpec): string {
  const csv = readInput(fig.inputs[0].path, KIND_SCHEMA["endpoint-convergence"]);
  const fitted = slopeComments(csv);
  const bySch = new Map<string, { eps: number[]; rel: number[] }>();
  for (const r of csv.rows) {
    const sid = String(r.scheme);
    const entry = bySch.get(sid) ?? { eps: [], rel: [] };
    entry.eps.push(r.epsilon as number);
    entry.rel.push(r.rel_error as number);
    bySch.set(sid, entry);
  }
  const allEps = csv.rows.map((r) => r.epsilon as number);
  const allRel = csv.rows.map((r) => r.rel_error as number);
  if (allRel.some((v) => v <= 0)) {
    throw new CsvFormatError("endpoint-convergence needs positive errors");
  }
  const f = frame(allEps, allRel, "log", "log");
  axes(f, fig.id, "epsilon", "relative endpoint error");
  let ci = 0;
  for (const [sid, pts] of [...bySch.entries()].sort()) {
    const color = PALETTE[ci % PALETTE.length];
    ci += 1;
    scatter(f, pts.eps, pts.rel, color, 3, `pt-${sid}`);
    const slope =
      fitted.get(sid) ??
      leastSquares(pts.eps.map(Math.log), pts.rel.map(Math.log)).slope;
    if (pts.eps.length >= 2) {
      powerGuide(f, pts.eps, pts.rel, slope, `${sid} slope=${slope.toFixed(3)}`, color);
    }
  }
  for (const g of fig.guides ?? []) {
    powerGuide(f, allEps, allRel, g.exponent, g.label ?? `slope=${fmt(g.exponent)}`);
  }
  return finish(f);
}

function renderRegionContour(fig: FigureSpec): string {
  const csv = readInput(fig.inputs[0].path, KIND_SCHEMA["region-contour"]);
  const zi = [...new Set(numericColumn(csv, "im_zim"))].sort((a, b) => a - b);
  const ze = [...new Set(numericColumn(csv, "im_zex"))].sort((a, b) => a - b);
  const sigma = new Map<string, number>();
  for (const r of csv.rows) {
    sigma.set(`${r.im_zim}|${r.im_zex}`, r.max_sigma as number);
  }
  const f = frame(zi, ze, "linear", "linear");
  axes(f, fig.id, "Im(z_implicit)", "Im(z_explicit)");
  const cellW = Math.abs(f.x.toPixel(zi[1] ?? zi[0] + 1) - f.x.toPixel(zi[0]));
  const cellH = Math.abs(f.y.toPixel(ze[1] ?? ze[0] + 1) - f.y.toPixel(ze[0]));
  const at = (i: number, j: number) => sigma.get(`${zi[i]}|${ze[j]}`) ?? NaN;
  for (let i = 0; i < zi.length; i += 1) {
    for (let j = 0; j < ze.length; j += 1) {
      const v = at(i, j);
      const unstable = v > 1;
      // a cell on the |sigma| = 1 contour: some 4-neighbor lies on the other side
      const boundary = [at(i - 1, j), at(i + 1, j), at(i, j - 1), at(i, j + 1)]
        .filter((w) => !Number.isNaN(w))
        .some((w) => (w > 1) !== unstable);
      const fill = boundary ? "#d62728" : unstable ? "#fddbc7" : "#d1e5f0";
      const cls = boundary ? "contour" : unstable ? "unstable" : "stable";
      f.parts.push(
        `<rect class="${cls}" x="${fmt(f.x.toPixel(zi[i]) - cellW / 2)}" y="${fmt(
          f.y.toPixel(ze[j]) - cellH / 2
        )}" width="${fmt(cellW)}" height="${fmt(cellH)}" fill="${fill}"/>`
      );
    }
  }
  return finish(f);
}

function renderSpectrum(fig: FigureSpec): string {
  const csv = readInput(fig.inputs[0].path, KIND_SCHEMA.spectrum);
  const re = numericColumn(csv, "re_sigma");
  const im = numericColumn(csv, "im_sigma");
  const lim = Math.max(1.05, ...re.map(Math.abs), ...im.map(Math.abs));
  const f = frame([-lim, lim], [-lim, lim], "linear", "linear", 480, 480);
  axes(f, fig.id, "Re(sigma)", "Im(sigma)");
  const cx = f.x.toPixel(0);
  const cy = f.y.toPixel(0);
  const r = Math.abs(f.x.toPixel(1) - cx);
  f.parts.push(
    `<circle class="unit-circle" cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(
      r
    )}" fill="none" stroke="#888888" stroke-dasharray="4 3"/>`
  );
  const resolvedMask = csv.columns.includes("resolved")
    ? csv.rows.map((row) => row.resolved === 1)
    : csv.rows.map(() => true);
  scatter(
    f,
    re.filter((_, i) => resolvedMask[i]),
    im.filter((_, i) => resolvedMask[i]),
    PALETTE[0],
    2.5,
    "pt-resolved"
  );
  scatter(
    f,
    re.filter((_, i) => !resolvedMask[i]),
    im.filter((_, i) => !resolvedMask[i]),
    PALETTE[1],
    2.5,
    "pt-drifting"
  );
  return finish(f);
}

function renderPrediction(fig: FigureSpec): string {
  const csv = readInput(fig.inputs[0].path, KIND_SCHEMA.prediction);
  const t = numericColumn(csv, "t");
  const l2 = numericColumn(csv, "predicted_l2");
  let traceT: number[] = [];
  let traceN: number[] = [];
  if (fig.inputs.length > 1) {
    const tr = readInput(fig.inputs[1].path, "trace");
    traceT = numericColumn(tr, "t");
    traceN = numericColumn(tr, "l2_norm");
  }
  const f = frame(
    t.concat(traceT),
    l2.concat(traceN),
    fig.xScale ?? "linear",
    fig.yScale ?? "linear"
  );
  axes(f, fig.id, "t", "L2 norm");
  polyline(f, t, l2, PALETTE[1], { dash: "5 3" });
  if (traceT.length > 0) polyline(f, traceT, traceN, PALETTE[0]);
  return finish(f);
}

const RENDERERS: Record<string, (fig: FigureSpec) => string> = {
  history: renderHistory,
  errors: renderErrors,
  "growth-scaling": renderGrowthScaling,
  "endpoint-convergence": renderEndpointConvergence,
  "region-contour": renderRegionContour,
  spectrum: renderSpectrum,
  prediction: renderPrediction,
};

export function render(fig: FigureSpec): string {
  const renderer = RENDERERS[fig.kind];
  if (!renderer) throw new RecipeError(`unknown figure kind ${fig.kind}`);
  return renderer(fig);
}
