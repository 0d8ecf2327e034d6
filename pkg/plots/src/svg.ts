/**
 * Minimal deterministic SVG chart primitives.
 *
 * All numbers are formatted through one fixed-precision formatter and
 * nothing time- or environment-dependent is emitted, so rendering the same
 * data twice produces byte-identical output.
 */

export type Scale = "linear" | "log";

export interface Extent {
  min: number;
  max: number;
}

export function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  const s = v.toPrecision(8);
  return s.includes(".") ? s.replace(/\.?0+($|e)/, "$1") : s;
}

export function extent(values: number[]): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!(min <= max)) throw new Error("empty extent");
  if (min === max) {
    const pad = min === 0 ? 1 : Math.abs(min) * 0.5;
    return { min: min - pad, max: max + pad };
  }
  return { min, max };
}

export class Axis {
  constructor(
    readonly ext: Extent,
    readonly scale: Scale,
    readonly pixelMin: number,
    readonly pixelMax: number
  ) {
    if (scale === "log" && ext.min <= 0) {
      throw new Error("log scale requires positive data");
    }
  }

  toPixel(v: number): number {
    const { min, max } = this.ext;
    const t =
      this.scale === "log"
        ? (Math.log(v) - Math.log(min)) / (Math.log(max) - Math.log(min))
        : (v - min) / (max - min);
    return this.pixelMin + t * (this.pixelMax - this.pixelMin);
  }

  ticks(n = 5): number[] {
    const { min, max } = this.ext;
    if (this.scale === "log") {
      const lo = Math.ceil(Math.log10(min));
      const hi = Math.floor(Math.log10(max));
      const out: number[] = [];
      const step = Math.max(1, Math.floor((hi - lo) / n) || 1);
      for (let e = lo; e <= hi; e += step) out.push(10 ** e);
      return out.length >= 2 ? out : [min, max];
    }
    const out: number[] = [];
    for (let i = 0; i <= n; i += 1) out.push(min + ((max - min) * i) / n);
    return out;
  }
}

export interface ChartFrame {
  width: number;
  height: number;
  x: Axis;
  y: Axis;
  parts: string[];
}

export const MARGIN = { left: 64, right: 16, top: 32, bottom: 44 };

export function frame(
  xValues: number[],
  yValues: number[],
  xScale: Scale,
  yScale: Scale,
  width = 640,
  height = 420
): ChartFrame {
  const x = new Axis(extent(xValues), xScale, MARGIN.left, width - MARGIN.right);
  const y = new Axis(extent(yValues), yScale, height - MARGIN.bottom, MARGIN.top);
  return { width, height, x, y, parts: [] };
}

export function axes(f: ChartFrame, title: string, xLabel: string, yLabel: string): void {
  const x0 = MARGIN.left;
  const x1 = f.width - MARGIN.right;
  const y0 = f.height - MARGIN.bottom;
  const y1 = MARGIN.top;
  f.parts.push(
    `<rect x="0" y="0" width="${f.width}" height="${f.height}" fill="white"/>`,
    `<text x="${f.width / 2}" y="18" text-anchor="middle" font-size="14">${title}</text>`,
    `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
    `<text x="${(x0 + x1) / 2}" y="${f.height - 8}" text-anchor="middle" font-size="12">${xLabel}</text>`,
    `<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 ${(y0 + y1) / 2})">${yLabel}</text>`
  );
  for (const t of f.x.ticks()) {
    const px = f.x.toPixel(t);
    f.parts.push(
      `<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 4}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${y0 + 18}" text-anchor="middle" font-size="10">${fmt(t)}</text>`
    );
  }
  for (const t of f.y.ticks()) {
    const py = f.y.toPixel(t);
    f.parts.push(
      `<line x1="${x0 - 4}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${x0 - 7}" y="${fmt(py + 3)}" text-anchor="end" font-size="10">${fmt(t)}</text>`
    );
  }
}

export function polyline(
  f: ChartFrame,
  xs: number[],
  ys: number[],
  color: string,
  opts: { dash?: string; width?: number; cssClass?: string } = {}
): void {
  const pts = xs
    .map((x, i) => `${fmt(f.x.toPixel(x))},${fmt(f.y.toPixel(ys[i]))}`)
    .join(" ");
  const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
  const cls = opts.cssClass ? ` class="${opts.cssClass}"` : "";
  f.parts.push(
    `<polyline${cls} points="${pts}" fill="none" stroke="${color}" stroke-width="${opts.width ?? 1.5}"${dash}/>`
  );
}

export function scatter(
  f: ChartFrame,
  xs: number[],
  ys: number[],
  color: string,
  r = 2.5,
  cssClass = "pt"
): void {
  for (let i = 0; i < xs.length; i += 1) {
    f.parts.push(
      `<circle class="${cssClass}" cx="${fmt(f.x.toPixel(xs[i]))}" cy="${fmt(
        f.y.toPixel(ys[i])
      )}" r="${r}" fill="${color}"/>`
    );
  }
}

export function label(f: ChartFrame, x: number, y: number, text: string, color = "black"): void {
  f.parts.push(
    `<text x="${fmt(x)}" y="${fmt(y)}" font-size="11" fill="${color}">${text}</text>`
  );
}

export function finish(f: ChartFrame): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" height="${f.height}" ` +
    `viewBox="0 0 ${f.width} ${f.height}" font-family="sans-serif">\n` +
    f.parts.join("\n") +
    "\n</svg>\n"
  );
}

/** Least-squares slope/intercept of y vs x (already axis-transformed). */
export function leastSquares(xs: number[], ys: number[]): { slope: number; intercept: number } {
  const n = xs.length;
  if (n < 2) throw new Error("need at least 2 points for a fit");
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i += 1) {
    sxx += (xs[i] - mx) ** 2;
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx === 0) throw new Error("degenerate fit");
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}
