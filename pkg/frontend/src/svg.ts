/** Minimal deterministic SVG scene builder: fixed layout, fixed precision. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 40, right: 30, bottom: 60, left: 80 };

const FONT = "DejaVu Sans";

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  return Number(x.toPrecision(8)).toString();
}

export interface Scale {
  (v: number): number;
  ticks: number[];
  label: (v: number) => string;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const s = ((v: number) => outLo + ((v - lo) / span) * (outHi - outLo)) as Scale;
  const step = niceStep(span / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * Math.abs(step); t += step) {
    ticks.push(t);
  }
  s.ticks = ticks;
  s.label = (v) => formatTick(v);
  return s;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error("log scale requires positive domain");
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  const s = ((v: number) => outLo + ((Math.log10(v) - llo) / span) * (outHi - outLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) ticks.push(lo, hi);
  s.ticks = ticks;
  s.label = (v) => formatTick(v);
  return s;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(raw) || 1)));
  const frac = raw / mag;
  const nice = frac <= 1 ? 1 : frac <= 2 ? 2 : frac <= 5 ? 5 : 10;
  return nice * mag;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) {
    const e = Math.floor(Math.log10(abs));
    const m = v / Math.pow(10, e);
    const ms = Number(m.toPrecision(3)).toString();
    return ms === "1" ? `1e${e}` : `${ms}e${e}`;
  }
  return Number(v.toPrecision(4)).toString();
}

export class Scene {
  private parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none"): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, width = 1.5): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, size = 12, anchor = "start", rotate = 0): void {
    const t = rotate ? ` transform="rotate(${rotate} ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="${FONT}" font-size="${size}" ` +
        `text-anchor="${anchor}"${t}>${escapeXml(s)}</text>`,
    );
  }

  axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string, title: string): void {
    const { top, right, bottom, left } = MARGIN;
    const x0 = left;
    const x1 = WIDTH - right;
    const y0 = HEIGHT - bottom;
    const y1 = top;
    this.line(x0, y0, x1, y0, "#000");
    this.line(x0, y0, x0, y1, "#000");
    for (const t of xs.ticks) {
      const px = xs(t);
      this.line(px, y0, px, y0 + 5, "#000");
      this.text(px, y0 + 20, xs.label(t), 11, "middle");
    }
    for (const t of ys.ticks) {
      const py = ys(t);
      this.line(x0 - 5, py, x0, py, "#000");
      this.text(x0 - 8, py + 4, ys.label(t), 11, "end");
    }
    this.text((x0 + x1) / 2, HEIGHT - 15, xLabel, 13, "middle");
    this.text(20, (y0 + y1) / 2, yLabel, 13, "middle", -90);
    this.text(WIDTH / 2, 22, title, 15, "middle");
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}">` +
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>` +
      this.parts.join("") +
      `</svg>`
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}
