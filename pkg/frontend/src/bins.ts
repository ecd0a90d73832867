export interface Histogram {
  edges: number[];
  counts: number[];
  binWidth: number;
  rule: string;
}

function quantile(sorted: number[], q: number): number {
  const pos = (sorted.length - 1) * q;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

/**
 * Histogram with Freedman-Diaconis bin width (2 * IQR * n^(-1/3)),
 * clamped to at least 5 bins.
 */
export function fdHistogram(values: number[], minBins = 5): Histogram {
  if (values.length === 0) {
    throw new Error("cannot bin an empty dataset");
  }
  const sorted = [...values].sort((a, b) => a - b);
  const lo = sorted[0];
  const hi = sorted[sorted.length - 1];
  const iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const span = hi - lo || Math.abs(hi) || 1;
  let width = 2 * iqr * Math.cbrt(1 / sorted.length);
  if (!(width > 0)) {
    width = span / minBins;
  }
  let nBins = Math.max(minBins, Math.ceil(span / width));
  width = span / nBins;
  const edges = Array.from({ length: nBins + 1 }, (_, i) => lo + i * width);
  const counts = new Array<number>(nBins).fill(0);
  for (const v of sorted) {
    const idx = Math.min(nBins - 1, Math.floor((v - lo) / width));
    counts[idx] += 1;
  }
  return { edges, counts, binWidth: width, rule: "freedman-diaconis" };
}
