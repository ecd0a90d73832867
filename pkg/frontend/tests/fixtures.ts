import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export function tmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "figviz-"));
}

export function writeRun(dir: string, name: string, header: string[], rows: number[][]): string {
  const file = path.join(dir, name);
  const lines = [header.join(",")];
  for (const row of rows) lines.push(row.map((v) => v.toPrecision(17)).join(","));
  fs.writeFileSync(file, lines.join("\n") + "\n");
  return file;
}

export function fig1Run(): string {
  const dir = tmpDir();
  const rows: number[][] = [];
  // deterministic pseudo-noise around 0.01
  for (let i = 0; i < 200; i++) {
    const u = Math.sin(i * 12.9898) * 43758.5453;
    const frac = u - Math.floor(u);
    rows.push([i, 0.01 + 1e-5 * (frac - 0.5), 1e-5 * (frac - 0.5)]);
  }
  writeRun(dir, "trials.csv", ["trial", "estimate", "error"], rows);
  return dir;
}

export function fig2Run(): string {
  const dir = tmpDir();
  const s = [1e-4, 3e-4, 1e-3, 3e-3];
  writeRun(
    dir,
    "summary.csv",
    ["s", "mean_abs_error"],
    s.map((v) => [v, 10 * v * v]),
  );
  return dir;
}

export function fig3Run(): string {
  const dir = tmpDir();
  const s = [1e-4, 3e-4, 1e-3];
  writeRun(
    dir,
    "summary.csv",
    ["s", "mean_oracle", "mean_bound_new", "mean_bound_robust", "mean_bound_robust_user"],
    s.map((v) => [v, 0.01 + v, 0.011 + v, 0.012 + 2 * v, 0.013 + 3 * v]),
  );
  return dir;
}

export function fig4Run(): string {
  const dir = tmpDir();
  const rows: number[][] = [];
  for (const p of [0, 0.05, 0.1]) {
    for (let b = 0; b < 4; b++) {
      rows.push([p, b * 0.005, (b + 1) * 0.005, 25, 0.0025 + b * 0.005, 0.01 + b * 0.002, 0.012 + b * 0.002, NaN, NaN]);
    }
  }
  writeRun(
    dir,
    "summary.csv",
    ["p", "r_lo", "r_hi", "count", "mean_r", "mean_oracle", "mean_bound_new", "mean_general_bound", "improvement_fraction"],
    rows,
  );
  return dir;
}
