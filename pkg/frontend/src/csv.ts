import * as fs from "node:fs";
import * as path from "node:path";

export interface Table {
  columns: string[];
  rows: Record<string, number>[];
}

/** Read a plain (unquoted) CSV of numeric columns. */
export function readCsv(file: string): Table {
  const text = fs.readFileSync(file, "utf8").trim();
  if (text.length === 0) {
    throw new Error(`${file}: empty file`);
  }
  const lines = text.split(/\r?\n/);
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: Record<string, number>[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `${file}:${i + 1}: expected ${columns.length} fields, got ${parts.length}`,
      );
    }
    const row: Record<string, number> = {};
    for (let j = 0; j < columns.length; j++) {
      const raw = parts[j].trim();
      row[columns[j]] = raw === "" ? NaN : Number(raw);
    }
    rows.push(row);
  }
  return { columns, rows };
}

/** Fail with a column-level message unless every required column exists. */
export function requireColumns(table: Table, file: string, required: string[]): void {
  const missing = required.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new Error(
      `${file}: missing required column(s) [${missing.join(", ")}]; ` +
        `found [${table.columns.join(", ")}]`,
    );
  }
}

/** Numeric column as an array, dropping NaNs. */
export function finiteColumn(table: Table, name: string): number[] {
  return table.rows.map((r) => r[name]).filter((v) => Number.isFinite(v));
}

export function datasetFile(dir: string, name: string): string {
  const file = path.join(dir, name);
  if (!fs.existsSync(file)) {
    throw new Error(`input file does not exist: ${file}`);
  }
  return file;
}
