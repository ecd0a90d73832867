#!/usr/bin/env node
import * as fs from "node:fs";
import { buildFigure, FIGURES } from "./figures";
import { renderPng } from "./png";

function usage(): string {
  return `usage: figviz --figure <${FIGURES.join("|")}> --in <dir> --out <file.png>`;
}

export function main(argv: string[]): number {
  const opts: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--") || i + 1 >= argv.length) {
      process.stderr.write(`error: bad arguments\n${usage()}\n`);
      return 2;
    }
    opts[flag.slice(2)] = argv[i + 1];
  }
  const figure = opts["figure"];
  const dir = opts["in"];
  const out = opts["out"];
  if (!figure || !dir || !out) {
    process.stderr.write(`error: --figure, --in and --out are required\n${usage()}\n`);
    return 2;
  }
  try {
    const fig = buildFigure(figure, dir);
    fs.writeFileSync(out, renderPng(fig.svg, fig.meta));
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
  return 0;
}

if (typeof require !== "undefined" && require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
