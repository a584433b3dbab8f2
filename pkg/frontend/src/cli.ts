#!/usr/bin/env node
/**
 * Render a switchlab CSV as an SVG figure.
 *
 * Usage: switchlab-figures <terms|sweep> <input.csv> <output.svg>
 *
 * `terms` expects a Monte-Carlo per-rep CSV (rep,p1,p2,p3,total);
 * `sweep` expects a noise-sweep CSV.  On any input problem nothing is
 * written.  Exit codes: 0 success, 1 bad input, 2 usage.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { CsvError } from "./csv.js";
import { renderSweepFigure, renderTermsFigure } from "./figures.js";

const RENDERERS: Record<string, (csv: string) => string> = {
  terms: renderTermsFigure,
  sweep: renderSweepFigure,
};

export function runCli(argv: string[]): number {
  if (argv.length !== 3 || !(argv[0] in RENDERERS)) {
    console.error("usage: switchlab-figures <terms|sweep> <input.csv> <output.svg>");
    return 2;
  }
  const [kind, inputPath, outputPath] = argv;
  let csv: string;
  try {
    csv = readFileSync(inputPath, "utf-8");
  } catch (err) {
    console.error(`cannot read ${inputPath}: ${(err as Error).message}`);
    return 1;
  }
  let svg: string;
  try {
    svg = RENDERERS[kind](csv);
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`invalid ${kind} CSV: ${err.message}`);
      return 1;
    }
    throw err;
  }
  writeFileSync(outputPath, svg, "utf-8");
  console.error(`wrote ${outputPath}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  fileURLToPath(import.meta.url) === resolve(process.argv[1]);
if (invokedDirectly) {
  process.exit(runCli(process.argv.slice(2)));
}
