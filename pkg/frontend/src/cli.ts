/**
 * Shared command-line handling for the two plot commands.
 */

import { writeFileSync } from "node:fs";
import { readConvergenceCsv, readObservablesCsv } from "./csv.js";
import { buildConvergenceSeries, buildObservablesSeries } from "./series.js";
import { renderConvergenceSvg, renderObservablesSvg } from "./render.js";

interface ParsedArgs {
  input: string;
  output: string;
  deltas: boolean;
}

export function parseArgs(argv: string[], usage: string): ParsedArgs {
  const positional: string[] = [];
  let output = "";
  let deltas = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--output") {
      output = argv[++i] ?? "";
    } else if (arg === "--deltas") {
      deltas = true;
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown flag ${arg}\nusage: ${usage}`);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 1 || output === "") {
    throw new Error(`usage: ${usage}`);
  }
  return { input: positional[0], output, deltas };
}

export function runPlotConvergence(argv: string[]): void {
  const args = parseArgs(argv, "plot-convergence <convergence.csv> -o <figure.svg>");
  const rows = readConvergenceCsv(args.input);
  const series = buildConvergenceSeries(rows);
  writeFileSync(args.output, renderConvergenceSvg(series, args.input));
  console.log(
    `wrote ${args.output}: ${series.methods.length} curves, ${series.guides.length} guides`,
  );
}

export function runPlotObservables(argv: string[]): void {
  const args = parseArgs(
    argv,
    "plot-observables <observables.csv> [--deltas] -o <figure.svg>",
  );
  const rows = readObservablesCsv(args.input);
  const series = buildObservablesSeries(rows, args.deltas ? "deltas" : "values");
  writeFileSync(args.output, renderObservablesSvg(series, args.input));
  console.log(`wrote ${args.output}: ${series.panels.length} panels (${series.mode})`);
}
