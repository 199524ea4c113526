#!/usr/bin/env node
import { runPlotObservables } from "./cli.js";

try {
  runPlotObservables(process.argv.slice(2));
} catch (err) {
  console.error(err instanceof Error ? err.message : err);
  process.exit(1);
}
