#!/usr/bin/env node
import { runPlotConvergence } from "./cli.js";

try {
  runPlotConvergence(process.argv.slice(2));
} catch (err) {
  console.error(err instanceof Error ? err.message : err);
  process.exit(1);
}
