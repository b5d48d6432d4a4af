#!/usr/bin/env node
import { parsePlotArgs, runCli } from "./args";
import { plotSweep } from "./sweep";

runCli(() => {
  const args = parsePlotArgs(process.argv.slice(2), "plot-sweep <sweep.csv> -o <figure.svg>");
  plotSweep({ input: args.input, output: args.output });
  console.log(`wrote ${args.output}`);
});
