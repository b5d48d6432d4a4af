#!/usr/bin/env node
import { parsePlotArgs, runCli } from "./args";
import { plotDecay } from "./decay";

runCli(() => {
  const args = parsePlotArgs(process.argv.slice(2), "plot-decay <evolve.csv> -o <figure.svg>");
  plotDecay({ input: args.input, output: args.output });
  console.log(`wrote ${args.output}`);
});
