export class UsageError extends Error {}

export interface PlotArgs {
  input: string;
  output: string;
}

/** `<csv> -o <img>`; `-o/--out` may come before or after the input path. */
export function parsePlotArgs(argv: string[], usage: string): PlotArgs {
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--out") {
      output = argv[++i];
      if (output === undefined) throw new UsageError(`missing value for ${arg}\nusage: ${usage}`);
    } else if (arg.startsWith("-")) {
      throw new UsageError(`unknown option ${arg}\nusage: ${usage}`);
    } else if (input === undefined) {
      input = arg;
    } else {
      throw new UsageError(`unexpected argument ${arg}\nusage: ${usage}`);
    }
  }
  if (!input || !output) {
    throw new UsageError(`usage: ${usage}`);
  }
  return { input, output };
}

export function runCli(main: () => void): void {
  try {
    main();
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exit(2);
  }
}
