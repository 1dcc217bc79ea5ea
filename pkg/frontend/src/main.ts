/**
 * Command-line front: parse flags, run render, map failures to exit codes.
 * Kept separate from the executable entry so tests can call runCli directly.
 *
 *   plot --kind sinr_vs_m --out fig.svg [--sir analyze_sir.csv] sweep.csv [...]
 */

import { render, type FigureKind, type PlotSpec } from "./render.js";

const USAGE =
  "usage: plot --kind {sinr_vs_m|ber_vs_snr} --out FIGURE.svg [--sir SIR.csv] SWEEP.csv [SWEEP.csv ...]";

export function parseArgs(argv: string[]): PlotSpec {
  let kind: string | undefined;
  let out: string | undefined;
  let saturation: string | undefined;
  const inputs: string[] = [];

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    const next = () => {
      const v = argv[++i];
      if (v === undefined) throw new Error(`${arg} needs a value\n${USAGE}`);
      return v;
    };
    switch (arg) {
      case "--kind":
        kind = next();
        break;
      case "--out":
        out = next();
        break;
      case "--sir":
        saturation = next();
        break;
      case "-h":
      case "--help":
        throw new Error(USAGE);
      default:
        if (arg.startsWith("-")) throw new Error(`unknown flag ${arg}\n${USAGE}`);
        inputs.push(arg);
    }
  }

  if (kind !== "sinr_vs_m" && kind !== "ber_vs_snr") {
    throw new Error(`--kind must be sinr_vs_m or ber_vs_snr\n${USAGE}`);
  }
  if (!out) throw new Error(`--out is required\n${USAGE}`);
  if (inputs.length === 0) throw new Error(`no input CSVs given\n${USAGE}`);

  return { inputs, kind: kind as FigureKind, out, saturation };
}

export function runCli(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 2;
  }
  try {
    render(spec);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 2;
  }
  console.log(`wrote ${spec.out}`);
  return 0;
}
