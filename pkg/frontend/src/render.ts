/**
 * render(spec): read sweep CSVs, build the requested figure, write the SVG.
 * The SVG string is fully assembled before anything touches the output path,
 * so a failing render never leaves an empty or truncated image behind.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";

import { groupSeries, parseSweepCsv, parseSaturationSir, type SweepRow } from "./csv.js";
import { renderBerFigure, renderSinrFigure } from "./figure.js";

export type FigureKind = "sinr_vs_m" | "ber_vs_snr";

export interface PlotSpec {
  /** Sweep CSV paths; rows are merged before grouping into series. */
  inputs: string[];
  kind: FigureKind;
  /** Output image path (SVG). */
  out: string;
  /** analyze-sir CSV carrying the `# sir_db=` saturation level (sinr_vs_m only). */
  saturation?: string;
}

const METRIC_FOR_KIND: Record<FigureKind, { metric: string; x: "M" | "snr_db" }> = {
  sinr_vs_m: { metric: "sinr_db", x: "M" },
  ber_vs_snr: { metric: "ber", x: "snr_db" },
};

export function render(spec: PlotSpec): string {
  if (spec.inputs.length === 0) {
    throw new Error("at least one input CSV is required");
  }
  if (spec.kind !== "sinr_vs_m" && spec.kind !== "ber_vs_snr") {
    throw new Error(`unknown figure kind ${JSON.stringify(spec.kind)}`);
  }
  if (spec.saturation !== undefined && spec.kind !== "sinr_vs_m") {
    throw new Error("saturation line is only supported for sinr_vs_m figures");
  }

  const rows: SweepRow[] = [];
  for (const path of spec.inputs) {
    rows.push(...parseSweepCsv(readFileSync(path, "utf8"), path).rows);
  }

  const { metric, x } = METRIC_FOR_KIND[spec.kind];
  const series = groupSeries(rows, metric, x);

  let svg: string;
  if (spec.kind === "sinr_vs_m") {
    let saturationDb: number | undefined;
    if (spec.saturation !== undefined) {
      saturationDb = parseSaturationSir(readFileSync(spec.saturation, "utf8"), spec.saturation);
    }
    svg = renderSinrFigure(series, saturationDb);
  } else {
    svg = renderBerFigure(series);
  }

  mkdirSync(dirname(spec.out), { recursive: true });
  writeFileSync(spec.out, svg, "utf8");
  return svg;
}
