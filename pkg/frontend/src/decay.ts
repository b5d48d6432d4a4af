import type { EChartsOption } from "echarts";
import { EVOLVE_COLUMNS, numberColumn, readCsv, requireColumns, Table } from "./csv";
import { writeImage } from "./render";

export interface DecayPlotSpec {
  input: string;
  output: string;
}

export const DECAY_SERIES = [
  "|rho12| / |rho12(0)|",
  "rho22 (eigenstate start)",
  "Gaussian envelope",
  "exponential envelope",
] as const;

/**
 * Decay overlay: normalized coherence, population, and the two theory
 * envelopes against time on linear axes.  The coherence is the only curve
 * divided by a constant (its own first sample, so the unit-amplitude
 * envelopes overlay it); every other series is plotted exactly as stored.
 */
export function buildDecayOption(table: Table): EChartsOption {
  requireColumns(table, EVOLVE_COLUMNS);
  const t = numberColumn(table, "t");
  const absRho12 = numberColumn(table, "abs_rho12");
  const rho22 = numberColumn(table, "rho22");
  const gauss = numberColumn(table, "abs_f_pred_gauss");
  const expo = numberColumn(table, "abs_f_pred_exp");

  const coherence0 = absRho12[0];
  if (coherence0 <= 0) {
    throw new Error(`${table.path}: abs_rho12 starts at ${coherence0}; nothing to normalize`);
  }
  const normalized = absRho12.map((v) => v / coherence0);

  const pair = (xs: number[], ys: number[]) => xs.map((x, i) => [x, ys[i]]);
  return {
    animation: false,
    title: { text: "Reduced density matrix decay", left: "center" },
    legend: { bottom: 0, data: [...DECAY_SERIES] },
    grid: { left: 60, right: 30, top: 50, bottom: 60 },
    xAxis: { type: "value", name: "t", nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: "matrix element", min: 0, max: 1.05 },
    series: [
      {
        name: DECAY_SERIES[0],
        type: "line",
        showSymbol: false,
        lineStyle: { width: 2.5 },
        data: pair(t, normalized),
      },
      {
        name: DECAY_SERIES[1],
        type: "line",
        showSymbol: false,
        lineStyle: { width: 1.2 },
        data: pair(t, rho22),
      },
      {
        name: DECAY_SERIES[2],
        type: "line",
        showSymbol: false,
        lineStyle: { type: "dotted", width: 2 },
        data: pair(t, gauss),
      },
      {
        name: DECAY_SERIES[3],
        type: "line",
        showSymbol: false,
        lineStyle: { type: "dashed", width: 2 },
        data: pair(t, expo),
      },
    ],
  };
}

export function plotDecay(spec: DecayPlotSpec): void {
  const table = readCsv(spec.input);
  writeImage(buildDecayOption(table), spec.output);
}
