import type { EChartsOption } from "echarts";
import {
  SWEEP_COLUMNS,
  numberColumn,
  optionalNumberColumn,
  readCsv,
  requireColumns,
  stringColumn,
  Table,
} from "./csv";
import { writeImage } from "./render";

export interface SweepPlotSpec {
  input: string;
  output: string;
}

export const SWEEP_SERIES = {
  tauD: "tau_d (measured)",
  tauE: "tau_E (measured)",
  tauDTheory: "tau_d theory (Gaussian regime)",
  tauETheory: "tau_E golden rule",
} as const;

export interface SweepBuild {
  option: EChartsOption;
  omitted: string[];
  theoryLinesDrawn: boolean;
}

/**
 * Log-log scaling figure: measured decoherence and relaxation times as
 * scatter, the two theory lines, and a vertical marker at the perturbative
 * border.  Rows whose measurement is reason-coded absent are omitted from
 * the scatter and reported back to the caller.  The theory lines are taken
 * from the rows of the first replicate (a selection, never a recomputation)
 * and are only drawn when that replicate has at least two rows.
 */
export function buildSweepOption(table: Table): SweepBuild {
  requireColumns(table, SWEEP_COLUMNS);
  const epsilon = numberColumn(table, "epsilon");
  const seed = stringColumn(table, "seed");
  const tauD = optionalNumberColumn(table, "tau_d_measured");
  const tauDReason = stringColumn(table, "tau_d_reason");
  const tauE = optionalNumberColumn(table, "tau_e_measured");
  const tauEReason = stringColumn(table, "tau_e_reason");
  const tauDTheory = optionalNumberColumn(table, "tau_d_gauss_theory");
  const tauETheory = optionalNumberColumn(table, "tau_e_fgr_theory");
  const epsilonP = optionalNumberColumn(table, "epsilon_p");

  const omitted: string[] = [];
  const scatterD: number[][] = [];
  const scatterE: number[][] = [];
  for (let i = 0; i < epsilon.length; i++) {
    if (tauD[i] === null) {
      omitted.push(`epsilon=${epsilon[i]} seed=${seed[i]}: tau_d ${tauDReason[i] || "absent"}`);
    } else {
      scatterD.push([epsilon[i], tauD[i] as number]);
    }
    if (tauE[i] === null) {
      omitted.push(`epsilon=${epsilon[i]} seed=${seed[i]}: tau_E ${tauEReason[i] || "absent"}`);
    } else {
      scatterE.push([epsilon[i], tauE[i] as number]);
    }
  }

  const firstSeed = seed[0];
  const lineD: number[][] = [];
  const lineE: number[][] = [];
  for (let i = 0; i < epsilon.length; i++) {
    if (seed[i] !== firstSeed) continue;
    if (tauDTheory[i] !== null) lineD.push([epsilon[i], tauDTheory[i] as number]);
    if (tauETheory[i] !== null) lineE.push([epsilon[i], tauETheory[i] as number]);
  }
  const theoryLinesDrawn = lineD.length >= 2 || lineE.length >= 2;

  const border = epsilonP.find((v) => v !== null) ?? null;

  const series: EChartsOption["series"] = [
    {
      name: SWEEP_SERIES.tauD,
      type: "scatter",
      symbol: "circle",
      symbolSize: 9,
      data: scatterD,
      ...(border !== null
        ? {
            markLine: {
              symbol: "none",
              label: { formatter: `epsilon_p = ${border}`, position: "insideEndTop" },
              lineStyle: { color: "#333", type: "solid", width: 1 },
              data: [{ xAxis: border }],
            },
          }
        : {}),
    },
    {
      name: SWEEP_SERIES.tauE,
      type: "scatter",
      symbol: "rect",
      symbolSize: 9,
      data: scatterE,
    },
  ];
  if (lineD.length >= 2) {
    series.push({
      name: SWEEP_SERIES.tauDTheory,
      type: "line",
      showSymbol: false,
      lineStyle: { width: 2 },
      data: lineD,
    });
  }
  if (lineE.length >= 2) {
    series.push({
      name: SWEEP_SERIES.tauETheory,
      type: "line",
      showSymbol: false,
      lineStyle: { type: "dashed", width: 2 },
      data: lineE,
    });
  }

  const option: EChartsOption = {
    animation: false,
    title: { text: "Timescales vs coupling strength", left: "center" },
    legend: { bottom: 0 },
    grid: { left: 70, right: 40, top: 50, bottom: 60 },
    xAxis: { type: "log", name: "epsilon", nameLocation: "middle", nameGap: 30 },
    yAxis: { type: "log", name: "time" },
    series,
  };
  return { option, omitted, theoryLinesDrawn };
}

export function plotSweep(spec: SweepPlotSpec): string[] {
  const table = readCsv(spec.input);
  const { option, omitted } = buildSweepOption(table);
  for (const note of omitted) {
    console.error(`omitted: ${note}`);
  }
  writeImage(option, spec.output);
  return omitted;
}
