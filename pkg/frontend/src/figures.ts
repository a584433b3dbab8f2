/** Render switchlab CSV tables as SVG figures (echarts, server side). */

import * as echarts from "echarts/core";
import {
  BarChart,
  LineChart,
  ScatterChart,
  type BarSeriesOption,
  type LineSeriesOption,
  type ScatterSeriesOption,
} from "echarts/charts";
import {
  GridComponent,
  LegendComponent,
  TitleComponent,
  type GridComponentOption,
  type LegendComponentOption,
  type TitleComponentOption,
} from "echarts/components";
import { SVGRenderer } from "echarts/renderers";

import { CLASSICAL_BOUND, IDEAL_TERMS, MEASURED } from "./constants.js";
import { CsvError, parseNumericCsv } from "./csv.js";

echarts.use([
  BarChart,
  LineChart,
  ScatterChart,
  GridComponent,
  LegendComponent,
  TitleComponent,
  SVGRenderer,
]);

type FigureOption = echarts.ComposeOption<
  | BarSeriesOption
  | LineSeriesOption
  | ScatterSeriesOption
  | GridComponentOption
  | LegendComponentOption
  | TitleComponentOption
>;

export const SWEEP_HEADER = "purity,eta,f_switch,epsilon,p1,p2,p3,total";
export const REPS_HEADER = "rep,p1,p2,p3,total";

export interface SweepRow {
  purity: number;
  eta: number;
  fSwitch: number;
  epsilon: number;
  p1: number;
  p2: number;
  p3: number;
  total: number;
}

export interface TermSample {
  p1: number;
  p2: number;
  p3: number;
  total: number;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const table = parseNumericCsv(text, SWEEP_HEADER);
  return table.rows.map((r) => ({
    purity: r[0],
    eta: r[1],
    fSwitch: r[2],
    epsilon: r[3],
    p1: r[4],
    p2: r[5],
    p3: r[6],
    total: r[7],
  }));
}

export function parseRepsCsv(text: string): TermSample[] {
  const table = parseNumericCsv(text, REPS_HEADER);
  return table.rows.map((r) => ({ p1: r[1], p2: r[2], p3: r[3], total: r[4] }));
}

/** Distinct f_switch values present in a sweep, descending. */
export function fidelitiesOf(rows: SweepRow[]): number[] {
  const seen = [...new Set(rows.map((r) => r.fSwitch))];
  return seen.sort((a, b) => b - a);
}

/**
 * Total of the curve for one f_switch at an arbitrary purity, linearly
 * interpolated between the two neighbouring grid points.
 */
export function sweepValueAt(rows: SweepRow[], fSwitch: number, purity: number): number {
  const curve = rows
    .filter((r) => Math.abs(r.fSwitch - fSwitch) < 1e-9)
    .sort((a, b) => a.purity - b.purity);
  if (curve.length === 0) {
    throw new CsvError(`no sweep rows with f_switch = ${fSwitch}`);
  }
  const first = curve[0];
  const last = curve[curve.length - 1];
  if (purity < first.purity || purity > last.purity) {
    throw new CsvError(`purity ${purity} outside the swept range`);
  }
  for (let i = 0; i < curve.length - 1; i++) {
    const a = curve[i];
    const b = curve[i + 1];
    if (purity >= a.purity && purity <= b.purity) {
      if (b.purity === a.purity) return a.total;
      const t = (purity - a.purity) / (b.purity - a.purity);
      return a.total + t * (b.total - a.total);
    }
  }
  return last.total;
}

function mean(values: number[]): number {
  return values.reduce((s, v) => s + v, 0) / values.length;
}

function std(values: number[]): number {
  const m = mean(values);
  const varSum = values.reduce((s, v) => s + (v - m) * (v - m), 0);
  return Math.sqrt(varSum / (values.length - 1));
}

/**
 * Generated class names embed process-global counters, so two renders of
 * the same option differ in naming only.  Strip the instance prefix and
 * renumber classes by first appearance to make equal inputs yield equal
 * bytes.
 */
function canonicalizeSvg(svg: string): string {
  const renamed = svg.replace(/\bzr\d+-/g, "zr-");
  const seen = new Map<string, number>();
  return renamed.replace(/zr-cls-\d+/g, (label) => {
    let index = seen.get(label);
    if (index === undefined) {
      index = seen.size;
      seen.set(label, index);
    }
    return `zr-cls-${index}`;
  });
}

function renderOption(option: FigureOption): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: 760,
    height: 480,
  });
  try {
    chart.setOption({ animation: false, ...option });
    return canonicalizeSvg(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}

/**
 * Bar chart of the three estimated inequality terms (mean over the
 * repetitions in a per-rep CSV) against the ideal markers.
 */
export function renderTermsFigure(repsCsv: string): string {
  const samples = parseRepsCsv(repsCsv);
  const names = ["p1", "p2", "p3"];
  const means = [
    mean(samples.map((s) => s.p1)),
    mean(samples.map((s) => s.p2)),
    mean(samples.map((s) => s.p3)),
  ];
  const sigmas = [
    std(samples.map((s) => s.p1)),
    std(samples.map((s) => s.p2)),
    std(samples.map((s) => s.p3)),
  ];
  return renderOption({
    title: {
      text: "Inequality terms",
      subtext: `${samples.length} repetitions; bars: simulated mean ± σ, diamonds: ideal`,
      left: "center",
    },
    legend: { bottom: 0, data: ["simulated", "ideal"] },
    xAxis: { type: "category", data: names },
    yAxis: { type: "value", min: 0, max: 1 },
    series: [
      {
        name: "simulated",
        type: "bar",
        barWidth: "45%",
        data: means.map((m, i) => ({
          value: m,
          label: {
            show: true,
            position: "top",
            formatter: `${m.toFixed(4)} ± ${sigmas[i].toFixed(4)}`,
          },
        })),
      },
      {
        name: "ideal",
        type: "scatter",
        symbol: "diamond",
        symbolSize: 14,
        data: IDEAL_TERMS.map((v, i) => [names[i], v]),
      },
    ],
  });
}

/**
 * Inequality total against resource purity, one curve per switch
 * fidelity, with the classical bound and the published measurement.
 */
export function renderSweepFigure(sweepCsv: string): string {
  const rows = parseSweepCsv(sweepCsv);
  const curves = fidelitiesOf(rows).map((f) => ({
    name: `F_switch = ${f}`,
    type: "line" as const,
    showSymbol: false,
    data: rows
      .filter((r) => Math.abs(r.fSwitch - f) < 1e-9)
      .sort((a, b) => a.purity - b.purity)
      .map((r) => [r.purity, r.total]),
  }));
  const errorBar: LineSeriesOption = {
    name: "measured",
    type: "line",
    symbol: "circle",
    symbolSize: 7,
    itemStyle: { color: "#222" },
    lineStyle: { width: 2, color: "#222" },
    data: [
      [MEASURED.purity, MEASURED.total - MEASURED.sigma],
      [MEASURED.purity, MEASURED.total],
      [MEASURED.purity, MEASURED.total + MEASURED.sigma],
    ],
  };
  return renderOption({
    title: {
      text: "Violation vs resource purity",
      subtext: `measured: ${MEASURED.total} ± ${MEASURED.sigma} at purity ${MEASURED.purity}`,
      left: "center",
    },
    legend: { bottom: 0 },
    xAxis: { type: "value", name: "purity", min: 0.25, max: 1.0 },
    yAxis: { type: "value", name: "total", min: 1.2, max: 1.9 },
    series: [
      ...curves,
      {
        name: "classical bound",
        type: "line",
        showSymbol: false,
        lineStyle: { type: "dashed" },
        data: [
          [0.25, CLASSICAL_BOUND],
          [1.0, CLASSICAL_BOUND],
        ],
      },
      errorBar,
    ],
  });
}
