/**
 * SVG rendering of the plot series through echarts' server-side renderer.
 */

import * as echarts from "echarts";
import type { ConvergenceSeries, ObservablesSeries } from "./series.js";

const WIDTH = 900;
const HEIGHT = 600;

function renderOption(option: echarts.EChartsCoreOption): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: WIDTH,
    height: HEIGHT,
  });
  chart.setOption(option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

export function renderConvergenceSvg(series: ConvergenceSeries, title = ""): string {
  const curves = series.methods.map((m) => ({
    name: m.name,
    type: "line" as const,
    data: m.points,
    symbolSize: 6,
  }));
  const guides = series.guides.map((g) => ({
    name: g.name,
    type: "line" as const,
    data: g.points,
    symbol: "none",
    lineStyle: { type: "dashed" as const, color: "#888" },
  }));
  return renderOption({
    title: { text: title },
    animation: false,
    legend: { data: [...series.methods, ...series.guides].map((c) => c.name) },
    xAxis: { type: "log", name: "timestep size (h)" },
    yAxis: { type: "log", name: "L2 error at final time" },
    series: [...curves, ...guides],
  });
}

export function renderObservablesSvg(series: ObservablesSeries, title = ""): string {
  const panelCount = series.panels.length;
  const grids = series.panels.map((_, i) => ({
    left: `${(100 / panelCount) * i + 6}%`,
    width: `${100 / panelCount - 9}%`,
    containLabel: true,
  }));
  const prefix = series.mode === "deltas" ? "change in " : "";
  return renderOption({
    title: { text: title },
    animation: false,
    xAxis: series.panels.map((_, i) => ({
      type: "value",
      gridIndex: i,
      name: "t",
    })),
    yAxis: series.panels.map((p, i) => ({
      type: "value",
      gridIndex: i,
      name: prefix + p.name,
      scale: true,
    })),
    grid: grids,
    series: series.panels.map((p, i) => ({
      name: prefix + p.name,
      type: "line" as const,
      xAxisIndex: i,
      yAxisIndex: i,
      data: p.points,
      symbol: "none",
    })),
  });
}
