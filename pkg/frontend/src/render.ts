import { writeFileSync } from "fs";
import * as echarts from "echarts";

export const WIDTH = 900;
export const HEIGHT = 620;

export function renderSvg(option: echarts.EChartsOption): string {
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

export function writeImage(option: echarts.EChartsOption, output: string): void {
  if (!output.endsWith(".svg")) {
    throw new Error(
      `unsupported image format '${output}': only .svg output is available (no raster canvas in this toolchain)`,
    );
  }
  writeFileSync(output, renderSvg(option));
}
