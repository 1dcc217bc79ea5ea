import { describe, it, expect } from "vitest";

import {
  renderSinrFigure,
  renderBerFigure,
  SATURATION_LABEL,
  BAND_LABEL,
} from "../src/figure.js";
import type { Series } from "../src/csv.js";

function count(hay: string, needle: string): number {
  return hay.split(needle).length - 1;
}

const mrc: Series = {
  label: "mrc",
  points: [
    { x: 64, y: 7.6, err: 0.05 },
    { x: 128, y: 9.6, err: 0.05 },
    { x: 256, y: 12.2, err: 0.05 },
  ],
};
const zf: Series = {
  label: "zf",
  points: [
    { x: 64, y: 14.9, err: 0.04 },
    { x: 256, y: 16.2, err: 0.04 },
  ],
};

describe("renderSinrFigure", () => {
  it("draws a single curve for a single receiver", () => {
    const svg = renderSinrFigure([mrc]);
    expect(count(svg, "<polyline")).toBe(1);
    expect(svg).toContain(">mrc</text>");
    expect(svg).toContain("SINR (dB)");
    expect(svg).toContain("number of antennas M");
  });

  it("draws one curve per receiver plus the labeled saturation line", () => {
    const trMrc: Series = { label: "tr-mrc", points: mrc.points.map((p) => ({ ...p, y: p.y + 2 })) };
    const trZf: Series = { label: "tr-zf", points: mrc.points.map((p) => ({ ...p, y: p.y + 9 })) };
    const svg = renderSinrFigure([mrc, zf, trMrc, trZf], 16.37);
    expect(count(svg, "<polyline")).toBe(4);
    expect(svg).toContain(SATURATION_LABEL);
    expect(svg).toContain("stroke-dasharray");
  });

  it("renders error bars for points with nonzero stderr", () => {
    const one: Series = { label: "zf", points: [{ x: 128, y: 10, err: 0.5 }] };
    const svg = renderSinrFigure([one]);
    // single point: no polyline, one marker, whisker plus two caps
    expect(count(svg, "<polyline")).toBe(0);
    expect(count(svg, `<circle cx=`)).toBe(1 + 1); // data marker + legend marker
    expect(count(svg, `stroke="#1f77b4"`)).toBeGreaterThanOrEqual(3);
  });

  it("omits the saturation line when no level is given", () => {
    expect(renderSinrFigure([mrc])).not.toContain(SATURATION_LABEL);
  });

  it("places M ticks at log2 spacing", () => {
    const svg = renderSinrFigure([mrc]);
    const ticks = [...svg.matchAll(/<text x="([0-9.]+)" y="\d+\.?\d*" text-anchor="middle">(\d+)<\/text>/g)]
      .filter((m) => ["64", "128", "256"].includes(m[2]!))
      .map((m) => Number(m[1]));
    expect(ticks).toHaveLength(3);
    const gap01 = ticks[1]! - ticks[0]!;
    const gap12 = ticks[2]! - ticks[1]!;
    // each doubling covers the same horizontal distance
    expect(Math.abs(gap01 - gap12)).toBeLessThan(0.5);
  });

  it("rejects non-positive antenna counts", () => {
    const bad: Series = { label: "mrc", points: [{ x: 0, y: 1, err: 0 }] };
    expect(() => renderSinrFigure([bad])).toThrow(/positive/);
  });

  it("is deterministic", () => {
    const a = renderSinrFigure([mrc, zf], 16.37);
    const b = renderSinrFigure([mrc, zf], 16.37);
    expect(a).toBe(b);
  });
});

const cpzf: Series = {
  label: "cp-zf",
  points: [
    { x: -9, y: 1.0e-2, err: 2e-4 },
    { x: -7, y: 2.1e-3, err: 6e-5 },
    { x: -5, y: 2.1e-4, err: 3e-5 },
  ],
};
const trzf: Series = {
  label: "tr-zf",
  points: [
    { x: -9, y: 1.1e-2, err: 2e-4 },
    { x: -7, y: 2.4e-3, err: 1e-4 },
    { x: -5, y: 3.1e-4, err: 3e-5 },
  ],
};

describe("renderBerFigure", () => {
  it("uses decade ticks on a log axis", () => {
    const svg = renderBerFigure([cpzf, trzf]);
    expect(svg).toContain(">1e-2</text>");
    expect(svg).toContain(">1e-4</text>");
    const ys = [...svg.matchAll(/y="([0-9.]+)" text-anchor="end">1e(-\d)<\/text>/g)].map((m) => [
      Number(m[2]),
      Number(m[1]),
    ]);
    ys.sort((a, b) => a[0]! - b[0]!);
    // equal pixel distance per decade
    const gaps = ys.slice(1).map((p, i) => ys[i]![1]! - p[1]!);
    for (const g of gaps.slice(1)) expect(Math.abs(g - gaps[0]!)).toBeLessThan(0.5);
  });

  it("shades the +1 dB band of the cp-zf reference", () => {
    const svg = renderBerFigure([cpzf, trzf]);
    expect(count(svg, "<polygon")).toBe(1);
    expect(svg).toContain('fill-opacity="0.18"');
    expect(svg).toContain(BAND_LABEL);
  });

  it("draws no band without a cp-zf series", () => {
    const svg = renderBerFigure([trzf]);
    expect(count(svg, "<polygon")).toBe(0);
    expect(svg).not.toContain(BAND_LABEL);
  });

  it("shifts the band exactly +1 dB at equal BER", () => {
    const svg = renderBerFigure([cpzf]);
    const poly = svg.match(/<polygon points="([^"]+)"/)![1]!;
    const pts = poly.split(" ").map((p) => p.split(",").map(Number) as [number, number]);
    expect(pts).toHaveLength(6);
    // forward pass and reversed return pass share y per point; x differs by a fixed pixel step
    const fwd = pts.slice(0, 3);
    const back = pts.slice(3).reverse();
    const dx = back.map((p, i) => p[0] - fwd[i]![0]);
    for (const d of dx) expect(Math.abs(d - dx[0]!)).toBeLessThan(0.05);
    for (const [i, p] of back.entries()) expect(p[1]).toBeCloseTo(fwd[i]![1], 1);
    expect(dx[0]!).toBeGreaterThan(0);
  });

  it("rejects all-zero BER series", () => {
    const dead: Series = { label: "cp-zf", points: [{ x: 0, y: 0, err: 0 }] };
    expect(() => renderBerFigure([dead])).toThrow(/log axis/);
  });

  it("is deterministic", () => {
    expect(renderBerFigure([cpzf, trzf])).toBe(renderBerFigure([cpzf, trzf]));
  });
});
