/**
 * Hand-rolled SVG renderer for the two figure kinds:
 *
 *   - SINR vs number of antennas: dB y-axis, log2 x-axis (so the
 *     3-dB-per-doubling slope of TR-ZF shows up as a straight line), one
 *     curve per receiver with stderr error bars, optional horizontal
 *     closed-form saturation line.
 *   - BER vs SNR: log y-axis, linear x-axis, and a shaded band covering
 *     the cp-zf curve shifted right by 1 dB (the "at most 1 dB loss"
 *     region a competing receiver should stay inside).
 *
 * Rendering is deterministic: fixed canvas, fixed palette keyed by sorted
 * series order, fixed number formatting, no timestamps.
 */

import type { Series } from "./csv.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 26, top: 44, bottom: 56 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
];

export const SATURATION_LABEL = "asymptotic SIR (closed form)";
export const BAND_LABEL = "cp-zf +1 dB band";

/** Fixed-precision coordinate formatting; trims trailing zeros. */
function fmt(v: number): string {
  const r = Math.round(v * 100) / 100;
  const s = (Object.is(r, -0) ? 0 : r).toFixed(2);
  return s.replace(/\.?0+$/, "");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

interface Scale {
  (v: number): number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  return (v) => outLo + ((v - lo) / span) * (outHi - outLo);
}

/** Ticks at a 1/2/5 step covering [lo, hi]. */
function niceTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = 10 * mag;
  for (const m of [1, 2, 5]) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  let t = Math.ceil(lo / step) * step;
  for (; t <= hi + 1e-9 * span; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

function tickLabel(v: number): string {
  const r = Math.round(v * 1000) / 1000;
  return (Object.is(r, -0) ? 0 : r).toString();
}

interface Pad {
  lo: number;
  hi: number;
}

function padded(lo: number, hi: number, frac = 0.06): Pad {
  if (lo === hi) return { lo: lo - 1, hi: hi + 1 };
  const pad = (hi - lo) * frac;
  return { lo: lo - pad, hi: hi + pad };
}

function svgOpen(title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif" font-size="12">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15">${esc(title)}</text>\n`
  );
}

function axisFrame(xLabel: string, yLabel: string): string {
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + PLOT_H;
  return (
    `<line x1="${x0}" y1="${y0}" x2="${x0 + PLOT_W}" y2="${y0}" stroke="black"/>\n` +
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>\n` +
    `<text x="${x0 + PLOT_W / 2}" y="${HEIGHT - 14}" text-anchor="middle">${esc(xLabel)}</text>\n` +
    `<text x="20" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" ` +
    `transform="rotate(-90 20 ${MARGIN.top + PLOT_H / 2})">${esc(yLabel)}</text>\n`
  );
}

function xTickMarks(ticks: { v: number; label: string }[], sx: Scale): string {
  const y0 = MARGIN.top + PLOT_H;
  let out = "";
  for (const t of ticks) {
    const px = sx(t.v);
    out += `<line x1="${fmt(px)}" y1="${MARGIN.top}" x2="${fmt(px)}" y2="${y0}" stroke="#dddddd"/>\n`;
    out += `<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="black"/>\n`;
    out += `<text x="${fmt(px)}" y="${y0 + 20}" text-anchor="middle">${esc(t.label)}</text>\n`;
  }
  return out;
}

function yTickMarks(ticks: { v: number; label: string }[], sy: Scale): string {
  const x0 = MARGIN.left;
  let out = "";
  for (const t of ticks) {
    const py = sy(t.v);
    out += `<line x1="${x0}" y1="${fmt(py)}" x2="${x0 + PLOT_W}" y2="${fmt(py)}" stroke="#dddddd"/>\n`;
    out += `<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>\n`;
    out += `<text x="${x0 - 9}" y="${fmt(py + 4)}" text-anchor="end">${esc(t.label)}</text>\n`;
  }
  return out;
}

interface LegendEntry {
  label: string;
  color: string;
  kind: "line" | "band";
}

function legend(entries: LegendEntry[]): string {
  const lx = MARGIN.left + PLOT_W - 168;
  const ly = MARGIN.top + 10;
  const lh = entries.length * 18 + 10;
  let out = `<rect x="${lx - 8}" y="${ly - 6}" width="176" height="${lh}" fill="white" stroke="#999999"/>\n`;
  entries.forEach((e, i) => {
    const y = ly + 8 + i * 18;
    if (e.kind === "band") {
      out += `<rect x="${lx}" y="${y - 7}" width="22" height="10" fill="${e.color}" fill-opacity="0.25"/>\n`;
    } else {
      out += `<line x1="${lx}" y1="${y - 2}" x2="${lx + 22}" y2="${y - 2}" stroke="${e.color}" stroke-width="2"/>\n`;
      out += `<circle cx="${lx + 11}" cy="${y - 2}" r="3" fill="${e.color}"/>\n`;
    }
    out += `<text x="${lx + 28}" y="${y + 2}">${esc(e.label)}</text>\n`;
  });
  return out;
}

function seriesMarks(
  s: Series,
  color: string,
  sx: Scale,
  sy: (y: number) => number,
  clampLow: (y: number) => number,
): string {
  let out = "";
  if (s.points.length > 1) {
    const pts = s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`).join(" ");
    out += `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="2"/>\n`;
  }
  for (const p of s.points) {
    const px = sx(p.x);
    if (p.err > 0) {
      const yHi = sy(p.y + p.err);
      const yLo = sy(clampLow(p.y - p.err));
      out += `<line x1="${fmt(px)}" y1="${fmt(yHi)}" x2="${fmt(px)}" y2="${fmt(yLo)}" stroke="${color}"/>\n`;
      out += `<line x1="${fmt(px - 4)}" y1="${fmt(yHi)}" x2="${fmt(px + 4)}" y2="${fmt(yHi)}" stroke="${color}"/>\n`;
      out += `<line x1="${fmt(px - 4)}" y1="${fmt(yLo)}" x2="${fmt(px + 4)}" y2="${fmt(yLo)}" stroke="${color}"/>\n`;
    }
    out += `<circle cx="${fmt(px)}" cy="${fmt(sy(p.y))}" r="3" fill="${color}"/>\n`;
  }
  return out;
}

/**
 * SINR-vs-M figure: one error-barred curve per receiver on a log2 antenna
 * axis, optionally with the closed-form saturation level drawn as a labeled
 * dashed horizontal line.
 */
export function renderSinrFigure(series: Series[], saturationDb?: number): string {
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  if (xs.some((m) => !(m > 0))) {
    throw new Error("antenna counts must be positive for the log2 axis");
  }
  const ys = series.flatMap((s) => s.points.flatMap((p) => [p.y - p.err, p.y + p.err]));
  if (saturationDb !== undefined) ys.push(saturationDb);

  const xDom = padded(Math.log2(Math.min(...xs)), Math.log2(Math.max(...xs)), 0.04);
  const yDom = padded(Math.min(...ys), Math.max(...ys));
  const sx: Scale = (m) =>
    linearScale(xDom.lo, xDom.hi, MARGIN.left, MARGIN.left + PLOT_W)(Math.log2(m));
  const sy = linearScale(yDom.lo, yDom.hi, MARGIN.top + PLOT_H, MARGIN.top);

  const mTicks = [...new Set(xs)].sort((a, b) => a - b);
  let out = svgOpen("SINR vs number of antennas");
  out += xTickMarks(mTicks.map((m) => ({ v: m, label: tickLabel(m) })), sx);
  out += yTickMarks(niceTicks(yDom.lo, yDom.hi).map((v) => ({ v, label: tickLabel(v) })), sy);

  const entries: LegendEntry[] = [];
  if (saturationDb !== undefined) {
    const py = sy(saturationDb);
    out +=
      `<line x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + PLOT_W}" y2="${fmt(py)}" ` +
      `stroke="#555555" stroke-width="1.5" stroke-dasharray="7,4"/>\n`;
    out += `<text x="${MARGIN.left + 6}" y="${fmt(py - 6)}" font-size="11" fill="#555555">${esc(
      SATURATION_LABEL,
    )}</text>\n`;
  }
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    out += seriesMarks(s, color, sx, sy, (y) => y);
    entries.push({ label: s.label, color, kind: "line" });
  });

  out += axisFrame("number of antennas M", "SINR (dB)");
  out += legend(entries);
  return out + "</svg>\n";
}

/**
 * BER-vs-SNR figure: log10 BER axis with decade gridlines, and (when a
 * cp-zf series is present) a shaded band between the cp-zf curve and the
 * same curve shifted +1 dB, the region a "within 1 dB of CP-OFDM" receiver
 * must stay inside.
 */
export function renderBerFigure(series: Series[]): string {
  const pos = series.flatMap((s) => s.points.map((p) => p.y)).filter((y) => y > 0);
  if (pos.length === 0) {
    throw new Error("all BER values are non-positive; nothing to plot on a log axis");
  }
  const reference = series.find((s) => s.label === "cp-zf");

  const xsAll = series.flatMap((s) => s.points.map((p) => p.x));
  const xHi = Math.max(...xsAll) + (reference ? 1 : 0);
  const xDom = padded(Math.min(...xsAll), xHi, 0.04);

  const yTop = Math.max(...series.flatMap((s) => s.points.map((p) => p.y + p.err)));
  const eLo = Math.floor(Math.log10(Math.min(...pos)));
  const eHi = Math.ceil(Math.log10(yTop));
  const floorBer = Math.pow(10, eLo);

  const sx = linearScale(xDom.lo, xDom.hi, MARGIN.left, MARGIN.left + PLOT_W);
  const syLog = linearScale(eLo, eHi, MARGIN.top + PLOT_H, MARGIN.top);
  const sy = (ber: number) => syLog(Math.log10(Math.max(ber, floorBer)));

  let out = svgOpen("BER vs SNR");
  out += xTickMarks(
    niceTicks(xDom.lo, xDom.hi, 8).map((v) => ({ v, label: tickLabel(v) })),
    sx,
  );
  const decades: { v: number; label: string }[] = [];
  for (let e = eLo; e <= eHi; e++) decades.push({ v: Math.pow(10, e), label: `1e${e}` });
  out += yTickMarks(decades, sy);

  const entries: LegendEntry[] = [];
  if (reference && reference.points.length > 1) {
    const fwd = reference.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`);
    const back = reference.points
      .slice()
      .reverse()
      .map((p) => `${fmt(sx(p.x + 1))},${fmt(sy(p.y))}`);
    out += `<polygon points="${[...fwd, ...back].join(" ")}" fill="#1f77b4" fill-opacity="0.18" stroke="none"/>\n`;
    entries.push({ label: BAND_LABEL, color: "#1f77b4", kind: "band" });
  }
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    out += seriesMarks(s, color, sx, sy, (y) => Math.max(y, floorBer));
    entries.push({ label: s.label, color, kind: "line" });
  });

  out += axisFrame("SNR (dB)", "BER");
  out += legend(entries);
  return out + "</svg>\n";
}
