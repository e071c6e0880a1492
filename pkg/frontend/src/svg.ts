/**
 * Minimal deterministic SVG chart builder. No timestamps, no randomness:
 * identical inputs give identical bytes.
 */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  kind: 'line' | 'markers';
  /** Optional symmetric or explicit error bars around y. */
  errLow?: number[];
  errHigh?: number[];
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  series: Series[];
}

const W = 640;
const H = 420;
const M = { top: 40, right: 20, bottom: 50, left: 70 };
const COLORS = ['#1f5fa8', '#c23b22', '#2a7e43', '#7b4fa6'];

const fmt = (v: number): string => {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate: ${v}`);
  return v.toFixed(3);
};

const fmtTick = (v: number): string => {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e5 || a < 1e-3)) return v.toExponential(1);
  return String(Math.round(v * 1e6) / 1e6);
};

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

export function renderChart(spec: ChartSpec): string {
  const xsRaw = spec.series.flatMap((s) => s.x);
  const xs = spec.xLog ? xsRaw.map((v) => Math.log10(v)) : xsRaw;
  const ys = spec.series.flatMap((s, _i) => [
    ...s.y,
    ...(s.errLow ?? []),
    ...(s.errHigh ?? []),
  ]);
  const [x0, x1] = extent(xs);
  const [y0, y1] = extent(ys);
  const sx = (v: number): number => {
    const t = spec.xLog ? Math.log10(v) : v;
    return M.left + ((t - x0) / (x1 - x0)) * (W - M.left - M.right);
  };
  const sy = (v: number): number =>
    H - M.bottom - ((v - y0) / (y1 - y0)) * (H - M.top - M.bottom);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    `<text x="${W / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">${esc(spec.title)}</text>`,
  );

  // axes with 5 ticks per side
  parts.push(
    `<line x1="${M.left}" y1="${H - M.bottom}" x2="${W - M.right}" y2="${H - M.bottom}" stroke="black"/>`,
    `<line x1="${M.left}" y1="${M.top}" x2="${M.left}" y2="${H - M.bottom}" stroke="black"/>`,
  );
  for (let i = 0; i <= 4; i++) {
    const tx = x0 + ((x1 - x0) * i) / 4;
    const ty = y0 + ((y1 - y0) * i) / 4;
    const px = M.left + ((W - M.left - M.right) * i) / 4;
    const py = H - M.bottom - ((H - M.top - M.bottom) * i) / 4;
    const xv = spec.xLog ? Math.pow(10, tx) : tx;
    parts.push(
      `<line x1="${fmt(px)}" y1="${H - M.bottom}" x2="${fmt(px)}" y2="${H - M.bottom + 5}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${H - M.bottom + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmtTick(xv)}</text>`,
      `<line x1="${M.left - 5}" y1="${fmt(py)}" x2="${M.left}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${M.left - 8}" y="${fmt(py + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${fmtTick(ty)}</text>`,
    );
  }
  parts.push(
    `<text x="${W / 2}" y="${H - 12}" text-anchor="middle" font-family="sans-serif" font-size="13">${esc(spec.xLabel)}</text>`,
    `<text x="18" y="${H / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 ${H / 2})">${esc(spec.yLabel)}</text>`,
  );

  spec.series.forEach((s, si) => {
    const color = COLORS[si % COLORS.length];
    if (s.errLow && s.errHigh) {
      s.x.forEach((xv, i) => {
        parts.push(
          `<line x1="${fmt(sx(xv))}" y1="${fmt(sy(s.errLow![i]))}" x2="${fmt(sx(xv))}" y2="${fmt(sy(s.errHigh![i]))}" stroke="${color}" stroke-width="1"/>`,
        );
      });
    }
    if (s.kind === 'line') {
      const d = s.x.map((xv, i) => `${i ? 'L' : 'M'}${fmt(sx(xv))},${fmt(sy(s.y[i]))}`).join(' ');
      parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="2"/>`);
    } else {
      s.x.forEach((xv, i) => {
        parts.push(`<circle cx="${fmt(sx(xv))}" cy="${fmt(sy(s.y[i]))}" r="3.5" fill="${color}"/>`);
      });
    }
    // legend entry
    const ly = M.top + 16 * si;
    parts.push(
      `<rect x="${W - M.right - 150}" y="${ly - 8}" width="12" height="4" fill="${color}"/>`,
      `<text x="${W - M.right - 133}" y="${ly - 2}" font-family="sans-serif" font-size="11">${esc(s.label)}</text>`,
    );
  });

  parts.push('</svg>');
  return parts.join('\n') + '\n';
}

export interface HeatmapSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xTicks: string[];
  yTicks: string[];
  /** values[yi][xi] in [0, 1] */
  values: number[][];
}

export function renderHeatmap(spec: HeatmapSpec): string {
  const nx = spec.xTicks.length;
  const ny = spec.yTicks.length;
  const cw = (W - M.left - M.right) / nx;
  const ch = (H - M.top - M.bottom) / ny;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    `<text x="${W / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">${esc(spec.title)}</text>`,
  );
  for (let yi = 0; yi < ny; yi++) {
    for (let xi = 0; xi < nx; xi++) {
      const v = spec.values[yi][xi];
      if (!(v >= 0 && v <= 1)) throw new Error(`heatmap value out of [0,1]: ${v}`);
      const shade = Math.round(255 * (1 - v));
      const x = M.left + xi * cw;
      const y = H - M.bottom - (yi + 1) * ch;
      parts.push(
        `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(cw)}" height="${fmt(ch)}" fill="rgb(${shade},${Math.round(128 + (255 - shade) / 2)},${255 - shade})" stroke="white"/>`,
        `<text x="${fmt(x + cw / 2)}" y="${fmt(y + ch / 2 + 4)}" text-anchor="middle" font-family="sans-serif" font-size="11">${v.toFixed(2)}</text>`,
      );
    }
  }
  spec.xTicks.forEach((t, xi) => {
    parts.push(
      `<text x="${fmt(M.left + (xi + 0.5) * cw)}" y="${H - M.bottom + 16}" text-anchor="middle" font-family="sans-serif" font-size="11">${esc(t)}</text>`,
    );
  });
  spec.yTicks.forEach((t, yi) => {
    parts.push(
      `<text x="${M.left - 8}" y="${fmt(H - M.bottom - (yi + 0.5) * ch + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${esc(t)}</text>`,
    );
  });
  parts.push(
    `<text x="${W / 2}" y="${H - 12}" text-anchor="middle" font-family="sans-serif" font-size="13">${esc(spec.xLabel)}</text>`,
    `<text x="18" y="${H / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 ${H / 2})">${esc(spec.yLabel)}</text>`,
    '</svg>',
  );
  return parts.join('\n') + '\n';
}
