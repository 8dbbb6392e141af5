/** Logarithmic axis mapping and decade ticks. */

export interface Tick {
  value: number;
  label: string;
}

export class LogScale {
  readonly lo: number;
  readonly hi: number;
  readonly pxLo: number;
  readonly pxHi: number;

  constructor(lo: number, hi: number, pxLo: number, pxHi: number) {
    if (!(lo > 0) || !(hi > 0)) {
      throw new Error(`log scale needs positive bounds, got [${lo}, ${hi}]`);
    }
    if (lo === hi) {
      // Degenerate single-value domain: pad by a factor each side.
      lo /= 2;
      hi *= 2;
    }
    this.lo = lo;
    this.hi = hi;
    this.pxLo = pxLo;
    this.pxHi = pxHi;
  }

  map(v: number): number {
    const t = (Math.log10(v) - Math.log10(this.lo)) / (Math.log10(this.hi) - Math.log10(this.lo));
    return this.pxLo + t * (this.pxHi - this.pxLo);
  }

  ticks(): Tick[] {
    const out: Tick[] = [];
    const eLo = Math.ceil(Math.log10(this.lo) - 1e-9);
    const eHi = Math.floor(Math.log10(this.hi) + 1e-9);
    for (let e = eLo; e <= eHi; e++) {
      out.push({ value: 10 ** e, label: formatPow10(e) });
    }
    if (out.length === 0) {
      out.push({ value: Math.sqrt(this.lo * this.hi), label: Math.sqrt(this.lo * this.hi).toPrecision(2) });
    }
    return out;
  }
}

export function formatPow10(e: number): string {
  if (e === 0) return "1";
  if (e === 1) return "10";
  return `1e${e}`;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error("no finite values to scale");
  }
  return [lo, hi];
}
