/**
 * Least-squares slope of log(values) against log(t+1), the same estimator the
 * simulation report uses, so the figure annotation can be cross-checked
 * against the report to tight tolerance.
 */
export interface Fit {
  slope: number
  intercept: number
  r2: number
}

export function fitLogLogSlope(t: number[], values: number[]): Fit {
  if (t.length !== values.length || t.length < 2) {
    throw new Error('need at least two matching samples')
  }
  const lx = t.map((v) => Math.log(v + 1.0))
  const ly = values.map(Math.log)
  const n = lx.length
  const mx = lx.reduce((a, b) => a + b, 0) / n
  const my = ly.reduce((a, b) => a + b, 0) / n
  let sxx = 0
  let sxy = 0
  for (let i = 0; i < n; i++) {
    sxx += (lx[i] - mx) * (lx[i] - mx)
    sxy += (lx[i] - mx) * (ly[i] - my)
  }
  const slope = sxy / sxx
  const intercept = my - slope * mx
  let ssRes = 0
  let ssTot = 0
  for (let i = 0; i < n; i++) {
    const fit = slope * lx[i] + intercept
    ssRes += (ly[i] - fit) * (ly[i] - fit)
    ssTot += (ly[i] - my) * (ly[i] - my)
  }
  const r2 = ssTot === 0 ? 1.0 : 1.0 - ssRes / ssTot
  return { slope, intercept, r2 }
}

/** Keep only samples with t >= tMin and strictly positive values. */
export function decayWindow(
  t: number[],
  values: number[],
  tMin: number,
): { t: number[]; values: number[] } {
  const keepT: number[] = []
  const keepV: number[] = []
  for (let i = 0; i < t.length; i++) {
    if (t[i] >= tMin && values[i] > 0) {
      keepT.push(t[i])
      keepV.push(values[i])
    }
  }
  return { t: keepT, values: keepV }
}
