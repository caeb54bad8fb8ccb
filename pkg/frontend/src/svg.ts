/**
 * Minimal dependency-free SVG line charts. Enough for the two figures this
 * package produces: polylines over linear or log axes, tick labels, a text
 * annotation, and optional horizontal reference lines.
 */

export interface Series {
  x: number[]
  y: number[]
  color: string
  label: string
  dash?: string
}

export interface Marker {
  x: number
  y: number
  color: string
  label: string
}

export interface ChartSpec {
  title: string
  xLabel: string
  yLabel: string
  logX?: boolean
  logY?: boolean
  series: Series[]
  annotation?: string
  hlines?: { y: number; color: string; label: string }[]
  markers?: Marker[]
  width?: number
  height?: number
}

const MARGIN = { top: 40, right: 30, bottom: 48, left: 64 }

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  const span = hi - lo
  if (span <= 0) return [lo]
  const rawStep = span / n
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)))
  let step = mag
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag
      break
    }
  }
  const ticks: number[] = []
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    ticks.push(v)
  }
  return ticks
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = []
  for (let e = Math.floor(lo); e <= Math.ceil(hi); e++) {
    if (e >= lo - 1e-9 && e <= hi + 1e-9) ticks.push(e)
  }
  return ticks.length >= 2 ? ticks : niceTicks(lo, hi)
}

function fmtTick(v: number, log: boolean): string {
  if (log) return `1e${v}`
  const a = Math.abs(v)
  if (a !== 0 && (a < 1e-3 || a >= 1e5)) return v.toExponential(1)
  return String(Math.round(v * 1e6) / 1e6)
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 720
  const height = spec.height ?? 480
  const iw = width - MARGIN.left - MARGIN.right
  const ih = height - MARGIN.top - MARGIN.bottom

  const tx = (v: number) => (spec.logX ? Math.log10(v) : v)
  const ty = (v: number) => (spec.logY ? Math.log10(v) : v)

  const allX: number[] = []
  const allY: number[] = []
  for (const s of spec.series) {
    for (const v of s.x) allX.push(tx(v))
    for (const v of s.y) allY.push(ty(v))
  }
  for (const h of spec.hlines ?? []) allY.push(ty(h.y))
  if (allX.length === 0) throw new Error('no data to plot')

  let x0 = Math.min(...allX)
  let x1 = Math.max(...allX)
  let y0 = Math.min(...allY)
  let y1 = Math.max(...allY)
  if (x1 === x0) x1 = x0 + 1
  if (y1 === y0) y1 = y0 + 1
  const padY = 0.05 * (y1 - y0)
  y0 -= padY
  y1 += padY

  const px = (v: number) => MARGIN.left + ((tx(v) - x0) / (x1 - x0)) * iw
  const py = (v: number) => MARGIN.top + ih - ((ty(v) - y0) / (y1 - y0)) * ih

  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  )
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`)
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="15">${esc(spec.title)}</text>`,
  )

  const xt = spec.logX ? logTicks(x0, x1) : niceTicks(x0, x1)
  const yt = spec.logY ? logTicks(y0, y1) : niceTicks(y0, y1)
  for (const v of xt) {
    const x = MARGIN.left + ((v - x0) / (x1 - x0)) * iw
    parts.push(
      `<line x1="${x.toFixed(2)}" y1="${MARGIN.top}" x2="${x.toFixed(2)}" y2="${MARGIN.top + ih}" stroke="#ddd"/>`,
    )
    parts.push(
      `<text x="${x.toFixed(2)}" y="${MARGIN.top + ih + 18}" text-anchor="middle">${fmtTick(v, !!spec.logX)}</text>`,
    )
  }
  for (const v of yt) {
    const y = MARGIN.top + ih - ((v - y0) / (y1 - y0)) * ih
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(2)}" x2="${MARGIN.left + iw}" y2="${y.toFixed(2)}" stroke="#ddd"/>`,
    )
    parts.push(
      `<text x="${MARGIN.left - 6}" y="${(y + 4).toFixed(2)}" text-anchor="end">${fmtTick(v, !!spec.logY)}</text>`,
    )
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${iw}" height="${ih}" fill="none" stroke="#444"/>`,
  )
  parts.push(
    `<text x="${MARGIN.left + iw / 2}" y="${height - 8}" text-anchor="middle">${esc(spec.xLabel)}</text>`,
  )
  parts.push(
    `<text x="16" y="${MARGIN.top + ih / 2}" text-anchor="middle" transform="rotate(-90 16 ${MARGIN.top + ih / 2})">${esc(spec.yLabel)}</text>`,
  )

  for (const h of spec.hlines ?? []) {
    const y = py(h.y)
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(2)}" x2="${MARGIN.left + iw}" y2="${y.toFixed(2)}" stroke="${h.color}" stroke-dasharray="6 3"/>`,
    )
    parts.push(
      `<text x="${MARGIN.left + iw - 4}" y="${(y - 4).toFixed(2)}" text-anchor="end" fill="${h.color}">${esc(h.label)}</text>`,
    )
  }

  let legendY = MARGIN.top + 14
  for (const s of spec.series) {
    const pts = s.x
      .map((v, i) => `${px(v).toFixed(2)},${py(s.y[i]).toFixed(2)}`)
      .join(' ')
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : ''
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.8"${dash}/>`,
    )
    parts.push(
      `<line x1="${MARGIN.left + 10}" y1="${legendY}" x2="${MARGIN.left + 34}" y2="${legendY}" stroke="${s.color}" stroke-width="1.8"${dash}/>`,
    )
    parts.push(
      `<text x="${MARGIN.left + 40}" y="${legendY + 4}">${esc(s.label)}</text>`,
    )
    legendY += 16
  }

  for (const m of spec.markers ?? []) {
    parts.push(
      `<circle cx="${px(m.x).toFixed(2)}" cy="${py(m.y).toFixed(2)}" r="4" fill="${m.color}"/>`,
    )
    parts.push(
      `<text x="${(px(m.x) + 7).toFixed(2)}" y="${(py(m.y) - 7).toFixed(2)}" fill="${m.color}">${esc(m.label)}</text>`,
    )
  }

  if (spec.annotation) {
    parts.push(
      `<text x="${MARGIN.left + iw - 8}" y="${MARGIN.top + ih - 10}" text-anchor="end" font-size="13">${esc(spec.annotation)}</text>`,
    )
  }

  parts.push('</svg>')
  return parts.join('\n')
}
