import { describe, expect, it } from 'vitest'
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { join, dirname } from 'path'
import { fileURLToPath } from 'url'
import { buildDecayFigure, main as decayMain } from '../src/plot_decay.js'
import { buildRadiusFigure, main as radiusMain } from '../src/plot_radius.js'
import { renderChart } from '../src/svg.js'

const FIX = join(dirname(fileURLToPath(import.meta.url)), 'fixtures')

describe('renderChart', () => {
  it('emits a well-formed SVG with polylines and labels', () => {
    const svg = renderChart({
      title: 'demo',
      xLabel: 'x',
      yLabel: 'y',
      series: [{ x: [1, 2, 3], y: [1, 4, 9], color: 'red', label: 'sq' }],
      hlines: [{ y: 2, color: 'green', label: 'ref' }],
      annotation: 'note',
    })
    expect(svg.startsWith('<svg')).toBe(true)
    expect(svg).toContain('</svg>')
    expect(svg).toContain('<polyline')
    expect(svg).toContain('demo')
    expect(svg).toContain('note')
    expect(svg).toContain('stroke-dasharray')
  })

  it('throws on empty series', () => {
    expect(() =>
      renderChart({ title: '', xLabel: '', yLabel: '', series: [] }),
    ).toThrow()
  })
})

describe('decay figure', () => {
  it('annotates the slope fitted from the reference CSV', () => {
    const result = buildDecayFigure(join(FIX, 'norms.csv'), join(FIX, 'report.txt'))
    expect(result.slope).toBeLessThan(-1.0)
    expect(result.r2).toBeGreaterThan(0.98)
    expect(result.svg).toContain(`fitted slope ${result.slope.toFixed(6)}`)
  })

  it('fails when the annotation disagrees with the report', () => {
    const dir = mkdtempSync(join(tmpdir(), 'decay-'))
    const bad = join(dir, 'report.txt')
    writeFileSync(bad, 'decay_slope: -0.5\n')
    expect(() => buildDecayFigure(join(FIX, 'norms.csv'), bad)).toThrow(/mismatch/)
  })

  it('CLI writes an SVG file and exits 0', () => {
    const dir = mkdtempSync(join(tmpdir(), 'decay-'))
    const out = join(dir, 'decay.svg')
    const code = decayMain([join(FIX, 'norms.csv'), out, join(FIX, 'report.txt')])
    expect(code).toBe(0)
    expect(existsSync(out)).toBe(true)
    expect(readFileSync(out, 'utf8')).toContain('<svg')
  })

  it('CLI exits 2 on bad usage or a missing file, 1 on slope mismatch', () => {
    expect(decayMain([])).toBe(2)
    const dir = mkdtempSync(join(tmpdir(), 'decay-'))
    expect(decayMain([join(FIX, 'nope.csv'), join(dir, 'o.svg')])).toBe(2)
    const bad = join(dir, 'report.txt')
    writeFileSync(bad, 'decay_slope: -0.5\n')
    expect(decayMain([join(FIX, 'norms.csv'), join(dir, 'o.svg'), bad])).toBe(1)
  })
})

describe('radius figure', () => {
  it('shows no floor crossing on the reference run', () => {
    const result = buildRadiusFigure(join(FIX, 'radius.csv'))
    expect(result.tau0).toBe(1.0)
    expect(result.crossingIndex).toBe(-1)
    expect(result.svg).toContain('no floor crossing')
    expect(result.svg).toContain('tau0 / 2')
  })

  it('marks a crossing when tau dips below tau0/2', () => {
    const dir = mkdtempSync(join(tmpdir(), 'radius-'))
    const csv = join(dir, 'radius.csv')
    writeFileSync(
      csv,
      't,tau,tau_lower_bound,B_norm,holder_modulus_running_max\n' +
        '0.0,1.0,0.0,0.1,0.0\n' +
        '1.0,0.7,0.0,0.05,0.1\n' +
        '2.0,0.4,0.0,0.02,0.1\n',
    )
    const result = buildRadiusFigure(csv)
    expect(result.crossingIndex).toBe(2)
    expect(result.svg).toContain('floor crossed at t = 2.000')
  })

  it('CLI writes an SVG file and exits 0', () => {
    const dir = mkdtempSync(join(tmpdir(), 'radius-'))
    const out = join(dir, 'radius.svg')
    const code = radiusMain([join(FIX, 'radius.csv'), out])
    expect(code).toBe(0)
    expect(readFileSync(out, 'utf8')).toContain('<svg')
  })

  it('CLI exits 2 on bad usage or a missing file, 1 on a floor crossing', () => {
    expect(radiusMain(['one'])).toBe(2)
    const dir = mkdtempSync(join(tmpdir(), 'radius-'))
    expect(radiusMain([join(FIX, 'nope.csv'), join(dir, 'o.svg')])).toBe(2)
    const csv = join(dir, 'radius.csv')
    writeFileSync(
      csv,
      't,tau,tau_lower_bound,B_norm,holder_modulus_running_max\n' +
        '0.0,1.0,0.0,0.1,0.0\n' +
        '1.0,0.3,0.0,0.05,0.1\n',
    )
    expect(radiusMain([csv, join(dir, 'crossed.svg')])).toBe(1)
    expect(existsSync(join(dir, 'crossed.svg'))).toBe(true)
  })
})
