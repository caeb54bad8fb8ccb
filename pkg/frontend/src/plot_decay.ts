/**
 * Render the tangential-norm decay figure from a run's norms.csv.
 *
 * Usage: node dist/plot_decay.js <norms.csv> <out.svg> [report.txt]
 *
 * The fitted slope of log(X) against log(t+1) over t >= 10 is annotated on
 * the figure. If a report file is given, the annotation is cross-checked
 * against its decay_slope entry.
 *
 * Exit codes: 0 success, 1 slope disagrees with the report (threshold
 * event), 2 usage or parse error.
 */
import { writeFileSync } from 'fs'
import { column, DataError, readCsv, readReport } from './csv.js'
import { decayWindow, fitLogLogSlope } from './fit.js'
import { renderChart } from './svg.js'

export const FIT_T_MIN = 10.0
export const SLOPE_MATCH_TOL = 1e-6

export class SlopeMismatchError extends Error {}

export interface DecayResult {
  svg: string
  slope: number
  r2: number
}

export function buildDecayFigure(csvPath: string, reportPath?: string): DecayResult {
  const table = readCsv(csvPath)
  const t = column(table, 't', csvPath)
  const x = column(table, 'X_sum', csvPath)
  const comp = column(table, 'decay_compensated', csvPath)

  const win = decayWindow(t, x, FIT_T_MIN)
  if (win.t.length < 2) {
    throw new DataError(`${csvPath}: fewer than two usable samples with t >= ${FIT_T_MIN}`)
  }
  const fit = fitLogLogSlope(win.t, win.values)

  if (reportPath !== undefined) {
    const report = readReport(reportPath)
    const reported = Number(report['decay_slope'])
    if (Number.isNaN(reported)) {
      throw new DataError(`${reportPath}: missing or non-numeric decay_slope`)
    }
    if (Math.abs(reported - fit.slope) > SLOPE_MATCH_TOL) {
      throw new SlopeMismatchError(
        `slope mismatch: fitted ${fit.slope} vs reported ${reported}`,
      )
    }
  }

  const pos = (arr: number[]) => t.filter((_, i) => arr[i] > 0)
  const posV = (arr: number[]) => arr.filter((v) => v > 0)

  const svg = renderChart({
    title: 'Tangential analytic norm decay',
    xLabel: 'log10(t + 1)',
    yLabel: 'log10(norm)',
    logX: true,
    logY: true,
    series: [
      { x: pos(x).map((v) => v + 1), y: posV(x), color: '#1f6fb2', label: 'X(t)' },
      {
        x: pos(comp).map((v) => v + 1),
        y: posV(comp),
        color: '#b2571f',
        label: 'compensated <t>^(5/4-d) X(t)',
        dash: '4 3',
      },
    ],
    annotation: `fitted slope ${fit.slope.toFixed(6)} (r2 = ${fit.r2.toFixed(4)}, t >= ${FIT_T_MIN})`,
  })
  return { svg, slope: fit.slope, r2: fit.r2 }
}

export function main(argv: string[]): number {
  if (argv.length < 2 || argv.length > 3) {
    console.error('usage: plot_decay <norms.csv> <out.svg> [report.txt]')
    return 2
  }
  const [csvPath, outPath, reportPath] = argv
  try {
    const result = buildDecayFigure(csvPath, reportPath)
    writeFileSync(outPath, result.svg)
    console.log(`wrote ${outPath} (slope ${result.slope})`)
    return 0
  } catch (err) {
    if (err instanceof SlopeMismatchError) {
      console.error(`threshold event: ${err.message}`)
      return 1
    }
    if (err instanceof DataError) {
      console.error(`error: ${err.message}`)
      return 2
    }
    throw err
  }
}

if (process.argv[1] && process.argv[1].endsWith('plot_decay.js')) {
  process.exit(main(process.argv.slice(2)))
}
