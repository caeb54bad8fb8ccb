/**
 * Render the analyticity-radius figure from a run's radius.csv.
 *
 * Usage: node dist/plot_radius.js <radius.csv> <out.svg>
 *
 * Draws tau(t) together with the running lower bound and the tau0/2
 * guarantee line (tau0 is taken from the first row, where tau = tau0).
 * If tau ever dips below either line the first crossing is marked and
 * reported on the figure.
 *
 * Exit codes: 0 no crossing, 1 floor crossing detected (figure still
 * written), 2 usage or parse error.
 */
import { writeFileSync } from 'fs'
import { column, DataError, readCsv } from './csv.js'
import { Marker, renderChart } from './svg.js'

export interface RadiusResult {
  svg: string
  tau0: number
  crossingIndex: number // -1 when tau stays above both lines
}

export function buildRadiusFigure(csvPath: string): RadiusResult {
  const table = readCsv(csvPath)
  const t = column(table, 't', csvPath)
  const tau = column(table, 'tau', csvPath)
  const floor = column(table, 'tau_lower_bound', csvPath)
  if (t.length < 2) {
    throw new DataError(`${csvPath}: need at least two rows`)
  }

  const tau0 = tau[0]
  const half = tau0 / 2
  let crossingIndex = -1
  for (let i = 0; i < t.length; i++) {
    if (tau[i] < floor[i] || tau[i] < half) {
      crossingIndex = i
      break
    }
  }

  const markers: Marker[] = []
  if (crossingIndex >= 0) {
    markers.push({
      x: t[crossingIndex],
      y: tau[crossingIndex],
      color: '#c0392b',
      label: `floor crossed at t = ${t[crossingIndex].toFixed(3)}`,
    })
  }

  const svg = renderChart({
    title: 'Tangential analyticity radius',
    xLabel: 't',
    yLabel: 'tau',
    series: [
      { x: t, y: tau, color: '#1f6fb2', label: 'tau(t)' },
      {
        x: t,
        y: floor,
        color: '#7a7a7a',
        label: 'running lower bound',
        dash: '4 3',
      },
    ],
    hlines: [{ y: half, color: '#2e8b57', label: 'tau0 / 2' }],
    markers,
    annotation:
      crossingIndex < 0
        ? `no floor crossing (min tau = ${Math.min(...tau).toFixed(6)})`
        : undefined,
  })
  return { svg, tau0, crossingIndex }
}

export function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error('usage: plot_radius <radius.csv> <out.svg>')
    return 2
  }
  const [csvPath, outPath] = argv
  try {
    const result = buildRadiusFigure(csvPath)
    writeFileSync(outPath, result.svg)
    const note = result.crossingIndex < 0 ? 'no floor crossing' : 'floor crossing marked'
    console.log(`wrote ${outPath} (${note})`)
    return result.crossingIndex < 0 ? 0 : 1
  } catch (err) {
    if (err instanceof DataError) {
      console.error(`error: ${err.message}`)
      return 2
    }
    throw err
  }
}

if (process.argv[1] && process.argv[1].endsWith('plot_radius.js')) {
  process.exit(main(process.argv.slice(2)))
}
