import { readFileSync } from 'fs'

export interface Table {
  columns: string[]
  rows: number[][]
}

export class DataError extends Error {}

/** Parse a comma-separated numeric table with a header row. */
export function parseCsv(text: string, path = '<string>'): Table {
  const lines = text.split('\n').filter((l) => l.trim().length > 0)
  if (lines.length < 2) {
    throw new DataError(`${path}: need a header and at least one data row`)
  }
  const columns = lines[0].split(',').map((s) => s.trim())
  const rows: number[][] = []
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(',')
    if (parts.length !== columns.length) {
      throw new DataError(
        `${path}: row ${i} has ${parts.length} fields, expected ${columns.length}`,
      )
    }
    const row = parts.map(Number)
    if (row.some((v) => Number.isNaN(v))) {
      throw new DataError(`${path}: row ${i} contains a non-numeric field`)
    }
    rows.push(row)
  }
  return { columns, rows }
}

export function readCsv(path: string): Table {
  let text: string
  try {
    text = readFileSync(path, 'utf8')
  } catch (err) {
    throw new DataError(`cannot read ${path}: ${(err as Error).message}`)
  }
  return parseCsv(text, path)
}

export function column(table: Table, name: string, path = ''): number[] {
  const idx = table.columns.indexOf(name)
  if (idx < 0) {
    throw new DataError(
      `${path}: missing column '${name}' (have: ${table.columns.join(', ')})`,
    )
  }
  return table.rows.map((r) => r[idx])
}

/** report.txt is 'key: value' lines; only scalar keys are returned. */
export function readReport(path: string): Record<string, string> {
  let text: string
  try {
    text = readFileSync(path, 'utf8')
  } catch (err) {
    throw new DataError(`cannot read ${path}: ${(err as Error).message}`)
  }
  const out: Record<string, string> = {}
  for (const line of text.split('\n')) {
    const i = line.indexOf(':')
    if (i < 0) continue
    const key = line.slice(0, i).trim()
    if (key === 'csv' || key === 'snapshot') continue
    out[key] = line.slice(i + 1).trim()
  }
  return out
}
