import { describe, expect, it } from 'vitest'
import { join, dirname } from 'path'
import { fileURLToPath } from 'url'
import { column, DataError, parseCsv, readCsv, readReport } from '../src/csv.js'

const FIX = join(dirname(fileURLToPath(import.meta.url)), 'fixtures')

describe('parseCsv', () => {
  it('parses a small numeric table', () => {
    const t = parseCsv('a,b\n1,2\n3,4\n')
    expect(t.columns).toEqual(['a', 'b'])
    expect(t.rows).toEqual([
      [1, 2],
      [3, 4],
    ])
  })

  it('rejects a ragged row', () => {
    expect(() => parseCsv('a,b\n1,2\n3\n')).toThrow(DataError)
  })

  it('rejects a non-numeric field', () => {
    expect(() => parseCsv('a,b\n1,two\n')).toThrow(DataError)
  })

  it('rejects a header-only file', () => {
    expect(() => parseCsv('a,b\n')).toThrow(DataError)
  })
})

describe('fixtures', () => {
  it('reads norms.csv with the expected columns', () => {
    const t = readCsv(join(FIX, 'norms.csv'))
    expect(t.columns).toContain('t')
    expect(t.columns).toContain('X_sum')
    expect(t.columns).toContain('decay_compensated')
    expect(t.rows.length).toBeGreaterThan(10)
    expect(column(t, 't')[0]).toBe(0)
  })

  it('reads radius.csv with the expected columns', () => {
    const t = readCsv(join(FIX, 'radius.csv'))
    expect(t.columns).toEqual([
      't',
      'tau',
      'tau_lower_bound',
      'B_norm',
      'holder_modulus_running_max',
    ])
  })

  it('raises on a missing column', () => {
    const t = readCsv(join(FIX, 'norms.csv'))
    expect(() => column(t, 'nope')).toThrow(DataError)
  })

  it('parses the report key/value lines', () => {
    const r = readReport(join(FIX, 'report.txt'))
    expect(r['termination']).toBe('t_end')
    expect(Number(r['decay_slope'])).toBeLessThan(-1.0)
    expect(r['csv']).toBeUndefined()
    expect(r['snapshot']).toBeUndefined()
  })

  it('raises on a missing file', () => {
    expect(() => readCsv(join(FIX, 'does-not-exist.csv'))).toThrow(DataError)
  })
})
