/** Strict parsing for the proxlab CSV schemas (plain comma-separated, no quoting). */

export class CsvError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty file: no header line");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(`row ${i + 2} has ${cells.length} cells, header has ${header.length}`);
    }
    return cells;
  });
  return { header, rows };
}

/** Validate the header starts with the expected columns and return a
 *  column-name -> index lookup. */
export function requireColumns(table: Table, expected: string[]): Map<string, number> {
  for (const name of expected) {
    if (!table.header.includes(name)) {
      throw new CsvError(`missing column ${name}; header is [${table.header.join(",")}]`);
    }
  }
  if (table.rows.length === 0) {
    throw new CsvError("no data rows");
  }
  return new Map(table.header.map((name, i) => [name, i]));
}

export function num(row: string[], cols: Map<string, number>, name: string): number {
  const value = Number(row[cols.get(name)!]);
  if (!Number.isFinite(value)) {
    throw new CsvError(`non-numeric value ${row[cols.get(name)!]} in column ${name}`);
  }
  return value;
}
