/**
 * Reader for the experiment runner's CSV dialect:
 *   line 1: "# flwin v1, config_hash=<12 hex>, seed=<u64>"
 *   line 2: comma-separated column names
 *   rest:   data rows
 */

export interface FlwinCsv {
  configHash: string;
  seed: string;
  columns: string[];
  rows: Record<string, string>[];
}

export class CsvError extends Error {}

const META_RE = /^# flwin v1, config_hash=([0-9a-f]{12}), seed=(\d+)$/;

export function parseFlwinCsv(text: string): FlwinCsv {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new CsvError('file too short: expected a meta line and a header line');
  }
  const meta = META_RE.exec(lines[0]);
  if (!meta) {
    throw new CsvError(`bad meta line: ${JSON.stringify(lines[0])}`);
  }
  const columns = lines[1].split(',');
  const rows: Record<string, string>[] = [];
  for (const line of lines.slice(2)) {
    const cells = line.split(',');
    if (cells.length !== columns.length) {
      throw new CsvError(
        `row has ${cells.length} cells, header has ${columns.length}: ${line}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((c, i) => (row[c] = cells[i]));
    rows.push(row);
  }
  return { configHash: meta[1], seed: meta[2], columns, rows };
}

/** Numeric column accessor; throws naming the column on non-numeric cells. */
export function numericColumn(csv: FlwinCsv, name: string): number[] {
  if (!csv.columns.includes(name)) {
    throw new CsvError(`missing column: ${name}`);
  }
  return csv.rows.map((row, i) => {
    const v = Number(row[name]);
    if (!Number.isFinite(v)) {
      throw new CsvError(`column ${name} has non-numeric value at row ${i}: ${row[name]}`);
    }
    return v;
  });
}
