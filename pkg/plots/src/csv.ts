/**
 * Reader for kdvlab's stamped CSV files.
 *
 * Every file starts with a stamp comment
 *
 *     # kdvlab csv v1 schema=<name> config=<12-hex hash>
 *
 * optionally followed by further `#` comment lines, then the column header
 * and the data rows.  The reader is deliberately independent of the writer:
 * it re-validates the stamp, the format version, and the expected schema.
 */

export const SUPPORTED_VERSION = 1;

export class CsvFormatError extends Error {}
export class SchemaVersionError extends CsvFormatError {}
export class SchemaMismatchError extends CsvFormatError {}
export class EmptyInputError extends CsvFormatError {}

export interface StampedCsv {
  schema: string;
  version: number;
  configHash: string;
  comments: string[];
  columns: string[];
  /** Row cells keyed by column name; numeric-looking cells become numbers. */
  rows: Record<string, string | number>[];
}

const STAMP_RE = /^# kdvlab csv v(\d+) schema=(\S+) config=([0-9a-f]{12})$/;

function parseCell(cell: string): string | number {
  if (cell === "") return "";
  const n = Number(cell);
  return Number.isNaN(n) && cell.trim().toLowerCase() !== "nan" ? cell : n;
}

export function parseStampedCsv(text: string, expectSchema?: string): StampedCsv {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || !lines[0].startsWith("#")) {
    throw new CsvFormatError("missing schema stamp");
  }
  const m = STAMP_RE.exec(lines[0]);
  if (!m) {
    throw new CsvFormatError(`malformed stamp: ${lines[0]}`);
  }
  const version = Number(m[1]);
  if (version !== SUPPORTED_VERSION) {
    throw new SchemaVersionError(
      `format version ${version} is not supported (expected ${SUPPORTED_VERSION})`
    );
  }
  const schema = m[2];
  if (expectSchema !== undefined && schema !== expectSchema) {
    throw new SchemaMismatchError(
      `schema ${schema}, expected ${expectSchema}`
    );
  }
  const comments: string[] = [];
  let i = 1;
  while (i < lines.length && lines[i].startsWith("#")) {
    comments.push(lines[i].replace(/^#\s?/, ""));
    i += 1;
  }
  if (i >= lines.length) {
    throw new EmptyInputError(`schema ${schema}: no header row`);
  }
  const columns = lines[i].split(",");
  i += 1;
  const rows: Record<string, string | number>[] = [];
  for (; i < lines.length; i += 1) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new CsvFormatError(
        `row of width ${cells.length} against ${columns.length}-column schema ${schema}`
      );
    }
    const row: Record<string, string | number> = {};
    columns.forEach((c, j) => {
      row[c] = parseCell(cells[j]);
    });
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new EmptyInputError(`schema ${schema}: no data rows`);
  }
  return { schema, version, configHash: m[3], comments, columns, rows };
}

/** Numeric column accessor with validation. */
export function numericColumn(csv: StampedCsv, name: string): number[] {
  if (!csv.columns.includes(name)) {
    throw new CsvFormatError(`schema ${csv.schema} has no column ${name}`);
  }
  return csv.rows.map((r) => {
    const v = r[name];
    if (typeof v !== "number") {
      throw new CsvFormatError(`non-numeric cell in column ${name}: ${v}`);
    }
    return v;
  });
}

/** Fitted-slope comment lines: `slope scheme=<id> value=<float>`. */
export function slopeComments(csv: StampedCsv): Map<string, number> {
  const out = new Map<string, number>();
  for (const c of csv.comments) {
    const m = /^slope scheme=(\S+) value=(\S+)$/.exec(c);
    if (m) out.set(m[1], Number(m[2]));
  }
  return out;
}
