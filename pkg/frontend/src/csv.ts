import Papa from "papaparse";

/** Parsed CSV with strict numeric columns. */
export interface ResultTable {
  columns: string[];
  rows: Record<string, number>[];
}

export class CsvError extends Error {}

/**
 * Parse CSV text, demanding a header, at least one data row, the given
 * required columns, and finite numbers in every cell of every required or
 * known-optional column that is present.
 */
export function parseTable(text: string, required: string[]): ResultTable {
  if (text.trim() === "") {
    throw new CsvError("empty CSV");
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new CsvError(`CSV parse error at row ${e.row}: ${e.message}`);
  }
  const columns = (parsed.meta.fields ?? []).slice();
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new CsvError(`missing required column: ${col}`);
    }
  }
  if (parsed.data.length === 0) {
    throw new CsvError("CSV has a header but no data rows");
  }
  const rows = parsed.data.map((raw, i) => {
    const row: Record<string, number> = {};
    for (const col of columns) {
      const cell = raw[col];
      const val = cell === undefined || cell === "" ? NaN : Number(cell);
      if (!Number.isFinite(val)) {
        throw new CsvError(`non-numeric value in column ${col}, data row ${i + 1}: ${cell}`);
      }
      row[col] = val;
    }
    return row;
  });
  return { columns, rows };
}

export function column(table: ResultTable, name: string): number[] {
  return table.rows.map((r) => r[name]);
}
