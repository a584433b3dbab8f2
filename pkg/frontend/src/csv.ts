/** Minimal strict CSV reading for the numeric tables switchlab emits. */

export class CsvError extends Error {}

export interface NumericTable {
  header: string[];
  rows: number[][];
}

/**
 * Parse a comma-separated numeric table and check its header.
 *
 * Rejects (with CsvError) empty input, a wrong header, ragged rows and
 * non-numeric cells; a trailing newline is fine.
 */
export function parseNumericCsv(text: string, expectedHeader: string): NumericTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new CsvError("empty CSV input");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const expected = expectedHeader.split(",");
  if (header.join(",") !== expected.join(",")) {
    throw new CsvError(
      `unexpected header: got "${lines[0]}", expected "${expectedHeader}"`,
    );
  }
  if (lines.length === 1) {
    throw new CsvError("CSV has a header but no data rows");
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== expected.length) {
      throw new CsvError(
        `row ${i} has ${cells.length} fields, expected ${expected.length}`,
      );
    }
    const row = cells.map((cell) => {
      const value = Number(cell);
      if (cell.trim() === "" || !Number.isFinite(value)) {
        throw new CsvError(`row ${i}: non-numeric cell "${cell}"`);
      }
      return value;
    });
    rows.push(row);
  }
  return { header, rows };
}
