import { describe, expect, it } from "vitest";

import {
  CsvFormatError,
  EmptyInputError,
  numericColumn,
  parseStampedCsv,
  SchemaMismatchError,
  SchemaVersionError,
  slopeComments,
} from "../src/csv.js";
import { stamp, TRACE } from "./fixtures.js";

describe("parseStampedCsv", () => {
  it("parses a stamped trace file", () => {
    const csv = parseStampedCsv(TRACE, "trace");
    expect(csv.schema).toBe("trace");
    expect(csv.version).toBe(1);
    expect(csv.configHash).toBe("0123456789ab");
    expect(csv.comments).toEqual(["termination=blew_up t=17.3"]);
    expect(csv.columns).toEqual(["t", "l2_norm", "amplitude", "peak_position"]);
    expect(csv.rows).toHaveLength(4);
    expect(csv.rows[2].l2_norm).toBe(2.9);
  });

  it("rejects a file without a stamp", () => {
    expect(() => parseStampedCsv("t,u\n1,2\n")).toThrow(CsvFormatError);
    expect(() => parseStampedCsv("t,u\n1,2\n")).toThrow(/missing schema stamp/);
  });

  it("rejects a malformed stamp", () => {
    const bad = "# kdvlab csv v1 schema=trace config=XYZ\nt\n1\n";
    expect(() => parseStampedCsv(bad)).toThrow(/malformed stamp/);
  });

  it("rejects an unsupported format version", () => {
    const v99 = TRACE.replace("csv v1", "csv v99");
    expect(() => parseStampedCsv(v99)).toThrow(SchemaVersionError);
  });

  it("rejects a schema mismatch", () => {
    expect(() => parseStampedCsv(TRACE, "errors")).toThrow(SchemaMismatchError);
  });

  it("rejects empty input (no data rows)", () => {
    const empty = [stamp("trace"), "t,l2_norm", ""].join("\n");
    expect(() => parseStampedCsv(empty)).toThrow(EmptyInputError);
  });

  it("rejects empty input (no header)", () => {
    expect(() => parseStampedCsv(stamp("trace") + "\n")).toThrow(EmptyInputError);
  });

  it("rejects ragged rows", () => {
    const ragged = [stamp("trace"), "a,b", "1,2", "3", ""].join("\n");
    expect(() => parseStampedCsv(ragged)).toThrow(/width 1/);
  });

  it("coerces numeric-looking cells, keeps strings", () => {
    const mixed = [stamp("survey"), "scheme,dt", "sbdf2,1e-3", ""].join("\n");
    const csv = parseStampedCsv(mixed);
    expect(csv.rows[0].scheme).toBe("sbdf2");
    expect(csv.rows[0].dt).toBe(0.001);
  });
});

describe("numericColumn", () => {
  it("extracts a column", () => {
    const csv = parseStampedCsv(TRACE);
    expect(numericColumn(csv, "t")).toEqual([0, 1, 2, 3]);
  });

  it("rejects a missing column", () => {
    const csv = parseStampedCsv(TRACE);
    expect(() => numericColumn(csv, "nope")).toThrow(/no column nope/);
  });

  it("rejects non-numeric cells", () => {
    const mixed = [stamp("survey"), "scheme,dt", "sbdf2,1e-3", ""].join("\n");
    const csv = parseStampedCsv(mixed);
    expect(() => numericColumn(csv, "scheme")).toThrow(/non-numeric/);
  });
});

describe("slopeComments", () => {
  it("collects fitted slopes", () => {
    const text = [
      stamp("comparison"),
      "# slope scheme=sbdf2 value=2.0960000000000001",
      "# slope scheme=sbdf1 value=1.88",
      "# other comment",
      "epsilon,rel_error",
      "0.1,0.01",
      "",
    ].join("\n");
    const slopes = slopeComments(parseStampedCsv(text));
    expect(slopes.get("sbdf2")).toBeCloseTo(2.096, 10);
    expect(slopes.get("sbdf1")).toBe(1.88);
    expect(slopes.size).toBe(2);
  });
});
