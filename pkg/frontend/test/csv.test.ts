import { describe, it, expect } from "vitest";

import {
  parseSweepCsv,
  parseNumeric,
  parseSaturationSir,
  groupSeries,
} from "../src/csv.js";

const HEADER =
  "receiver,M,K,N,L,alpha,snr_db,trials,failed_trials,metric_name,metric_value,stderr";

function csv(rows: string[], header = HEADER): string {
  return ["# snr_definition=test-def", "# seed=7", header, ...rows].join("\n") + "\n";
}

describe("parseNumeric", () => {
  it("accepts the writer's special float literals", () => {
    expect(parseNumeric("inf")).toBe(Infinity);
    expect(parseNumeric("-inf")).toBe(-Infinity);
    expect(parseNumeric("nan")).toBeNaN();
    expect(parseNumeric("-7.25e-3")).toBeCloseTo(-0.00725, 12);
  });

  it("rejects empty tokens", () => {
    expect(parseNumeric("")).toBeNaN();
    expect(parseNumeric("  ")).toBeNaN();
  });
});

describe("parseSweepCsv", () => {
  it("parses rows and header comments", () => {
    const table = parseSweepCsv(
      csv([
        "mrc,64,10,256,15,0.1,10,100,0,sinr_db,7.5,0.02",
        "mrc,128,10,256,15,0.1,10,100,2,sinr_db,9.1,0.03",
      ]),
    );
    expect(table.rows).toHaveLength(2);
    expect(table.comments.seed).toBe("7");
    expect(table.comments.snr_definition).toBe("test-def");
    const r = table.rows[1]!;
    expect(r.receiver).toBe("mrc");
    expect(r.M).toBe(128);
    expect(r.failed_trials).toBe(2);
    expect(r.metric_value).toBeCloseTo(9.1, 12);
  });

  it("parses inf SNR rows", () => {
    const table = parseSweepCsv(csv(["cp-zf,16,2,64,4,0.2,inf,5,0,ber,0,0"]));
    expect(table.rows[0]!.snr_db).toBe(Infinity);
    expect(table.rows[0]!.metric_value).toBe(0);
  });

  it("names the missing column on schema mismatch", () => {
    const noStderr = HEADER.split(",").slice(0, -1).join(",");
    expect(() =>
      parseSweepCsv(csv(["mrc,64,10,256,15,0.1,10,100,0,sinr_db,7.5"], noStderr), "x.csv"),
    ).toThrow(/x\.csv: missing column "stderr"/);
    const noReceiver = HEADER.split(",").slice(1).join(",");
    expect(() =>
      parseSweepCsv(csv(["64,10,256,15,0.1,10,100,0,sinr_db,7.5,0.1"], noReceiver)),
    ).toThrow(/missing column "receiver"/);
  });

  it("rejects an entirely empty file", () => {
    expect(() => parseSweepCsv("", "e.csv")).toThrow(/e\.csv: empty CSV/);
    expect(() => parseSweepCsv("# seed=1\n\n", "e.csv")).toThrow(/no header row/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseSweepCsv(HEADER + "\n", "h.csv")).toThrow(/h\.csv: empty CSV \(no data rows\)/);
  });

  it("points at bad numeric fields by line and column", () => {
    expect(() =>
      parseSweepCsv(csv(["mrc,sixty,10,256,15,0.1,10,100,0,sinr_db,7.5,0.02"]), "b.csv"),
    ).toThrow(/b\.csv:4: bad number "sixty" in column "M"/);
  });

  it("tolerates column reordering as long as all columns exist", () => {
    const reordered = "stderr," + HEADER.split(",").slice(0, -1).join(",");
    const table = parseSweepCsv(
      csv(["0.02,mrc,64,10,256,15,0.1,10,100,0,sinr_db,7.5"], reordered),
    );
    expect(table.rows[0]!.stderr).toBeCloseTo(0.02, 12);
    expect(table.rows[0]!.metric_value).toBeCloseTo(7.5, 12);
  });
});

describe("groupSeries", () => {
  const rows = parseSweepCsv(
    csv([
      "zf,256,10,256,15,0.1,10,50,0,sinr_db,16.18,0.02",
      "mrc,1024,10,256,15,0.1,10,30,0,sinr_db,14.92,0.03",
      "mrc,256,10,256,15,0.1,10,50,0,sinr_db,12.21,0.02",
    ]),
  ).rows;

  it("groups by receiver, sorted by label and by x", () => {
    const series = groupSeries(rows, "sinr_db", "M");
    expect(series.map((s) => s.label)).toEqual(["mrc", "zf"]);
    expect(series[0]!.points.map((p) => p.x)).toEqual([256, 1024]);
    expect(series[0]!.points[0]!.y).toBeCloseTo(12.21, 12);
  });

  it("throws when no row carries the requested metric", () => {
    expect(() => groupSeries(rows, "ber", "snr_db")).toThrow(/no rows with metric_name="ber"/);
  });
});

describe("parseSaturationSir", () => {
  it("reads the sir_db comment", () => {
    const text = "# p_signal=0.9598\n# sir_db=16.3700689514\nd,p_ici,p_isi\n0,0,0.0004\n";
    expect(parseSaturationSir(text)).toBeCloseTo(16.3700689514, 9);
  });

  it("errors when the comment is absent", () => {
    expect(() => parseSaturationSir("d,p_ici,p_isi\n0,0,1\n", "s.csv")).toThrow(
      /s\.csv: missing "# sir_db=" comment/,
    );
  });
});
