/**
 * Sweep-CSV reader.
 *
 * The simulator writes one flat CSV per sweep:
 *
 *   # snr_definition=...
 *   # seed=...
 *   receiver,M,K,N,L,alpha,snr_db,trials,failed_trials,metric_name,metric_value,stderr
 *   mrc,256,10,256,15,0.1,10,50,0,sinr_db,12.2139083253,0.0164720771141
 *
 * Floats may be `inf`, `-inf` or `nan`. Leading `# key=value` comment lines
 * carry run metadata and are preserved verbatim.
 */

export const SWEEP_COLUMNS = [
  "receiver",
  "M",
  "K",
  "N",
  "L",
  "alpha",
  "snr_db",
  "trials",
  "failed_trials",
  "metric_name",
  "metric_value",
  "stderr",
] as const;

export interface SweepRow {
  receiver: string;
  M: number;
  K: number;
  N: number;
  L: number;
  alpha: number;
  snr_db: number;
  trials: number;
  failed_trials: number;
  metric_name: string;
  metric_value: number;
  stderr: number;
}

export interface SweepTable {
  rows: SweepRow[];
  /** `# key=value` header comments, in file order. */
  comments: Record<string, string>;
}

const STRING_COLUMNS = new Set(["receiver", "metric_name"]);

/** Parse one numeric token; accepts the writer's inf/-inf/nan literals. */
export function parseNumeric(token: string): number {
  switch (token) {
    case "inf":
      return Infinity;
    case "-inf":
      return -Infinity;
    case "nan":
      return NaN;
  }
  // Number("") is 0 and Number("1e") is NaN quietly; reject both.
  if (token.trim() === "") return NaN;
  return Number(token);
}

function splitComment(line: string): [string, string] | null {
  const body = line.slice(1).trim();
  const eq = body.indexOf("=");
  if (eq < 0) return null;
  return [body.slice(0, eq), body.slice(eq + 1)];
}

/**
 * Parse a sweep CSV. Throws with the offending file and the first missing
 * column named explicitly on any schema mismatch; an empty file (no header
 * or no data rows) is an error, never an empty table.
 */
export function parseSweepCsv(text: string, source = "<csv>"): SweepTable {
  const comments: Record<string, string> = {};
  const lines = text.split("\n").map((l) => l.replace(/\r$/, ""));

  let headerIdx = -1;
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i]!;
    if (line.trim() === "") continue;
    if (line.startsWith("#")) {
      const kv = splitComment(line);
      if (kv) comments[kv[0]] = kv[1];
      continue;
    }
    headerIdx = i;
    break;
  }
  if (headerIdx < 0) {
    throw new Error(`${source}: empty CSV (no header row)`);
  }

  const header = lines[headerIdx]!.split(",").map((h) => h.trim());
  const colIndex = new Map<string, number>();
  header.forEach((name, i) => colIndex.set(name, i));
  for (const col of SWEEP_COLUMNS) {
    if (!colIndex.has(col)) {
      throw new Error(`${source}: missing column "${col}"`);
    }
  }

  const rows: SweepRow[] = [];
  for (let i = headerIdx + 1; i < lines.length; i++) {
    const line = lines[i]!;
    if (line.trim() === "" || line.startsWith("#")) continue;
    const fields = line.split(",");
    if (fields.length < header.length) {
      throw new Error(
        `${source}:${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const row: Record<string, string | number> = {};
    for (const col of SWEEP_COLUMNS) {
      const raw = fields[colIndex.get(col)!]!.trim();
      if (STRING_COLUMNS.has(col)) {
        row[col] = raw;
      } else {
        const v = parseNumeric(raw);
        if (Number.isNaN(v) && raw !== "nan") {
          throw new Error(`${source}:${i + 1}: bad number ${JSON.stringify(raw)} in column "${col}"`);
        }
        row[col] = v;
      }
    }
    rows.push(row as unknown as SweepRow);
  }

  if (rows.length === 0) {
    throw new Error(`${source}: empty CSV (no data rows)`);
  }
  return { rows, comments };
}

export interface SeriesPoint {
  x: number;
  y: number;
  err: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

/**
 * Group rows of one metric into per-receiver series, sorted by the x field.
 * Series are ordered by label so output never depends on input file order.
 */
export function groupSeries(
  rows: SweepRow[],
  metric: string,
  xField: "M" | "snr_db",
): Series[] {
  const byReceiver = new Map<string, SeriesPoint[]>();
  for (const row of rows) {
    if (row.metric_name !== metric) continue;
    let pts = byReceiver.get(row.receiver);
    if (!pts) {
      pts = [];
      byReceiver.set(row.receiver, pts);
    }
    pts.push({ x: row[xField], y: row.metric_value, err: row.stderr });
  }
  if (byReceiver.size === 0) {
    throw new Error(`no rows with metric_name=${JSON.stringify(metric)}`);
  }
  const labels = [...byReceiver.keys()].sort();
  return labels.map((label) => {
    const points = byReceiver.get(label)!.slice().sort((a, b) => a.x - b.x);
    return { label, points };
  });
}

/**
 * Read the closed-form saturation level out of an analyze-sir CSV, which
 * carries it as a `# sir_db=` comment above the per-distance table.
 */
export function parseSaturationSir(text: string, source = "<csv>"): number {
  for (const line of text.split("\n")) {
    if (!line.startsWith("#")) continue;
    const kv = splitComment(line);
    if (kv && kv[0] === "sir_db") {
      const v = parseNumeric(kv[1].trim());
      if (Number.isNaN(v)) {
        throw new Error(`${source}: bad "# sir_db=" value ${JSON.stringify(kv[1])}`);
      }
      return v;
    }
  }
  throw new Error(`${source}: missing "# sir_db=" comment`);
}
