/** Wire types mirroring the network document schema (1-based node ids). */

export type EntryStatus = "zero" | "known" | "parametrized";

export interface Orders {
  num: number;
  den: number;
  delay: number;
}

export interface ModuleEntry {
  from: number;
  to: number;
  status: EntryStatus;
  num?: number[];
  den?: number[];
  orders?: Orders;
}

export interface HEntry {
  row: number;
  col: number;
  status: EntryStatus;
  num?: number[];
  den?: number[];
  orders?: Orders;
}

export interface SourceSpec {
  kind: "white" | "ar1";
  variance: number;
  pole: number;
}

export interface Excitation {
  r_index: number;
  node: number;
  spec?: SourceSpec;
}

export interface ParamMapEntry {
  row: number;
  col: number;
  status: EntryStatus;
  num?: number[];
  den?: number[];
  orders?: Orders;
}

export interface PredictorDoc {
  D: number[];
  Y: number[];
  target: { j: number; i: number };
  rows_independent?: boolean;
  target_block_independent?: boolean;
  param_map?: { G: ParamMapEntry[]; H: ParamMapEntry[]; T: ParamMapEntry[] };
}

export interface NetworkDoc {
  nodes: string[] | number;
  modules: ModuleEntry[];
  noise?: { H_entries: HEntry[]; cov: number[][] };
  excitations?: Excitation[];
  predictor?: PredictorDoc;
}

/** Stable stringify: sorted keys, two-space indent. */
export function canonical(doc: unknown): string {
  const sorter = (value: unknown): unknown => {
    if (Array.isArray(value)) return value.map(sorter);
    if (value !== null && typeof value === "object") {
      const out: Record<string, unknown> = {};
      for (const k of Object.keys(value as object).sort()) {
        out[k] = sorter((value as Record<string, unknown>)[k]);
      }
      return out;
    }
    return value;
  };
  return JSON.stringify(sorter(doc), null, 2);
}

export function nodeCount(doc: NetworkDoc): number {
  return typeof doc.nodes === "number" ? doc.nodes : doc.nodes.length;
}

export function nodeLabels(doc: NetworkDoc): string[] {
  if (typeof doc.nodes === "number") {
    return Array.from({ length: doc.nodes }, (_, k) => `w${k + 1}`);
  }
  return [...doc.nodes];
}
