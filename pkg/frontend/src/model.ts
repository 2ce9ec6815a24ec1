/** Canvas model: an editable network document plus layout and UI state.
 *
 * Node positions and the last report are UI state; everything else
 * serializes losslessly to and from the document schema.  Structural edits
 * drop a stale predictor param_map (the service re-derives the default) and
 * clear the target when its edge disappears.
 */

import {
  Excitation,
  HEntry,
  ModuleEntry,
  NetworkDoc,
  PredictorDoc,
  nodeLabels,
} from "./schema.js";

export interface CanvasNode {
  id: number; // 1-based, stable
  label: string;
  x: number;
  y: number;
}

export interface ValidationMessage {
  rule: string;
  message: string;
}

const TAU = Math.PI * 2;

export class CanvasModel {
  nodes: CanvasNode[] = [];
  modules: ModuleEntry[] = [];
  hEntries: HEntry[] = [];
  cov: number[][] = [];
  excitations: Excitation[] = [];
  predictor: PredictorDoc | null = null;
  lastReport: unknown = null;
  dirty = false;

  static fromDocument(doc: NetworkDoc): CanvasModel {
    const m = new CanvasModel();
    const labels = nodeLabels(doc);
    m.nodes = labels.map((label, k) => ({
      id: k + 1,
      label,
      x: 0.5 + 0.38 * Math.cos((TAU * k) / labels.length - Math.PI / 2),
      y: 0.5 + 0.38 * Math.sin((TAU * k) / labels.length - Math.PI / 2),
    }));
    m.modules = (doc.modules ?? []).map((e) => ({ ...e }));
    m.hEntries = (doc.noise?.H_entries ?? []).map((e) => ({ ...e }));
    m.cov = (doc.noise?.cov ?? labels.map(() => labels.map(() => 0))).map(
      (row) => [...row],
    );
    m.excitations = (doc.excitations ?? []).map((e) => ({ ...e }));
    m.predictor = doc.predictor ? structuredClone(doc.predictor) : null;
    m.dirty = false;
    return m;
  }

  toDocument(): NetworkDoc {
    const doc: NetworkDoc = {
      nodes: this.nodes.map((n) => n.label),
      modules: this.modules.map((e) => ({ ...e })),
      noise: {
        H_entries: this.hEntries.map((e) => ({ ...e })),
        cov: this.cov.map((row) => [...row]),
      },
      excitations: this.excitations.map((e) => ({ ...e })),
    };
    if (this.predictor) doc.predictor = structuredClone(this.predictor);
    return doc;
  }

  // ----------------------------------------------------------- edit actions

  addNode(label?: string): CanvasNode {
    const id = this.nodes.length + 1;
    const node = {
      id,
      label: label ?? `w${id}`,
      x: 0.5 + 0.1 * (id % 3),
      y: 0.5 + 0.1 * ((id * 7) % 5) - 0.2,
    };
    this.nodes.push(node);
    for (const row of this.cov) row.push(0);
    this.cov.push(new Array(this.nodes.length).fill(0));
    this.touch();
    return node;
  }

  removeNode(id: number): void {
    const idx = this.nodes.findIndex((n) => n.id === id);
    if (idx < 0) return;
    this.modules = this.modules.filter((e) => e.from !== id && e.to !== id);
    this.hEntries = this.hEntries.filter((e) => e.row !== id && e.col !== id);
    this.excitations = this.excitations.filter((e) => e.node !== id);
    this.cov.splice(idx, 1);
    for (const row of this.cov) row.splice(idx, 1);
    this.nodes.splice(idx, 1);
    // renumber to keep ids dense and 1-based
    const remap = new Map<number, number>();
    this.nodes.forEach((n, k) => {
      remap.set(n.id, k + 1);
      n.id = k + 1;
    });
    const fix = (v: number) => remap.get(v) ?? v;
    this.modules.forEach((e) => {
      e.from = fix(e.from);
      e.to = fix(e.to);
    });
    this.hEntries.forEach((e) => {
      e.row = fix(e.row);
      e.col = fix(e.col);
    });
    this.excitations.forEach((e) => {
      e.node = fix(e.node);
    });
    if (this.predictor) {
      const p = this.predictor;
      p.D = p.D.filter((d) => remap.has(d)).map(fix);
      p.Y = p.Y.filter((y) => remap.has(y)).map(fix);
      if (!remap.has(p.target.j) || !remap.has(p.target.i)) {
        this.predictor = null;
      } else {
        p.target = { j: fix(p.target.j), i: fix(p.target.i) };
        delete p.param_map;
      }
    }
    this.touch();
  }

  findModule(from: number, to: number): ModuleEntry | undefined {
    return this.modules.find((e) => e.from === from && e.to === to);
  }

  addEdge(from: number, to: number): ModuleEntry | null {
    if (from === to) return null; // hollow: no self modules
    if (this.findModule(from, to)) return null;
    const entry: ModuleEntry = {
      from,
      to,
      status: "parametrized",
      num: [0, 0.3],
      den: [1],
      orders: { num: 1, den: 1, delay: 1 },
    };
    this.modules.push(entry);
    this.invalidateParamMap();
    this.touch();
    return entry;
  }

  removeEdge(from: number, to: number): void {
    this.modules = this.modules.filter(
      (e) => !(e.from === from && e.to === to),
    );
    const t = this.predictor?.target;
    if (t && t.i === from && t.j === to) {
      // the target module is gone: clear the selection, checks are disabled
      this.predictor = null;
    } else {
      this.invalidateParamMap();
    }
    this.touch();
  }

  toggleStatus(from: number, to: number): ModuleEntry | undefined {
    const e = this.findModule(from, to);
    if (!e) return undefined;
    const order: Record<string, "zero" | "known" | "parametrized"> = {
      parametrized: "known",
      known: "zero",
      zero: "parametrized",
    };
    e.status = order[e.status];
    if (e.status === "zero") {
      delete e.num;
      delete e.den;
      delete e.orders;
    } else if (!e.num) {
      e.num = [0, 0.3];
      e.den = [1];
      if (e.status === "parametrized") e.orders = { num: 1, den: 1, delay: 1 };
    }
    const t = this.predictor?.target;
    if (t && t.i === from && t.j === to && e.status !== "parametrized") {
      this.predictor = null; // target must stay a parametrized edge
    } else {
      this.invalidateParamMap();
    }
    this.touch();
    return e;
  }

  toggleExcitation(node: number): void {
    const existing = this.excitations.find((e) => e.node === node);
    if (existing) {
      this.excitations = this.excitations.filter((e) => e.node !== node);
      this.excitations.forEach((e, k) => (e.r_index = k + 1));
    } else {
      this.excitations.push({ r_index: this.excitations.length + 1, node });
    }
    this.invalidateParamMap();
    this.touch();
  }

  toggleNoise(node: number, variance = 0.5): void {
    const k = node - 1;
    if (this.cov[k][k] > 0) {
      this.cov[k][k] = 0;
      this.hEntries = this.hEntries.filter(
        (e) => !(e.row === node && e.col === node),
      );
    } else {
      this.cov[k][k] = variance;
      if (!this.hEntries.find((e) => e.row === node && e.col === node)) {
        this.hEntries.push({
          row: node,
          col: node,
          status: "parametrized",
          num: [1],
          den: [1],
          orders: { num: 1, den: 1, delay: 0 },
        });
      }
    }
    this.invalidateParamMap();
    this.touch();
  }

  setPredictorSets(D: number[], Y: number[]): void {
    const t = this.predictor?.target ?? null;
    this.predictor = {
      D: [...D].sort((a, b) => a - b),
      Y: [...Y].sort((a, b) => a - b),
      target: t ?? { j: Y[0], i: D[0] },
      rows_independent: true,
      target_block_independent: true,
    };
    const p = this.predictor;
    if (!p.D.includes(p.target.i) || !p.Y.includes(p.target.j)) {
      p.target = { j: p.Y[0], i: p.D[0] };
    }
    this.touch();
  }

  setTarget(j: number, i: number): ValidationMessage | null {
    const edge = this.findModule(i, j);
    if (!edge || edge.status !== "parametrized") {
      return {
        rule: "target_parametrized",
        message: `target (${j},${i}) must be an existing parametrized edge`,
      };
    }
    if (!this.predictor) {
      this.setPredictorSets([i], [j]);
    }
    const p = this.predictor!;
    if (!p.D.includes(i)) p.D = [...p.D, i].sort((a, b) => a - b);
    if (!p.Y.includes(j)) p.Y = [...p.Y, j].sort((a, b) => a - b);
    p.target = { j, i };
    delete p.param_map;
    this.touch();
    return null;
  }

  get checkEnabled(): boolean {
    if (!this.predictor) return false;
    const t = this.predictor.target;
    const edge = this.findModule(t.i, t.j);
    return !!edge && edge.status === "parametrized";
  }

  /** Inline validation mirroring the service-side network rules. */
  validate(): ValidationMessage[] {
    const out: ValidationMessage[] = [];
    for (const e of this.modules) {
      if (e.from === e.to) {
        out.push({ rule: "G_hollow", message: `self module on w${e.from}` });
      }
      if (e.status !== "zero" && e.num && e.num[0] !== 0) {
        out.push({
          rule: "G_strictly_proper",
          message: `module w${e.from}->w${e.to} has a direct term`,
        });
      }
    }
    const n = this.nodes.length;
    for (const e of [...this.modules, ...this.hEntries]) {
      const refs = "from" in e ? [e.from, e.to] : [e.row, e.col];
      for (const r of refs) {
        if (r < 1 || r > n) {
          out.push({ rule: "node_ref", message: `dangling node ${r}` });
        }
      }
    }
    if (this.predictor) {
      const p = this.predictor;
      if (!p.D.includes(p.target.i) || !p.Y.includes(p.target.j)) {
        out.push({
          rule: "target_in_sets",
          message: "target must lie in D x Y",
        });
      }
      if (!this.checkEnabled) {
        out.push({
          rule: "target_parametrized",
          message: "target edge missing or not parametrized",
        });
      }
    }
    return out;
  }

  private invalidateParamMap(): void {
    if (this.predictor?.param_map) delete this.predictor.param_map;
  }

  private touch(): void {
    this.dirty = true;
    this.lastReport = null;
  }
}
