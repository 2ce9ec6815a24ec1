import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { describe, expect, it } from "vitest";

import { CanvasModel } from "../src/model.js";
import { FIVE_NODE, PRESETS, SIX_NODE, TWO_NODE } from "../src/presets.js";
import { canonical, NetworkDoc } from "../src/schema.js";

const NETWORKS = resolve(__dirname, "../../networks");

function shipped(name: string): NetworkDoc {
  return JSON.parse(readFileSync(resolve(NETWORKS, `${name}.json`), "utf-8"));
}

describe("presets", () => {
  it("match the shipped documents", () => {
    expect(canonical(TWO_NODE)).toBe(canonical(shipped("two_node")));
    expect(canonical(FIVE_NODE)).toBe(canonical(shipped("five_node")));
    expect(canonical(SIX_NODE)).toBe(canonical(shipped("six_node")));
  });
});

describe("round trip", () => {
  it("export of an imported preset reproduces the document", () => {
    for (const doc of Object.values(PRESETS)) {
      const model = CanvasModel.fromDocument(doc);
      expect(canonical(model.toDocument())).toBe(canonical(doc));
    }
  });

  it("export-import-export is a fixed point after edits", () => {
    const m = CanvasModel.fromDocument(SIX_NODE);
    m.toggleExcitation(3);
    m.addNode();
    m.addEdge(7, 1);
    const once = m.toDocument();
    const twice = CanvasModel.fromDocument(once).toDocument();
    expect(canonical(twice)).toBe(canonical(once));
  });
});

describe("edit actions", () => {
  it("adding and removing an edge updates the module list", () => {
    const m = CanvasModel.fromDocument(TWO_NODE);
    expect(m.addEdge(1, 1)).toBeNull(); // hollow network: no self loops
    const before = m.modules.length;
    m.addEdge(2, 1); // already exists
    expect(m.modules.length).toBe(before);
    m.removeEdge(2, 3 as number); // nonexistent: no-op
    expect(m.modules.length).toBe(before);
  });

  it("deleting the target edge clears the selection and disables checks", () => {
    const m = CanvasModel.fromDocument(SIX_NODE);
    expect(m.checkEnabled).toBe(true);
    const t = m.predictor!.target;
    m.removeEdge(t.i, t.j);
    expect(m.predictor).toBeNull();
    expect(m.checkEnabled).toBe(false);
  });

  it("toggling the target edge away from parametrized clears the target", () => {
    const m = CanvasModel.fromDocument(SIX_NODE);
    const t = m.predictor!.target;
    m.toggleStatus(t.i, t.j); // parametrized -> known
    expect(m.predictor).toBeNull();
  });

  it("status toggling cycles and validation flags direct terms", () => {
    const m = CanvasModel.fromDocument(TWO_NODE);
    const e = m.findModule(2, 1)!;
    expect(e.status).toBe("parametrized");
    m.toggleStatus(2, 1);
    expect(m.findModule(2, 1)!.status).toBe("known");
    m.findModule(2, 1)!.num = [0.5, 0.5];
    expect(m.validate().some((v) => v.rule === "G_strictly_proper")).toBe(true);
  });

  it("removing a node renumbers and drops dangling references", () => {
    const m = CanvasModel.fromDocument(SIX_NODE);
    m.removeNode(4);
    expect(m.nodes.map((n) => n.id)).toEqual([1, 2, 3, 4, 5]);
    expect(m.validate().filter((v) => v.rule === "node_ref")).toEqual([]);
    // the w6 -> w3 edge survives as (renumbered) 5 -> 3
    expect(m.findModule(5, 3)).toBeDefined();
  });

  it("target selection requires a parametrized edge", () => {
    const m = CanvasModel.fromDocument(SIX_NODE);
    const err = m.setTarget(4, 2); // there is no module w2 -> w4
    expect(err?.rule).toBe("target_parametrized");
    m.toggleStatus(2, 3); // w2 -> w3 becomes known
    expect(m.setTarget(3, 2)?.rule).toBe("target_parametrized");
    expect(m.setTarget(1, 2)).toBeNull();
  });

  it("edits mark the canvas dirty and structural edits drop the param map", () => {
    const m = CanvasModel.fromDocument(SIX_NODE);
    expect(m.dirty).toBe(false);
    expect(m.predictor!.param_map).toBeDefined();
    m.toggleExcitation(6);
    expect(m.dirty).toBe(true);
    expect(m.predictor!.param_map).toBeUndefined();
  });

  it("source toggles are involutive up to the re-derived param map", () => {
    const strip = (doc: NetworkDoc) => {
      const d = structuredClone(doc);
      if (d.predictor) delete d.predictor.param_map;
      return canonical(d);
    };
    const m = CanvasModel.fromDocument(SIX_NODE);
    const before = strip(m.toDocument());
    m.toggleNoise(6);
    m.toggleNoise(6);
    expect(strip(m.toDocument())).toBe(before);
    // the stale param map was intentionally dropped for the service to rebuild
    expect(m.predictor!.param_map).toBeUndefined();
  });
});
