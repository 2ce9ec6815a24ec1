/** Application wiring: editor toolbar, what-if panel, overlay plumbing. */

import { ApiClient } from "./api.js";
import { CanvasModel } from "./model.js";
import { PRESETS } from "./presets.js";
import { EMPTY_OVERLAYS, Overlays, render } from "./render.js";
import { canonical, NetworkDoc } from "./schema.js";

type Mode = "select" | "edge" | "D" | "Y" | "target";

const state = {
  model: CanvasModel.fromDocument(PRESETS["six-node"]),
  overlays: { ...EMPTY_OVERLAYS } as Overlays,
  mode: "select" as Mode,
  pendingEdgeFrom: null as number | null,
  pendingTargetOut: null as number | null,
  busy: false,
};

const api = new ApiClient(
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8321",
);

const $ = (id: string) => document.getElementById(id)!;
const svg = () => $("canvas") as unknown as SVGSVGElement;

function setBadge(text: string, cls: string) {
  const b = $("verdict");
  b.textContent = text;
  b.className = `badge ${cls}`;
}

function message(text: string) {
  $("messages").textContent = text;
}

function redraw() {
  render(svg(), state.model, state.overlays, {
    onNodeClick: nodeClicked,
    onEdgeClick: edgeClicked,
  });
  const problems = state.model.validate();
  message(problems.map((p) => p.message).join("; "));
  ($("check") as HTMLButtonElement).disabled =
    !state.model.checkEnabled || state.busy;
  const p = state.model.predictor;
  $("predictor").textContent = p
    ? `D = {${p.D.map((d) => "w" + d).join(", ")}}  Y = {${p.Y
        .map((y) => "w" + y)
        .join(", ")}}  target G(${p.target.j},${p.target.i})`
    : "no predictor selected";
  if (state.model.dirty) setBadge("edited - recheck", "neutral");
}

function nodeClicked(id: number, ev: MouseEvent) {
  const m = state.model;
  if (state.mode === "edge") {
    if (state.pendingEdgeFrom === null) {
      state.pendingEdgeFrom = id;
      message(`edge from w${id}: click the destination node`);
      return;
    }
    m.addEdge(state.pendingEdgeFrom, id);
    state.pendingEdgeFrom = null;
  } else if (state.mode === "D" || state.mode === "Y") {
    const p = m.predictor ?? { D: [], Y: [] };
    const set = new Set(state.mode === "D" ? p.D : p.Y);
    set.has(id) ? set.delete(id) : set.add(id);
    const D = state.mode === "D" ? [...set] : (m.predictor?.D ?? []);
    const Y = state.mode === "Y" ? [...set] : (m.predictor?.Y ?? []);
    if (D.length && Y.length) m.setPredictorSets(D, Y);
  } else if (state.mode === "target") {
    if (state.pendingTargetOut === null) {
      state.pendingTargetOut = id;
      message(`target output w${id}: now click the input node`);
      return;
    }
    const err = m.setTarget(state.pendingTargetOut, id);
    if (err) message(err.message);
    state.pendingTargetOut = null;
  } else if (ev.shiftKey) {
    m.toggleExcitation(id);
  } else if (ev.altKey) {
    m.toggleNoise(id);
  }
  state.overlays = { ...EMPTY_OVERLAYS };
  redraw();
}

function edgeClicked(from: number, to: number, ev: MouseEvent) {
  if (ev.shiftKey) {
    state.model.removeEdge(from, to);
  } else {
    state.model.toggleStatus(from, to);
  }
  state.overlays = { ...EMPTY_OVERLAYS };
  redraw();
}

/** Re-run the service checks and decorate the canvas with the evidence. */
export async function runCheck(): Promise<void> {
  const m = state.model;
  if (!m.checkEnabled || state.busy) return;
  state.busy = true;
  setBadge("checking...", "neutral");
  try {
    const doc = m.toDocument();
    const [report, sets] = await Promise.all([
      api.check(doc, { mode: "generic" }),
      api.sets(doc),
    ]);
    m.lastReport = report;
    m.dirty = false;
    const verdict = report.verdicts.generic;
    const bundle = sets.sets.sets;
    const win = verdict.evidence.winning;
    const usable = new Set([
      ...bundle.e_perp_Y.members,
      ...bundle.u_perp_j.members,
    ]);
    const allSources = [
      ...m.excitations.map((e) => `r${e.r_index}`),
      ...m.nodes.filter((n) => m.cov[n.id - 1][n.id - 1] > 0).map((n) => `e${n.id}`),
    ];
    state.overlays = {
      witnessPaths: win ? win.witness_paths : [],
      cut: bundle.D_c.members,
      wT: bundle.w_T.members,
      xTstar: bundle.x_Tstar.members,
      excluded: allSources.filter((s) => !usable.has(s)),
    };
    if (verdict.result === "Satisfied") setBadge("Satisfied", "ok");
    else if (verdict.result === "NotSatisfied") setBadge("NotSatisfied", "bad");
    else setBadge("Inconclusive", "warn");
  } catch (err) {
    setBadge("service error", "warn");
    message(JSON.stringify(err));
  } finally {
    state.busy = false;
    redraw();
  }
}

function exportDocument() {
  const text = canonical(state.model.toDocument());
  const blob = new Blob([text + "\n"], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "network.json";
  a.click();
}

async function importDocument(file: File) {
  const doc = JSON.parse(await file.text()) as NetworkDoc;
  state.model = CanvasModel.fromDocument(doc);
  state.overlays = { ...EMPTY_OVERLAYS };
  setBadge("imported", "neutral");
  redraw();
}

function wire() {
  const presetSel = $("preset") as HTMLSelectElement;
  for (const name of Object.keys(PRESETS)) {
    const o = document.createElement("option");
    o.value = name;
    o.textContent = name;
    presetSel.appendChild(o);
  }
  presetSel.value = "six-node";
  presetSel.addEventListener("change", () => {
    state.model = CanvasModel.fromDocument(PRESETS[presetSel.value]);
    state.overlays = { ...EMPTY_OVERLAYS };
    setBadge("preset loaded", "neutral");
    redraw();
  });
  for (const mode of ["select", "edge", "D", "Y", "target"] as Mode[]) {
    $(`mode-${mode}`).addEventListener("click", () => {
      state.mode = mode;
      state.pendingEdgeFrom = null;
      state.pendingTargetOut = null;
      document
        .querySelectorAll(".modebtn")
        .forEach((b) => b.classList.remove("active"));
      $(`mode-${mode}`).classList.add("active");
    });
  }
  $("add-node").addEventListener("click", () => {
    state.model.addNode();
    redraw();
  });
  $("check").addEventListener("click", () => void runCheck());
  $("export").addEventListener("click", exportDocument);
  ($("import") as HTMLInputElement).addEventListener("change", (ev) => {
    const f = (ev.target as HTMLInputElement).files?.[0];
    if (f) void importDocument(f);
  });
  redraw();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  wire();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wire);
}
