/** SVG rendering of the canvas model with analysis overlays. */

import { CanvasModel } from "./model.js";

export interface Overlays {
  witnessPaths: string[][]; // node/source labels per path
  cut: string[];
  wT: string[];
  xTstar: string[];
  excluded: string[]; // grayed sources (complement of the usable ones)
}

export const EMPTY_OVERLAYS: Overlays = {
  witnessPaths: [],
  cut: [],
  wT: [],
  xTstar: [],
  excluded: [],
};

const NS = "http://www.w3.org/2000/svg";
const STATUS_COLOR: Record<string, string> = {
  parametrized: "#2563eb",
  known: "#059669",
  zero: "#d1d5db",
};

export interface RenderCallbacks {
  onNodeClick(id: number, ev: MouseEvent): void;
  onEdgeClick(from: number, to: number, ev: MouseEvent): void;
}

export function render(
  svg: SVGSVGElement,
  model: CanvasModel,
  overlays: Overlays,
  cb: RenderCallbacks,
): void {
  svg.innerHTML = "";
  const W = svg.clientWidth || 720;
  const H = svg.clientHeight || 520;
  const pos = new Map(
    model.nodes.map((n) => [n.id, { x: n.x * W, y: n.y * H }]),
  );
  const label = (id: number) => model.nodes[id - 1]?.label ?? `w${id}`;
  const pathEdges = new Set<string>();
  for (const p of overlays.witnessPaths) {
    for (let k = 0; k + 1 < p.length; k++) {
      pathEdges.add(`${p[k]}->${p[k + 1]}`);
    }
  }

  // defs: arrowhead
  const defs = document.createElementNS(NS, "defs");
  defs.innerHTML =
    '<marker id="arrow" viewBox="0 0 10 10" refX="22" refY="5" ' +
    'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#64748b"/></marker>';
  svg.appendChild(defs);

  for (const e of model.modules) {
    const a = pos.get(e.from);
    const b = pos.get(e.to);
    if (!a || !b) continue;
    const line = document.createElementNS(NS, "path");
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const bend = model.findModule(e.to, e.from) ? 0.18 : 0.05;
    const mx = (a.x + b.x) / 2 - dy * bend;
    const my = (a.y + b.y) / 2 + dx * bend;
    line.setAttribute("d", `M ${a.x} ${a.y} Q ${mx} ${my} ${b.x} ${b.y}`);
    line.setAttribute("fill", "none");
    const onPath = pathEdges.has(`${label(e.from)}->${label(e.to)}`);
    const isTarget =
      model.predictor?.target.i === e.from &&
      model.predictor?.target.j === e.to;
    line.setAttribute(
      "stroke",
      onPath ? "#16a34a" : STATUS_COLOR[e.status] ?? "#94a3b8",
    );
    line.setAttribute("stroke-width", onPath ? "4" : isTarget ? "3.5" : "2");
    if (isTarget) line.setAttribute("stroke-dasharray", "7 3");
    line.setAttribute("marker-end", "url(#arrow)");
    line.addEventListener("click", (ev) => cb.onEdgeClick(e.from, e.to, ev));
    line.classList.add("edge");
    svg.appendChild(line);
  }

  for (const n of model.nodes) {
    const p = pos.get(n.id)!;
    const g = document.createElementNS(NS, "g");
    g.classList.add("node");
    const c = document.createElementNS(NS, "circle");
    c.setAttribute("cx", String(p.x));
    c.setAttribute("cy", String(p.y));
    c.setAttribute("r", "18");
    const inD = model.predictor?.D.includes(n.id);
    const inY = model.predictor?.Y.includes(n.id);
    c.setAttribute(
      "fill",
      overlays.cut.includes(n.label)
        ? "#fbbf24"
        : overlays.wT.includes(n.label)
          ? "#f1f5f9"
          : inD && inY
            ? "#c7d2fe"
            : inD
              ? "#bfdbfe"
              : inY
                ? "#ddd6fe"
                : "#f8fafc",
    );
    c.setAttribute("stroke", overlays.cut.includes(n.label) ? "#b45309" : "#475569");
    c.setAttribute("stroke-width", "2");
    g.appendChild(c);
    const t = document.createElementNS(NS, "text");
    t.setAttribute("x", String(p.x));
    t.setAttribute("y", String(p.y + 4));
    t.setAttribute("text-anchor", "middle");
    t.setAttribute("font-size", "12");
    t.textContent = n.label;
    g.appendChild(t);

    // source markers: excitation square, noise diamond
    const exc = model.excitations.find((e) => e.node === n.id);
    if (exc) {
      const rLabel = `r${exc.r_index}`;
      const sq = document.createElementNS(NS, "rect");
      sq.setAttribute("x", String(p.x + 14));
      sq.setAttribute("y", String(p.y - 30));
      sq.setAttribute("width", "12");
      sq.setAttribute("height", "12");
      const grayed = overlays.excluded.includes(rLabel);
      sq.setAttribute("fill", grayed ? "#cbd5e1" : "#fb7185");
      sq.appendChild(titleEl(`excitation ${rLabel}${grayed ? " (excluded)" : ""}`));
      g.appendChild(sq);
    }
    if (model.cov[n.id - 1]?.[n.id - 1] > 0) {
      const eLabel = `e${n.id}`;
      const di = document.createElementNS(NS, "path");
      const x0 = p.x - 24;
      const y0 = p.y - 24;
      di.setAttribute(
        "d",
        `M ${x0} ${y0 - 7} L ${x0 + 7} ${y0} L ${x0} ${y0 + 7} L ${x0 - 7} ${y0} Z`,
      );
      const grayed = overlays.excluded.includes(eLabel);
      di.setAttribute("fill", grayed ? "#cbd5e1" : "#a855f7");
      di.appendChild(titleEl(`noise ${eLabel}${grayed ? " (excluded)" : ""}`));
      g.appendChild(di);
    }
    g.addEventListener("click", (ev) => cb.onNodeClick(n.id, ev));
    svg.appendChild(g);
  }
}

function titleEl(text: string): SVGTitleElement {
  const t = document.createElementNS(NS, "title");
  t.textContent = text;
  return t;
}
