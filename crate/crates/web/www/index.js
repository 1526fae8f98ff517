// Expects the wasm-pack output (`--target web`) in ./pkg.
import init, { compileFormula, checkMember, learnFormula } from "./pkg/hyperbpa_web.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function el(name, attrs, text) {
  const node = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

// States on a circle, edges as straight lines or self-loops.
function draw(automaton) {
  const n = automaton.states;
  const r = Math.max(60, 40 * n);
  const size = 2 * r + 120;
  const svg = el("svg", { width: size, height: size });
  const at = (q) => {
    const t = (2 * Math.PI * q) / n - Math.PI / 2;
    return [size / 2 + r * Math.cos(t), size / 2 + r * Math.sin(t)];
  };
  for (const e of automaton.edges) {
    const [x1, y1] = at(e.from);
    const [x2, y2] = at(e.to);
    const label = e.all ? "*" : e.labels.join(" ");
    if (e.from === e.to) {
      svg.append(el("circle", { cx: x1, cy: y1 - 26, r: 12, fill: "none", stroke: "#555" }));
      svg.append(el("text", { x: x1 - 20, y: y1 - 44 }, label));
    } else {
      svg.append(el("line", { x1, y1, x2, y2, stroke: "#555" }));
      svg.append(el("circle", { cx: x1 + 0.8 * (x2 - x1), cy: y1 + 0.8 * (y2 - y1), r: 3, fill: "#555" }));
      svg.append(el("text", { x: (x1 + x2) / 2 + 4, y: (y1 + y2) / 2 - 4 }, label));
    }
  }
  for (let q = 0; q < n; q++) {
    const [x, y] = at(q);
    const accepting = automaton.accepting.includes(q);
    svg.append(el("circle", { cx: x, cy: y, r: 16, fill: q === automaton.initial ? "#def" : "#fff", stroke: "#000" }));
    if (accepting) svg.append(el("circle", { cx: x, cy: y, r: 12, fill: "none", stroke: "#000" }));
    svg.append(el("text", { x: x - 4, y: y + 4 }, String(q)));
  }
  return svg;
}

function show(nodes) {
  $("out").replaceChildren(...nodes);
}

function failure(result) {
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = result.error;
  return p;
}

function block(title, automaton) {
  const div = document.createElement("div");
  div.className = "round";
  const h = document.createElement("h3");
  h.textContent = title;
  const pre = document.createElement("pre");
  pre.textContent = automaton.text;
  div.append(h, draw(automaton), pre);
  return div;
}

await init();

$("compile").onclick = () => {
  const res = JSON.parse(compileFormula($("formula").value));
  show(res.ok ? [block(`${res.automaton.states} states, arity ${res.automaton.arity}`, res.automaton)] : [failure(res)]);
};

$("learn").onclick = () => {
  const res = JSON.parse(learnFormula($("formula").value, 200));
  if (!res.ok) return show([failure(res)]);
  const rounds = res.rounds.map((r, i) => block(`round ${i + 1}: arity ${r.arity}, ${r.rows} rows, ${r.outcome}`, r.automaton));
  const summary = document.createElement("p");
  summary.textContent = `${res.membership_queries} membership and ${res.equivalence_queries} equivalence queries`;
  show([summary, ...rounds]);
};

$("member").onclick = () => {
  const res = JSON.parse(checkMember($("formula").value, $("traces").value));
  $("verdict").textContent = res.ok ? (res.bad_prefix ? "bad prefix" : "not a bad prefix") : res.error;
};
