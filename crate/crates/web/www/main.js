import init, { rank, hull, certify_and_lift } from "./pkg/troprank_web.js";

const $ = (id) => document.getElementById(id);

function show(el, res, fmt) {
  el.classList.toggle("error", "error" in res);
  el.textContent = "error" in res ? res.error : fmt(res);
}

function fmtRank(r) {
  let s = `tropical rank ${r.rank}\n`;
  s += `nonsingular submatrix: rows ${r.witness_rows} columns ${r.witness_cols}\n`;
  if (r.det) {
    const d = r.det;
    s += `\ndeterminant ${d.value}, ${d.singular ? "singular" : "nonsingular"}\n`;
    if (d.enumerated) {
      s += `optimal permutations (${d.optimal_count}):\n`;
      for (const p of d.optimal_permutations) s += `  ${p.join(" ")}\n`;
    } else if (d.multiple) {
      s += "at least two optimal permutations\n";
    }
  }
  return s;
}

function fmtHull(h) {
  let s = `f-vector (${h.f_vector.join(", ")})\n`;
  s += `type decomposition (${h.type_f_vector.join(", ")})\n`;
  for (const c of h.cells) {
    s += `dim ${c.dim}: ${c.vertices.map((v) => "(" + v.join(", ") + ")").join(" ")}\n`;
  }
  return s;
}

// polygon vertices come unordered; sort them around the centroid
function around(pts) {
  const cx = pts.reduce((a, p) => a + p[0], 0) / pts.length;
  const cy = pts.reduce((a, p) => a + p[1], 0) / pts.length;
  return [...pts].sort((p, q) => Math.atan2(p[1] - cy, p[0] - cx) - Math.atan2(q[1] - cy, q[0] - cx));
}

function draw(svg, plane) {
  svg.innerHTML = "";
  if (!plane) return;
  const all = plane.points.concat(plane.cells.flat());
  const xs = all.map((p) => p[0]), ys = all.map((p) => p[1]);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const size = Math.max(x1 - x0, y1 - y0, 1);
  const W = svg.width.baseVal.value, pad = 30;
  const k = (W - 2 * pad) / size;
  const X = (p) => pad + (p[0] - x0) * k;
  const Y = (p) => W - pad - (p[1] - y0) * k;
  const ns = "http://www.w3.org/2000/svg";
  const add = (tag, attrs) => {
    const e = document.createElementNS(ns, tag);
    for (const [a, v] of Object.entries(attrs)) e.setAttribute(a, v);
    svg.appendChild(e);
  };
  for (const c of plane.cells) {
    if (c.length >= 3) {
      add("polygon", { points: around(c).map((p) => `${X(p)},${Y(p)}`).join(" "), fill: "#cde", stroke: "none" });
    }
  }
  for (const c of plane.cells) {
    if (c.length === 2) {
      add("line", { x1: X(c[0]), y1: Y(c[0]), x2: X(c[1]), y2: Y(c[1]), stroke: "#235", "stroke-width": 2 });
    }
  }
  for (const c of plane.cells) {
    if (c.length === 1) add("circle", { cx: X(c[0]), cy: Y(c[0]), r: 3, fill: "#235" });
  }
  for (const p of plane.points) add("circle", { cx: X(p), cy: Y(p), r: 6, fill: "none", stroke: "#c30", "stroke-width": 2 });
}

function fmtLift(r) {
  return `stable pair H${r.stable_pair[0]}, H${r.stable_pair[1]}\n` +
    `rank over Q(t): ${r.rank_over_k}\n\ncertificate\n${r.certificate}\nlift, exponents in multiples of 1/${r.scale}\n${r.lift}`;
}

await init();

$("rank-go").onclick = () => show($("rank-out"), JSON.parse(rank($("rank-in").value)), fmtRank);
$("hull-go").onclick = () => {
  const h = JSON.parse(hull($("hull-in").value));
  show($("hull-out"), h, fmtHull);
  draw($("hull-svg"), h.error ? null : h.plane);
};
$("lift-go").onclick = () => {
  $("lift-out").textContent = "working...";
  // let the message paint before the blocking call
  setTimeout(() => {
    const seed = Math.max(0, parseInt($("lift-seed").value, 10) || 0);
    show($("lift-out"), JSON.parse(certify_and_lift($("lift-in").value, seed)), fmtLift);
  }, 0);
};
