import init, { generate, analyze, flex, construction_names } from "./pkg/arrform_web.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function rational(s) {
  const [p, q] = String(s).split("/");
  return Number(p) / (q === undefined ? 1 : Number(q));
}

function show(value) {
  $("output").classList.remove("error");
  $("output").textContent = value;
}

function fail(e) {
  $("output").classList.add("error");
  $("output").textContent = String(e.message ?? e);
}

function parsed() {
  return JSON.parse($("input").value);
}

// Bounding box of a point list, padded and made square.
function box(points) {
  if (points.length === 0) return { x: -5, y: -5, size: 10 };
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const size = Math.max(x1 - x0, y1 - y0, 1) * 1.4;
  return { x: (x0 + x1) / 2 - size / 2, y: (y0 + y1) / 2 - size / 2, size };
}

function element(name, attrs) {
  const el = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

// Clips the affine line a x + b y + c = 0 to the square and draws it.
function drawLine(g, [a, b, c], bx) {
  const [x0, x1, y0, y1] = [bx.x, bx.x + bx.size, bx.y, bx.y + bx.size];
  const hits = [];
  if (Math.abs(b) > 1e-12) {
    for (const x of [x0, x1]) hits.push([x, -(a * x + c) / b]);
  }
  if (Math.abs(a) > 1e-12) {
    for (const y of [y0, y1]) hits.push([-(b * y + c) / a, y]);
  }
  const inside = hits.filter(([x, y]) => x >= x0 - 1e-9 && x <= x1 + 1e-9 && y >= y0 - 1e-9 && y <= y1 + 1e-9);
  if (inside.length < 2) return;
  const [p, q] = inside;
  g.appendChild(element("line", { x1: p[0], y1: p[1], x2: q[0], y2: q[1], class: "line", "vector-effect": "non-scaling-stroke" }));
}

function draw(report, redrawing) {
  const svg = $("view");
  svg.replaceChildren();
  const data = parsed();
  const multiple = (report.multiple_points ?? [])
    .filter((m) => Math.abs(m.point[2]) > 1e-12)
    .map((m) => [m.point[0] / m.point[2], m.point[1] / m.point[2]]);
  const joints = data.vertices ? data.vertices.map(([x, y]) => [rational(x), rational(y)]) : [];
  const bx = box(joints.length ? joints.concat(redrawing ?? []) : multiple);
  svg.setAttribute("viewBox", `${bx.x} ${-bx.y - bx.size} ${bx.size} ${bx.size}`);
  const g = element("g", { transform: "scale(1,-1)" });
  svg.appendChild(g);
  const r = bx.size / 120;
  if (data.vertices) {
    for (const [i, j] of data.edges) {
      g.appendChild(element("line", { x1: joints[i][0], y1: joints[i][1], x2: joints[j][0], y2: joints[j][1], class: "bar", "vector-effect": "non-scaling-stroke" }));
    }
    if (redrawing) {
      for (const [i, j] of data.edges) {
        g.appendChild(element("line", { x1: redrawing[i][0], y1: redrawing[i][1], x2: redrawing[j][0], y2: redrawing[j][1], class: "redrawn", "vector-effect": "non-scaling-stroke" }));
      }
    }
    for (const [x, y] of joints) g.appendChild(element("circle", { cx: x, cy: y, r, class: "joint" }));
  } else {
    for (const form of report.forms) drawLine(g, form, bx);
  }
  for (const [x, y] of multiple) g.appendChild(element("circle", { cx: x, cy: y, r: r * 1.3, class: "multiple" }));
}

function runAnalyze() {
  try {
    const report = JSON.parse(analyze($("input").value));
    const lines = [
      `lines: ${report.lines}`,
      `formal: ${report.formal} (nontrivial weak P-Reps: ${report.wprep_nontrivial})`,
    ];
    if (report.motion_nontrivial !== undefined) {
      lines.push(`nontrivial infinitesimal motions: ${report.motion_nontrivial}`);
      lines.push(`generic matroid: ${report.generic_matroid}`);
    }
    if (report.betti) {
      lines.push("", "Betti table of D0:", report.betti.text);
      lines.push(`classification: ${report.betti.classification.kind}`);
    }
    show(lines.join("\n"));
    draw(report, null);
  } catch (e) {
    fail(e);
  }
}

function runFlex() {
  try {
    const out = JSON.parse(flex($("input").value));
    const report = JSON.parse(analyze($("input").value));
    if (out.rigid) {
      show("infinitesimally rigid: no nontrivial motion");
      draw(report, null);
    } else {
      const v = out.velocities.map(([a, b]) => `(${a.toFixed(3)}, ${b.toFixed(3)})`).join(" ");
      show(`nontrivial motion velocities:\n${v}\nredrawing parallel to every bar: ${out.parallel}`);
      draw(report, out.redrawing);
    }
  } catch (e) {
    fail(e);
  }
}

function load() {
  try {
    $("input").value = generate($("name").value, $("params").value);
    runAnalyze();
  } catch (e) {
    fail(e);
  }
}

await init();
for (const name of construction_names().split(",")) {
  $("name").appendChild(new Option(name, name));
}
$("name").value = "ziegler_conic";
$("load").onclick = load;
$("analyze").onclick = runAnalyze;
$("flex").onclick = runFlex;
load();
