// Demo wiring: three panels backed by the wasm exports.
// Build the module first:  wasm-pack build crates/wasm --target web
// then serve the repo root and open crates/wasm/www/index.html.

import init, { poincare_record, trace_json, xray_json } from "../pkg/wallcross_wasm.js";

const $ = (id) => document.getElementById(id);

function drawBetti(r) {
  const rec = JSON.parse(poincare_record(r));
  $("betti-r-label").textContent = `r = ${rec.r}`;
  $("betti-poly").textContent = `P_t = ${rec.poincare}`;
  $("betti-stats").textContent =
    `Euler characteristic ${rec.euler} · real dimension ${rec.dim} · ` +
    `${rec.betti.length} even Betti numbers (palindromic, unimodal)`;

  const canvas = $("betti-chart");
  const ctx = canvas.getContext("2d");
  const { width: W, height: H } = canvas;
  ctx.clearRect(0, 0, W, H);
  const values = rec.betti_f64;
  const max = Math.max(...values);
  const pad = 28;
  const bw = (W - 2 * pad) / values.length;
  ctx.fillStyle = "#2563eb";
  values.forEach((v, k) => {
    const h = (H - 2 * pad) * (v / max);
    ctx.fillRect(pad + k * bw + 1, H - pad - h, Math.max(bw - 2, 1), h);
  });
  ctx.fillStyle = "#5b6575";
  ctx.font = "11px system-ui";
  ctx.fillText("b_0", pad, H - 8);
  ctx.textAlign = "right";
  ctx.fillText(`b_${rec.dim}`, W - pad, H - 8);
  ctx.textAlign = "left";
  ctx.fillText(`max = ${rec.betti[Math.floor(values.length / 2)]}`, pad, 16);
}

function drawTrace() {
  const r = Number($("trace-r").value);
  const kind = $("trace-kind").value;
  const seed = Number($("trace-seed").value) >>> 0;
  let data;
  try {
    data = JSON.parse(trace_json(r, kind, seed));
  } catch (e) {
    $("trace-out").innerHTML = `<p class="error">${e}</p>`;
    return;
  }
  const rows = data.steps
    .map(
      (s, i) => `<tr><td>${i + 1}</td><td>${s.wall_fixed_signs}</td><td>${s.wall_dim}</td>` +
        `<td>(${s.b}, ${s.f})</td><td>${s.factor}</td><td>${s.running}</td></tr>`
    )
    .join("");
  $("trace-out").innerHTML =
    `<table><thead><tr><th>#</th><th>wall</th><th>dim</th><th>(b, f)</th>` +
    `<th>C(b,f)</th><th>running value</th></tr></thead><tbody>${rows}</tbody></table>` +
    `<p class="stats">Every step enters from outside the cube; walls are the ` +
    `pattern over {+, −, *} with * marking free coordinates. ` +
    `Final value: <b>${data.final}</b></p>`;
}

function project(coords) {
  // r=1: line; r=2: plain; r=3: isometric; r=4: project first three axes
  const [x = 0, y = 0, z = 0] = coords;
  if (coords.length <= 2) return [x, y];
  return [x + 0.45 * z, y - 0.32 * z];
}

function drawXray() {
  const r = Number($("xray-r").value);
  let data;
  try {
    data = JSON.parse(xray_json(r));
  } catch (e) {
    $("xray-summary").textContent = "";
    $("xray-walls").innerHTML = `<p class="error">${e}</p>`;
    return;
  }
  $("xray-summary").textContent =
    `${data.face_count} faces · ${data.stratum_count} strata · ` +
    `${data.fixed_point_count} fixed points · weights pairwise independent: ` +
    `${data.pairwise_independent}`;

  const canvas = $("xray-canvas");
  const ctx = canvas.getContext("2d");
  const { width: W, height: H } = canvas;
  ctx.clearRect(0, 0, W, H);
  const scale = Math.min(W, H) * 0.55;
  const cx = W / 2, cy = H / 2;
  const toScreen = (coords) => {
    const [px, py] = project(coords);
    return [cx + px * scale, cy - py * scale];
  };

  // interior walls first (translucent), then cube edges, then vertices
  for (const wall of data.walls) {
    if (wall.boundary) continue;
    const pts = wall.vertices.map(toScreen);
    // order polygon vertices around their centroid
    const mx = pts.reduce((a, p) => a + p[0], 0) / pts.length;
    const my = pts.reduce((a, p) => a + p[1], 0) / pts.length;
    pts.sort((p, q) => Math.atan2(p[1] - my, p[0] - mx) - Math.atan2(q[1] - my, q[0] - mx));
    ctx.beginPath();
    pts.forEach(([px, py], i) => (i ? ctx.lineTo(px, py) : ctx.moveTo(px, py)));
    ctx.closePath();
    ctx.fillStyle = wall.balanced ? "rgba(21,128,61,0.12)" : "rgba(180,83,9,0.18)";
    ctx.strokeStyle = wall.balanced ? "#15803d" : "#b45309";
    ctx.fill();
    ctx.stroke();
  }

  // cube edges: vertex pairs differing in one coordinate
  ctx.strokeStyle = "#9aa3b2";
  for (const u of data.vertices) {
    for (const v of data.vertices) {
      if (u.column < v.column) {
        const diff = u.coords.filter((c, i) => c !== v.coords[i]).length;
        if (diff === 1) {
          const [ax, ay] = toScreen(u.coords);
          const [bx, by] = toScreen(v.coords);
          ctx.beginPath();
          ctx.moveTo(ax, ay);
          ctx.lineTo(bx, by);
          ctx.stroke();
        }
      }
    }
  }
  ctx.fillStyle = "#1c2330";
  for (const v of data.vertices) {
    const [px, py] = toScreen(v.coords);
    ctx.beginPath();
    ctx.arc(px, py, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }

  const interior = data.walls.filter((w) => !w.boundary);
  if (!interior.length) {
    $("xray-walls").innerHTML =
      `<p class="stats">No interior codimension-1 walls at this rank.</p>`;
    return;
  }
  if (interior.length > 20) {
    // aggregate by (b, f) signature for large ranks
    const sig = new Map();
    for (const w of interior) {
      const key = `(${Math.min(w.b, w.f)}, ${Math.max(w.b, w.f)})`;
      sig.set(key, (sig.get(key) || 0) + 1);
    }
    const rows = [...sig.entries()]
      .sort()
      .map(([key, n]) => {
        const balanced = key.split(",")[0].slice(1).trim() === key.split(",")[1].slice(0, -1).trim();
        const badge = balanced
          ? `<span class="ok">balanced</span>`
          : `<span class="warn">jump</span>`;
        return `<tr><td>${key}</td><td>${n}</td><td>${badge}</td></tr>`;
      })
      .join("");
    $("xray-walls").innerHTML =
      `<table><thead><tr><th>(b, f) up to orientation</th><th>walls</th><th>effect</th></tr></thead>` +
      `<tbody>${rows}</tbody></table>`;
    return;
  }
  const rows = interior
    .map((w) => {
      const badge = w.balanced
        ? `<span class="ok">balanced</span>`
        : `<span class="warn">jump</span>`;
      return `<tr><td>{${w.columns.join(", ")}}</td><td>(${w.b}, ${w.f})</td><td>${badge}</td></tr>`;
    })
    .join("");
  $("xray-walls").innerHTML =
    `<table><thead><tr><th>interior wall (columns)</th><th>(b, f)</th><th>effect</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`;
}

await init();
$("betti-r").addEventListener("input", () => drawBetti(Number($("betti-r").value)));
for (const id of ["trace-r", "trace-kind", "trace-seed"]) {
  $(id).addEventListener("input", drawTrace);
}
$("xray-r").addEventListener("input", drawXray);
drawBetti(4);
drawTrace();
drawXray();
