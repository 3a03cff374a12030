import init, { moduli_diagram, cluster_decay, image_cloud } from "./pkg/sphere_blowup_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function status(msg) {
  $("status").textContent = msg;
}

// Maps data coordinates to canvas pixels with a fixed margin.
function frame(canvas, [x0, x1], [y0, y1]) {
  const m = 36;
  const w = canvas.width - 2 * m;
  const h = canvas.height - 2 * m;
  return {
    ctx: canvas.getContext("2d"),
    x: (v) => m + ((v - x0) / (x1 - x0)) * w,
    y: (v) => canvas.height - m - ((v - y0) / (y1 - y0)) * h,
    m, w, h, x0, x1, y0, y1,
  };
}

function axes(f, xlabel, ylabel, ticks = (a, b) => [a, (a + b) / 2, b], fmt = (v) => v.toFixed(1)) {
  const { ctx } = f;
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  ctx.strokeRect(f.m, f.m, f.w, f.h);
  for (const t of ticks(f.x0, f.x1)) ctx.fillText(fmt(t), f.x(t) - 10, f.y(f.y0) + 14);
  for (const t of ticks(f.y0, f.y1)) ctx.fillText(fmt(t), 2, f.y(t) + 4);
  ctx.fillText(xlabel, f.m + f.w / 2 - 10, ctx.canvas.height - 4);
  ctx.save();
  ctx.translate(10, f.m + f.h / 2 + 10);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
}

function dashed(f, pts) {
  const { ctx } = f;
  ctx.save();
  ctx.setLineDash([4, 4]);
  ctx.strokeStyle = "#c33";
  ctx.beginPath();
  pts.forEach(([a, b], i) => (i ? ctx.lineTo(f.x(a), f.y(b)) : ctx.moveTo(f.x(a), f.y(b))));
  ctx.stroke();
  ctx.restore();
}

function dots(f, xs, ys, color) {
  const { ctx } = f;
  ctx.fillStyle = color;
  for (let i = 0; i < xs.length; i++) ctx.fillRect(f.x(xs[i]) - 1, f.y(ys[i]) - 1, 2, 2);
}

function runModuli() {
  const [stage, chart] = $("md-stage").value.split(":");
  const data = moduli_diagram(stage, chart, num("md-count"), num("md-seed"));
  const xs = [], ys = [];
  for (let i = 0; i < data.length; i += 2) {
    xs.push(data[i]);
    ys.push(data[i + 1]);
  }
  const top = Math.max(3, ...ys.map(Math.ceil));
  const f = frame($("md-canvas"), [0, 3], [0, top]);
  axes(f, "|z1|", "|z2|");
  dashed(f, [[0, 0], [Math.min(3, top), Math.min(3, top)]]);
  dashed(f, [[0, 1], [3, 1]]);
  dots(f, xs, ys, "rgba(30, 80, 160, 0.45)");
}

function runCluster() {
  const phases = num("cd-phases");
  const tilts = num("cd-tilts");
  const series = [
    ["p-", "#1f5fa8"],
    ["p+", "#e07b00"],
  ];
  const extra = $("cd-point").value.trim();
  if (extra) series.push([extra, "#888"]);
  const curves = [];
  for (const [point, color] of series) {
    try {
      const d = cluster_decay(point, phases, tilts, 7);
      const pts = [];
      for (let i = 0; i < d.length; i += 2) if (Number.isFinite(d[i + 1]) && d[i + 1] > 0) pts.push([Math.log10(d[i]), Math.log10(d[i + 1])]);
      curves.push([pts, color]);
    } catch (e) {
      status(`${point}: ${e}`);
    }
  }
  const all = curves.flatMap(([p]) => p);
  const ylo = Math.floor(Math.min(...all.map((p) => p[1])));
  const yhi = Math.ceil(Math.max(...all.map((p) => p[1])));
  const f = frame($("cd-canvas"), [-6, -1], [ylo, yhi]);
  const decades = (a, b) => Array.from({ length: b - a + 1 }, (_, k) => a + k);
  axes(f, "log10 r", "log10 distance", decades, (v) => v.toFixed(0));
  for (const [pts, color] of curves) {
    const { ctx } = f;
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.beginPath();
    pts.forEach(([a, b], i) => (i ? ctx.lineTo(f.x(a), f.y(b)) : ctx.moveTo(f.x(a), f.y(b))));
    ctx.stroke();
    for (const [a, b] of pts) ctx.fillRect(f.x(a) - 2, f.y(b) - 2, 4, 4);
  }
}

function runImage() {
  const d = image_cloud(num("ic-count"), num("ic-seed"));
  const a1 = [[], []], a2 = [[], []];
  for (let i = 0; i < d.length; i += 4) {
    a1[0].push(d[i]); a1[1].push(d[i + 1]);
    a2[0].push(d[i + 2]); a2[1].push(d[i + 3]);
  }
  const circle = Array.from({ length: 129 }, (_, k) => [Math.cos((k * Math.PI) / 64), Math.sin((k * Math.PI) / 64)]);
  for (const [id, [xs, ys], name] of [["ic-a1", a1, "a1"], ["ic-a2", a2, "a2"]]) {
    const f = frame($(id), [-1.1, 1.1], [-1.1, 1.1]);
    axes(f, `Re ${name}`, `Im ${name}`);
    dashed(f, circle);
    dots(f, xs, ys, "rgba(20, 120, 60, 0.35)");
  }
}

function guarded(fn) {
  return () => {
    status("");
    try {
      fn();
    } catch (e) {
      status(String(e));
    }
  };
}

await init();
$("md-run").onclick = guarded(runModuli);
$("cd-run").onclick = guarded(runCluster);
$("ic-run").onclick = guarded(runImage);
guarded(runModuli)();
guarded(runCluster)();
guarded(runImage)();
