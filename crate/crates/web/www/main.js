import init, { grover_success_curve, qft_amplitudes, wiesner_forgery_stats } from "./pkg/qecon_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function guarded(out, fn) {
  try {
    fn();
  } catch (err) {
    $(out).textContent = `error: ${err}`;
  }
}

function plotBars(canvas, values) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const w = canvas.width / values.length;
  ctx.fillStyle = "#3a6ea5";
  values.forEach((v, i) => {
    const h = v * (canvas.height - 10);
    ctx.fillRect(i * w + 1, canvas.height - h, Math.max(w - 2, 1), h);
  });
}

function runGrover() {
  guarded("g-out", () => {
    const curve = grover_success_curve(num("g-n"), num("g-k"));
    plotBars($("g-plot"), Array.from(curve));
    $("g-out").textContent = Array.from(curve)
      .map((p, k) => `k=${k}  P=${p.toFixed(6)}`)
      .join("\n");
  });
}

function runQft() {
  guarded("q-out", () => {
    const amps = qft_amplitudes(num("q-n"), num("q-x"));
    const n = num("q-n");
    const rows = [];
    for (let j = 0; j < amps.length / 2; j++) {
      const re = amps[2 * j], im = amps[2 * j + 1];
      const mag = Math.hypot(re, im);
      const phase = Math.atan2(im, re) / (2 * Math.PI);
      rows.push(`|${j.toString(2).padStart(n, "0")}>  ${re.toFixed(4)} ${im >= 0 ? "+" : "-"} ${Math.abs(im).toFixed(4)}i   |a|=${mag.toFixed(4)} phase=${phase.toFixed(4)} turns`);
    }
    $("q-out").textContent = rows.join("\n");
  });
}

function runWiesner() {
  guarded("w-out", () => {
    const stats = JSON.parse(wiesner_forgery_stats(num("w-n"), num("w-t"), num("w-s")));
    const z = (stats.observed - stats.expected) / stats.sigma;
    $("w-out").textContent =
      `accepted ${stats.observed.toFixed(5)} of forgeries\n` +
      `(3/4)^n   ${stats.expected.toFixed(5)}\n` +
      `z-score   ${z.toFixed(2)}`;
  });
}

await init();
$("g-run").addEventListener("click", runGrover);
$("q-run").addEventListener("click", runQft);
$("w-run").addEventListener("click", runWiesner);
runGrover();
