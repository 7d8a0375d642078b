import init, { Experiment, dolp_curve, material_names } from "./pkg/polarndt_web.js";

const $ = (id) => document.getElementById(id);
const status = (msg) => { $("status").textContent = msg; };

let experiment = null;

function blit(canvas, rgba, w, h) {
  canvas.width = w;
  canvas.height = h;
  canvas.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(rgba), w, h), 0, 0);
}

function drawCurve() {
  const material = $("curve-material").value;
  const alpha = Number($("curve-alpha").value);
  const full = $("curve-model").value === "full";
  $("curve-alpha-val").textContent = alpha.toFixed(2);
  let ys;
  try {
    ys = dolp_curve(material, alpha, full);
  } catch (e) {
    $("curve-peak").textContent = String(e);
    return;
  }
  const c = $("curve");
  const g = c.getContext("2d");
  const pad = 40;
  const w = c.width - 2 * pad;
  const h = c.height - 2 * pad;
  const ymax = Math.max(...ys, 1e-6);
  g.clearRect(0, 0, c.width, c.height);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, w, h);
  g.fillStyle = "#444";
  g.font = "12px sans-serif";
  for (let d = 0; d <= 90; d += 15) {
    g.fillText(String(d), pad + (d / 89) * w - 6, pad + h + 16);
  }
  g.fillText(ymax.toPrecision(3), 2, pad + 4);
  g.fillText("0", pad - 14, pad + h);
  g.strokeStyle = "#c33";
  g.lineWidth = 2;
  g.beginPath();
  ys.forEach((y, i) => {
    const px = pad + (i / 89) * w;
    const py = pad + h - (y / ymax) * h;
    if (i === 0) g.moveTo(px, py); else g.lineTo(px, py);
  });
  g.stroke();
  let k = 0;
  ys.forEach((y, i) => { if (y > ys[k]) k = i; });
  $("curve-peak").textContent = `peak DoLP ${ys[k].toFixed(4)} at ${k}°`;
}

function showFrame() {
  if (!experiment) return;
  const i = Number($("exp-frame").value);
  const w = experiment.width();
  const h = experiment.height();
  $("exp-frame-val").textContent = String(i);
  blit($("frame-dolp"), experiment.frame_rgba("dolp", i), w, h);
  blit($("frame-int"), experiment.frame_rgba("intensity", i), w, h);
}

function render() {
  status("rendering…");
  setTimeout(() => {
    const t0 = performance.now();
    try {
      if (experiment) experiment.free();
      experiment = new Experiment(
        Number($("exp-angle").value),
        Number($("exp-sigma").value),
        Number($("exp-seed").value),
        Number($("exp-frames").value),
      );
    } catch (e) {
      experiment = null;
      $("det-run").disabled = true;
      status(String(e));
      return;
    }
    const w = experiment.width();
    const h = experiment.height();
    $("exp-frame").max = String(experiment.frame_count() - 1);
    $("exp-frame").value = "0";
    blit($("frame-mask"), experiment.mask_rgba(), w, h);
    $("mask-legend").textContent = experiment.region_names().join(" / ");
    $("det-run").disabled = false;
    showFrame();
    status(`rendered ${experiment.frame_count()} frames in ${(performance.now() - t0).toFixed(0)} ms; suggested FFT bins ${experiment.suggested_bins().join(", ")}`);
  }, 10);
}

function detect() {
  if (!experiment) return;
  const method = $("det-method").value;
  const index = Number($("det-index").value);
  const rows = [];
  for (const [origin, canvas, label] of [["dolp", "map-dolp", "map-dolp-label"], ["intensity", "map-int", "map-int-label"]]) {
    let m;
    try {
      m = experiment.detect(origin, method, index);
    } catch (e) {
      status(String(e));
      return;
    }
    blit($(canvas), m.rgba, experiment.width(), experiment.height());
    $(label).textContent = m.label;
    rows.push(`<tr><th>${origin}</th><td>${m.cnr.toFixed(3)}</td><td>${m.sharpness.toFixed(3)}</td></tr>`);
    m.free();
  }
  $("det-table").innerHTML = rows.join("");
}

async function main() {
  await init();
  for (const name of material_names()) {
    const o = document.createElement("option");
    o.value = o.textContent = name;
    $("curve-material").appendChild(o);
  }
  $("curve-material").value = "cfrp";
  for (const id of ["curve-material", "curve-alpha", "curve-model"]) $(id).addEventListener("input", drawCurve);
  $("exp-run").addEventListener("click", render);
  $("exp-frame").addEventListener("input", showFrame);
  $("det-run").addEventListener("click", detect);
  $("det-method").addEventListener("change", () => {
    if ($("det-method").value === "fft" && experiment) $("det-index").value = String(experiment.suggested_bins()[1]);
    else if ($("det-method").value === "pca") $("det-index").value = "2";
  });
  drawCurve();
  status("ready");
}

main();
