import init, {
  buildMatrix,
  recurrencePlot,
  scoreLexicon,
  sampleText,
  sampleRules,
  sampleDictionary,
} from "./pkg/bwlf_web.js";

const $ = (id) => document.getElementById(id);
const MAX_TABLE_ROWS = 500;

let lastCsv = "";
let lastPlot = null;

function showError(err) {
  $("error").textContent = err ? String(err) : "";
}

function renderMatrix() {
  const view = JSON.parse(buildMatrix($("text").value, $("rules").value));
  lastCsv = view.csv;
  const recs = view.records;
  const last = recs[recs.length - 1];
  $("matrix-summary").textContent =
    `${recs.length} words, ${last ? last.canto : 0} cantos, ${last ? last.line : 0} lines, ` +
    `${view.spans.length} speech spans, ${recs.filter((r) => r.eos).length} sentence ends`;
  $("matrix-warnings").textContent = view.warnings.map((w) => "warning: " + w).join("\n");

  const head = "<tr><th>#</th><th>canto</th><th>line</th><th>word</th><th>charnum</th><th>speech</th><th>eos</th></tr>";
  const rows = recs.slice(0, MAX_TABLE_ROWS).map((r, i) => {
    const cls = [r.speech ? "speech" : "", r.eos ? "eos" : ""].join(" ");
    const word = r.word.replace(/&/g, "&amp;").replace(/</g, "&lt;");
    return `<tr class="${cls}"><td>${i + 1}</td><td>${r.canto}</td><td>${r.line}</td>` +
      `<td class="word">${word}</td><td>${r.charnum}</td><td>${r.speech}</td><td>${r.eos}</td></tr>`;
  });
  if (recs.length > MAX_TABLE_ROWS) {
    rows.push(`<tr><td colspan="7">… ${recs.length - MAX_TABLE_ROWS} more rows in the CSV</td></tr>`);
  }
  $("matrix").innerHTML = head + rows.join("");
}

function renderRecurrence() {
  const column = $("column").value || "word";
  const lmin = Math.max(2, parseInt($("lmin").value, 10) || 2);
  const view = JSON.parse(
    recurrencePlot($("text").value, $("rules").value, $("dict").value, column, lmin),
  );
  lastPlot = view;

  const select = $("column");
  if (select.options.length !== view.columns.length) {
    select.innerHTML = view.columns.map((c) => `<option>${c}</option>`).join("");
    select.value = column;
  }

  const m = view.metrics;
  $("metrics").innerHTML =
    `<span>n = ${view.n}</span><span>RR = ${m.rr.toFixed(4)}</span>` +
    `<span>DET = ${m.det.toFixed(4)}</span><span>maxline = ${m.maxline}</span>` +
    `<span>meanline = ${m.meanline.toFixed(3)}</span>`;

  const startInput = $("win-start");
  const size = Math.min(parseInt($("win-size").value, 10), view.n);
  startInput.max = Math.max(0, view.n - size);
  const start = Math.min(parseInt(startInput.value, 10), view.n - size);
  $("win-label").textContent = `words ${start + 1}–${start + size}`;
  drawPlot(view.labels, start, size);
}

function drawPlot(labels, start, size) {
  const canvas = $("rp");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(size, size);
  for (let i = 0; i < size; i++) {
    for (let j = 0; j < size; j++) {
      const on = labels[start + i] === labels[start + j];
      const diag = i === j;
      const p = ((size - 1 - i) * size + j) * 4; // row 0 at the bottom
      const v = on ? (diag ? 150 : 20) : 255;
      img.data[p] = v;
      img.data[p + 1] = v;
      img.data[p + 2] = on && !diag ? 90 : v;
      img.data[p + 3] = 255;
    }
  }
  canvas.width = size;
  canvas.height = size;
  canvas.style.width = canvas.style.height = "600px";
  ctx.putImageData(img, 0, 0);
  canvas.dataset.start = start;
  canvas.dataset.size = size;
}

function hoverPlot(ev) {
  if (!lastPlot) return;
  const canvas = $("rp");
  const size = +canvas.dataset.size;
  const start = +canvas.dataset.start;
  const rect = canvas.getBoundingClientRect();
  const j = Math.floor(((ev.clientX - rect.left) / rect.width) * size);
  const i = size - 1 - Math.floor(((ev.clientY - rect.top) / rect.height) * size);
  if (i < 0 || j < 0 || i >= size || j >= size) return;
  const a = start + i;
  const b = start + j;
  $("rp-hover").textContent =
    `(${a + 1}, ${b + 1}): "${lastPlot.values[a]}" vs "${lastPlot.values[b]}"` +
    (lastPlot.labels[a] === lastPlot.labels[b] ? " recurrent" : "");
}

function renderLexicon() {
  const view = JSON.parse(scoreLexicon($("text").value, $("rules").value, $("dict").value));
  const max = Math.max(1, ...view.totals, view.dic_total);
  const bar = (name, pct) =>
    `<div class="bar"><span class="name">${name}</span>` +
    `<div class="fill" style="width:${(pct / max) * 400}px"></div><span>${pct.toFixed(1)}%</span></div>`;
  $("lex-bars").innerHTML =
    view.categories.map((c, k) => bar(c, view.totals[k])).join("") + bar("Dic (any)", view.dic_total);

  const canvas = $("lex-strip");
  const rows = view.categories.length || 1;
  const cols = view.words.length || 1;
  canvas.width = cols;
  canvas.height = rows;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(cols, rows);
  view.words.forEach((w, x) => {
    w.scores.forEach((s, y) => {
      const p = (y * cols + x) * 4;
      const v = s > 0 ? 40 : 245;
      img.data[p] = v;
      img.data[p + 1] = v;
      img.data[p + 2] = s > 0 ? 140 : v;
      img.data[p + 3] = 255;
    });
  });
  ctx.putImageData(img, 0, 0);
}

function refresh() {
  try {
    showError(null);
    renderMatrix();
    renderRecurrence();
    renderLexicon();
  } catch (err) {
    showError(err);
  }
}

function debounce(fn, ms) {
  let t;
  return () => {
    clearTimeout(t);
    t = setTimeout(fn, ms);
  };
}

async function main() {
  await init();
  $("text").value = sampleText();
  $("rules").value = sampleRules();
  $("dict").value = sampleDictionary();

  const later = debounce(refresh, 250);
  for (const id of ["text", "rules", "dict"]) $(id).addEventListener("input", later);
  for (const id of ["column", "lmin", "win-start", "win-size"]) {
    $(id).addEventListener("input", () => {
      try {
        showError(null);
        renderRecurrence();
      } catch (err) {
        showError(err);
      }
    });
  }
  $("rp").addEventListener("mousemove", hoverPlot);
  $("download").addEventListener("click", () => {
    const blob = new Blob([lastCsv], { type: "text/csv" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "matrix.csv";
    a.click();
    URL.revokeObjectURL(a.href);
  });
  refresh();
}

main();
