import init, { progression, enumerate, translate } from "./pkg/smk_web.js";

const $ = (id) => document.getElementById(id);
const output = $("output");

function show(run) {
  output.classList.remove("error");
  try {
    output.textContent = run();
  } catch (e) {
    output.classList.add("error");
    output.textContent = String(e.message ?? e);
  }
}

await init();
output.textContent = "Ready.";

$("run-trace").addEventListener("click", () =>
  show(() => progression($("program").value, $("structure").value)));

$("run-enum").addEventListener("click", () =>
  show(() => enumerate($("program").value, $("structure").value, $("aux").value,
    Math.max(1, parseInt($("cap").value, 10) || 1))));

$("run-translate").addEventListener("click", () => {
  const kind = $("kind").value;
  const input = kind.startsWith("so2dlp") ? $("sentence").value : $("program").value;
  show(() => translate(kind, input, $("normalize").checked));
});
