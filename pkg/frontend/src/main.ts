/** Browser bootstrap: wires the session controller to the DOM. */

import { EngineClient, HttpTransport } from "./api.js";
import { buildPanel, type PanelView } from "./panel.js";
import { buildGraphView, renderSvg } from "./render.js";
import { SessionController, type SessionState } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function panelHtml(panel: PanelView): string {
  if (!panel.loaded) {
    return `<p class="hint">Pick an example to begin.</p>`;
  }
  const rows: string[] = [];
  rows.push(
    `<dt>Bailout set</dt><dd>{${panel.bailout.join(", ")}}</dd>`,
    `<dt>Spend B</dt><dd data-field="spend">${panel.spend}</dd>`,
    `<dt>Objective</dt><dd data-field="objective">${panel.objectiveValue}</dd>`,
  );
  if (panel.welfareLoss !== null) {
    rows.push(`<dt>Welfare loss</dt><dd data-field="wl">${panel.welfareLoss}</dd>`);
  }
  rows.push(
    `<dt>Saved banks</dt><dd>{${panel.savedBanks.join(", ")}}</dd>`,
    `<dt>Optimizer says</dt><dd>{${panel.recommendedSet.join(", ")}} ` +
      `(B=${panel.recommendedSpend}` +
      (panel.recommendedWelfareLoss !== null
        ? `, WL=${panel.recommendedWelfareLoss}`
        : "") +
      `)</dd>`,
  );
  const badges: string[] = [];
  if (panel.matchesRecommendation) {
    badges.push(`<p class="badge ok">matches the optimizer's recommendation</p>`);
  }
  if (panel.worseThanNothing) {
    badges.push(`<p class="badge warn">worse than doing nothing</p>`);
  }
  return `<dl>${rows.join("")}</dl>${badges.join("")}`;
}

async function boot(): Promise<void> {
  const client = new EngineClient(new HttpTransport());
  const controller = new SessionController(client);

  const picker = el<HTMLSelectElement>("example-picker");
  const graphBox = el<HTMLDivElement>("graph");
  const panelBox = el<HTMLDivElement>("panel");
  const bannerBox = el<HTMLDivElement>("banner");

  controller.subscribe((state: SessionState) => {
    graphBox.innerHTML = renderSvg(buildGraphView(state));
    panelBox.innerHTML = panelHtml(buildPanel(state));
    bannerBox.textContent = state.banner ?? "";
    bannerBox.hidden = state.banner === null;
  });

  graphBox.addEventListener("click", (event) => {
    const group = (event.target as Element).closest("[data-bank]");
    const id = group?.getAttribute("data-bank");
    if (id) void controller.toggle(id);
  });

  const names = await client.listExamples();
  for (const name of names) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    picker.append(option);
  }
  picker.addEventListener("change", () => {
    if (picker.value) void controller.loadExample(picker.value);
  });
  if (names.length > 0) {
    picker.value = names[0];
    await controller.loadExample(names[0]);
  }
}

void boot();
