import { compare, fetchTokenizers, tokenize } from "./api.js";
import { buildChips, chipsTileSource, validateTokenizeResponse } from "./chips.js";
import { buildBars, buildRows, sortRows, validateCompareResponse } from "./comparison.js";
import type { SortKey } from "./comparison.js";
import { clear, renderBars, renderChips, renderError, renderTable } from "./dom.js";
import { Debouncer, SingleFlight, Store } from "./store.js";

const SAMPLE_TEXT = "জীৱনৰ পৰিসৰে মোহিত হোৱাটো বাঞ্ছনীয়।";

const store = new Store();
const tokenizeFlight = new SingleFlight();
const debouncer = new Debouncer(300);

let sortKey: SortKey = "avgNsl";
let sortAscending = true;

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function refreshTokenization(): Promise<void> {
  const state = store.get();
  if (state.selected.length === 0) {
    store.update({ tokenizeResponse: null });
    return;
  }
  await tokenizeFlight.submit(async () => {
    try {
      const response = await tokenize(store.get().text, store.get().selected);
      const problem = validateTokenizeResponse(response);
      if (problem) {
        store.update({ error: `malformed tokenize response: ${problem}` });
        return;
      }
      store.update({ tokenizeResponse: response, error: null });
    } catch (error) {
      store.update({ error: (error as Error).message });
    }
  });
}

async function runComparison(): Promise<void> {
  const state = store.get();
  if (state.selected.length === 0 || state.text.length === 0) return;
  try {
    const response = await compare([state.text], state.selected, state.baseline);
    const problem = validateCompareResponse(response);
    if (problem) {
      store.update({ error: `malformed compare response: ${problem}` });
      return;
    }
    store.update({ compareResponse: response, error: null });
  } catch (error) {
    store.update({ error: (error as Error).message });
  }
}

function render(): void {
  const state = store.get();
  renderError(element("error-banner"), state.error);

  const chipsContainer = element("chips");
  clear(chipsContainer);
  if (state.tokenizeResponse) {
    for (const result of state.tokenizeResponse.results) {
      const chips = buildChips(result);
      if (!chipsTileSource(chips, result.source_text) && state.error === null) {
        renderError(element("error-banner"), `spans from ${result.name} do not tile the input`);
      }
      renderChips(chipsContainer, result.name, result.token_count, chips);
    }
  }

  const tableContainer = element("comparison-table");
  const chartContainer = element("comparison-chart");
  if (state.compareResponse) {
    const rows = sortRows(buildRows(state.compareResponse), sortKey, sortAscending);
    renderTable(tableContainer, rows, (key) => {
      sortAscending = key === sortKey ? !sortAscending : true;
      sortKey = key;
      render();
    });
    renderBars(chartContainer, buildBars(buildRows(state.compareResponse)));
  } else {
    clear(tableContainer);
    clear(chartContainer);
  }
}

function renderTokenizerChoices(): void {
  const state = store.get();
  const box = element("tokenizer-list");
  clear(box);
  for (const info of state.available) {
    const label = document.createElement("label");
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.value = info.name;
    checkbox.checked = state.selected.includes(info.name);
    checkbox.addEventListener("change", () => {
      const selected = checkbox.checked
        ? [...store.get().selected, info.name]
        : store.get().selected.filter((name) => name !== info.name);
      store.update({ selected });
      void refreshTokenization();
      void runComparison();
    });
    label.appendChild(checkbox);
    label.append(` ${info.name} (${info.vocab_size.toLocaleString()} tokens, ${info.algorithm})`);
    box.appendChild(label);
  }

  const baseline = element<HTMLSelectElement>("baseline-select");
  clear(baseline);
  for (const name of ["codepoints", ...state.available.map((t) => t.name)]) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    baseline.appendChild(option);
  }
  baseline.value = store.get().baseline;
}

async function boot(): Promise<void> {
  store.subscribe(render);

  const input = element<HTMLTextAreaElement>("text-input");
  input.addEventListener("input", () => {
    store.update({ text: input.value });
    debouncer.schedule(() => void refreshTokenization());
  });

  element("sample-button").addEventListener("click", () => {
    input.value = SAMPLE_TEXT;
    store.update({ text: SAMPLE_TEXT });
    void refreshTokenization();
    void runComparison();
  });

  element("compare-button").addEventListener("click", () => void runComparison());

  element<HTMLSelectElement>("baseline-select").addEventListener("change", (event) => {
    store.update({ baseline: (event.target as HTMLSelectElement).value });
    void runComparison();
  });

  try {
    const available = await fetchTokenizers();
    store.update({ available, selected: available.map((t) => t.name) });
    renderTokenizerChoices();
  } catch (error) {
    store.update({ error: (error as Error).message });
  }
}

void boot();
