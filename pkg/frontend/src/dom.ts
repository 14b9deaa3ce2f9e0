import type { Chip } from "./chips.js";
import type { Bar, RowView, SortKey } from "./comparison.js";

export function clear(element: HTMLElement): void {
  element.replaceChildren();
}

export function renderError(banner: HTMLElement, message: string | null): void {
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

export function renderChips(container: HTMLElement, name: string, count: number, chips: Chip[]): void {
  const section = document.createElement("section");
  section.className = "chip-row";

  const heading = document.createElement("h3");
  heading.textContent = `${name} — ${count} tokens`;
  section.appendChild(heading);

  const strip = document.createElement("div");
  strip.className = "chip-strip";
  if (chips.length === 0) {
    const hint = document.createElement("span");
    hint.className = "hint";
    hint.textContent = "nothing to tokenize yet — type some text above";
    strip.appendChild(hint);
  }
  for (const chip of chips) {
    const span = document.createElement("span");
    span.className = chip.special ? "chip chip-special" : "chip";
    span.style.backgroundColor = chip.special ? "" : chip.color;
    span.title = chip.hover;
    span.textContent = chip.text;
    if (chip.special) {
      const badge = document.createElement("sup");
      badge.className = "badge";
      badge.textContent = "special";
      span.appendChild(badge);
    }
    strip.appendChild(span);
  }
  section.appendChild(strip);
  container.appendChild(section);
}

const COLUMNS: { key: SortKey; label: string }[] = [
  { key: "name", label: "Name" },
  { key: "vocabSize", label: "Vocab Size" },
  { key: "avgNsl", label: "Avg NSL" },
  { key: "totalTokens", label: "Number of Tokens" },
  { key: "coverage", label: "Coverage" },
];

export function renderTable(
  container: HTMLElement,
  rows: RowView[],
  onSort: (key: SortKey) => void,
): void {
  clear(container);
  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  for (const column of COLUMNS) {
    const cell = document.createElement("th");
    cell.textContent = column.label;
    cell.addEventListener("click", () => onSort(column.key));
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    if (row.isBaseline) tr.className = "baseline-row";
    tr.insertCell().textContent = row.name + (row.isBaseline ? " (baseline)" : "");
    tr.insertCell().textContent = String(row.vocabSize);
    tr.insertCell().textContent = row.avgNslDisplay;
    tr.insertCell().textContent = String(row.totalTokens);
    tr.insertCell().textContent = row.coverage.toFixed(2);
  }
  container.appendChild(table);
}

export function renderBars(container: HTMLElement, bars: Bar[]): void {
  clear(container);
  const caption = document.createElement("p");
  caption.className = "chart-caption";
  caption.textContent = "Average NSL — lower is better";
  container.appendChild(caption);

  for (const bar of bars) {
    const row = document.createElement("div");
    row.className = "bar-row";

    const label = document.createElement("span");
    label.className = "bar-label";
    label.textContent = bar.name;
    row.appendChild(label);

    const track = document.createElement("div");
    track.className = "bar-track";
    const fill = document.createElement("div");
    fill.className = bar.isBaseline ? "bar-fill bar-baseline" : "bar-fill";
    fill.style.width = `${bar.widthPercent.toFixed(1)}%`;
    track.appendChild(fill);
    row.appendChild(track);

    const value = document.createElement("span");
    value.className = "bar-value";
    value.textContent = bar.label;
    row.appendChild(value);

    container.appendChild(row);
  }
}
