/** HTML rendering of a BoardViewModel. String based so it can be exercised
 * without a DOM; the browser entry point assigns the result to innerHTML and
 * wires clicks by delegation on data attributes. */

import { BoardViewModel } from "./viewmodel";

export function renderView(vm: BoardViewModel): string {
  if (!vm.ok) {
    return `<div class="banner error">${escapeHtml(vm.error ?? "unsupported view")}</div>`;
  }
  const parts: string[] = [];

  parts.push(
    `<div class="statusline">turn: <strong>${vm.turn}</strong>` +
      ` &middot; status: <strong>${vm.status}</strong>` +
      (vm.lastRobotMove
        ? ` &middot; robot played: <strong>${escapeHtml(vm.lastRobotMove)}</strong>`
        : "") +
      `</div>`,
  );

  if (vm.statusNotice) {
    parts.push(
      `<div class="banner lost">${escapeHtml(vm.statusNotice)} ` +
        `<button data-action="restart">restart</button></div>`,
    );
  }

  if (vm.banner) {
    const suggestions = vm.banner.suggestions
      .map(
        (s) =>
          `<button class="suggestion" data-edge="${escapeHtml(s.edge)}">` +
          `${escapeHtml(s.display)}</button>`,
      )
      .join(" ");
    parts.push(
      `<div class="banner feedback ${vm.banner.kind}">` +
        `${escapeHtml(vm.banner.text)} ${suggestions}</div>`,
    );
  }

  parts.push(`<div class="board ${vm.boardKind}" style="--cols:${vm.cols}">`);
  for (const tile of vm.tiles) {
    const actions = tile.actions
      .map(
        (a) =>
          `<button class="action" data-edge="${escapeHtml(a.edge)}">` +
          `${escapeHtml(a.display)}</button>`,
      )
      .join("");
    parts.push(
      `<div class="${tile.classes.join(" ")}" data-cell="${tile.r},${tile.c}">` +
        `<span class="content">${escapeHtml(tile.text)}</span>` +
        (actions ? `<div class="actions">${actions}</div>` : "") +
        `</div>`,
    );
  }
  parts.push(`</div>`);

  if (vm.globalActions.length > 0) {
    const buttons = vm.globalActions
      .map(
        (a) =>
          `<button class="action global" data-edge="${escapeHtml(a.edge)}">` +
          `${escapeHtml(a.display)}</button>`,
      )
      .join(" ");
    parts.push(`<div class="global-actions">${buttons}</div>`);
  }

  const strip = vm.metrics
    .map((m) => `<span class="metric">${escapeHtml(m.label)}: ${escapeHtml(m.value)}</span>`)
    .join(" ");
  parts.push(`<div class="metrics">${strip}</div>`);
  parts.push(`<div class="caption">${escapeHtml(vm.caption)}</div>`);
  return parts.join("\n");
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
