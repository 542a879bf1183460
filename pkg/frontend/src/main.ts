/** Browser entry point: preset picker, board, move submission.
 *
 * The board is only ever redrawn from server responses; while a request is
 * pending all inputs are disabled. A view whose checksum disagrees with a
 * local recomputation is reported loudly, since it would mean the client is
 * not rendering the server's state. */

import { MoveRejected, SessionClient } from "./client";
import { SessionView, viewChecksum } from "./protocol";
import { renderView } from "./render";
import { buildViewModel } from "./viewmodel";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8000";

const client = new SessionClient(SERVICE_URL);
let sessionId: string | null = null;
let busy = false;

const root = document.getElementById("app")!;
const picker = document.getElementById("picker")!;

async function boot(): Promise<void> {
  const presets = await client.listPresets();
  picker.innerHTML = presets
    .map(
      (p) =>
        `<button data-preset="${p.name}" title="${p.description}">play ${p.name}</button>`,
    )
    .join(" ");
  picker.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const preset = target.dataset.preset;
    if (!preset || busy) return;
    await withBusy(async () => {
      const view = await client.createSession({ preset, alpha: 0.1, seed: Date.now() % 100000 });
      sessionId = view.session_id;
      show(view);
    });
  });
}

function show(view: SessionView): void {
  const expected = viewChecksum(view);
  if (expected !== view.view_checksum) {
    root.innerHTML = `<div class="banner error">view checksum mismatch: client out of sync</div>`;
    return;
  }
  root.innerHTML = renderView(buildViewModel(view));
}

root.addEventListener("click", async (event) => {
  const target = (event.target as HTMLElement).closest("[data-edge],[data-action],[data-cell]");
  if (!target || busy || !sessionId) return;

  const edge = (target as HTMLElement).dataset.edge;
  if (edge) {
    await withBusy(async () => {
      try {
        show(await client.applyMove(sessionId!, edge));
      } catch (error) {
        if (error instanceof MoveRejected) {
          flashHint(`illegal move; try: ${error.legalMoves.map((m) => m.display).join(", ")}`);
          show(await client.getView(sessionId!));
        } else {
          throw error;
        }
      }
    });
    return;
  }

  if ((target as HTMLElement).dataset.action === "restart") {
    sessionId = null;
    root.innerHTML = "";
    return;
  }

  // first pointer interaction: select a cell to reveal its actions
  const cell = (target as HTMLElement).dataset.cell;
  if (cell) {
    document.querySelectorAll(".tile.open").forEach((t) => t.classList.remove("open"));
    target.classList.add("open");
  }
});

function flashHint(text: string): void {
  const hint = document.createElement("div");
  hint.className = "banner hint";
  hint.textContent = text;
  root.prepend(hint);
  setTimeout(() => hint.remove(), 2500);
}

async function withBusy(work: () => Promise<void>): Promise<void> {
  busy = true;
  document.body.classList.add("busy");
  try {
    await work();
  } finally {
    busy = false;
    document.body.classList.remove("busy");
  }
}

boot().catch((error) => {
  root.innerHTML = `<div class="banner error">cannot reach the session service at ${SERVICE_URL}: ${error}</div>`;
});
