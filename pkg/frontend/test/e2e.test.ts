/** End-to-end against the real session service: a scripted gridworld session
 * that triggers feedback and then clears it, verifying at every step that the
 * client's recomputed view checksum matches the server's, plus a random-move
 * fuzz session with the same invariant. */

import { ChildProcess, spawn } from "node:child_process";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient } from "../src/client";
import { SessionView, viewChecksum } from "../src/protocol";
import { buildViewModel } from "../src/viewmodel";
import { renderView } from "../src/render";

const PORT = 8731 + (process.pid % 97);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = path.resolve(__dirname, "..", "..");

let server: ChildProcess;

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "tandem.cli", "serve", "--port", String(PORT), "--presets", "gridworld"],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  const deadline = Date.now() + 90_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/presets`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not start");
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
}, 100_000);

afterAll(() => {
  server?.kill();
});

function checkInSync(view: SessionView): void {
  expect(viewChecksum(view)).toBe(view.view_checksum);
}

function pickByPrefix(view: SessionView, prefix: string): string {
  const match = view.legal_moves.find((m) => m.display.startsWith(prefix));
  if (!match) {
    throw new Error(
      `no legal move starting with ${prefix}; have ${view.legal_moves
        .map((m) => m.display)
        .join(", ")}`,
    );
  }
  return match.edge;
}

describe("scripted session", () => {
  it(
    "plays 20 moves, sees the suggestion highlight appear and clear, stays in sync",
    async () => {
      const client = new SessionClient(BASE);
      let view = await client.createSession({
        preset: "gridworld",
        alpha: 0.6,
        seed: 5,
        scope: "window",
        window: 4,
      });
      checkInSync(view);
      expect(view.turn).toBe("human");

      const policy = ["pass", "pass", "place", "remove", "place"].concat(
        Array(15).fill("pass"),
      );
      const bannerStates: boolean[] = [];
      for (const prefix of policy) {
        view = await client.applyMove(view.session_id, pickByPrefix(view, prefix));
        checkInSync(view);
        const vm = buildViewModel(view);
        expect(vm.ok).toBe(true);
        const html = renderView(vm);
        const bannerShown = vm.banner !== null;
        bannerStates.push(bannerShown);
        if (bannerShown) {
          expect(vm.banner!.suggestions.length).toBeGreaterThan(0);
          expect(html).toContain("banner feedback");
        } else {
          expect(html).not.toContain("banner feedback");
        }
      }

      expect(view.metrics.moves).toBe(40); // 20 human moves + 20 robot replies
      const firstOn = bannerStates.indexOf(true);
      expect(firstOn).toBeGreaterThanOrEqual(0);
      const clearedAfter = bannerStates.slice(firstOn + 1).indexOf(false);
      expect(clearedAfter).toBeGreaterThanOrEqual(0);
    },
    60_000,
  );

  it("rejects an illegal move and leaves the view unchanged", async () => {
    const client = new SessionClient(BASE);
    const view = await client.createSession({ preset: "gridworld", alpha: 0.1, seed: 9 });
    const before = await client.getView(view.session_id);
    await expect(client.applyMove(view.session_id, "0->424242")).rejects.toThrow(
      /illegal/,
    );
    const after = await client.getView(view.session_id);
    expect(after.view_checksum).toBe(before.view_checksum);
  });

  it("random legal moves never desynchronize client and server", async () => {
    const client = new SessionClient(BASE);
    let view = await client.createSession({ preset: "gridworld", alpha: 0.05, seed: 13 });
    checkInSync(view);
    let state = 1337;
    const nextRandom = () => {
      state = (state * 1103515245 + 12345) & 0x7fffffff;
      return state;
    };
    for (let i = 0; i < 30 && view.status === "active"; i++) {
      const moves = view.legal_moves;
      const edge = moves[nextRandom() % moves.length].edge;
      view = await client.applyMove(view.session_id, edge);
      checkInSync(view);
      expect(buildViewModel(view).ok).toBe(true);
    }
  }, 60_000);
});
