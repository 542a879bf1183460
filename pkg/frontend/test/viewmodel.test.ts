import { describe, expect, it } from "vitest";

import { buildViewModel } from "../src/viewmodel";
import { renderView } from "../src/render";
import { gridView, withFeedback } from "./fixtures";

describe("buildViewModel", () => {
  it("maps tiles with ownership classes and cell actions", () => {
    const vm = buildViewModel(gridView());
    expect(vm.ok).toBe(true);
    expect(vm.tiles).toHaveLength(4);
    const topLeft = vm.tiles[0];
    expect(topLeft.classes).toContain("human");
    expect(topLeft.actions.map((a) => a.display)).toEqual(["remove (1,1)"]);
    const bottomRight = vm.tiles[3];
    expect(bottomRight.classes).toContain("robot");
    expect(vm.globalActions.map((a) => a.display)).toEqual(["pass"]);
  });

  it("every legal move is reachable via a cell group or a global action", () => {
    const vm = buildViewModel(gridView());
    const reachable = new Set<string>();
    for (const tile of vm.tiles) {
      for (const action of tile.actions) reachable.add(action.edge);
    }
    for (const action of vm.globalActions) reachable.add(action.edge);
    for (const move of gridView().legal_moves) {
      expect(reachable.has(move.edge)).toBe(true);
    }
  });

  it("marks suggested cells and builds the banner", () => {
    const vm = buildViewModel(withFeedback(gridView()));
    expect(vm.banner).not.toBeNull();
    expect(vm.banner!.kind).toBe("live_suggestion");
    expect(vm.banner!.suggestions.map((s) => s.display)).toEqual(["remove (1,1)"]);
    const suggested = vm.tiles.filter((t) => t.suggested);
    expect(suggested).toHaveLength(1);
    expect(suggested[0].r).toBe(1);
    expect(suggested[0].c).toBe(1);
  });

  it("clears the banner when feedback is absent", () => {
    const vm = buildViewModel(gridView());
    expect(vm.banner).toBeNull();
    expect(vm.tiles.every((t) => !t.suggested)).toBe(true);
  });

  it("rejects unsupported protocol versions", () => {
    const vm = buildViewModel(gridView({ protocol_version: 2 }));
    expect(vm.ok).toBe(false);
    expect(vm.error).toMatch(/protocol version 2/);
  });

  it("shows a restart notice when the task is lost", () => {
    const vm = buildViewModel(gridView({ status: "task_lost" }));
    expect(vm.statusNotice).toMatch(/new session/);
  });
});

describe("renderView", () => {
  it("renders suggested tiles with the suggested class", () => {
    const html = renderView(buildViewModel(withFeedback(gridView())));
    expect(html).toContain("suggested");
    expect(html).toContain("banner feedback live_suggestion");
    expect(html).toContain("remove (1,1)");
  });

  it("renders a version mismatch banner", () => {
    const html = renderView(buildViewModel(gridView({ protocol_version: 99 })));
    expect(html).toContain("banner error");
  });

  it("escapes markup in displays", () => {
    const view = gridView();
    view.legal_moves[2].display = "<script>alert(1)</script>";
    const html = renderView(buildViewModel(view));
    expect(html).not.toContain("<script>alert");
    expect(html).toContain("&lt;script&gt;");
  });
});
