import { SessionView } from "../src/protocol";

export function gridView(overrides: Partial<SessionView> = {}): SessionView {
  const base: SessionView = {
    protocol_version: 1,
    session_id: "s1",
    status: "active",
    turn: "human",
    board: {
      kind: "grid",
      rows: 2,
      cols: 2,
      caption: "H./.R",
      tiles: [
        { r: 1, c: 1, kind: "cell", content: "human_block" },
        { r: 1, c: 2, kind: "cell", content: "" },
        { r: 2, c: 1, kind: "cell", content: "" },
        { r: 2, c: 2, kind: "cell", content: "robot_block" },
      ],
    },
    legal_moves: [
      { edge: "4->9", display: "place (1,2)", cell: [1, 2] },
      { edge: "4->11", display: "remove (1,1)", cell: [1, 1] },
      { edge: "4->4", display: "pass" },
    ],
    last_robot_move: { edge: "2->4", display: "place (2,2)", cell: [2, 2] },
    feedback: null,
    metrics: {
      moves: 2,
      goal_events: 0,
      deliveries: 0,
      opportunities: 1,
      violations: 0,
      frequency: 0,
      feedback_messages: 0,
      feedback_per_human_turn: 0,
    },
    view_checksum: "",
  };
  return { ...base, ...overrides };
}

export function withFeedback(view: SessionView): SessionView {
  return {
    ...view,
    feedback: {
      kind: "live_suggestion",
      suggested: [{ edge: "4->11", display: "remove (1,1)", cell: [1, 1] }],
      frequency: 0.75,
      opportunities: 4,
      violations: 3,
    },
  };
}
