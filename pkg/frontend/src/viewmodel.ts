/** Projection of a SessionView into renderable structures. Pure data
 * transformation: ownership colors, move affordances grouped per cell,
 * feedback banner with on-board highlights, and the metrics strip. */

import { MovePayload, SessionView, SUPPORTED_PROTOCOL } from "./protocol";

export interface TileVm {
  r: number;
  c: number;
  classes: string[];
  text: string;
  /** moves offered when this tile is selected (click tile, then action) */
  actions: MovePayload[];
  suggested: boolean;
}

export interface BannerVm {
  kind: string;
  text: string;
  suggestions: { edge: string; display: string }[];
}

export interface BoardViewModel {
  ok: boolean;
  error?: string;
  boardKind: string;
  rows: number;
  cols: number;
  caption: string;
  tiles: TileVm[];
  /** legal moves without a board cell (pass, wait, interactions) */
  globalActions: MovePayload[];
  banner: BannerVm | null;
  turn: "human" | "robot";
  status: string;
  statusNotice: string | null;
  lastRobotMove: string | null;
  metrics: { label: string; value: string }[];
}

const CONTENT_CLASS: Record<string, string> = {
  human_block: "human",
  robot_block: "robot",
};

export function buildViewModel(view: SessionView): BoardViewModel {
  if (view.protocol_version !== SUPPORTED_PROTOCOL) {
    return {
      ok: false,
      error: `protocol version ${view.protocol_version} is not supported (client speaks ${SUPPORTED_PROTOCOL})`,
      boardKind: "generic",
      rows: 0,
      cols: 0,
      caption: "",
      tiles: [],
      globalActions: [],
      banner: null,
      turn: view.turn,
      status: view.status,
      statusNotice: null,
      lastRobotMove: null,
      metrics: [],
    };
  }

  const suggestedCells = new Set<string>();
  for (const suggestion of view.feedback?.suggested ?? []) {
    if (suggestion.cell) {
      suggestedCells.add(cellKey(suggestion.cell[0], suggestion.cell[1]));
    }
  }

  const movesByCell = new Map<string, MovePayload[]>();
  const globalActions: MovePayload[] = [];
  for (const move of view.legal_moves) {
    if (move.cell) {
      const key = cellKey(move.cell[0], move.cell[1]);
      const bucket = movesByCell.get(key) ?? [];
      bucket.push(move);
      movesByCell.set(key, bucket);
    } else {
      globalActions.push(move);
    }
  }

  const tiles: TileVm[] = view.board.tiles.map((tile) => {
    const key = cellKey(tile.r, tile.c);
    const classes = ["tile", tile.kind];
    const ownerClass = CONTENT_CLASS[tile.content];
    if (ownerClass) {
      classes.push(ownerClass);
    }
    for (const agent of tile.agents ?? []) {
      classes.push(agent.startsWith("human") ? "human" : "robot");
    }
    const suggested = suggestedCells.has(key);
    if (suggested) {
      classes.push("suggested");
    }
    const actions = movesByCell.get(key) ?? [];
    if (actions.length > 0) {
      classes.push("clickable");
    }
    return {
      r: tile.r,
      c: tile.c,
      classes,
      text: tileText(tile.content, tile.agents),
      actions,
      suggested,
    };
  });

  let banner: BannerVm | null = null;
  if (view.feedback) {
    banner = {
      kind: view.feedback.kind,
      text: bannerText(view.feedback.kind),
      suggestions: view.feedback.suggested.map((s) => ({
        edge: s.edge,
        display: s.display,
      })),
    };
  }

  const metrics = [
    { label: "moves", value: String(view.metrics.moves) },
    { label: "goal events", value: String(view.metrics.goal_events) },
    { label: "deliveries", value: String(view.metrics.deliveries) },
    {
      label: "violation frequency",
      value: view.metrics.frequency.toFixed(2),
    },
    { label: "feedback shown", value: String(view.metrics.feedback_messages) },
  ];

  return {
    ok: true,
    boardKind: view.board.kind,
    rows: view.board.rows,
    cols: view.board.cols,
    caption: view.board.caption,
    tiles,
    globalActions,
    banner,
    turn: view.turn,
    status: view.status,
    statusNotice:
      view.status === "task_lost"
        ? "The task can no longer be guaranteed from here. Start a new session to retry."
        : null,
    lastRobotMove: view.last_robot_move?.display ?? null,
    metrics,
  };
}

function cellKey(r: number, c: number): string {
  return `${r},${c}`;
}

function tileText(content: string, agents?: string[]): string {
  const parts: string[] = [];
  if (content === "human_block") parts.push("H");
  else if (content === "robot_block") parts.push("R");
  else if (content) parts.push(content);
  for (const agent of agents ?? []) {
    parts.push(agent === "human" ? "H" : agent === "robot" ? "R" : agent);
  }
  return parts.join(" ");
}

function bannerText(kind: string): string {
  switch (kind) {
    case "unsafe_warning":
      return "Careful: the highlighted moves would make the task impossible.";
    case "live_suggestion":
      return "The robot asks for help: consider one of the suggested moves.";
    case "colive_discourage":
      return "The robot asks you to stop repeating the discouraged moves.";
    case "recovery_impossible":
      return "The task can no longer be satisfied.";
    default:
      return kind;
  }
}
