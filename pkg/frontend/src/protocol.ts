/** Wire types for the session service (protocol v1) and the shared view
 * checksum. The client renders these payloads verbatim; it implements no
 * game rules of its own. */

export const SUPPORTED_PROTOCOL = 1;

export interface Tile {
  r: number;
  c: number;
  kind: string;
  content: string;
  agents?: string[];
}

export interface Board {
  kind: "grid" | "kitchen" | "generic";
  rows: number;
  cols: number;
  tiles: Tile[];
  caption: string;
}

export interface MovePayload {
  edge: string;
  display: string;
  cell?: [number, number];
}

export interface Suggestion {
  edge: string;
  display: string;
  cell?: [number, number];
}

export interface Feedback {
  kind: string;
  suggested: Suggestion[];
  frequency: number;
  opportunities: number;
  violations: number;
}

export interface Metrics {
  moves: number;
  goal_events: number;
  deliveries: number;
  opportunities: number;
  violations: number;
  frequency: number;
  feedback_messages: number;
  feedback_per_human_turn: number;
}

export interface SessionView {
  protocol_version: number;
  session_id: string;
  status: "active" | "task_lost" | "completed";
  turn: "human" | "robot";
  board: Board;
  legal_moves: MovePayload[];
  last_robot_move: MovePayload | null;
  feedback: Feedback | null;
  metrics: Metrics;
  view_checksum: string;
}

/** FNV-1a 64-bit over UTF-8 bytes, hex encoded; matches the server. */
export function fnv1a64(text: string): string {
  let value = 0xcbf29ce484222325n;
  const bytes = new TextEncoder().encode(text);
  for (const byte of bytes) {
    value ^= BigInt(byte);
    value = (value * 0x100000001b3n) & 0xffffffffffffffffn;
  }
  return value.toString(16).padStart(16, "0");
}

/** Canonical JSON: object keys sorted, no whitespace. JavaScript number
 * formatting already renders integral floats without a fraction part, which
 * is what the server's canonical form emits too. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .filter(([, v]) => v !== undefined)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
  return (
    "{" +
    entries.map(([k, v]) => JSON.stringify(k) + ":" + canonicalJson(v)).join(",") +
    "}"
  );
}

/** Recompute the server's view checksum from the fields the client renders. */
export function viewChecksum(view: SessionView): string {
  const core = {
    status: view.status,
    turn: view.turn,
    board: view.board,
    legal_moves: view.legal_moves,
    feedback: view.feedback,
    metrics: view.metrics,
  };
  return fnv1a64(canonicalJson(core));
}
