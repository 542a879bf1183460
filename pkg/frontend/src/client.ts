/** HTTP client for the session service. One request in flight per session;
 * a busy (409) response is retried once after a short pause. */

import { SessionView } from "./protocol";

export interface CreateOptions {
  preset: string;
  alpha?: number;
  seed?: number;
  scope?: "cumulative" | "window";
  window?: number;
}

export class MoveRejected extends Error {
  constructor(
    message: string,
    readonly legalMoves: { edge: string; display: string }[],
  ) {
    super(message);
  }
}

export class SessionClient {
  private inFlight = false;

  constructor(readonly baseUrl: string) {}

  async listPresets(): Promise<{ name: string; description: string }[]> {
    const response = await fetch(`${this.baseUrl}/presets`);
    const payload = await response.json();
    return payload.presets;
  }

  async createSession(options: CreateOptions): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
    if (!response.ok) {
      throw new Error(`create failed: ${response.status}`);
    }
    return response.json();
  }

  async getView(sessionId: string): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}`);
    if (!response.ok) {
      throw new Error(`view failed: ${response.status}`);
    }
    return response.json();
  }

  /** Applies a human move. The board must only ever be updated from the
   * returned view (no optimistic rendering). */
  async applyMove(sessionId: string, edge: string): Promise<SessionView> {
    if (this.inFlight) {
      throw new Error("a move is already in flight");
    }
    this.inFlight = true;
    try {
      let response = await this.postMove(sessionId, edge);
      if (response.status === 409) {
        await new Promise((resolve) => setTimeout(resolve, 150));
        response = await this.postMove(sessionId, edge);
      }
      if (response.status === 400) {
        const detail = (await response.json()).detail;
        throw new MoveRejected(detail.error ?? "illegal move", detail.legal_moves ?? []);
      }
      if (!response.ok) {
        throw new Error(`move failed: ${response.status}`);
      }
      return response.json();
    } finally {
      this.inFlight = false;
    }
  }

  async getRecord(sessionId: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/record`);
    return response.text();
  }

  private postMove(sessionId: string, edge: string): Promise<Response> {
    return fetch(`${this.baseUrl}/sessions/${sessionId}/moves`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ edge }),
    });
  }
}
