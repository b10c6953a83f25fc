/** Thin fetch client for the arena HTTP API. */

import type {
  BattlePayload,
  LeaderboardResponse,
  SubmissionResponse,
  VoteAck,
  VoteOutcome,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface ArenaApi {
  submitPrompt(text: string): Promise<SubmissionResponse>;
  getBattle(battleId: string): Promise<BattlePayload>;
  castVote(battleId: string, outcome: VoteOutcome): Promise<VoteAck>;
  getLeaderboard(adjusted?: boolean): Promise<LeaderboardResponse>;
}

function voterToken(): string {
  const key = "sheetarena-voter-token";
  let token = localStorage.getItem(key);
  if (!token) {
    token = `t-${Math.random().toString(36).slice(2)}${Date.now().toString(36)}`;
    localStorage.setItem(key, token);
  }
  return token;
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body.detail) detail = String(body.detail);
    } catch {
      // keep statusText
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class HttpArenaApi implements ArenaApi {
  constructor(private base = "") {}

  submitPrompt(text: string): Promise<SubmissionResponse> {
    return request(`${this.base}/prompts`, {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  getBattle(battleId: string): Promise<BattlePayload> {
    return request(`${this.base}/battles/${encodeURIComponent(battleId)}`);
  }

  castVote(battleId: string, outcome: VoteOutcome): Promise<VoteAck> {
    return request(`${this.base}/battles/${encodeURIComponent(battleId)}/vote`, {
      method: "POST",
      body: JSON.stringify({ outcome, voter_token: voterToken() }),
    });
  }

  getLeaderboard(adjusted = false): Promise<LeaderboardResponse> {
    const query = adjusted ? "?adjusted=true" : "";
    return request(`${this.base}/leaderboard${query}`);
  }
}
