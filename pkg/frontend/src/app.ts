/**
 * Single-page state machine. Holds the current prompt's battles and walks
 * the voter through them: battle -> (vote, reveal) x4 -> completion. At
 * most one vote request is in flight and advancing waits for the server
 * acknowledgement (no optimistic UI).
 */

import type { ArenaApi } from "./api.js";
import { ApiError } from "./api.js";
import { buildBattleViewModels, type GridViewModel } from "./gridModel.js";
import {
  renderBattlePage,
  renderCompletion,
  renderLeaderboard,
  renderPromptForm,
  renderReveal,
} from "./render.js";
import type { LeaderboardResponse, SubmissionResponse, VoteAck, VoteOutcome } from "./types.js";

type Phase =
  | { kind: "prompt"; busy: boolean; error?: string }
  | { kind: "battle"; notice?: string }
  | { kind: "reveal"; ack: VoteAck }
  | { kind: "done" }
  | { kind: "leaderboard"; board: LeaderboardResponse };

export class ArenaApp {
  phase: Phase = { kind: "prompt", busy: false };
  submission: SubmissionResponse | null = null;
  battleIndex = 0;
  views: { left: GridViewModel; right: GridViewModel } | null = null;
  private voteInFlight = false;

  constructor(private api: ArenaApi) {}

  render(): string {
    switch (this.phase.kind) {
      case "prompt":
        return renderPromptForm(this.phase.busy, this.phase.error);
      case "battle": {
        if (!this.submission || !this.views) return renderPromptForm(false);
        return renderBattlePage({
          index: this.battleIndex,
          total: this.submission.battles.length,
          left: this.views.left,
          right: this.views.right,
          notice: this.phase.notice,
        });
      }
      case "reveal":
        return renderReveal(this.phase.ack);
      case "done":
        return renderCompletion();
      case "leaderboard":
        return renderLeaderboard(this.phase.board);
    }
  }

  private loadBattle(): void {
    if (!this.submission) return;
    const battle = this.submission.battles[this.battleIndex];
    this.views = buildBattleViewModels(battle);
  }

  async submitPrompt(text: string): Promise<void> {
    this.phase = { kind: "prompt", busy: true };
    try {
      const submission = await this.api.submitPrompt(text);
      if (!submission.battles.length) {
        this.phase = {
          kind: "prompt",
          busy: false,
          error: submission.warning ?? "no battles could be assembled",
        };
        return;
      }
      this.submission = submission;
      this.battleIndex = 0;
      this.loadBattle();
      this.phase = { kind: "battle" };
    } catch (exc) {
      this.phase = {
        kind: "prompt",
        busy: false,
        error: exc instanceof Error ? exc.message : String(exc),
      };
    }
  }

  async vote(outcome: VoteOutcome): Promise<void> {
    if (this.phase.kind !== "battle" || !this.submission || this.voteInFlight) return;
    const battle = this.submission.battles[this.battleIndex];
    this.voteInFlight = true;
    try {
      const ack = await this.api.castVote(battle.battle_id, outcome);
      this.phase = { kind: "reveal", ack };
    } catch (exc) {
      if (exc instanceof ApiError && exc.status === 409) {
        // Someone (or this token) already voted here: surface a notice and
        // auto-advance rather than blocking the session.
        this.advance("already voted on this battle; skipping ahead");
      } else {
        this.phase = {
          kind: "battle",
          notice: exc instanceof Error ? `vote failed, try again: ${exc.message}` : "vote failed",
        };
      }
    } finally {
      this.voteInFlight = false;
    }
  }

  advance(notice?: string): void {
    if (!this.submission) return;
    if (this.battleIndex + 1 < this.submission.battles.length) {
      this.battleIndex += 1;
      this.loadBattle();
      this.phase = { kind: "battle", notice };
    } else {
      this.phase = { kind: "done" };
    }
  }

  async showLeaderboard(): Promise<void> {
    try {
      const board = await this.api.getLeaderboard();
      this.phase = { kind: "leaderboard", board };
    } catch (exc) {
      this.phase = {
        kind: "prompt",
        busy: false,
        error: exc instanceof Error ? exc.message : String(exc),
      };
    }
  }

  reset(): void {
    this.submission = null;
    this.views = null;
    this.battleIndex = 0;
    this.phase = { kind: "prompt", busy: false };
  }
}
