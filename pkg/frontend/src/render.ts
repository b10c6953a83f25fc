/**
 * HTML renderers. Pure string -> string functions so tests can scan the
 * produced markup without a browser; main.ts injects them into the DOM.
 */

import type { DisplayCell, GridViewModel, SheetViewModel } from "./gridModel.js";
import { indexToCol } from "./gridModel.js";
import type { LeaderboardResponse, VoteAck } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function styleAttr(cell: DisplayCell): string {
  const parts: string[] = [];
  if (cell.style.fill) parts.push(`background:${cell.style.fill}`);
  if (cell.style.fontColor) parts.push(`color:${cell.style.fontColor}`);
  if (cell.style.bold) parts.push("font-weight:bold");
  if (cell.style.fontSize) parts.push(`font-size:${cell.style.fontSize}px`);
  if (cell.style.border) parts.push("border:1px solid #666");
  if (cell.style.dataBar) {
    const pct = Math.round(cell.style.dataBar.fraction * 100);
    parts.push(
      `background:linear-gradient(to right, ${cell.style.dataBar.color} ${pct}%, transparent ${pct}%)`,
    );
  }
  return parts.length ? ` style="${parts.join(";")}"` : "";
}

/** Rows [firstRow, lastRow] of one sheet as a table. The caller windows
 * rows for large sheets (our own virtualization; no grid library). */
export function renderSheetWindow(
  sheet: SheetViewModel,
  firstRow: number,
  lastRow: number,
): string {
  const nCols = Math.max(sheet.nCols, 1);
  const rows: string[] = [];
  let header = "<tr><th></th>";
  for (let c = 1; c <= nCols; c++) header += `<th>${indexToCol(c)}</th>`;
  header += "</tr>";
  rows.push(header);
  for (let r = firstRow; r <= Math.min(lastRow, Math.max(sheet.nRows, 1)); r++) {
    let row = `<tr><th>${r}</th>`;
    for (let c = 1; c <= nCols; c++) {
      const cell = sheet.cells.get(`${r},${c}`);
      if (!cell) {
        row += "<td></td>";
        continue;
      }
      const cls = cell.error ? ' class="cell-error"' : "";
      row += `<td${cls}${styleAttr(cell)}>${escapeHtml(cell.text)}</td>`;
    }
    row += "</tr>";
    rows.push(row);
  }
  return `<table class="grid" data-rows="${sheet.nRows}">${rows.join("")}</table>`;
}

export const VIRTUAL_WINDOW_ROWS = 60;

export function renderWorkbook(
  view: GridViewModel,
  activeSheet = 0,
  firstRow = 1,
): string {
  if (view.invalid) {
    return `<div class="invalid-artifact">${escapeHtml(view.invalid)}</div>`;
  }
  const tabs = view.sheets
    .map(
      (sheet, i) =>
        `<button class="tab${i === activeSheet ? " active" : ""}" ` +
        `data-action="tab" data-workbook="${escapeHtml(view.workbookId)}" data-sheet="${i}">` +
        `${escapeHtml(sheet.name)}</button>`,
    )
    .join("");
  const sheet = view.sheets[activeSheet];
  const body = sheet
    ? renderSheetWindow(sheet, firstRow, firstRow + VIRTUAL_WINDOW_ROWS - 1)
    : '<div class="invalid-artifact">empty workbook</div>';
  const pager =
    sheet && sheet.nRows > VIRTUAL_WINDOW_ROWS
      ? `<div class="pager">rows ${firstRow}-${Math.min(
          firstRow + VIRTUAL_WINDOW_ROWS - 1,
          sheet.nRows,
        )} of ${sheet.nRows} ` +
        `<button data-action="rows-up" data-workbook="${escapeHtml(view.workbookId)}">earlier</button>` +
        `<button data-action="rows-down" data-workbook="${escapeHtml(view.workbookId)}">later</button></div>`
      : "";
  return `<div class="workbook" data-workbook="${escapeHtml(view.workbookId)}">` +
    `<div class="tabs">${tabs}</div>${body}${pager}</div>`;
}

export interface BattleRenderState {
  index: number; // 0-based battle number within the prompt
  total: number;
  left: GridViewModel;
  right: GridViewModel;
  leftSheet?: number;
  rightSheet?: number;
  notice?: string; // non-blocking toast text (e.g. duplicate vote)
}

/** Pre-vote page: two anonymous panels and the four vote buttons. The
 * payload carries no model identities, and neither does the markup. */
export function renderBattlePage(state: BattleRenderState): string {
  const notice = state.notice
    ? `<div class="notice" role="status">${escapeHtml(state.notice)}</div>`
    : "";
  return (
    `<div class="battle">` +
    `<h2>Battle ${state.index + 1} of ${state.total}</h2>${notice}` +
    `<div class="side-by-side">` +
    `<section class="candidate"><h3>Spreadsheet A</h3>${renderWorkbook(
      state.left,
      state.leftSheet ?? 0,
    )}</section>` +
    `<section class="candidate"><h3>Spreadsheet B</h3>${renderWorkbook(
      state.right,
      state.rightSheet ?? 0,
    )}</section>` +
    `</div>` +
    `<div class="vote-buttons">` +
    `<button data-action="vote" data-outcome="A_WINS">A is better</button>` +
    `<button data-action="vote" data-outcome="B_WINS">B is better</button>` +
    `<button data-action="vote" data-outcome="TIE">Tie</button>` +
    `<button data-action="vote" data-outcome="BOTH_BAD">Both are bad</button>` +
    `</div></div>`
  );
}

/** Post-vote interstitial: reveals exactly the two competitors. */
export function renderReveal(ack: VoteAck): string {
  return (
    `<div class="reveal">` +
    `<p>Vote recorded. A was <strong class="model-name">${escapeHtml(ack.model_a)}</strong>, ` +
    `B was <strong class="model-name">${escapeHtml(ack.model_b)}</strong>.</p>` +
    `<button data-action="next">Next battle</button></div>`
  );
}

export function renderCompletion(): string {
  return (
    `<div class="done"><h2>All battles voted</h2>` +
    `<p>Thanks! Your votes are in.</p>` +
    `<button data-action="leaderboard">View leaderboard</button>` +
    `<button data-action="new-prompt">Submit another prompt</button></div>`
  );
}

export function renderPromptForm(busy = false, error?: string): string {
  const msg = error ? `<div class="notice error">${escapeHtml(error)}</div>` : "";
  return (
    `<div class="prompt-form"><h2>Describe the spreadsheet you need</h2>${msg}` +
    `<textarea id="prompt-text" rows="5" ${busy ? "disabled" : ""}></textarea>` +
    `<button data-action="submit-prompt" ${busy ? "disabled" : ""}>` +
    `${busy ? "Generating workbooks…" : "Start battles"}</button>` +
    `<button data-action="leaderboard">Leaderboard</button></div>`
  );
}

export function renderLeaderboard(board: LeaderboardResponse): string {
  if (!board.rows.length) {
    const reason = board.reason ?? `no models with at least ${board.min_votes} votes yet`;
    const unranked = board.unranked
      .map((u) => `<li>${escapeHtml(u.model)} (${u.n_votes} votes)</li>`)
      .join("");
    return (
      `<div class="leaderboard"><h2>Leaderboard</h2>` +
      `<p>${escapeHtml(reason)}</p>` +
      (unranked ? `<ul class="unranked">${unranked}</ul>` : "") +
      `<button data-action="new-prompt">Submit a prompt</button></div>`
    );
  }
  const hasAdjusted = board.rows.some((r) => r.adjusted_elo !== undefined);
  const head = hasAdjusted
    ? "<tr><th>#</th><th>Model</th><th>Elo</th><th>Adjusted</th><th>dElo</th><th>dRank</th><th>Votes</th></tr>"
    : "<tr><th>#</th><th>Model</th><th>Elo</th><th>Votes</th></tr>";
  const rows = board.rows
    .map((r) => {
      const base = `<td>${r.rank}</td><td class="model-name">${escapeHtml(r.model)}</td><td>${r.elo.toFixed(0)}</td>`;
      if (!hasAdjusted) return `<tr>${base}<td>${r.n_votes}</td></tr>`;
      const delta = r.delta_rank !== undefined && r.delta_rank > 0 ? `+${r.delta_rank}` : `${r.delta_rank ?? 0}`;
      return (
        `<tr>${base}<td>${r.adjusted_elo?.toFixed(0) ?? ""}</td>` +
        `<td>${r.delta_elo !== undefined ? r.delta_elo.toFixed(0) : ""}</td>` +
        `<td>${delta}</td><td>${r.n_votes}</td></tr>`
      );
    })
    .join("");
  return (
    `<div class="leaderboard"><h2>Leaderboard</h2>` +
    `<table>${head}${rows}</table>` +
    `<button data-action="new-prompt">Submit a prompt</button></div>`
  );
}
