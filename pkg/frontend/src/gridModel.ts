/**
 * Client-side view model: evaluated values + styles resolved into display
 * cells, one sheet at a time. The server does all formula evaluation; the
 * client only formats values and applies styling, including the supported
 * conditional formats (cellIs/cellIsBetween/containsText client-evaluated,
 * colorScale/dataBar as best-effort gradients and bars).
 */

import { displayValue } from "./numberFormat.js";
import type {
  BattlePayload,
  CellStyleData,
  ConditionalFormatData,
  EvaluatedGrid,
  GridCell,
  SheetData,
  WorkbookPayload,
} from "./types.js";

export interface ResolvedStyle {
  fill?: string;
  fontColor?: string;
  bold?: boolean;
  fontSize?: number;
  border?: boolean;
  dataBar?: { fraction: number; color: string };
}

export interface DisplayCell {
  text: string;
  error: boolean;
  style: ResolvedStyle;
}

export interface SheetViewModel {
  name: string;
  nRows: number;
  nCols: number;
  /** sparse: key "row,col" (1-based) */
  cells: Map<string, DisplayCell>;
}

export interface GridViewModel {
  workbookId: string;
  sheets: SheetViewModel[];
  invalid?: string; // set when the payload is malformed; render a panel
}

// --- A1 helpers -----------------------------------------------------------

export function colToIndex(letters: string): number {
  let n = 0;
  for (const ch of letters.toUpperCase()) {
    if (ch < "A" || ch > "Z") throw new Error(`bad column: ${letters}`);
    n = n * 26 + (ch.charCodeAt(0) - 64);
  }
  return n;
}

export function indexToCol(index: number): string {
  let out = "";
  while (index > 0) {
    const rem = (index - 1) % 26;
    out = String.fromCharCode(65 + rem) + out;
    index = Math.floor((index - 1) / 26);
  }
  return out;
}

const REF_RE = /^\$?([A-Za-z]{1,3})\$?([1-9][0-9]*)$/;

export function parseRef(ref: string): { row: number; col: number } {
  const m = REF_RE.exec(ref.trim());
  if (!m) throw new Error(`bad ref: ${ref}`);
  return { row: parseInt(m[2], 10), col: colToIndex(m[1]) };
}

export interface Rect {
  r1: number;
  c1: number;
  r2: number;
  c2: number;
}

export function parseRange(ref: string): Rect {
  const [left, right] = ref.split(":");
  const a = parseRef(left);
  const b = right ? parseRef(right) : a;
  return {
    r1: Math.min(a.row, b.row),
    c1: Math.min(a.col, b.col),
    r2: Math.max(a.row, b.row),
    c2: Math.max(a.col, b.col),
  };
}

// --- style resolution --------------------------------------------------------

function baseStyle(style?: CellStyleData): ResolvedStyle {
  if (!style) return {};
  return {
    fill: style.fill,
    fontColor: style.fontColor,
    bold: style.fontWeight === "bold" ? true : undefined,
    fontSize: style.fontSize,
    border: style.border !== undefined ? true : undefined,
  };
}

function mergeStyle(target: ResolvedStyle, extra: CellStyleData): void {
  if (extra.fill !== undefined) target.fill = extra.fill;
  if (extra.fontColor !== undefined) target.fontColor = extra.fontColor;
  if (extra.fontWeight !== undefined) target.bold = extra.fontWeight === "bold";
  if (extra.fontSize !== undefined) target.fontSize = extra.fontSize;
  if (extra.border !== undefined) target.border = true;
}

// --- color interpolation (colorScale) ------------------------------------------

function hexToRgb(hex: string): [number, number, number] {
  let h = hex.replace("#", "");
  if (h.length === 3) h = h.split("").map((c) => c + c).join("");
  return [
    parseInt(h.slice(0, 2), 16),
    parseInt(h.slice(2, 4), 16),
    parseInt(h.slice(4, 6), 16),
  ];
}

function rgbToHex(rgb: [number, number, number]): string {
  return (
    "#" +
    rgb
      .map((v) => Math.round(Math.max(0, Math.min(255, v))).toString(16).padStart(2, "0"))
      .join("")
      .toUpperCase()
  );
}

export function interpolateColor(from: string, to: string, t: number): string {
  const a = hexToRgb(from);
  const b = hexToRgb(to);
  return rgbToHex([
    a[0] + (b[0] - a[0]) * t,
    a[1] + (b[1] - a[1]) * t,
    a[2] + (b[2] - a[2]) * t,
  ]);
}

// --- conditional format evaluation -----------------------------------------------

type ValueLookup = (row: number, col: number) => GridCell | undefined;

function numericValue(cell: GridCell | undefined): number | null {
  if (!cell || "error" in cell) return null;
  return typeof cell.value === "number" ? cell.value : null;
}

function cellMatches(
  rule: Extract<ConditionalFormatData, { type: "cellIs" | "cellIsBetween" | "containsText" }>,
  cell: GridCell | undefined,
): boolean {
  if (!cell || "error" in cell) return false;
  const value = cell.value;
  if (rule.type === "containsText") {
    return typeof value === "string" && value.toLowerCase().includes(rule.text.toLowerCase());
  }
  if (rule.type === "cellIsBetween") {
    return typeof value === "number" && value >= rule.min && value <= rule.max;
  }
  const target = rule.value;
  if (typeof target === "number") {
    if (typeof value !== "number") return false;
    switch (rule.operator) {
      case "equal": return value === target;
      case "notEqual": return value !== target;
      case "greaterThan": return value > target;
      case "lessThan": return value < target;
      case "greaterThanOrEqual": return value >= target;
      case "lessThanOrEqual": return value <= target;
    }
  }
  if (typeof value !== "string" || typeof target !== "string") return false;
  const cmp = value.toLowerCase().localeCompare(target.toLowerCase());
  switch (rule.operator) {
    case "equal": return cmp === 0;
    case "notEqual": return cmp !== 0;
    case "greaterThan": return cmp > 0;
    case "lessThan": return cmp < 0;
    case "greaterThanOrEqual": return cmp >= 0;
    case "lessThanOrEqual": return cmp <= 0;
  }
}

function scaleBounds(
  rule: Extract<ConditionalFormatData, { type: "colorScale" | "dataBar" }>,
  values: number[],
): { lo: number; hi: number } | null {
  if (!values.length) return null;
  const sorted = [...values].sort((a, b) => a - b);
  const percentile = (p: number) =>
    sorted[Math.min(sorted.length - 1, Math.max(0, Math.floor((p / 100) * (sorted.length - 1))))];
  const pick = (
    kind: "auto" | "percentile" | "number" | undefined,
    value: number | undefined,
    fallback: number,
  ) => {
    if (kind === "number" && value !== undefined) return value;
    if (kind === "percentile" && value !== undefined) return percentile(value);
    return fallback;
  };
  const lo = pick(rule.minType, rule.minValue, sorted[0]);
  const hi = pick(rule.maxType, rule.maxValue, sorted[sorted.length - 1]);
  return hi > lo ? { lo, hi } : { lo, hi: lo + 1 };
}

function applyConditionalFormats(
  sheet: SheetData,
  lookup: ValueLookup,
  styleAt: (row: number, col: number) => ResolvedStyle | undefined,
): void {
  for (const rule of sheet.conditionalFormats ?? []) {
    let rect: Rect;
    try {
      rect = parseRange(rule.ref);
    } catch {
      continue; // bad range: rule is cosmetic, skip it
    }
    if (rule.type === "expression") continue; // needs a formula engine; server truth only
    if (rule.type === "colorScale" || rule.type === "dataBar") {
      const values: number[] = [];
      for (let r = rect.r1; r <= rect.r2; r++)
        for (let c = rect.c1; c <= rect.c2; c++) {
          const v = numericValue(lookup(r, c));
          if (v !== null) values.push(v);
        }
      const bounds = scaleBounds(rule, values);
      if (!bounds) continue;
      for (let r = rect.r1; r <= rect.r2; r++)
        for (let c = rect.c1; c <= rect.c2; c++) {
          const v = numericValue(lookup(r, c));
          const style = styleAt(r, c);
          if (v === null || !style) continue;
          const t = Math.max(0, Math.min(1, (v - bounds.lo) / (bounds.hi - bounds.lo)));
          if (rule.type === "dataBar") {
            style.dataBar = { fraction: t, color: rule.color };
          } else if (rule.midColor && t <= 0.5) {
            style.fill = interpolateColor(rule.minColor, rule.midColor, t * 2);
          } else if (rule.midColor) {
            style.fill = interpolateColor(rule.midColor, rule.maxColor, (t - 0.5) * 2);
          } else {
            style.fill = interpolateColor(rule.minColor, rule.maxColor, t);
          }
        }
      continue;
    }
    for (let r = rect.r1; r <= rect.r2; r++)
      for (let c = rect.c1; c <= rect.c2; c++) {
        const style = styleAt(r, c);
        if (style && cellMatches(rule, lookup(r, c))) mergeStyle(style, rule.style);
      }
  }
}

// --- main builder -------------------------------------------------------------------

export function buildSheetViewModel(sheet: SheetData, grid: EvaluatedGrid): SheetViewModel {
  const gridSheet = grid[sheet.name] ?? {};
  const cells = new Map<string, DisplayCell>();
  let nRows = 0;
  let nCols = 0;

  const positions = new Map<string, { row: number; col: number }>();
  for (const cell of sheet.cells) {
    let pos;
    try {
      pos = parseRef(cell.ref);
    } catch {
      continue;
    }
    positions.set(cell.ref, pos);
    nRows = Math.max(nRows, pos.row);
    nCols = Math.max(nCols, pos.col);
  }

  const valueByCoord = new Map<string, GridCell>();
  for (const [ref, evaluated] of Object.entries(gridSheet)) {
    try {
      const pos = parseRef(ref);
      valueByCoord.set(`${pos.row},${pos.col}`, evaluated);
      nRows = Math.max(nRows, pos.row);
      nCols = Math.max(nCols, pos.col);
    } catch {
      continue;
    }
  }

  for (const cell of sheet.cells) {
    const pos = positions.get(cell.ref);
    if (!pos) continue;
    const key = `${pos.row},${pos.col}`;
    const evaluated = valueByCoord.get(key);
    const style = baseStyle(cell.style);
    let text = "";
    let error = false;
    if (evaluated && "error" in evaluated) {
      text = evaluated.error; // error codes render verbatim
      error = true;
    } else if (evaluated) {
      text = displayValue(evaluated.value, cell.style?.numberFormat);
    } else if (cell.text !== undefined) {
      text = cell.text;
    }
    cells.set(key, { text, error, style });
  }

  const lookup: ValueLookup = (row, col) => valueByCoord.get(`${row},${col}`);
  const styleAt = (row: number, col: number) => cells.get(`${row},${col}`)?.style;
  applyConditionalFormats(sheet, lookup, styleAt);

  return { name: sheet.name, nRows, nCols, cells };
}

export function buildGridViewModel(payload: WorkbookPayload): GridViewModel {
  try {
    const document = payload.document;
    if (!document || document.version !== "SheetSpec@2" || !Array.isArray(document.sheets)) {
      return { workbookId: payload.workbook_id ?? "?", sheets: [], invalid: "invalid artifact" };
    }
    const sheets = document.sheets.map((s) => buildSheetViewModel(s, payload.grid ?? {}));
    return { workbookId: payload.workbook_id, sheets };
  } catch (exc) {
    return {
      workbookId: payload?.workbook_id ?? "?",
      sheets: [],
      invalid: `invalid artifact: ${String(exc)}`,
    };
  }
}

export function buildBattleViewModels(battle: BattlePayload): {
  left: GridViewModel;
  right: GridViewModel;
} {
  return {
    left: buildGridViewModel(battle.workbook_a),
    right: buildGridViewModel(battle.workbook_b),
  };
}
