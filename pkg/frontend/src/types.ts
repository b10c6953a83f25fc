/** Payload shapes served by the arena HTTP API. */

export interface CellStyleData {
  fill?: string;
  fontColor?: string;
  fontWeight?: "normal" | "bold";
  fontSize?: number;
  numberFormat?: string;
  border?: string | { style: string; color?: string };
}

export interface CellData {
  ref: string;
  text?: string;
  number?: number;
  formula?: string;
  style?: CellStyleData;
}

export type ConditionalFormatData =
  | {
      type: "cellIs";
      ref: string;
      operator:
        | "equal"
        | "notEqual"
        | "greaterThan"
        | "lessThan"
        | "greaterThanOrEqual"
        | "lessThanOrEqual";
      value: number | string;
      style: CellStyleData;
    }
  | { type: "cellIsBetween"; ref: string; min: number; max: number; style: CellStyleData }
  | { type: "expression"; ref: string; formula: string; style: CellStyleData }
  | { type: "containsText"; ref: string; text: string; style: CellStyleData }
  | {
      type: "colorScale";
      ref: string;
      minColor: string;
      midColor?: string;
      maxColor: string;
      minType?: "auto" | "percentile" | "number";
      minValue?: number;
      maxType?: "auto" | "percentile" | "number";
      maxValue?: number;
    }
  | {
      type: "dataBar";
      ref: string;
      color: string;
      minType?: "auto" | "percentile" | "number";
      minValue?: number;
      maxType?: "auto" | "percentile" | "number";
      maxValue?: number;
    };

export interface SheetData {
  name: string;
  cells: CellData[];
  namedRanges?: { name: string; ref: string }[];
  conditionalFormats?: ConditionalFormatData[];
}

export interface WorkbookDocument {
  version: string;
  sheets: SheetData[];
  outputs?: { name: string; sheet: string; ref: string; metric: string }[];
  rules?: { disallowVolatile?: boolean; allowedFunctions?: string[] };
}

/** Server-evaluated cell: a value or an error code, never both. */
export type GridCell = { value: number | string | boolean | null } | { error: string };

/** sheet name -> A1 address -> evaluated cell */
export type EvaluatedGrid = Record<string, Record<string, GridCell>>;

export interface WorkbookPayload {
  workbook_id: string;
  document: WorkbookDocument;
  grid: EvaluatedGrid;
}

export interface BattlePayload {
  battle_id: string;
  prompt_id: string;
  workbook_a: WorkbookPayload;
  workbook_b: WorkbookPayload;
}

export interface SubmissionResponse {
  prompt_id: string;
  category: string | null;
  battles: BattlePayload[];
  warning?: string;
}

export interface VoteAck {
  ok: boolean;
  battle_id: string;
  outcome: string;
  model_a: string;
  model_b: string;
}

export interface LeaderboardRow {
  model: string;
  elo: number;
  n_votes: number;
  rank: number;
  adjusted_elo?: number;
  delta_elo?: number;
  delta_rank?: number;
}

export interface LeaderboardResponse {
  rows: LeaderboardRow[];
  unranked: { model: string; n_votes: number }[];
  min_votes: number;
  reason?: string;
}

export type VoteOutcome = "A_WINS" | "B_WINS" | "TIE" | "BOTH_BAD";
