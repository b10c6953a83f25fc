/**
 * Number-format rendering for the supported subset: thousands separators,
 * fixed decimals, percent, currency prefix, parentheses-negative sections.
 * Anything unrecognized falls back to a plain value display.
 */

const SECTION_RE = /^(\$)?([#,0]*)(?:\.((?:0|#)+))?(%)?$/;

interface ParsedSection {
  currency: boolean;
  grouping: boolean;
  decimals: number;
  percent: boolean;
  parens: boolean;
}

function parseSection(section: string, parens: boolean): ParsedSection | null {
  const m = SECTION_RE.exec(section);
  if (!m) return null;
  return {
    currency: m[1] === "$",
    grouping: (m[2] ?? "").includes(","),
    decimals: m[3] ? m[3].length : 0,
    percent: m[4] === "%",
    parens,
  };
}

function parseFormat(format: string): { positive: ParsedSection; negative: ParsedSection } | null {
  const sections = format.split(";");
  if (sections.length > 2) return null;
  const positive = parseSection(sections[0], false);
  if (!positive) return null;
  let negative: ParsedSection | null = { ...positive, parens: false };
  if (sections.length === 2) {
    let neg = sections[1];
    let parens = false;
    if (neg.startsWith("(") && neg.endsWith(")")) {
      parens = true;
      neg = neg.slice(1, -1);
    }
    negative = parseSection(neg, parens);
    if (!negative) return null;
  }
  return { positive, negative };
}

function groupDigits(integerPart: string): string {
  let out = "";
  for (let i = 0; i < integerPart.length; i++) {
    const fromEnd = integerPart.length - i;
    out += integerPart[i];
    if (fromEnd > 1 && (fromEnd - 1) % 3 === 0) out += ",";
  }
  return out;
}

function renderSection(value: number, section: ParsedSection): string {
  let v = Math.abs(value);
  if (section.percent) v *= 100;
  let text = v.toFixed(section.decimals);
  if (section.grouping) {
    const [intPart, fracPart] = text.split(".");
    text = groupDigits(intPart) + (fracPart !== undefined ? "." + fracPart : "");
  }
  if (section.currency) text = "$" + text;
  if (section.percent) text += "%";
  if (value < 0) {
    text = section.parens ? `(${text})` : `-${text}`;
  }
  return text;
}

/** Plain display for unformatted or unformattable values. */
export function rawDisplay(value: number | string | boolean | null): string {
  if (value === null) return "";
  if (typeof value === "boolean") return value ? "TRUE" : "FALSE";
  if (typeof value === "number") {
    if (Number.isInteger(value) && Math.abs(value) < 1e15) return String(value);
    return String(value);
  }
  return value;
}

export function formatNumber(value: number, format?: string): string {
  if (!format) return rawDisplay(value);
  const parsed = parseFormat(format);
  if (!parsed) return rawDisplay(value); // unknown format string
  return renderSection(value, value < 0 ? parsed.negative : parsed.positive);
}

/** Format any evaluated value; number formats only apply to numbers. */
export function displayValue(
  value: number | string | boolean | null,
  format?: string,
): string {
  if (typeof value === "number") return formatNumber(value, format);
  return rawDisplay(value);
}
