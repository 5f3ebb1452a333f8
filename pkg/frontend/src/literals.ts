// Display-side handling of the wire text form `pred(a,b)` / `not pred(a,b)`.
// Parsing here is for rendering only; all reasoning stays on the server.

export interface LiteralView {
  raw: string;
  positive: boolean;
  predicate: string;
  args: string[];
}

const LITERAL_RE = /^\s*(not\s+)?([A-Za-z0-9_-]+)\s*(?:\(([^()]*)\))?\s*$/;

export function parseLiteral(text: string): LiteralView {
  const match = LITERAL_RE.exec(text);
  if (!match) {
    throw new Error(`bad literal text: ${text}`);
  }
  const args = match[3]
    ? match[3].split(",").map((part) => part.trim()).filter((part) => part.length > 0)
    : [];
  return { raw: text, positive: !match[1], predicate: match[2], args };
}

/** Constants (non-variable arguments) mentioned by a literal. */
export function constantsOf(literal: string): string[] {
  return parseLiteral(literal).args.filter((arg) => !arg.startsWith("?"));
}

/** The occupant of each position according to at(obj,pos) atoms. */
export function occupants(atoms: string[]): Map<string, string> {
  const map = new Map<string, string>();
  for (const atom of atoms) {
    const lit = parseLiteral(atom);
    if (lit.predicate === "at" && lit.positive && lit.args.length === 2) {
      map.set(lit.args[1], lit.args[0]);
    }
  }
  return map;
}

/** Object colors from color(obj,c) atoms. */
export function colors(atoms: string[]): Map<string, string> {
  const map = new Map<string, string>();
  for (const atom of atoms) {
    const lit = parseLiteral(atom);
    if (lit.predicate === "color" && lit.positive && lit.args.length === 2) {
      map.set(lit.args[0], lit.args[1]);
    }
  }
  return map;
}
