// Highlight-span computation. Spans are derived ONLY from the server's
// violation data (token index + needle); the UI performs no matching of its
// own, so a rendered verdict can never diverge from the engine verdict.

import type { CheckResult } from "./api.js";

export interface HighlightPair {
  tokenIndex: number;
  needle: string;
}

export interface Segment {
  text: string;
  marked: boolean;
}

/** The exact (token_index, needle) pairs the server reported. */
export function highlightPairs(result: CheckResult): HighlightPair[] {
  const pairs: HighlightPair[] = [];
  for (const violation of result.violations) {
    for (const match of violation.matches) {
      pairs.push({ tokenIndex: violation.token_index, needle: match.needle });
    }
  }
  return pairs;
}

/** [start, end) positions of every occurrence of one needle. */
export function needleOccurrences(text: string, needle: string): Array<[number, number]> {
  const spans: Array<[number, number]> = [];
  if (!needle) return spans;
  let from = 0;
  for (;;) {
    const at = text.indexOf(needle, from);
    if (at === -1) break;
    spans.push([at, at + needle.length]);
    from = at + 1;
  }
  return spans;
}

/** Union of all needle occurrences, merged so marks never nest or overlap. */
export function mergedSpans(text: string, needles: string[]): Array<[number, number]> {
  const spans: Array<[number, number]> = [];
  for (const needle of needles) {
    spans.push(...needleOccurrences(text, needle));
  }
  spans.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const merged: Array<[number, number]> = [];
  for (const [start, end] of spans) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1]) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, end]);
    }
  }
  return merged;
}

/** Split token text into plain and marked segments for rendering. */
export function segmentText(text: string, spans: Array<[number, number]>): Segment[] {
  const segments: Segment[] = [];
  let cursor = 0;
  for (const [start, end] of spans) {
    if (start > cursor) segments.push({ text: text.slice(cursor, start), marked: false });
    segments.push({ text: text.slice(start, end), marked: true });
    cursor = end;
  }
  if (cursor < text.length) segments.push({ text: text.slice(cursor), marked: false });
  return segments;
}
