import { describe, expect, it } from "vitest";

import type { CheckResult } from "../src/api.js";
import {
  highlightPairs,
  mergedSpans,
  needleOccurrences,
  segmentText,
} from "../src/highlight.js";

describe("needleOccurrences", () => {
  it("finds a single occurrence", () => {
    expect(needleOccurrences("wheat flour", "wheat")).toEqual([[0, 5]]);
  });

  it("finds repeated occurrences", () => {
    expect(needleOccurrences("nut and nut", "nut")).toEqual([[0, 3], [8, 11]]);
  });

  it("finds overlapping occurrences of a periodic needle", () => {
    expect(needleOccurrences("aaa", "aa")).toEqual([[0, 2], [1, 3]]);
  });

  it("ignores the empty needle", () => {
    expect(needleOccurrences("abc", "")).toEqual([]);
  });
});

describe("mergedSpans", () => {
  it("merges nested needles into one span", () => {
    expect(mergedSpans("nutmeg", ["nut", "nutmeg"])).toEqual([[0, 6]]);
  });

  it("keeps disjoint spans apart", () => {
    expect(mergedSpans("milk and soy", ["milk", "soy"])).toEqual([[0, 4], [9, 12]]);
  });

  it("merges chained overlaps", () => {
    expect(mergedSpans("high fructose corn syrup",
      ["high fructose corn syrup", "corn syrup", "fructose"])).toEqual([[0, 24]]);
  });
});

describe("segmentText", () => {
  it("round-trips the token text", () => {
    const text = "soy milk powder";
    const segments = segmentText(text, mergedSpans(text, ["milk", "soy"]));
    expect(segments.map((s) => s.text).join("")).toBe(text);
    expect(segments.filter((s) => s.marked).map((s) => s.text)).toEqual(["soy", "milk"]);
  });

  it("handles a fully marked token", () => {
    expect(segmentText("milk", [[0, 4]])).toEqual([{ text: "milk", marked: true }]);
  });

  it("handles no spans", () => {
    expect(segmentText("water", [])).toEqual([{ text: "water", marked: false }]);
  });
});

describe("highlightPairs", () => {
  it("lists exactly the server-reported pairs in order", () => {
    const result: CheckResult = {
      verdict: "violations-found",
      tokens: [
        { index: 0, text: "soy milk" },
        { index: 1, text: "salt" },
      ],
      violations: [
        {
          token_index: 0,
          token_text: "soy milk",
          matches: [
            { needle: "milk", diets: ["milk-free"] },
            { needle: "soy", diets: ["Custom"] },
          ],
        },
      ],
      violated_diets: ["milk-free", "Custom"],
    };
    expect(highlightPairs(result)).toEqual([
      { tokenIndex: 0, needle: "milk" },
      { tokenIndex: 0, needle: "soy" },
    ]);
  });
});
