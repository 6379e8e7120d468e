// DOM rendering. The result view is driven entirely by the server's
// FilterResult: marked substrings come from mergedSpans over the reported
// needles, and every (token_index, needle) pair is also rendered as a chip
// carrying data attributes, which is what the automated UI tests assert on.

import type { CheckResult, DietDetail, Profile } from "./api.js";
import { ApiError } from "./api.js";
import { mergedSpans, segmentText } from "./highlight.js";
import { t } from "./i18n.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderResultView(root: HTMLElement, result: CheckResult): void {
  root.innerHTML = "";
  const banner = el(
    "p",
    result.verdict === "compliant" ? "verdict verdict-ok" : "verdict verdict-bad",
    result.verdict === "compliant" ? t("compliant_message") : t("violations_message"),
  );
  banner.dataset["verdict"] = result.verdict;
  root.append(banner);

  const byIndex = new Map(result.violations.map((v) => [v.token_index, v]));
  const list = el("ol", "token-list");
  list.start = 0;
  for (const token of result.tokens) {
    const item = el("li", "token");
    item.dataset["tokenIndex"] = String(token.index);
    const violation = byIndex.get(token.index);
    if (!violation) {
      item.append(el("span", "token-text", token.text));
      list.append(item);
      continue;
    }
    item.classList.add("token-violating");
    const textSpan = el("span", "token-text");
    const needles = violation.matches.map((m) => m.needle);
    for (const segment of segmentText(token.text, mergedSpans(token.text, needles))) {
      if (segment.marked) {
        const mark = el("mark", "hl", segment.text);
        textSpan.append(mark);
      } else {
        textSpan.append(document.createTextNode(segment.text));
      }
    }
    item.append(textSpan);
    const chips = el("span", "needle-chips");
    for (const match of violation.matches) {
      const chip = el("span", "needle-chip", match.needle);
      chip.dataset["tokenIndex"] = String(violation.token_index);
      chip.dataset["needle"] = match.needle;
      chip.title = match.diets.join(", ");
      chips.append(chip);
    }
    item.append(chips);
    list.append(item);
  }
  root.append(list);

  if (result.violated_diets.length > 0) {
    const diets = el("p", "violated-diets");
    diets.append(el("span", undefined, t("violated_diets_label") + " "));
    for (const name of result.violated_diets) {
      const badge = el("span", "diet-badge", name);
      badge.dataset["diet"] = name;
      diets.append(badge);
    }
    root.append(diets);
  }
}

export function renderCheckError(root: HTMLElement, error: ApiError): void {
  root.innerHTML = "";
  if (error.code === "no_text_found" || error.code === "empty_transcript") {
    const prompt = el("p", "retake-prompt", t("retake_prompt"));
    prompt.id = "retake-prompt";
    prompt.dataset["code"] = error.code;
    root.append(prompt);
    return;
  }
  if (error.code === "network_error") {
    const retry = el("p", "error-banner", t("network_retry"));
    retry.id = "network-retry";
    root.append(retry);
    return;
  }
  root.append(el("p", "error-banner", error.message));
}

export interface DietHandlers {
  choose(name: string): void;
  remove(name: string): void;
}

export function renderDietsPanel(
  root: HTMLElement,
  catalog: DietDetail[],
  profile: Profile,
  handlers: DietHandlers,
): void {
  root.innerHTML = "";
  root.append(el("h2", undefined, t("diets_heading")));
  const list = el("ul", "diet-list");
  for (const diet of catalog) {
    const chosen = profile.chosen_diets.includes(diet.name);
    const item = el("li", "diet");
    item.dataset["diet"] = diet.name;
    const head = el("div", "diet-head");
    head.append(el("strong", undefined, diet.name));
    if (chosen) head.append(el("span", "chosen-badge", t("chosen_badge")));
    const button = el("button", undefined, chosen ? t("remove_diet") : t("choose_diet"));
    button.type = "button";
    button.addEventListener("click", () =>
      chosen ? handlers.remove(diet.name) : handlers.choose(diet.name),
    );
    head.append(button);
    item.append(head);
    item.append(el("p", "diet-description", diet.description));
    const ingredients = el("details");
    ingredients.append(el("summary", undefined,
      `${diet.forbidden_ingredients.length} forbidden ingredients`));
    ingredients.append(el("p", "diet-ingredients", diet.forbidden_ingredients.join(", ")));
    item.append(ingredients);
    list.append(item);
  }
  root.append(list);
}

export interface CustomHandlers {
  add(text: string): void;
  remove(text: string): void;
}

export function renderCustomPanel(
  root: HTMLElement,
  profile: Profile,
  handlers: CustomHandlers,
): void {
  root.innerHTML = "";
  root.append(el("h2", undefined, t("custom_heading")));
  const list = el("ul", "custom-list");
  for (const text of profile.custom_unwanted_ingredients) {
    const item = el("li", "custom-ingredient");
    item.dataset["ingredient"] = text;
    item.append(el("span", undefined, text));
    const button = el("button", undefined, t("remove_ingredient"));
    button.type = "button";
    button.addEventListener("click", () => handlers.remove(text));
    item.append(button);
    list.append(item);
  }
  root.append(list);
  const form = el("form", "custom-form");
  const input = el("input");
  input.type = "text";
  input.name = "ingredient";
  const add = el("button", undefined, t("add_ingredient"));
  add.type = "submit";
  form.append(input, add);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input.value.trim()) {
      handlers.add(input.value);
      input.value = "";
    }
  });
  root.append(form);
}
