"""Filter engine: find every forbidden-ingredient occurrence in a token list.

The semantics are fixed by a reference scan (``filter_tokens_naive``): for
each token, walk the rules in order and each rule's needles in order; a
needle matches when it is a contiguous substring of the token text. All
matching needles are reported per token, diets are deduplicated in
first-encounter order, and the overall verdict is compliant exactly when no
token matched anything.

``filter_tokens`` produces identical results through a multi-pattern
substring automaton (Aho-Corasick), which turns the per-token cost from
O(total needle length) into O(token length + matches). The automaton scans
the token once; matched needles are then replayed in (rule, needle) scan
order so orderings come out exactly as the reference scan produces them.
"""

from __future__ import annotations

import json
import threading
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

from .catalog import CUSTOM_DIET, Catalog
from .errors import DietNotFound
from .transcript import IngredientToken, join_fragments, tokenize

if TYPE_CHECKING:
    from .capture import CaptureRequest, OcrAdapter
    from .users import UserProfile

VERDICT_COMPLIANT = "compliant"
VERDICT_VIOLATIONS = "violations-found"


@dataclass(frozen=True)
class DietRule:
    """One diet's needles, or the reserved Custom rule with personal needles."""

    diet: str
    needles: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "needles", tuple(self.needles))


@dataclass
class NeedleMatch:
    """One matched needle and the diets that forbid it, first-encounter order."""

    needle: str
    diets: list[str]

    def to_dict(self) -> dict:
        return {"needle": self.needle, "diets": list(self.diets)}


@dataclass
class Violation:
    """All needle matches found inside one ingredient token."""

    token_index: int
    token_text: str
    matches: list[NeedleMatch] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "token_index": self.token_index,
            "token_text": self.token_text,
            "matches": [m.to_dict() for m in self.matches],
        }


@dataclass
class FilterResult:
    """The verdict plus everything a client needs to highlight it."""

    verdict: str
    tokens: list[IngredientToken]
    violations: list[Violation]
    violated_diets: list[str]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "tokens": [{"index": t.index, "text": t.text} for t in self.tokens],
            "violations": [v.to_dict() for v in self.violations],
            "violated_diets": list(self.violated_diets),
        }

    def to_json(self) -> str:
        """Canonical serialization: fixed key order, byte-stable across runs."""
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def collect_rules(profile: "UserProfile", catalog: Catalog) -> list[DietRule]:
    """Assemble the active rule set for a profile.

    One rule per chosen diet that exists in the catalog (dangling names are
    skipped — a deleted diet simply contributes nothing), in chosen order,
    followed by exactly one Custom rule carrying the user's own unwanted
    ingredients. The Custom rule is present even when empty.
    """
    rules: list[DietRule] = []
    for name in profile.chosen_diets:
        try:
            diet = catalog.get_diet(name)
        except DietNotFound:
            continue
        rules.append(DietRule(diet.name, tuple(diet.forbidden_ingredients)))
    rules.append(DietRule(CUSTOM_DIET, tuple(profile.custom_unwanted_ingredients)))
    return rules


class SubstringMatcher:
    """Aho-Corasick automaton over the union of all needles in a rule set.

    Querying a token returns exactly the needles that are substrings of it.
    Alongside the automaton, every unique needle keeps its list of
    (rule position, needle position, diet) occurrences so results can be
    replayed in reference-scan order. The built matcher is immutable and
    safe to share across threads.
    """

    def __init__(self, rules: Sequence[DietRule]) -> None:
        self.rules = tuple(rules)
        needle_ids: dict[str, int] = {}
        occurrences: list[list[tuple[int, int, str, str]]] = []
        empty_ids: list[int] = []
        for rule_idx, rule in enumerate(self.rules):
            for needle_idx, needle in enumerate(rule.needles):
                nid = needle_ids.get(needle)
                if nid is None:
                    nid = len(occurrences)
                    needle_ids[needle] = nid
                    occurrences.append([])
                    if not needle:
                        empty_ids.append(nid)
                occurrences[nid].append((rule_idx, needle_idx, rule.diet, needle))
        self._needles = list(needle_ids)
        self._occurrences = occurrences
        # Degenerate but well-defined: an empty needle is a substring of anything.
        self._always_matched = tuple(empty_ids)
        self._build_automaton(needle_ids)

    def _build_automaton(self, needle_ids: dict[str, int]) -> None:
        children: list[dict[str, int]] = [{}]
        out: list[list[int]] = [[]]
        for needle, nid in needle_ids.items():
            node = 0
            for ch in needle:
                nxt = children[node].get(ch)
                if nxt is None:
                    children.append({})
                    out.append([])
                    nxt = len(children) - 1
                    children[node][ch] = nxt
                node = nxt
            if needle:
                out[node].append(nid)
        fail = [0] * len(children)
        queue: deque[int] = deque(children[0].values())
        while queue:
            node = queue.popleft()
            for ch, child in children[node].items():
                f = fail[node]
                while f and ch not in children[f]:
                    f = fail[f]
                candidate = children[f].get(ch, 0)
                fail[child] = candidate if candidate != child else 0
                out[child].extend(out[fail[child]])
                queue.append(child)
        self._children = children
        self._fail = fail
        self._out = out

    @property
    def needle_count(self) -> int:
        return len(self._needles)

    def find(self, text: str) -> set[str]:
        """Unique needles occurring as contiguous substrings of ``text``."""
        return {self._needles[nid] for nid in self._find_ids(text)}

    def _find_ids(self, text: str) -> set[int]:
        found: set[int] = set(self._always_matched)
        children = self._children
        fail = self._fail
        out = self._out
        node = 0
        for ch in text:
            while node and ch not in children[node]:
                node = fail[node]
            node = children[node].get(ch, 0)
            if out[node]:
                found.update(out[node])
        return found


class MatcherCache:
    """Small LRU of built matchers, keyed by rule-set content.

    Content keying subsumes (catalog version, profile revision) keying: any
    change to either produces a different rule set and therefore a different
    key, so a stale matcher can never be served.
    """

    def __init__(self, maxsize: int = 64) -> None:
        self.maxsize = maxsize
        self._entries: OrderedDict[tuple, SubstringMatcher] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, rules: Sequence[DietRule]) -> SubstringMatcher:
        key = tuple((rule.diet, rule.needles) for rule in rules)
        with self._lock:
            matcher = self._entries.get(key)
            if matcher is not None:
                self._entries.move_to_end(key)
                return matcher
        matcher = SubstringMatcher(rules)
        with self._lock:
            self._entries[key] = matcher
            while len(self._entries) > self.maxsize:
                self._entries.popitem(last=False)
        return matcher


def _finalize(tokens: Sequence[IngredientToken],
              violations: list[Violation],
              violated_diets: list[str]) -> FilterResult:
    verdict = VERDICT_VIOLATIONS if violations else VERDICT_COMPLIANT
    return FilterResult(
        verdict=verdict,
        tokens=list(tokens),
        violations=violations,
        violated_diets=violated_diets,
    )


def filter_tokens_naive(tokens: Sequence[IngredientToken],
                        rules: Sequence[DietRule]) -> FilterResult:
    """Reference scan: token-major, rule-major, needle-major substring test.

    Linear in tokens x total needles. Kept as the ground truth the automaton
    path is checked against, and as the baseline for benchmarking.
    """
    violations: list[Violation] = []
    violated_diets: list[str] = []
    for token in tokens:
        text = token.text
        needle_order: list[str] = []
        needle_diets: dict[str, list[str]] = {}
        for rule in rules:
            for needle in rule.needles:
                if needle in text:
                    diets = needle_diets.get(needle)
                    if diets is None:
                        diets = []
                        needle_diets[needle] = diets
                        needle_order.append(needle)
                    if rule.diet not in diets:
                        diets.append(rule.diet)
                    if rule.diet not in violated_diets:
                        violated_diets.append(rule.diet)
        if needle_order:
            violations.append(Violation(
                token_index=token.index,
                token_text=text,
                matches=[NeedleMatch(n, needle_diets[n]) for n in needle_order],
            ))
    return _finalize(tokens, violations, violated_diets)


def filter_tokens(tokens: Sequence[IngredientToken],
                  rules: Sequence[DietRule],
                  *,
                  matcher: SubstringMatcher | None = None) -> FilterResult:
    """Automaton-backed filter, result-identical to ``filter_tokens_naive``.

    Pass a prebuilt (or cached) ``matcher`` for the same rules to amortize
    automaton construction across checks.
    """
    if matcher is None:
        matcher = SubstringMatcher(rules)
    violations: list[Violation] = []
    violated_diets: list[str] = []
    for token in tokens:
        matched_ids = matcher._find_ids(token.text)
        if not matched_ids:
            continue
        occurrences: list[tuple[int, int, str, str]] = []
        for nid in matched_ids:
            occurrences.extend(matcher._occurrences[nid])
        occurrences.sort(key=lambda occ: (occ[0], occ[1]))
        needle_order: list[str] = []
        needle_diets: dict[str, list[str]] = {}
        for _rule_idx, _needle_idx, diet, needle in occurrences:
            diets = needle_diets.get(needle)
            if diets is None:
                diets = []
                needle_diets[needle] = diets
                needle_order.append(needle)
            if diet not in diets:
                diets.append(diet)
            if diet not in violated_diets:
                violated_diets.append(diet)
        violations.append(Violation(
            token_index=token.index,
            token_text=token.text,
            matches=[NeedleMatch(n, needle_diets[n]) for n in needle_order],
        ))
    return _finalize(tokens, violations, violated_diets)


def check_label(source: "str | Sequence | CaptureRequest",
                profile: "UserProfile",
                catalog: Catalog,
                *,
                adapter: "OcrAdapter | None" = None,
                matcher_cache: MatcherCache | None = None) -> FilterResult:
    """Single entry point: capture -> transcript -> tokens -> rules -> filter.

    ``source`` may be a raw transcript string, an ordered fragment list, or a
    ``CaptureRequest`` (required for image sources). Raises ``NoTextFound``
    when capture yields no non-empty fragment and ``EmptyTranscript`` when
    tokenization leaves nothing — both map to the retake-photo path.
    """
    from .capture import as_capture_request, extract_fragments

    request = as_capture_request(source)
    outcome = extract_fragments(request, adapter=adapter)
    tokens = tokenize(join_fragments(outcome.fragments))
    rules = collect_rules(profile, catalog)
    matcher = matcher_cache.get(rules) if matcher_cache is not None else None
    return filter_tokens(tokens, rules, matcher=matcher)
