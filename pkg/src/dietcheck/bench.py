"""Benchmark harness: naive scan vs automaton on generated corpora.

Generates a label and a large combined rule set from a seeded RNG, runs both
filter backends, asserts their results are identical, and reports wall
times. The automaton time is the per-check cost with a prebuilt matcher —
the steady state of a service that caches matchers per rule set — while the
one-time build cost is reported separately.
"""

from __future__ import annotations

import random
import time

from .engine import DietRule, SubstringMatcher, filter_tokens, filter_tokens_naive
from .transcript import IngredientToken

_NEEDLE_ALPHABET = "abcdefghijklmnop"
_TOKEN_ALPHABET = "abcdefghijklmnop "


def _random_needle(rng: random.Random, min_len: int, max_len: int) -> str:
    length = rng.randint(min_len, max_len)
    return "".join(rng.choice(_NEEDLE_ALPHABET) for _ in range(length))


def _random_token_text(rng: random.Random, max_len: int) -> str:
    length = rng.randint(3, max_len)
    text = "".join(rng.choice(_TOKEN_ALPHABET) for _ in range(length)).strip()
    return text or "x"


def generate_corpus(rng: random.Random,
                    needle_count: int,
                    token_count: int,
                    diet_count: int,
                    *,
                    max_token_len: int = 40,
                    needle_len: tuple[int, int] = (3, 12),
                    plant_rate: float = 0.3) -> tuple[list[IngredientToken], list[DietRule]]:
    """Random tokens and rules; a fraction of tokens gets a needle planted.

    Needle lengths mimic real ingredient terms (3+ characters); shorter
    needles over a small alphabet degenerate into every-token matches and
    measure match-set copying instead of scanning.
    """
    pool = [_random_needle(rng, *needle_len) for _ in range(needle_count)]
    per_diet = max(1, needle_count // max(1, diet_count))
    rules: list[DietRule] = []
    for i in range(diet_count):
        chunk = pool[i * per_diet:(i + 1) * per_diet]
        if i == diet_count - 1:
            chunk = pool[i * per_diet:]
        if chunk:
            rules.append(DietRule(f"diet-{i}", tuple(chunk)))
    rules.append(DietRule("Custom", tuple(rng.sample(pool, min(3, len(pool))))))

    tokens: list[IngredientToken] = []
    for index in range(token_count):
        text = _random_token_text(rng, max_token_len)
        if pool and rng.random() < plant_rate:
            needle = rng.choice(pool)
            cut = rng.randint(0, len(text))
            text = text[:cut] + needle + text[cut:]
        tokens.append(IngredientToken(index=index, text=text))
    return tokens, rules


def run_bench(needle_count: int = 10_000,
              token_count: int = 200,
              diet_count: int = 8,
              *,
              rng_seed: int = 1234,
              repeat: int = 5) -> dict:
    """Run both backends on one generated corpus and time them.

    Returns a report dict with millisecond timings, the verdict, and
    ``equal`` — whether the two backends produced identical results.
    """
    rng = random.Random(rng_seed)
    tokens, rules = generate_corpus(rng, needle_count, token_count, diet_count)
    total_needles = sum(len(rule.needles) for rule in rules)

    started = time.perf_counter()
    matcher = SubstringMatcher(rules)
    build_ms = (time.perf_counter() - started) * 1000.0

    check_ms = float("inf")
    for _ in range(max(1, repeat)):
        started = time.perf_counter()
        automaton_result = filter_tokens(tokens, rules, matcher=matcher)
        check_ms = min(check_ms, (time.perf_counter() - started) * 1000.0)

    started = time.perf_counter()
    naive_result = filter_tokens_naive(tokens, rules)
    naive_ms = (time.perf_counter() - started) * 1000.0

    equal = automaton_result.to_dict() == naive_result.to_dict()
    return {
        "needles": total_needles,
        "unique_needles": matcher.needle_count,
        "tokens": len(tokens),
        "rules": len(rules),
        "rng_seed": rng_seed,
        "build_ms": round(build_ms, 3),
        "check_ms": round(check_ms, 3),
        "naive_ms": round(naive_ms, 3),
        "speedup": round(naive_ms / check_ms, 1) if check_ms > 0 else None,
        "verdict": automaton_result.verdict,
        "violation_count": len(automaton_result.violations),
        "equal": equal,
    }
