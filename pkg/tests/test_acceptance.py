"""Acceptance suite: one test per acceptance criterion, at stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion. Randomized criteria use fixed seeds so failures reproduce.
"""

import io
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import auth_header, load_label_fixtures, register_and_login
from naive_reference import oracle_filter

from dietcheck.catalog import ROLE_ADMIN, Catalog, Diet, default_seed_path
from dietcheck.cli import EXIT_NO_TEXT, main
from dietcheck.engine import DietRule, check_label, collect_rules, filter_tokens
from dietcheck.errors import EmptyTranscript, NoTextFound
from dietcheck.transcript import IngredientToken
from dietcheck.users import UserProfile

SEVEN_DIETS = ["vegan", "vegetarian", "pesco-vegetarian", "gluten-free",
               "sugar-free", "milk-free", "nut-free"]


def _ok(line: str) -> None:
    print(f"PASS  {line}")


def profile_of(diets=(), custom=()) -> UserProfile:
    return UserProfile(uid="a", name="a", email="a@example.com",
                       chosen_diets=list(diets),
                       custom_unwanted_ingredients=list(custom))


def random_token_list(rng: random.Random, max_tokens: int = 12) -> list[IngredientToken]:
    """Tokens of length 0-40 drawn from a small alphabet."""
    return [
        IngredientToken(i, "".join(rng.choice("abc ") for _ in range(rng.randint(0, 40))))
        for i in range(rng.randint(0, max_tokens))
    ]


def random_rule_pairs(rng: random.Random) -> list[tuple[str, list[str]]]:
    """0-8 diets holding 0-50 needles total, needle length 1-12."""
    diet_count = rng.randint(0, 8)
    pairs = []
    remaining = rng.randint(0, 50)
    for d in range(diet_count):
        take = rng.randint(0, remaining)
        pairs.append((
            f"diet-{d}",
            ["".join(rng.choice("abc") for _ in range(rng.randint(1, 12)))
             for _ in range(take)],
        ))
        remaining -= take
    return pairs


def test_oracle_equivalence_ten_thousand_cases():
    """Automaton-backed filter equals the reference triple loop; 0 mismatches."""
    rng = random.Random(0xD1E7)
    cases = 10_000
    started = time.perf_counter()
    mismatches = 0
    for _ in range(cases):
        tokens = random_token_list(rng)
        pairs = random_rule_pairs(rng)
        expected = oracle_filter([(t.index, t.text) for t in tokens], pairs)
        got = filter_tokens(tokens, [DietRule(d, tuple(n)) for d, n in pairs])
        if got.to_dict() != expected:
            mismatches += 1
    elapsed = time.perf_counter() - started
    assert mismatches == 0, f"{mismatches} mismatching cases"
    assert elapsed < 60.0, f"equivalence sweep took {elapsed:.1f}s (budget 60s)"
    _ok(f"oracle equivalence: {cases} randomized cases, 0 mismatches, {elapsed:.1f}s")


def test_always_compliant_with_empty_profile():
    """No diets and no custom ingredients always verdicts compliant."""
    rng = random.Random(0xBEEF)
    cases = 1_000
    catalog = Catalog.from_seed(default_seed_path())
    empty = profile_of()
    for _ in range(cases):
        tokens = random_token_list(rng)
        result = filter_tokens(tokens, collect_rules(empty, catalog))
        assert result.verdict == "compliant"
        assert result.violations == []
    _ok(f"always-compliant claim: {cases} random token lists, all compliant")


def test_custom_only_verdicts_ignore_catalog():
    """With no chosen diets, results depend only on the custom list."""
    rng = random.Random(0xCAFE)
    cases = 1_000
    empty_catalog = Catalog()
    for _ in range(cases):
        custom = ["".join(rng.choice("abc") for _ in range(rng.randint(1, 8)))
                  for _ in range(rng.randint(0, 6))]
        # Duplicate-free per the profile invariant.
        custom = list(dict.fromkeys(custom))
        profile = profile_of(custom=custom)
        tokens = random_token_list(rng, max_tokens=8)
        noisy_catalog = Catalog()
        for d in range(rng.randint(0, 5)):
            noisy_catalog.upsert_diet(
                Diet(f"noise-{d}", "", ["".join(rng.choice("abc") for _ in range(rng.randint(1, 8)))
                                        for _ in range(rng.randint(1, 10))]),
                role=ROLE_ADMIN,
            )
        with_empty = filter_tokens(tokens, collect_rules(profile, empty_catalog))
        with_noise = filter_tokens(tokens, collect_rules(profile, noisy_catalog))
        assert with_empty.to_dict() == with_noise.to_dict()
    _ok(f"custom-only claim: {cases} cases invariant under arbitrary catalogs")


def test_seed_fidelity():
    """Shipped seed: exactly the seven diets, every ingredient normalized."""
    catalog = Catalog.from_seed(default_seed_path())
    assert catalog.names() == sorted(SEVEN_DIETS)
    for name in catalog.names():
        diet = catalog.get_diet(name)
        seen = set()
        for ingredient in diet.forbidden_ingredients:
            assert ingredient, f"{name}: empty ingredient"
            assert ingredient == ingredient.lower(), f"{name}: {ingredient!r} not lowercase"
            assert ingredient == ingredient.strip(), f"{name}: {ingredient!r} not trimmed"
            assert "," not in ingredient, f"{name}: {ingredient!r} contains a comma"
            assert ingredient not in seen, f"{name}: duplicate {ingredient!r}"
            seen.add(ingredient)
    _ok("seed fidelity: 7 diets named exactly as specified, all entries normalized")


def test_retake_path_through_library_api_and_cli(api_client, monkeypatch, capsys):
    """Empty captures and all-empty tokens map to the retake path everywhere."""
    catalog = Catalog.from_seed(default_seed_path())
    with pytest.raises(NoTextFound):
        check_label([], profile_of(), catalog)
    with pytest.raises(EmptyTranscript):
        check_label(",,,", profile_of(), catalog)

    _, token = register_and_login(api_client, "R", "retake@example.com")
    headers = auth_header(token)
    response = api_client.post("/check", json={"fragments": []}, headers=headers)
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "no_text_found"
    response = api_client.post("/check", json={"text": ",,,"}, headers=headers)
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "empty_transcript"

    monkeypatch.setattr(sys, "stdin", io.StringIO(""))
    assert main(["check"]) == EXIT_NO_TEXT
    monkeypatch.setattr(sys, "stdin", io.StringIO(" , ,, "))
    assert main(["check"]) == EXIT_NO_TEXT
    capsys.readouterr()
    _ok("retake path: NoTextFound/EmptyTranscript via library, API codes, CLI exit 2")


def test_bench_performance_and_agreement():
    """cmd_bench: 200-token label vs 10,000-needle rule set under 50 ms."""
    completed = subprocess.run(
        [sys.executable, "-m", "dietcheck.cli", "bench",
         "--needles", "10000", "--tokens", "200", "--format", "structured"],
        capture_output=True, text=True,
    )
    assert completed.returncode == 0, completed.stderr
    report = json.loads(completed.stdout)
    assert report["needles"] >= 10_000
    assert report["tokens"] == 200
    assert report["equal"] is True, "naive and automaton backends disagree"
    assert report["check_ms"] < 50.0, f"automaton check took {report['check_ms']}ms"
    _ok(f"performance: {report['check_ms']}ms automaton check "
        f"(naive {report['naive_ms']}ms, agree exactly)")


class TestEndToEndFixtures:
    """Hand-built labels with oracle-precomputed expectations, through CLI + API."""

    def _reference_tokens(self, fixture: dict) -> list[str]:
        source = fixture["input"]
        if "text" in source:
            raw = source["text"]
        else:
            raw = ""
            for fragment in source["fragments"]:
                raw = raw + fragment + ","
        return [s.strip() for s in raw.lower().split(",") if s.strip()]

    def _fixture_rules(self, fixture: dict, seed_lists: dict) -> list[tuple[str, list[str]]]:
        profile = fixture["profile"]
        rules = [(n, seed_lists[n]) for n in profile["chosen_diets"] if n in seed_lists]
        rules.append(("Custom", profile["custom_unwanted_ingredients"]))
        return rules

    def test_frozen_expectations_match_oracle(self):
        """The frozen values really are what the reference oracle computes."""
        seed = json.loads(default_seed_path().read_text(encoding="utf-8"))
        seed_lists = {d["name"]: d["forbidden_ingredients"] for d in seed["diets"]}
        fixtures = [f for f in load_label_fixtures() if "expected" in f]
        assert len(fixtures) >= 20
        for fixture in fixtures:
            tokens = self._reference_tokens(fixture)
            expected = oracle_filter(
                list(enumerate(tokens)), self._fixture_rules(fixture, seed_lists)
            )
            assert expected == fixture["expected"], fixture["name"]
        _ok(f"fixture suite: {len(fixtures)} frozen expectations re-derived by oracle")

    def test_fixtures_through_engine(self):
        catalog = Catalog.from_seed(default_seed_path())
        for fixture in load_label_fixtures():
            profile = profile_of(fixture["profile"]["chosen_diets"],
                                 fixture["profile"]["custom_unwanted_ingredients"])
            source = fixture["input"].get("text", fixture["input"].get("fragments"))
            if "expected_error" in fixture:
                with pytest.raises((NoTextFound, EmptyTranscript)) as excinfo:
                    check_label(source, profile, catalog)
                assert excinfo.value.code == fixture["expected_error"], fixture["name"]
            else:
                got = check_label(source, profile, catalog)
                assert got.to_dict() == fixture["expected"], fixture["name"]
        _ok("fixture suite: engine reproduces every frozen expectation")

    def test_fixtures_through_cli_byte_identical(self, tmp_path, monkeypatch, capsys):
        for fixture in load_label_fixtures():
            argv = ["check", "--format", "structured"]
            for diet in fixture["profile"]["chosen_diets"]:
                argv += ["--diet", diet]
            for custom in fixture["profile"]["custom_unwanted_ingredients"]:
                argv += ["--custom", custom]
            stdin_text = ""
            if "fragments" in fixture["input"]:
                fragments_file = tmp_path / f"{fixture['name']}.fragments"
                fragments_file.write_text(
                    "\n".join(fixture["input"]["fragments"]), encoding="utf-8")
                argv += ["--fragments", str(fragments_file)]
            else:
                stdin_text = fixture["input"]["text"]

            outputs = []
            codes = []
            for _ in range(2):
                monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
                codes.append(main(argv))
                outputs.append(capsys.readouterr().out)
            assert outputs[0] == outputs[1], f"{fixture['name']}: CLI output not byte-stable"
            assert codes[0] == codes[1]

            if "expected_error" in fixture:
                assert codes[0] == EXIT_NO_TEXT, fixture["name"]
                assert json.loads(outputs[0])["error"]["code"] == fixture["expected_error"]
            else:
                expected_exit = 3 if fixture["expected"]["violations"] else 0
                assert codes[0] == expected_exit, fixture["name"]
                canonical = json.dumps(fixture["expected"], ensure_ascii=False, indent=2) + "\n"
                assert outputs[0] == canonical, f"{fixture['name']}: CLI bytes differ from canonical"
        _ok("fixture suite: CLI structured output byte-identical across runs")

    def test_fixtures_through_api_byte_identical(self, api_client):
        _, token = register_and_login(api_client, "Fix", "fixtures@example.com")
        headers = auth_header(token)
        applied_diets: list[str] = []
        applied_custom: list[str] = []
        for fixture in load_label_fixtures():
            for diet in applied_diets:
                api_client.delete(f"/profile/diets/{diet}", headers=headers)
            for custom in applied_custom:
                api_client.delete(f"/profile/ingredients/{custom}", headers=headers)
            applied_diets = list(fixture["profile"]["chosen_diets"])
            applied_custom = list(fixture["profile"]["custom_unwanted_ingredients"])
            for diet in applied_diets:
                assert api_client.post("/profile/diets", json={"name": diet},
                                       headers=headers).status_code == 200
            for custom in applied_custom:
                assert api_client.post("/profile/ingredients", json={"text": custom},
                                       headers=headers).status_code == 200

            payload = dict(fixture["input"])
            first = api_client.post("/check", json=payload, headers=headers)
            second = api_client.post("/check", json=payload, headers=headers)
            assert first.content == second.content, f"{fixture['name']}: API not byte-stable"
            if "expected_error" in fixture:
                assert first.status_code == 422, fixture["name"]
                assert first.json()["error"]["code"] == fixture["expected_error"]
            else:
                assert first.status_code == 200, (fixture["name"], first.text)
                assert first.json() == fixture["expected"], fixture["name"]
        _ok("fixture suite: API responses byte-identical across runs, equal to frozen values")


def test_monotonicity_of_diet_selection():
    """Adding a diet never shrinks the violation set; removing never grows it."""
    rng = random.Random(0xFACE)
    cases = 1_000

    def findings(result) -> set:
        return {(v.token_index, m.needle, d)
                for v in result.violations for m in v.matches for d in m.diets}

    for _ in range(cases):
        catalog = Catalog()
        diet_names = []
        for d in range(rng.randint(1, 5)):
            name = f"diet-{d}"
            catalog.upsert_diet(
                Diet(name, "", list(dict.fromkeys(
                    "".join(rng.choice("abc") for _ in range(rng.randint(1, 8)))
                    for _ in range(rng.randint(0, 10))))),
                role=ROLE_ADMIN,
            )
            diet_names.append(name)
        chosen = [n for n in diet_names if rng.random() < 0.5]
        extra_candidates = [n for n in diet_names if n not in chosen]
        custom = list(dict.fromkeys(
            "".join(rng.choice("abc") for _ in range(rng.randint(1, 6)))
            for _ in range(rng.randint(0, 3))))
        tokens = random_token_list(rng, max_tokens=8)

        base = filter_tokens(tokens, collect_rules(profile_of(chosen, custom), catalog))
        if extra_candidates:
            added = chosen + [rng.choice(extra_candidates)]
            grown = filter_tokens(tokens, collect_rules(profile_of(added, custom), catalog))
            assert findings(base) <= findings(grown)
            assert set(base.violated_diets) <= set(grown.violated_diets)
        if chosen:
            removed = [n for n in chosen if n != chosen[-1]]
            shrunk = filter_tokens(tokens, collect_rules(profile_of(removed, custom), catalog))
            assert findings(shrunk) <= findings(base)
        stripped = filter_tokens(tokens, collect_rules(profile_of(), catalog))
        assert stripped.verdict == "compliant"
    _ok(f"monotonicity: {cases} random profiles, no violation ever lost by adding a diet")
