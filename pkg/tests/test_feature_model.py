"""Feature-diagram DSL: parsing, validity rules, enumeration, expressions."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmiforge import feature_model as fmod
from hmiforge.feature_model import (
    Configuration,
    count_configurations,
    enumerate_configurations,
    eval_feature_expr,
    is_valid_configuration,
    parse_feature_expr,
    parse_feature_model,
)

from conftest import parse_fm
from oracle import all_valid_subsets
from randgen import random_feature_model


def cfg(*names):
    return Configuration(frozenset(names))


class TestParsing:
    def test_m1_structure(self, m1):
        assert m1.name == "M1" and m1.root == "A"
        a = m1.features["A"]
        assert [(g.kind, g.children) for g in a.groups] == [
            ("mandatory", ("B",)),
            ("optional", ("C",)),
        ]
        assert set(m1.features) == {"A", "B", "C"}

    def test_duplicate_feature(self):
        fm, diags = parse_feature_model(
            "featuremodel X { root A feature A { mandatory B } feature A { } }"
        )
        assert fm is None
        assert [d.code for d in diags] == ["E_DUPLICATE_FEATURE"]

    def test_empty_input(self):
        fm, diags = parse_feature_model("")
        assert fm is None and diags[0].code == "E_SYNTAX"

    def test_multiple_parents(self):
        fm, diags = parse_feature_model(
            "featuremodel X { root A "
            "feature A { mandatory B mandatory C } "
            "feature B { optional D } feature C { optional D } }"
        )
        assert fm is None
        assert "E_MULTIPLE_PARENTS" in {d.code for d in diags}

    def test_cycle(self):
        fm, diags = parse_feature_model(
            "featuremodel X { root A feature A { mandatory B } "
            "feature C { mandatory D } feature D { mandatory C } }"
        )
        assert fm is None
        assert "E_CYCLE" in {d.code for d in diags}

    def test_disconnected_second_root(self):
        fm, diags = parse_feature_model(
            "featuremodel X { root A feature B { mandatory C } }"
        )
        assert fm is None
        assert "E_UNKNOWN_ROOT" in {d.code for d in diags}

    def test_constraint_unknown_feature(self):
        fm, diags = parse_feature_model(
            "featuremodel X { root A feature A { optional B } B requires Ghost }"
        )
        assert fm is None
        assert "E_UNKNOWN_FEATURE" in {d.code for d in diags}

    def test_xor_needs_two(self):
        fm, diags = parse_feature_model(
            "featuremodel X { root A feature A { xor { B } } }"
        )
        assert fm is None and diags[0].code == "E_SYNTAX"

    def test_spans_recorded(self):
        text = "featuremodel M1 {\n  root A\n  feature A { mandatory B }\n}\n"
        fm, _ = parse_feature_model(text, "m1.fm")
        assert fm.features["A"].span.start_line == 3
        assert fm.features["A"].span.file == "m1.fm"


class TestConfigurationFile:
    def test_parse(self):
        c, diags = fmod.parse_configuration(
            "configuration Base of Comfort { select Car, Climate }"
        )
        assert not diags
        assert c.name == "Base" and c.for_model == "Comfort"
        assert c.selected == frozenset({"Car", "Climate"})

    def test_syntax_error(self):
        c, diags = fmod.parse_configuration("configuration { }")
        assert c is None and diags[0].code == "E_SYNTAX"


class TestValidity:
    def test_m1_valid(self, m1):
        assert is_valid_configuration(m1, cfg("A", "B")).valid

    def test_m1_mandatory_missing(self, m1):
        verdict = is_valid_configuration(m1, cfg("A", "C"))
        assert not verdict.valid
        assert [v.code for v in verdict.violations] == ["E_MANDATORY_MISSING"]
        assert "B" in verdict.violations[0].message

    def test_m1_unknown_feature(self, m1):
        verdict = is_valid_configuration(m1, cfg("A", "B", "Q"))
        assert not verdict.valid
        assert [v.code for v in verdict.violations] == ["E_UNKNOWN_FEATURE"]

    def test_root_not_selected(self, m1):
        verdict = is_valid_configuration(m1, cfg())
        assert {v.code for v in verdict.violations} == {"E_ROOT_NOT_SELECTED"}

    def test_orphan_selection(self, m3):
        verdict = is_valid_configuration(m3, cfg("C"))
        codes = {v.code for v in verdict.violations}
        assert "E_ORPHAN_SELECTION" in codes

    def test_xor_violation(self, m2):
        assert not is_valid_configuration(m2, cfg("A", "X", "Y")).valid
        assert not is_valid_configuration(m2, cfg("A")).valid
        assert is_valid_configuration(m2, cfg("A", "Y")).valid

    def test_requires_excludes(self, m3):
        verdict = is_valid_configuration(m3, cfg("A", "C"))
        assert "E_REQUIRES_VIOLATION" in {v.code for v in verdict.violations}
        fm = parse_fm(
            "featuremodel X { root A feature A { optional B optional C } B excludes C }"
        )
        verdict = is_valid_configuration(fm, cfg("A", "B", "C"))
        assert "E_EXCLUDES_VIOLATION" in {v.code for v in verdict.violations}


class TestEnumeration:
    def test_m1(self, m1):
        configs = [sorted(c.selected) for c in enumerate_configurations(m1)]
        assert configs == [["A", "B"], ["A", "B", "C"]]
        assert count_configurations(m1) == 2

    def test_m2(self, m2):
        configs = [sorted(c.selected) for c in enumerate_configurations(m2)]
        assert configs == [["A", "X"], ["A", "Y"], ["A", "Z"]]
        assert count_configurations(m2) == 3

    def test_m3(self, m3):
        configs = [sorted(c.selected) for c in enumerate_configurations(m3)]
        assert configs == [["A"], ["A", "B"], ["A", "B", "C"]]
        assert count_configurations(m3) == 3

    def test_root_only(self):
        fm = parse_fm("featuremodel R { root A }")
        assert count_configurations(fm) == 1

    def test_cap(self):
        names = " ".join(f"optional X{i}" for i in range(25))
        fm = parse_fm(f"featuremodel Big {{ root A feature A {{ {names} }} }}")
        with pytest.raises(fmod.ModelTooLargeError):
            enumerate_configurations(fm)

    @given(st.integers(0, 10_000))
    @settings(max_examples=80, deadline=None)
    def test_matches_independent_oracle(self, seed):
        fm = random_feature_model(random.Random(seed), max_features=7)
        ours = [sorted(c.selected) for c in enumerate_configurations(fm)]
        assert ours == all_valid_subsets(fm)

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_mandatory_leaf_never_increases_count(self, seed):
        rng = random.Random(seed)
        fm = random_feature_model(rng, max_features=7)
        before = count_configurations(fm)
        target = rng.choice(sorted(fm.features))
        fm.features[target].groups.append(fmod.ChildGroup("mandatory", ("ZZNew",)))
        fm.features["ZZNew"] = fmod.Feature("ZZNew")
        fm.parent["ZZNew"] = target
        assert count_configurations(fm) <= before

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_adding_constraint_never_increases_count(self, seed):
        rng = random.Random(seed)
        fm = random_feature_model(rng, max_features=7)
        if len(fm.features) < 2:
            return
        before = count_configurations(fm)
        lhs, rhs = rng.sample(sorted(fm.features), 2)
        fm.constraints.append(
            fmod.CrossConstraint(rng.choice(["requires", "excludes"]), lhs, rhs)
        )
        assert count_configurations(fm) <= before


class TestRoundTrip:
    def test_m1(self, m1):
        again = parse_fm(fmod.pretty_print(m1))
        assert again == m1

    @given(st.integers(0, 10_000))
    @settings(max_examples=100, deadline=None)
    def test_random_models(self, seed):
        fm = random_feature_model(random.Random(seed))
        again = parse_fm(fmod.pretty_print(fm))
        assert again == fm
        # idempotent canonical form
        assert fmod.pretty_print(again) == fmod.pretty_print(fm)


class TestFeatureExpr:
    def test_membership(self):
        assert eval_feature_expr(parse_feature_expr("Radio"), {"A", "Radio"})

    def test_and_not(self):
        expr = parse_feature_expr("Radio & !CD")
        assert not eval_feature_expr(expr, {"A", "Radio", "CD"})
        assert eval_feature_expr(expr, {"Radio"})

    def test_or(self):
        assert not eval_feature_expr(parse_feature_expr("Phone | Media"), {"A"})

    def test_precedence(self):
        # ! binds tighter than &, & tighter than |
        expr = parse_feature_expr("A | B & !C")
        assert eval_feature_expr(expr, {"B"})
        assert not eval_feature_expr(expr, {"B", "C"})
        assert eval_feature_expr(expr, {"A", "C"})

    def test_to_text_round_trip(self):
        for text in ("A", "!A", "A & B | C", "!(A | B) & C", "A & (B | C)"):
            expr = parse_feature_expr(text)
            assert parse_feature_expr(expr.to_text()) == expr
