import warnings

import pytest

from abasolve import (
    DuplicateRuleWarning,
    ParseError,
    contrary_of,
    parse_framework,
    pref_close,
    serialize_framework,
    validate,
)

from conftest import EX1_TEXT


def test_example_framework_shape(ex1):
    assert len(ex1.assumptions) == 3
    assert len(ex1.rules) == 2
    a, c = ex1.id_of("a"), ex1.id_of("c")
    assert ex1.prefs.strict(a, c)
    assert not ex1.prefs.strict(c, a)


def test_minimal_framework():
    fw = parse_framework("a a\nc a x\n")
    assert len(fw.assumptions) == 1
    assert len(fw.rules) == 0
    assert validate(fw) == []


def test_assumption_as_rule_head_rejected():
    with pytest.raises(ParseError, match="not flat"):
        parse_framework("a a\na b\nc a x\nc b y\nr b a\n")


def test_missing_contrary_rejected():
    with pytest.raises(ParseError, match="no contrary"):
        parse_framework("a a\n")


def test_error_line_numbers_and_collection():
    bad = "a a\nc a x\nq z\nc a y\np a z\n"
    with pytest.raises(ParseError) as err:
        parse_framework(bad)
    text = str(err.value)
    assert "line 3" in text and "unknown statement" in text
    assert "line 4" in text and "duplicate contrary" in text
    assert "line 5" in text and "non-assumption" in text


def test_duplicate_assumption_rejected():
    with pytest.raises(ParseError, match="duplicate assumption"):
        parse_framework("a a\na a\nc a x\n")


def test_undeclared_assumption_in_contrary():
    with pytest.raises(ParseError, match="undeclared assumption"):
        parse_framework("c a x\n")


def test_duplicate_rule_warns_and_dedupes():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fw = parse_framework("a a\nc a x\nr y a\nr y a\n")
    assert len(fw.rules) == 1
    assert any(issubclass(w.category, DuplicateRuleWarning) for w in caught)


def test_comments_and_blank_lines():
    fw = parse_framework("# header\n\na a  # trailing\nc a x\n")
    assert fw.name_set(fw.assumptions) == {"a"}


def test_contrary_of(ex1, f0):
    assert contrary_of(ex1, ex1.id_of("b")).name == "x"
    assert contrary_of(ex1, ex1.id_of("c")).name == "y"
    assert contrary_of(f0, f0.id_of("a")).name == "x"
    with pytest.raises(ValueError, match="not an assumption"):
        contrary_of(ex1, ex1.id_of("x"))


def test_validate_reports_violations(ex1):
    assert validate(ex1) == []
    broken = parse_framework(EX1_TEXT)
    broken.contrary.pop(broken.id_of("b"))
    assert any("no contrary" in v for v in validate(broken))


def test_roundtrip_identity(ex1, f2):
    for fw in (ex1, f2):
        text = serialize_framework(fw)
        again = parse_framework(text)
        assert serialize_framework(again) == text
        assert again.name_set(again.assumptions) == fw.name_set(fw.assumptions)
        assert {
            (again.name_of(r.head), frozenset(again.name_of(b) for b in r.body))
            for r in again.rules
        } == {
            (fw.name_of(r.head), frozenset(fw.name_of(b) for b in r.body))
            for r in fw.rules
        }
        assert sorted(
            (fw.name_of(x), fw.name_of(y)) for x, y in fw.prefs.leq_pairs()
        ) == sorted((again.name_of(x), again.name_of(y)) for x, y in again.prefs.leq_pairs())


def test_pref_close_single_pair():
    rel = pref_close([(2, 0)], [0, 1, 2])
    assert rel.strict(0, 2)
    assert not rel.strict(2, 0)
    assert not rel.strict(0, 1)


def test_pref_close_two_cycle_has_no_strict_part():
    rel = pref_close([(0, 1), (1, 0)], [0, 1])
    assert rel.leq(0, 1) and rel.leq(1, 0)
    assert not rel.strict(0, 1) and not rel.strict(1, 0)


def test_pref_close_chain_is_transitive():
    # c over b, b over a: a below c by transitivity
    rel = pref_close([(2, 1), (1, 0)], [0, 1, 2])
    assert rel.strict(0, 2)
    assert rel.strict(0, 1) and rel.strict(1, 2)


def test_pref_close_rejects_non_assumptions():
    with pytest.raises(ValueError, match="non-assumption"):
        pref_close([(0, 5)], [0, 1])


def test_pref_close_idempotent():
    rel = pref_close([(2, 1), (1, 0), (2, 0)], [0, 1, 2])
    declared_again = [(stronger, weaker) for weaker, stronger in rel.leq_pairs()]
    assert pref_close(declared_again, [0, 1, 2]) == rel


def test_strict_is_irreflexive_and_transitive_exhaustively():
    import itertools
    import random

    rng = random.Random(5)
    for _ in range(40):
        m = rng.randint(1, 5)
        universe = list(range(m))
        pairs = [
            (x, y)
            for x in universe
            for y in universe
            if rng.random() < 0.4
        ]
        rel = pref_close(pairs, universe)
        for x, y, z in itertools.product(universe, repeat=3):
            if rel.leq(x, y) and rel.leq(y, z):
                assert rel.leq(x, z)
            if rel.strict(x, y) and rel.strict(y, z):
                assert rel.strict(x, z)
        for x in universe:
            assert not rel.strict(x, x)
