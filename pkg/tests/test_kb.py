import itertools
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webqa import DataError, Fact, KbcQuery, KnowledgeBase, UnknownRelationError, load_kb
from webqa.fixture import FIXTURE_DIR, fixture_paths
from webqa.kb import RelationSchema, closed_world_objects, entity_types, relatedness, sample_queries

ROOT = Path(__file__).resolve().parents[1]


def _write(path, rows):
    path.write_text("".join("\t".join(r) + "\n" for r in rows), encoding="utf-8")
    return path


def test_empty_kb(tmp_path):
    kb = load_kb(_write(tmp_path / "f.tsv", []), _write(tmp_path / "t.tsv", []))
    assert len(kb.facts) == 0 and len(kb.entities) == 0


def test_single_fact_link_set():
    kb = KnowledgeBase.from_records([Fact("Marvin_Minsky", "wasBornIn", "New_York_City")],
                                    {"Marvin_Minsky": {"person"}, "New_York_City": {"city"}})
    assert kb.link_sets["Marvin_Minsky"] == {"New_York_City"}
    assert kb.link_sets["New_York_City"] == {"Marvin_Minsky"}


def test_fixture_counts_match_manifest(kb):
    manifest = json.loads((FIXTURE_DIR / "manifest.json").read_text())
    assert len(kb.facts) == manifest["facts"]
    assert len(kb.entities) == manifest["entities"] == 50
    assert len(kb.schemas) == manifest["relations_with_schema"]
    for rel, n in manifest["facts_per_relation"].items():
        assert sum(f.relation == rel for f in kb.facts) == n


def test_manifest_is_current(tmp_path):
    # the counter script never imports the package
    import shutil
    for p in FIXTURE_DIR.iterdir():
        shutil.copy(p, tmp_path / p.name)
    subprocess.run([sys.executable, str(ROOT / "scripts" / "count_fixture.py"), str(tmp_path)],
                   check=True, capture_output=True)
    assert (json.loads((tmp_path / "manifest.json").read_text())
            == json.loads((FIXTURE_DIR / "manifest.json").read_text()))


def test_entity_types(kb):
    assert entity_types(kb, "Marvin_Minsky") == {"person"}
    assert entity_types(kb, "Nobody_Known") == frozenset()
    assert entity_types(kb, "New_York_City") == {"city"}


def test_relatedness_cases():
    facts = [Fact("a", "r", "x"), Fact("a", "r", "y"), Fact("b", "r", "y"), Fact("b", "r", "z"),
             Fact("c", "r", "w")]
    kb = KnowledgeBase.from_records(facts, {e: {"t"} for e in "abcxyzw"})
    assert relatedness(kb, "a", "a") == 1.0
    assert relatedness(kb, "a", "c") == 0.0
    assert relatedness(kb, "a", "b") == pytest.approx(1 / 3)
    assert relatedness(kb, "a", "ghost") == 0.0


def _brute_jaccard(la, lb):
    universe = sorted(la | lb)
    inter = union = 0
    for x in universe:
        union += 1
        inter += (x in la) and (x in lb)
    return Fraction(inter, union) if union else Fraction(0)


edges = st.lists(st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdef")), max_size=15)


@settings(max_examples=150, deadline=None)
@given(edges)
def test_relatedness_properties(pairs):
    facts = [Fact(s, "r", o) for s, o in pairs]
    kb = KnowledgeBase.from_records(facts, {e: {"t"} for e in "abcdef"})
    for a, b in itertools.product("abcdef", repeat=2):
        r = kb.relatedness(a, b)
        assert 0.0 <= r <= 1.0
        assert r == kb.relatedness(b, a)
        if a == b:
            assert r == 1.0
        else:
            la, lb = kb.link_sets.get(a, frozenset()), kb.link_sets.get(b, frozenset())
            assert r == pytest.approx(float(_brute_jaccard(la, lb)))


@settings(max_examples=100, deadline=None)
@given(edges)
def test_link_sets_are_symmetric_and_fact_derived(pairs):
    facts = {Fact(s, "r", o) for s, o in pairs}
    kb = KnowledgeBase.from_records(facts, {e: {"t"} for e in "abcdef"})
    for e, linked in kb.link_sets.items():
        assert e not in linked
        for o in linked:
            assert e in kb.link_sets[o]
            assert Fact(e, "r", o) in facts or Fact(o, "r", e) in facts


def test_closed_world(kb):
    assert closed_world_objects(kb, "Marvin_Minsky", "wasBornIn") == {"New_York_City"}
    assert closed_world_objects(kb, "New_York_City", "wasBornIn") == frozenset()
    expected = set()
    for line in (FIXTURE_DIR / "facts.tsv").read_text().splitlines():
        cols = line.split("\t")
        if cols[:2] == ["Julia_Foster", "hasChild"]:
            expected.add(cols[2])
    assert len(expected) == 3
    assert closed_world_objects(kb, "Julia_Foster", "hasChild") == expected
    with pytest.raises(UnknownRelationError):
        closed_world_objects(kb, "Marvin_Minsky", "bornIn")


def test_sample_queries(kb):
    assert sample_queries(kb, "wasBornIn", 0, 0, 1) == ([], [])
    train, test = sample_queries(kb, "wasBornIn", 30, 10, 7)
    assert (train, test) == sample_queries(kb, "wasBornIn", 30, 10, 7)
    subjects = [q.subject for q in train + test]
    assert len(subjects) == len(set(subjects)) == 40
    assert all(kb.closed_world_objects(s, "wasBornIn") for s in subjects)
    assert all(q == KbcQuery(q.subject, "wasBornIn") for q in train + test)


def test_sample_queries_reports_available(kb):
    with pytest.raises(DataError, match="only 3 subjects"):
        sample_queries(kb, "isCitizenOf", 3, 1, 0)


def test_write_facts_round_trip(kb, tmp_path):
    kb.write_facts(tmp_path / "facts.tsv")
    p = fixture_paths()
    again = load_kb(tmp_path / "facts.tsv", p["types"], p["labels"], p["schemas"])
    assert again.facts == kb.facts
    assert again.link_sets == kb.link_sets


def test_malformed_row_names_file_and_line(tmp_path):
    f = tmp_path / "facts.tsv"
    f.write_text("a\tr\tb\nbroken line\n")
    t = _write(tmp_path / "types.tsv", [("a", "t"), ("b", "t")])
    with pytest.raises(DataError, match=r"facts\.tsv:2"):
        load_kb(f, t)


def test_missing_types_listed(tmp_path):
    f = _write(tmp_path / "facts.tsv", [("a", "r", "b"), ("c", "r", "a")])
    t = _write(tmp_path / "types.tsv", [("a", "t")])
    with pytest.raises(DataError, match="b, c"):
        load_kb(f, t)


def test_unknown_relation(kb):
    with pytest.raises(UnknownRelationError, match="bornIn"):
        kb.schema("bornIn")


def test_schema_needs_templates():
    with pytest.raises(DataError):
        RelationSchema("r", "person", "city", ())


def test_fixture_generator_reproduces_bundle(tmp_path):
    subprocess.run([sys.executable, str(ROOT / "scripts" / "build_fixture.py"), str(tmp_path)],
                   check=True, capture_output=True)
    for name in ("facts.tsv", "types.tsv", "labels.tsv", "schemas.tsv", "corpus.jsonl"):
        assert (tmp_path / name).read_bytes() == (FIXTURE_DIR / name).read_bytes(), name
