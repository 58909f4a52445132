import pytest

from webqa import (DictionaryLinker, Fact, KbcQuery, KnowledgeBase, RemoteLinker,
                   extract_candidates, type_filter)
from webqa.kb import RelationSchema
from webqa.linking import find_entity_spans, split_by_type
from webqa.questions import generate_questions
from webqa.snippets import Snippet

BORN_SNIPPET = ("Marvin Lee Minsky was born in New York City, to an eye surgeon father, Henry, "
               "and to a mother, Fannie ...")
BIRTH_SNIPPET = ("Marvin Minsky - A.M. Turing Award Winner, BIRTH: New York City, August 9, 1927. "
                "DEATH: Boston, January 24, 2016 ...")
MARVIN = KbcQuery("Marvin_Minsky", "wasBornIn")


def snippets(texts, template="born", query=MARVIN):
    q = generate_questions(query, [template])[0]
    return [Snippet(t, i, q) for i, t in enumerate(texts, 1)]


def test_longest_match(kb):
    linker = DictionaryLinker(kb)
    ms = linker.link("born in New York City, to an eye surgeon")
    assert [(m.entity, m.span) for m in ms] == [("New_York_City", (2, 5))]
    assert [m.entity for m in linker.link("upstate New York.")] == ["New_York"]
    assert linker.link("nothing to see here") == []


def test_ambiguous_label_prefers_more_facts():
    facts = [Fact("Henry_A", "r", f"x{i}") for i in range(5)]
    facts += [Fact("Henry_B", "r", f"y{i}") for i in range(2)]
    ents = {"Henry_A", "Henry_B"} | {f.object for f in facts}
    kb = KnowledgeBase.from_records(facts, {e: {"t"} for e in ents},
                                    {"henry": {"Henry_A", "Henry_B"}})
    assert [m.entity for m in DictionaryLinker(kb).link("Henry said")] == ["Henry_A"]
    # equal counts fall back to the smaller id
    kb2 = KnowledgeBase.from_records([], {"Henry_B": {"t"}, "Henry_A": {"t"}},
                                     {"henry": {"Henry_A", "Henry_B"}})
    assert [m.entity for m in DictionaryLinker(kb2).link("HENRY!")] == ["Henry_A"]


def test_table_one_candidates(kb):
    cands = extract_candidates(snippets([BORN_SNIPPET, BIRTH_SNIPPET]), DictionaryLinker(kb), MARVIN)
    ents = [c.entity for c in cands]
    assert "New_York_City" in ents and "Henry_Minsky" in ents
    assert "Marvin_Minsky" not in ents
    nyc = next(c for c in cands if c.entity == "New_York_City")
    assert nyc.snippet_indices == [0, 1]
    kept, dropped = split_by_type(cands, kb, "wasBornIn")
    assert "Henry_Minsky" in [c.entity for c in dropped]
    assert all("city" in kb.entity_types(c.entity) for c in kept)


def test_dedup_across_snippets(kb):
    cands = extract_candidates(snippets(["Boston."] * 3), DictionaryLinker(kb), MARVIN)
    assert len(cands) == 1 and len(cands[0].mentions) == 3
    assert extract_candidates([], DictionaryLinker(kb), MARVIN) == []


def test_type_filter(kb):
    cands = extract_candidates(snippets([BORN_SNIPPET, BIRTH_SNIPPET]), DictionaryLinker(kb), MARVIN)
    once = type_filter(cands, kb, "wasBornIn")
    assert [c.entity for c in once] == ["New_York_City", "Boston"]
    assert type_filter(once, kb, "wasBornIn") == once
    assert type_filter([], kb, "wasBornIn") == []
    with pytest.raises(KeyError):
        type_filter(cands, kb, "bornIn")


class Exploding:
    def link(self, text):
        if "boom" in text:
            raise RuntimeError("linker failed")
        return DictionaryLinker.link(self.inner, text)


def test_linker_failure_skips_snippet(kb):
    linker = Exploding()
    linker.inner = DictionaryLinker(kb)
    errors = []
    cands = extract_candidates(snippets(["boom Boston", "London"]), linker, MARVIN, errors)
    assert [c.entity for c in cands] == ["London"]
    assert errors and errors[0][0] == 0


def test_subject_spans(kb):
    assert find_entity_spans(kb, "Marvin_Minsky", BORN_SNIPPET) == [(0, 3)]
    assert find_entity_spans(kb, "Marvin_Minsky", BIRTH_SNIPPET) == [(0, 2)]


class FakeResponse:
    def __init__(self, data):
        self.data = data

    def raise_for_status(self):
        pass

    def json(self):
        return self.data


class FakeSession:
    def post(self, url, data, timeout):
        text = data["text"]
        i = text.index("New York City")
        j = text.index("Henry")
        return FakeResponse({"annotations": [
            {"title": "New York City", "start": i, "end": i + 13, "rho": 0.5},
            {"title": "Henry Minsky", "start": j, "end": j + 5, "rho": 0.05},
        ]})


def test_remote_linker(kb, monkeypatch):
    monkeypatch.setenv("WEBQA_LINKER_TOKEN", "t")
    ms = RemoteLinker("http://x", kb=kb, session=FakeSession()).link(BORN_SNIPPET)
    assert [(m.entity, m.span) for m in ms] == [("New_York_City", (6, 9))]


def test_schema_type_checked():
    with pytest.raises(Exception, match="object type"):
        KnowledgeBase.from_records([], {"a": {"person"}}, None,
                                   [RelationSchema("r", "person", "city", ("x",))])
