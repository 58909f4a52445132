"""The bundled desk-scale fixture: a 50-entity KB and a snippet corpus."""
from __future__ import annotations

from pathlib import Path

from .kb import KnowledgeBase, load_kb
from .snippets import FixtureCorpus

FIXTURE_DIR = Path(__file__).parent / "data" / "fixture"


def fixture_paths() -> dict[str, Path]:
    return {name: FIXTURE_DIR / f"{name}.tsv" for name in ("facts", "types", "labels", "schemas")}


def load_fixture_kb() -> KnowledgeBase:
    p = fixture_paths()
    return load_kb(p["facts"], p["types"], p["labels"], p["schemas"])


def load_fixture_corpus() -> FixtureCorpus:
    return FixtureCorpus.load(FIXTURE_DIR / "corpus.jsonl")
