"""Write data/fixture/manifest.json by counting raw lines, without using the package."""
import json
import sys
from pathlib import Path

DIR = Path(sys.argv[1]) if len(sys.argv) > 1 else (
    Path(__file__).resolve().parents[1] / "src" / "webqa" / "data" / "fixture")


def rows(name):
    with open(DIR / name, encoding="utf-8") as fh:
        return [line.rstrip("\n").split("\t") for line in fh
                if line.strip() and not line.startswith("#")]


facts = rows("facts.tsv")
types = rows("types.tsv")
corpus = [json.loads(line) for line in open(DIR / "corpus.jsonl", encoding="utf-8") if line.strip()]
manifest = {
    "facts": len(facts),
    "entities": len({r[0] for r in types}),
    "type_rows": len(types),
    "label_rows": len(rows("labels.tsv")),
    "relations_with_schema": len(rows("schemas.tsv")),
    "facts_per_relation": {rel: sum(1 for r in facts if r[1] == rel)
                           for rel in sorted({r[1] for r in facts})},
    "corpus_questions": len(corpus),
    "corpus_snippets": sum(len(r["snippets"]) for r in corpus),
}
with open(DIR / "manifest.json", "w", encoding="utf-8") as fh:
    json.dump(manifest, fh, indent=2)
    fh.write("\n")
print(json.dumps(manifest, indent=2))
