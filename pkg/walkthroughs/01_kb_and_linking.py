"""From a KB query to typed candidate answers.

Run: python3 walkthroughs/01_kb_and_linking.py
"""
from webqa import DictionaryLinker, KbcQuery, Pipeline, load_fixture_corpus, load_fixture_kb
from webqa.linking import split_by_type

kb = load_fixture_kb()
query = KbcQuery("Marvin_Minsky", "wasBornIn")
print(f"{len(kb.facts)} facts over {len(kb.entities)} entities")
print("ground truth:", sorted(kb.closed_world_objects(query.subject, query.relation)))

# Each template keyword becomes one search question.
pipe = Pipeline(kb, load_fixture_corpus())
snippets, _ = pipe.collect(query, ["born", "birth"])
for s in snippets[:4]:
    print(f"  [{s.question.text} #{s.rank}] {s.text[:70]}")

# The dictionary linker takes the longest label match, so "New York City"
# beats "New York". The subject itself is never a candidate.
linker = DictionaryLinker(kb)
text = next(s.text for s in snippets if "born in" in s.text)
print("mentions:", [(m.surface, m.entity) for m in linker.link(text)])

trace = pipe.run(query, ["born", "birth"])
kept, dropped = split_by_type(trace.raw_candidates, kb, query.relation)
print("kept (city):", [c.entity for c in kept])
print("dropped by type:", [c.entity for c in dropped])

# Relatedness is the Jaccard overlap of the entities' KB neighbours.
for c in kept:
    print(f"  relatedness({c.entity}, {query.subject}) = {kb.relatedness(c.entity, query.subject):.3f}")
