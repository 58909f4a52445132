"""Keep only the snippets most likely to hold an answer.

Run: python3 walkthroughs/03_snippet_filtering.py
"""
from webqa import (KbcQuery, Pipeline, extract_snippet_features, filter_snippets,
                   load_fixture_corpus, load_fixture_kb, run_benchmark, sample_queries)

kb = load_fixture_kb()
corpus = load_fixture_corpus()
pipe = Pipeline(kb, corpus)
templates = ("born", "birthplace")
train, test = sample_queries(kb, "wasBornIn", 30, 10, seed=7)

filter_model, ranker, summary = pipe.train(train, templates, seed=0)
print("\n".join(summary.lines()))
print("filter weights (rank, keyword, subject words):", filter_model.weights.round(2))

snippets, _ = pipe.collect(KbcQuery("Marvin_Minsky", "wasBornIn"), templates)
print("features of the first snippet:", tuple(extract_snippet_features(snippets[0])))
print("top 3 after filtering:")
for s in filter_snippets(filter_model, snippets, 3):
    print(f"  #{s.rank:<2} {s.text[:70]}")

models = {"filter": filter_model, "ranker": ranker}
for k in (5, 10, 20, None):
    rep = run_benchmark(kb, corpus, "wasBornIn", templates, k, models, train + test)
    print(f"k={'all' if k is None else k:<4} MAP={rep.map:.4f}")
