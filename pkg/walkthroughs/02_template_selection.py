"""Greedy template selection versus ranking templates one by one.

`born` and `birth` retrieve nearly the same snippets in the fixture, so
adding `birth` to `born` brings little. The top-k baseline adds it anyway
because `birth` is good on its own; greedy picks `birthplace`, which finds
people the other two miss.

Run: python3 walkthroughs/02_template_selection.py   (a few seconds)
"""
from webqa import load_fixture_corpus, load_fixture_kb, sample_queries, sweep_templates

kb = load_fixture_kb()
corpus = load_fixture_corpus()
train, _ = sample_queries(kb, "wasBornIn", 30, 10, seed=7)
candidates = list(kb.schema("wasBornIn").templates)

res = sweep_templates(kb, corpus, "wasBornIn", candidates, train, seed=0)
print("size  greedy                            baseline")
for g, b in zip(res.greedy, res.baseline):
    print(f"{len(g):>4}  {g.performance:.3f} {','.join(g.templates):<26}"
          f"  {b.performance:.3f} {','.join(b.templates)}")
print("greedy picks:", res.greedy_best.templates)
print("baseline picks:", res.baseline_best.templates)

# The selector only needs a set -> score function; here a toy one.
from webqa import greedy_select_templates  # noqa: E402

scores = {frozenset(s): v for s, v in [
    ({"t1"}, .5), ({"t2"}, .4), ({"t3"}, .3),
    ({"t1", "t2"}, .5), ({"t1", "t3"}, .7), ({"t1", "t2", "t3"}, .7)]}
print("toy table:", greedy_select_templates(["t1", "t2", "t3"], lambda ts: scores[frozenset(ts)]))
