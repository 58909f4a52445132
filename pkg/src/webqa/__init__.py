"""Knowledge base completion by web question answering.

Queries ``<subject, relation, ?>`` become keyword questions; the snippets they
retrieve are filtered, linked to KB entities, type-checked against the relation
schema and ranked by a logistic model over text and KB features.
"""
from .errors import DataError, FetchError, UnknownRelationError
from .evaluation import (BenchmarkReport, QueryEvaluation, TemplateEvaluator, average_precision,
                         mean_average_precision, run_benchmark, sweep_templates)
from .fixture import load_fixture_corpus, load_fixture_kb
from .kb import (Fact, KbcQuery, KnowledgeBase, RelationSchema, closed_world_objects,
                 entity_types, load_kb, relatedness, sample_queries)
from .linking import (CandidateAnswer, DictionaryLinker, LinkedMention, RemoteLinker,
                      dictionary_link, extract_candidates, type_filter)
from .pipeline import Pipeline
from .questions import (Question, TemplateSet, baseline_select_topk, generate_questions,
                        greedy_select_templates, load_template_set)
from .ranking import (AnswerFeatures, Hyperparams, LabeledExample, LogisticModel, RankedAnswer,
                      extract_answer_features, load_model, predict_proba, rank_answers,
                      resample_balanced, train_logistic)
from .snippet_filter import (SnippetFeatures, extract_snippet_features, filter_snippets,
                             label_snippet, train_filter)
from .snippets import FixtureCorpus, HttpSearchSource, Snippet, fetch_all, fetch_snippets

__version__ = "0.1.0"
