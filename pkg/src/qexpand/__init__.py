"""Ranked retrieval with thesaurus and pseudo-relevance-feedback query expansion."""

from .errors import DataError, QexpandError, UnknownDocumentError
from .evaluation import (
    EvalReport, ImprovementTag, RunResult, aggregate_classification, classify_improvement,
    compare_runs, evaluate_run, interpolated_pr_curve, precision_at_k,
)
from .expansion import (
    AssociationMatrix, PrfParams, Query, build_association_matrix, expand_cb, expand_prf,
    sample_top_docs, top_correlates,
)
from .index import InvertedIndex, Posting, ScoredHit, build_from_texts, build_index, doc_terms, search, term_freq
from .kernels import BACKEND
from .text import AnalyzerConfig, analyze, normalize, tokenize
from .thesaurus import Synset, Thesaurus, load_thesaurus, parse_thesaurus, synonyms

__version__ = "0.1.0"
