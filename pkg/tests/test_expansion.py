import pytest
from hypothesis import given, settings, strategies as st

from qexpand import (
    AnalyzerConfig, DataError, PrfParams, Query, UnknownDocumentError, build_association_matrix,
    build_from_texts, expand_cb, expand_prf, parse_thesaurus, sample_top_docs, top_correlates,
)
from qexpand.thesaurus import Thesaurus

from oracles import association as brute_association, bm25_rank


def test_query_collapses_duplicates():
    q = Query("1", ("b", "a", "b"))
    assert q.terms == ("b", "a")
    with pytest.raises(ValueError):
        Query("", ("a",))


def test_prf_params_defaults():
    p = PrfParams()
    assert (p.d, p.t, p.k_sample) == (15, 7, 100)
    assert PrfParams(d=200).k_sample == 200
    with pytest.raises(ValueError):
        PrfParams(d=0)
    with pytest.raises(ValueError):
        PrfParams(t=0)


# --- concept-based ----------------------------------------------------------

def test_cb_empty_thesaurus_is_identity():
    q = Query("1", ("سعر", "النفط"))
    assert expand_cb(q, Thesaurus()) == q


def test_cb_price_of_oil():
    th = parse_thesaurus("s1\tnoun\tسعر,ثمن,تكلفة\ns2\tnoun\tسعر,سعرة", AnalyzerConfig())
    q = Query.from_text("1", "سعر النفط", AnalyzerConfig())
    got = expand_cb(q, th)
    assert set(got.terms) == {"سعر", "النفط", "ثمن", "تكلفة", "سعرة"}
    assert got.terms[:2] == ("سعر", "النفط")
    assert got.terms[2:] == tuple(sorted({"ثمن", "تكلفة", "سعرة"}))
    assert got.qid == "1"


def test_cb_union_and_multiword_split():
    th = parse_thesaurus("s1\tnoun\ta,b,unit price\ns2\tnoun\tb,c", AnalyzerConfig())
    got = expand_cb(Query("q", ("a", "b")), th)
    # a -> {b, price, unit}; b -> {a, c, price, unit}; already-present terms appear once
    assert got.terms == ("a", "b", "price", "unit", "c")


# --- PRF pieces -------------------------------------------------------------

def test_sample_top_docs(toy_index, ident):
    assert sample_top_docs(toy_index, Query("q", ("zz",)), 15) == []
    assert sample_top_docs(toy_index, Query("q", ("a",)), 1) == ["d1"]
    idx = build_from_texts({"x": "a", "y": "a a", "z": "b a"}, ident)
    assert sample_top_docs(idx, Query("q", ("a",)), 15) == [d for d, _ in bm25_rank(
        {"x": "a", "y": "a a", "z": "b a"}, ident, ["a"])]


def test_matrix_single_doc(toy_index, backend):
    m = build_association_matrix(toy_index, ["d1"])
    assert m.score("a", "b") == 2 and m.score("a", "a") == 4 and m.score("b", "b") == 1


def test_matrix_two_docs(toy_index, backend):
    m = build_association_matrix(toy_index, ["d1", "d2"])
    assert m.score("a", "b") == 4 == m.score("b", "a")
    assert m.score("a", "a") == 5 and m.score("b", "b") == 5
    assert m.to_dict() == brute_association({"d1": "a a b", "d2": "a b b"}, AnalyzerConfig.identity(),
                                            ["d1", "d2"])[1]


def test_matrix_disjoint_docs_are_block_diagonal(ident, backend):
    idx = build_from_texts({"d1": "a b", "d2": "c d d"}, ident)
    m = build_association_matrix(idx, ["d1", "d2"])
    assert m.score("a", "c") == 0 and m.score("b", "d") == 0
    assert m.row("d") == {"c": 2, "d": 4}


def test_matrix_errors(toy_index):
    with pytest.raises(UnknownDocumentError):
        build_association_matrix(toy_index, ["d1", "nope"])
    with pytest.raises(DataError):
        build_association_matrix(toy_index, [])


def test_matrix_duplicate_docs_count_once(toy_index):
    assert build_association_matrix(toy_index, ["d1", "d1"]).to_dict() == \
        build_association_matrix(toy_index, ["d1"]).to_dict()


def test_top_correlates(toy_index, ident):
    m = build_association_matrix(toy_index, ["d1", "d2"])
    assert top_correlates(m, "zz", 7) == []
    assert top_correlates(m, "a", 7) == ["b"]
    idx = build_from_texts({"d": "u x y"}, ident)
    m = build_association_matrix(idx, ["d"])
    assert top_correlates(m, "u", 1) == ["x"]
    assert top_correlates(m, "u", 5) == ["x", "y"]


def test_top_correlates_orders_by_score_then_term(ident):
    idx = build_from_texts({"d1": "u u v w w w z", "d2": "u v"}, ident)
    m = build_association_matrix(idx, ["d1", "d2"])
    # S(u,w)=6, S(u,v)=2+1=3, S(u,z)=2
    assert top_correlates(m, "u", 7) == ["w", "v", "z"]
    assert top_correlates(m, "u", 2) == ["w", "v"]


# --- PRF end to end ---------------------------------------------------------

def test_prf_zero_hits_unchanged(toy_index):
    q = Query("q", ("zz",))
    assert expand_prf(toy_index, q) is q


def test_prf_toy(toy3_index, backend):
    got = expand_prf(toy3_index, Query("q", ("a",)), PrfParams(d=2, t=7))
    assert got.terms == ("a", "b")


def test_prf_bounded_growth(ident):
    idx = build_from_texts({f"d{i}": " ".join(f"w{j}" for j in range(i, i + 12)) for i in range(20)}, ident)
    q = Query("q", ("w5", "w9"))
    for t in (1, 3, 7):
        got = expand_prf(idx, q, PrfParams(d=5, t=t))
        assert len(got.terms) <= len(q.terms) * (1 + t)


# --- properties -------------------------------------------------------------

WORDS = [f"w{i}" for i in range(30)]
docs_st = st.lists(st.lists(st.sampled_from(WORDS), max_size=25).map(" ".join), min_size=1, max_size=20)
query_st = st.lists(st.sampled_from(WORDS + ["zz"]), min_size=1, max_size=4)


@settings(max_examples=100, deadline=None)
@given(docs_st, st.data())
def test_matrix_matches_brute_force(texts, data):
    ident = AnalyzerConfig.identity()
    docs = {f"d{i:02d}": t for i, t in enumerate(texts)}
    idx = build_from_texts(docs, ident)
    local = data.draw(st.lists(st.sampled_from(sorted(docs)), min_size=1, unique=True))
    m = build_association_matrix(idx, local)
    vocab, scores = brute_association(docs, ident, local)
    assert m.vocab == vocab
    assert m.to_dict() == scores
    for (u, v), s in scores.items():
        assert m.score(v, u) == s


@settings(max_examples=100, deadline=None)
@given(docs_st, query_st, st.integers(1, 6), st.integers(1, 8))
def test_prf_matches_oracle_pipeline(texts, query, d, t):
    ident = AnalyzerConfig.identity()
    docs = {f"d{i:02d}": x for i, x in enumerate(texts)}
    idx = build_from_texts(docs, ident)
    q = Query("q", tuple(query))
    got = expand_prf(idx, q, PrfParams(d=d, t=t))

    local = [doc for doc, _ in bm25_rank(docs, ident, q.terms)[:d]]
    expected = list(q.terms)
    if local:
        _, scores = brute_association(docs, ident, local)
        for u in q.terms:
            row = sorted(((-s, v) for (a, v), s in scores.items() if a == u and v != u))
            expected += [v for _, v in row[:t]]
    assert got.terms == tuple(dict.fromkeys(expected))
    assert set(q.terms) <= set(got.terms)
    assert len(got.terms) <= len(q.terms) * (1 + t)
    assert expand_prf(idx, q, PrfParams(d=d, t=t)) == got


synsets_st = st.lists(st.sets(st.sampled_from(WORDS[:10] + ["w1 w2", "x y"]), min_size=1, max_size=4), max_size=6)


@given(synsets_st, query_st)
def test_cb_superset_and_bound(sets, query):
    text = "\n".join(f"s{i}\tnoun\t{','.join(sorted(m))}" for i, m in enumerate(sets))
    th = parse_thesaurus(text, AnalyzerConfig.identity())
    q = Query("q", tuple(query))
    got = expand_cb(q, th)
    assert got.terms[:len(q.terms)] == q.terms
    bound = len(q.terms) + sum(len({w for s in th.synonyms(t) for w in s.split()}) for t in q.terms)
    assert len(got.terms) <= bound
    assert expand_cb(q, th) == got
