"""Compare the compiled and pure-Python kernels on a synthetic corpus.

    python benchmarks/bench_kernels.py --docs 20000 --len 250 --vocab 50000

Words follow a Zipf-like distribution so the postings of frequent terms are
long and local document sets have realistic vocabularies.
"""

import argparse
import time

import numpy as np

from qexpand import AnalyzerConfig, build_from_texts
from qexpand import _kernels_py

try:
    from qexpand import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def synthetic_corpus(n_docs, doc_len, vocab, seed=0):
    rng = np.random.default_rng(seed)
    ranks = np.arange(1, vocab + 1)
    p = 1.0 / ranks
    p /= p.sum()
    words = np.array([f"w{i}" for i in range(vocab)])
    docs = {}
    for i in range(n_docs):
        n = max(1, int(rng.normal(doc_len, doc_len / 4)))
        docs[f"d{i:06d}"] = " ".join(words[rng.choice(vocab, size=n, p=p)])
    return docs


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=5000)
    ap.add_argument("--len", type=int, default=200)
    ap.add_argument("--vocab", type=int, default=30000)
    ap.add_argument("--queries", type=int, default=50)
    ap.add_argument("--d", type=int, default=15)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    idx = build_from_texts(synthetic_corpus(args.docs, args.len, args.vocab), AnalyzerConfig.identity())
    print(f"indexed {idx.n_docs} docs, {len(idx.terms)} terms, {idx.post_doc.shape[0]} postings "
          f"in {time.perf_counter() - t0:.2f}s")

    rng = np.random.default_rng(1)
    # query terms drawn by document frequency, like real queries hitting common words
    df = idx.df_array / idx.df_array.sum()
    queries = [rng.choice(len(idx.terms), size=rng.integers(2, 5), replace=False, p=df).astype(np.int32)
               for _ in range(args.queries)]
    local_sets = [np.sort(rng.choice(idx.n_docs, size=args.d, replace=False)).astype(np.int32)
                  for _ in range(args.queries)]

    backends = {"python": _kernels_py}
    if _kernels_c is not None:
        backends["cython"] = _kernels_c
    else:
        print("compiled kernels not built; timing the fallback only")

    results = {}
    for name, impl in backends.items():
        def bm25():
            for q in queries:
                impl.bm25_scores(idx.post_ptr, idx.post_doc, idx.post_tf, idx.doc_len, float(idx.avgdl),
                                 q, idx.idf, 1.2, 0.75)

        def assoc():
            for docs in local_sets:
                impl.association(idx.fwd_ptr, idx.fwd_term, idx.fwd_tf, docs)

        results[name] = (timeit(bm25, args.repeat), timeit(assoc, args.repeat))

    print(f"\n{'backend':<8} {'bm25 / query':>14} {'assoc(D=%d) / query' % args.d:>22}")
    for name, (b, a) in results.items():
        print(f"{name:<8} {1e3 * b / args.queries:>11.3f} ms {1e3 * a / args.queries:>19.3f} ms")
    if len(results) == 2:
        (bp, ap_), (bc, ac) = results["python"], results["cython"]
        print(f"{'speedup':<8} {bp / bc:>13.1f}x {ap_ / ac:>21.1f}x")


if __name__ == "__main__":
    main()
