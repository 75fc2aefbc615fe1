"""Shared fixtures: finite-difference checks and synthetic data generators."""
import numpy as np

from metlit import LITERAL, METAPHOR
from metlit.sentvec import SentenceVector


def relerr(analytic, numeric):
    """Relative error with an absolute floor so zero gradients compare sanely."""
    a = float(analytic)
    n = float(numeric)
    return abs(a - n) / max(abs(a), abs(n), 1e-8)


def numeric_grad(f, x, h=1e-5):
    """Central finite differences of a scalar function over a flat array."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    flat = x.ravel()
    gflat = g.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        hi = f(x)
        flat[i] = orig - h
        lo = f(x)
        flat[i] = orig
        gflat[i] = (hi - lo) / (2 * h)
    return g


def max_relerr(analytic, numeric):
    a = np.asarray(analytic, dtype=float).ravel()
    n = np.asarray(numeric, dtype=float).ravel()
    return max(relerr(ai, ni) for ai, ni in zip(a, n))


def two_topic_corpus(rng, n_tokens=10000, topic_size=8):
    """Sentences drawn from two disjoint word families, one family per sentence.

    Returns (sentences, topic_a_words, topic_b_words).
    """
    topic_a = [f"alpha{i}" for i in range(topic_size)]
    topic_b = [f"beta{i}" for i in range(topic_size)]
    sentences = []
    produced = 0
    while produced < n_tokens:
        words = topic_a if rng.random() < 0.5 else topic_b
        length = int(rng.integers(5, 12))
        sentences.append([words[int(k)] for k in rng.integers(0, topic_size, length)])
        produced += length
    return sentences, topic_a, topic_b


def mean_cosine(emb, group_a, group_b):
    """Mean pairwise cosine between vectors of group_a and group_b.

    With group_a == group_b, averages distinct unordered pairs (intra-group).
    """
    def unit(w):
        v = emb.vector(w)
        return v / np.linalg.norm(v)

    ua = [unit(w) for w in group_a if w in emb]
    ub = [unit(w) for w in group_b if w in emb]
    sims = []
    same = group_a is group_b or group_a == group_b
    for i, va in enumerate(ua):
        for j, vb in enumerate(ub):
            if same and j <= i:
                continue
            sims.append(float(va @ vb))
    return float(np.mean(sims))


def make_blobs(rng, n_per_class=40, dim=2, separation=4.0):
    """Two Gaussian blobs along dimension 0, labelled literal/metaphor."""
    vectors = []
    for label, center in ((LITERAL, -separation / 2), (METAPHOR, separation / 2)):
        for _ in range(n_per_class):
            values = rng.normal(0.0, 1.0, dim)
            values[0] += center
            vectors.append(
                SentenceVector(values=values, label=label, covered=1, total=1)
            )
    return vectors


def verb_object_corpus(rng, n_sentences=400, n_labeled=120, vocab_per_family=12):
    """Corpus where verbs co-occur with two disjoint object families.

    Returns (corpus_sentences, labeled_lines) where labeled_lines are TSV
    rows labelling phrases literal/metaphor by object family — a synthetic
    proxy with the same shape as a verb-phrase metaphor dataset.
    """
    verbs = ["open", "break", "carry", "hold"]
    family_a = [f"door{i}" for i in range(vocab_per_family)]
    family_b = [f"dream{i}" for i in range(vocab_per_family)]
    filler_a = [f"wood{i}" for i in range(vocab_per_family)]
    filler_b = [f"mist{i}" for i in range(vocab_per_family)]

    def sentence(family, filler):
        verb = verbs[int(rng.integers(len(verbs)))]
        obj = family[int(rng.integers(len(family)))]
        extra = [filler[int(k)] for k in rng.integers(0, len(filler), 3)]
        return [verb, obj] + extra

    corpus = []
    for _ in range(n_sentences):
        if rng.random() < 0.5:
            corpus.append(sentence(family_a, filler_a))
        else:
            corpus.append(sentence(family_b, filler_b))

    labeled = []
    for _ in range(n_labeled // 2):
        toks = sentence(family_a, filler_a)
        labeled.append(f"{LITERAL}\t{toks[0]}\t{' '.join(toks)}")
        toks = sentence(family_b, filler_b)
        labeled.append(f"{METAPHOR}\t{toks[0]}\t{' '.join(toks)}")
    return corpus, labeled


def write_corpus(path, sentences):
    with open(path, "w", encoding="utf-8") as fh:
        for s in sentences:
            fh.write(" ".join(s) + "\n")


def write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
