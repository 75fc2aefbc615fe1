"""Dense word embedding matrix with the shared text file format."""

from __future__ import annotations

import numpy as np

from .corpus import CorpusError, decode_utf8


class EmbeddingMatrix:
    """One D-dimensional vector per vocabulary word, in id order."""

    def __init__(self, words: list[str], vectors: np.ndarray):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ValueError("vectors must be a (len(words), D) matrix")
        self.words = list(words)
        self.vectors = vectors
        self._ids = {w: i for i, w in enumerate(self.words)}

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._ids

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self._ids[word]]


def format_floats(values) -> str:
    # repr round-trips float64 exactly, keeping saved artifacts lossless
    # and byte-reproducible.
    return " ".join(repr(float(v)) for v in values)


def save_embeddings(emb: EmbeddingMatrix, path: str) -> None:
    """Write `<V> <D>` then one `<word> <v1> ... <vD>` line per word."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(emb)} {emb.dim}\n")
        for word, row in zip(emb.words, emb.vectors):
            fh.write(f"{word} {format_floats(row)}\n")


def load_embeddings(path: str) -> EmbeddingMatrix:
    with open(path, "rb") as fh:
        offset = 0
        header = fh.readline()
        text = decode_utf8(header, offset)
        offset += len(header)
        parts = text.split()
        if len(parts) != 2:
            raise CorpusError("embedding header must be '<V> <D>'")
        n_words, dim = int(parts[0]), int(parts[1])
        words: list[str] = []
        rows = np.empty((n_words, dim), dtype=np.float64)
        for i in range(n_words):
            raw = fh.readline()
            if not raw:
                raise CorpusError(f"embedding file truncated at word {i}")
            fields = decode_utf8(raw, offset).split()
            offset += len(raw)
            if len(fields) != dim + 1:
                raise CorpusError(
                    f"embedding line {i + 2}: expected {dim} values, got {len(fields) - 1}"
                )
            words.append(fields[0])
            rows[i] = [float(x) for x in fields[1:]]
    return EmbeddingMatrix(words, rows)
