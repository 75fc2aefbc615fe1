"""Corpus ingestion: tokenization, vocabulary building, labeled phrase files."""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import LABELS

# Maximal runs of Unicode letters/digits (\w minus the underscore).
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class CorpusError(Exception):
    """Raised on malformed corpus input (encoding, format, empty vocabulary)."""


def tokenize(text: str) -> list[str]:
    """Split text into NFC-normalized, lowercased letter/digit runs.

    Punctuation and whitespace are dropped; token order is preserved.
    """
    normalized = unicodedata.normalize("NFC", text).lower()
    return _TOKEN_RE.findall(normalized)


def decode_utf8(data: bytes, offset: int = 0) -> str:
    """Decode bytes as UTF-8, reporting the absolute byte offset on failure."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(
            f"invalid UTF-8 at byte {offset + exc.start}"
        ) from exc


def read_corpus_lines(path: str) -> Iterator[list[str]]:
    """Yield one token list per line of a UTF-8 text file.

    Newlines delimit sentences: downstream windows never cross them.
    """
    offset = 0
    with open(path, "rb") as fh:
        for raw in fh:
            yield tokenize(decode_utf8(raw, offset))
            offset += len(raw)


class Vocabulary:
    """Bidirectional word<->id map with corpus frequencies.

    Ids are dense 0..size-1, assigned by descending frequency with
    lexicographic tie-break, so construction is deterministic.
    """

    def __init__(self, words: list[str], freq: dict[str, int]):
        self.words = list(words)
        self.freq = dict(freq)
        self._ids = {w: i for i, w in enumerate(self.words)}
        if len(self._ids) != len(self.words):
            raise CorpusError("duplicate word in vocabulary")

    @property
    def size(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._ids

    def lookup(self, word: str) -> int:
        return self._ids[word]

    def word_of(self, wid: int) -> str:
        return self.words[wid]

    def encode(self, tokens: Iterable[str]) -> list[int]:
        """Map tokens to ids, silently dropping out-of-vocabulary tokens."""
        ids = self._ids
        return [ids[t] for t in tokens if t in ids]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.words == other.words and self.freq == other.freq


def count_tokens(sentences: Iterable[Iterable[str]]) -> Counter:
    """Count token frequencies over an iterable of token lists.

    Partial counts from stream shards merge with `+` into the identical
    total, so sharded counting is equivalent to a single pass.
    """
    counts: Counter = Counter()
    for sentence in sentences:
        counts.update(sentence)
    return counts


def vocabulary_from_counts(counts: Counter, min_count: int = 1) -> Vocabulary:
    retained = [(w, c) for w, c in counts.items() if c >= min_count]
    if not retained:
        raise CorpusError(
            f"empty vocabulary: no token reaches min_count={min_count}"
        )
    retained.sort(key=lambda wc: (-wc[1], wc[0]))
    words = [w for w, _ in retained]
    return Vocabulary(words, dict(retained))


def build_vocabulary(
    sentences: Iterable[Iterable[str]], min_count: int = 5
) -> Vocabulary:
    """Count a finite token stream and retain tokens with freq >= min_count."""
    return vocabulary_from_counts(count_tokens(sentences), min_count)


def save_vocabulary(vocab: Vocabulary, path: str) -> None:
    """Write `<word> <frequency>` lines in id order."""
    with open(path, "w", encoding="utf-8") as fh:
        for word in vocab.words:
            fh.write(f"{word} {vocab.freq[word]}\n")


def load_vocabulary(path: str) -> Vocabulary:
    words: list[str] = []
    freqs: dict[str, int] = {}
    with open(path, "rb") as fh:
        offset = 0
        for lineno, raw in enumerate(fh, 1):
            line = decode_utf8(raw, offset).strip()
            offset += len(raw)
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != 2:
                raise CorpusError(f"line {lineno}: expected '<word> <frequency>'")
            word, freq = parts
            freqs[word] = int(freq)
            words.append(word)
    if not words:
        raise CorpusError("empty vocabulary file")
    return Vocabulary(words, freqs)


@dataclass
class LabeledPhrase:
    """A tokenized sentence with its transitive verb and a binary label."""

    tokens: list[str]
    verb: str
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise CorpusError(f"unknown label {self.label!r}")
        if not self.tokens:
            raise CorpusError("phrase has no tokens")
        if self.verb not in self.tokens:
            raise CorpusError(f"verb {self.verb!r} absent from phrase tokens")


def load_labeled_phrases(path: str) -> list[LabeledPhrase]:
    """Parse a UTF-8 TSV of `<label>\\t<verb>\\t<sentence>` lines.

    Blank lines are skipped. A malformed line (unknown label, missing
    column, verb missing from the tokenized sentence) raises rather than
    being dropped, so label counts stay trustworthy.
    """
    phrases: list[LabeledPhrase] = []
    offset = 0
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = decode_utf8(raw, offset).rstrip("\n").rstrip("\r")
            offset += len(raw)
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusError(
                    f"line {lineno}: expected 3 tab-separated columns, got {len(parts)}"
                )
            label, verb_field, sentence = parts
            if label not in LABELS:
                raise CorpusError(f"line {lineno}: unknown label {label!r}")
            verb_tokens = tokenize(verb_field)
            if len(verb_tokens) != 1:
                raise CorpusError(
                    f"line {lineno}: verb column must hold exactly one token"
                )
            verb = verb_tokens[0]
            tokens = tokenize(sentence)
            if not tokens:
                raise CorpusError(f"line {lineno}: sentence has no tokens")
            if verb not in tokens:
                raise CorpusError(
                    f"line {lineno}: verb {verb!r} not found in sentence"
                )
            phrases.append(LabeledPhrase(tokens=tokens, verb=verb, label=label))
    return phrases


def count_labels(phrases: Iterable[LabeledPhrase]) -> dict[str, int]:
    counts = {label: 0 for label in LABELS}
    for phrase in phrases:
        counts[phrase.label] += 1
    return counts
