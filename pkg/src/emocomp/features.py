"""Sparse feature vectors, TF-IDF, component dictionaries and embedding
features for the feature-based classifiers; token-embedding ingestion for
the neural ones.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, DimensionError, StateError
from .text import extract_ngrams, porter_stem


@dataclass
class SparseVector:
    """Sorted (index, value) pairs; zero values are never stored."""

    indices: list[int] = field(default_factory=list)
    values: list[float] = field(default_factory=list)

    @classmethod
    def from_dict(cls, entries: dict[int, float]) -> "SparseVector":
        idx = sorted(i for i, v in entries.items() if v != 0.0)
        return cls(idx, [entries[i] for i in idx])

    def to_dense(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        for i, v in zip(self.indices, self.values):
            if i >= dim:
                raise DimensionError(f"sparse index {i} out of range for dimension {dim}")
            out[i] = v
        return out

    def norm(self) -> float:
        return float(np.sqrt(sum(v * v for v in self.values)))

    def concat_dense(self, block: np.ndarray, offset: int) -> "SparseVector":
        """Append a dense block starting at ``offset`` (must be past all indices)."""
        idx = list(self.indices)
        val = list(self.values)
        for j, v in enumerate(block):
            if v != 0.0:
                idx.append(offset + j)
                val.append(float(v))
        return SparseVector(idx, val)


# ---------------------------------------------------------------------------
# TF-IDF
# ---------------------------------------------------------------------------

@dataclass
class TfIdfModel:
    vocabulary: dict[str, int]
    document_frequency: dict[str, int]
    corpus_size: int
    ngram_range: tuple[int, int] = (1, 2)

    @property
    def dim(self) -> int:
        return len(self.vocabulary)

    def idf(self, gram: str) -> float:
        df = self.document_frequency[gram]
        return float(np.log((1.0 + self.corpus_size) / (1.0 + df)) + 1.0)


def tfidf_fit(documents: list[list[str]]) -> TfIdfModel:
    """Fit vocabulary and document frequencies on (stemmed) token sequences."""
    df: Counter = Counter()
    for doc in documents:
        df.update(set(extract_ngrams(doc)))
    vocab = {g: i for i, g in enumerate(sorted(df))}
    return TfIdfModel(vocab, dict(df), len(documents))


def tfidf_transform(model: TfIdfModel | None, tokens: list[str]) -> SparseVector:
    """Raw-count tf times smoothed idf, L2-normalized; unseen n-grams dropped."""
    if model is None:
        raise StateError("tfidf_transform called before tfidf_fit")
    entries: dict[int, float] = {}
    for gram, count in extract_ngrams(tokens).items():
        col = model.vocabulary.get(gram)
        if col is not None:
            entries[col] = count * model.idf(gram)
    vec = SparseVector.from_dict(entries)
    n = vec.norm()
    if n > 0:
        vec = SparseVector(vec.indices, [v / n for v in vec.values])
    return vec


# ---------------------------------------------------------------------------
# Component dictionaries
# ---------------------------------------------------------------------------

@dataclass
class DictionaryLexicon:
    component: str
    entries: frozenset[str]


def load_lexicon(path: str | Path, component: str) -> DictionaryLexicon:
    """One term per line, '#' comments; terms are stemmed on load so they
    match stemmed documents regardless of how the file was written."""
    entries = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        term = raw.split("#", 1)[0].strip().lower()
        if term:
            entries.add(porter_stem(term))
    if not entries:
        raise DataError(f"lexicon file {path} contains no entries")
    return DictionaryLexicon(component, frozenset(entries))


def dictionary_features(stemmed: list[str], lexicons: list[DictionaryLexicon]) -> np.ndarray:
    """Per-lexicon match count followed by per-lexicon presence flags."""
    counts = [sum(1 for t in stemmed if t in lex.entries) for lex in lexicons]
    flags = [1.0 if c > 0 else 0.0 for c in counts]
    return np.array([float(c) for c in counts] + flags)


# ---------------------------------------------------------------------------
# Word embeddings (mean-pooled) and per-token embedding sequences
# ---------------------------------------------------------------------------

@dataclass
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]


def load_embedding_file(path: str | Path) -> EmbeddingTable:
    """Text format: one entry per line, token then whitespace-separated decimals."""
    vectors: dict[str, np.ndarray] = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, *vals = parts
            try:
                vec = np.array([float(v) for v in vals])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: non-numeric embedding value") from exc
            if dimension is None:
                dimension = len(vec)
                if dimension == 0:
                    raise DataError(f"{path}:{lineno}: entry has no values")
            elif len(vec) != dimension:
                raise DataError(
                    f"{path}:{lineno}: expected {dimension} values, got {len(vec)}")
            vectors[token] = vec
    if dimension is None:
        raise DataError(f"embedding file {path} is empty")
    return EmbeddingTable(dimension, vectors)


def pooled_embedding_features(tokens: list[str], table: EmbeddingTable) -> np.ndarray:
    """Mean of in-vocabulary token vectors; zero vector when none found."""
    hits = [table.vectors[t] for t in tokens if t in table.vectors]
    if not hits:
        return np.zeros(table.dimension)
    return np.mean(hits, axis=0)


@dataclass
class TokenEmbeddingStore:
    dimension: int
    sequences: dict[str, np.ndarray]


def load_token_embedding_store(path: str | Path) -> TokenEmbeddingStore:
    """Line-oriented records: instance id, then T, then T rows of d decimals."""
    sequences: dict[str, np.ndarray] = {}
    dimension = None
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        inst_id = lines[i].strip()
        try:
            T = int(lines[i + 1])
            rows = [[float(v) for v in lines[i + 2 + t].split()] for t in range(T)]
        except (IndexError, ValueError) as exc:
            raise DataError(f"{path}: malformed record for id {inst_id!r}") from exc
        mat = np.array(rows)
        if dimension is None:
            dimension = mat.shape[1]
        elif mat.shape[1] != dimension:
            raise DataError(f"{path}: record {inst_id!r} has dimension {mat.shape[1]}, expected {dimension}")
        if inst_id in sequences:
            raise DataError(f"{path}: duplicate record for id {inst_id!r}")
        sequences[inst_id] = mat
        i += 2 + T
    if dimension is None:
        raise DataError(f"token embedding store {path} is empty")
    return TokenEmbeddingStore(dimension, sequences)


def hashed_token_embedding(token: str, dimension: int, seed: int) -> np.ndarray:
    """Deterministic pseudo-embedding: a pure function of (token, seed, dimension)."""
    digest = hashlib.sha256(f"{seed}:{dimension}:{token}".encode()).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    return rng.standard_normal(dimension) / np.sqrt(dimension)


def resolve_token_embeddings(instances, tokenizer, store: TokenEmbeddingStore | None = None,
                             fallback: bool = True, fallback_dim: int = 64,
                             seed: int = 0) -> dict[str, np.ndarray]:
    """Per-instance T x d matrices, from the store or hashed fallback vectors.

    ``instances`` is any iterable of objects with ``id`` and ``text``.
    """
    out: dict[str, np.ndarray] = {}
    missing = []
    for inst in instances:
        if store is not None and inst.id in store.sequences:
            out[inst.id] = store.sequences[inst.id]
            continue
        if not fallback:
            missing.append(inst.id)
            continue
        dim = store.dimension if store is not None else fallback_dim
        tokens = tokenizer(inst.text) or ["<empty>"]
        out[inst.id] = np.stack([hashed_token_embedding(t, dim, seed) for t in tokens])
    if missing:
        raise DataError(f"no token embeddings for instance ids: {', '.join(missing)}")
    return out
