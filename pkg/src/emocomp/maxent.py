"""Maximum-entropy (logistic regression) classifiers over sparse lexical
features, the advanced per-component feature stack, exhaustive feature
combination search, and component-to-emotion feature stacking.

Training reuses the autodiff core: L2-regularized multinomial or binary
logistic regression fit with full-batch Adam from zero-initialized
weights, which makes fits deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .autodiff import Parameter, Tensor
from .errors import ConfigError, DataError, DimensionError, ResourceError
from .features import (DictionaryLexicon, EmbeddingTable, SparseVector,
                       TfIdfModel, dictionary_features,
                       pooled_embedding_features, tfidf_transform)
from .losses import weighted_bce
from .metrics import evaluate
from .optim import Adam

MULTINOMIAL = "multinomial"
BINARY = "binary"


@dataclass
class MaxEntConfig:
    iterations: int = 300
    learning_rate: float = 0.05
    l2: float = 1e-4
    seed: int = 0


@dataclass
class MaxEntModel:
    classes: tuple[str, ...]
    mode: str
    weights: np.ndarray       # features x classes (binary: features x 1)
    bias: np.ndarray
    feature_dim: int
    degenerate: bool = False
    constant_class: str | None = None


def _dense_matrix(X: list[SparseVector], feature_dim: int) -> np.ndarray:
    mat = np.zeros((len(X), feature_dim))
    for row, vec in enumerate(X):
        for i, v in zip(vec.indices, vec.values):
            if i >= feature_dim:
                raise DimensionError(f"feature index {i} >= dimension {feature_dim}")
            mat[row, i] = v
    return mat


def train_maxent(X: list[SparseVector], y: list, classes: tuple[str, ...],
                 mode: str, feature_dim: int,
                 config: MaxEntConfig | None = None) -> MaxEntModel:
    """Fit a multinomial (y: labels) or binary (y: 0/1) logistic model."""
    config = config or MaxEntConfig()
    if not X:
        raise DataError("empty training set")
    if len(X) != len(y):
        raise DataError(f"{len(X)} feature vectors but {len(y)} targets")

    if mode == MULTINOMIAL:
        present = set(y)
        n_out = len(classes)
    elif mode == BINARY:
        present = set(int(v) for v in y)
        n_out = 1
    else:
        raise ConfigError(f"unknown mode {mode!r}")

    if len(present) < 2:
        warnings.warn("single class present in training data; fitting a constant predictor")
        if mode == MULTINOMIAL:
            const = next(iter(present))
        else:
            const = classes[0] if next(iter(present)) == 1 else None
        return MaxEntModel(classes, mode, np.zeros((feature_dim, n_out)),
                           np.zeros(n_out), feature_dim, degenerate=True,
                           constant_class=const)

    Xd = Tensor(_dense_matrix(X, feature_dim))
    W = Parameter(Tensor(np.zeros((feature_dim, n_out))), "maxent.W")
    b = Parameter(Tensor(np.zeros(n_out)), "maxent.b")

    if mode == MULTINOMIAL:
        class_index = {c: i for i, c in enumerate(classes)}
        onehot = np.zeros((len(y), n_out))
        for row, label in enumerate(y):
            onehot[row, class_index[label]] = 1.0
        Y = Tensor(onehot)
        ones_col = Tensor(np.ones((n_out, 1)))

        def loss_fn():
            z = Xd.matmul(W.tensor) + b.tensor
            m = Tensor(z.data.max(axis=1, keepdims=True))
            lse = ((z - m).exp().matmul(ones_col)).log() + m
            nll = (lse.sum() - (z * Y).sum()) * (1.0 / len(y))
            return nll + config.l2 * (W.tensor * W.tensor).sum()
    else:
        Y = Tensor(np.array([float(v) for v in y]).reshape(-1, 1))

        def loss_fn():
            p = (Xd.matmul(W.tensor) + b.tensor).sigmoid()
            return weighted_bce(p, Y, 1.0) + config.l2 * (W.tensor * W.tensor).sum()

    opt = Adam([W, b], lr=config.learning_rate)
    for _ in range(config.iterations):
        loss_fn().backward()
        opt.step()
    return MaxEntModel(classes, mode, W.data.copy(), b.data.copy(), feature_dim)


def _scores(model: MaxEntModel, x: SparseVector) -> np.ndarray:
    xd = x.to_dense(model.feature_dim)
    z = xd @ model.weights + model.bias
    if model.mode == MULTINOMIAL:
        z = z - z.max()
        e = np.exp(z)
        return e / e.sum()
    return 1.0 / (1.0 + np.exp(-z))


def predict_maxent(model: MaxEntModel, x: SparseVector) -> tuple[set[str], dict[str, float]]:
    """Argmax label (multinomial) or positive class above 0.5 (binary)."""
    scores = _scores(model, x)
    if model.mode == MULTINOMIAL:
        per_class = {c: float(s) for c, s in zip(model.classes, scores)}
        if model.degenerate:
            return {model.constant_class}, per_class
        return {model.classes[int(np.argmax(scores))]}, per_class
    p = float(scores[0])
    label = model.classes[0]
    if model.degenerate:
        return ({label} if model.constant_class else set()), {label: p}
    return ({label} if p > 0.5 else set()), {label: p}


@dataclass
class OneVsRestEnsemble:
    labels: tuple[str, ...]
    models: dict[str, MaxEntModel]


def train_one_vs_rest(X: list[SparseVector], label_sets: list[set[str]],
                      inventory: tuple[str, ...], feature_dim: int,
                      config: MaxEntConfig | None = None) -> OneVsRestEnsemble:
    models = {}
    for label in inventory:
        y = [1 if label in s else 0 for s in label_sets]
        models[label] = train_maxent(X, y, (label,), BINARY, feature_dim, config)
    return OneVsRestEnsemble(inventory, models)


def predict_one_vs_rest(ensemble: OneVsRestEnsemble, x: SparseVector) -> tuple[set[str], dict[str, float]]:
    """Every label whose binary probability exceeds 0.5; empty set allowed."""
    labels: set[str] = set()
    scores: dict[str, float] = {}
    for label in ensemble.labels:
        chosen, sc = predict_maxent(ensemble.models[label], x)
        scores[label] = sc[label]
        labels |= chosen
    return labels, scores


# ---------------------------------------------------------------------------
# Sidecar files
# ---------------------------------------------------------------------------

def load_tagged_sidecar(path: str | Path) -> dict[str, list[str]]:
    """``id<TAB>tag tag ...`` per line."""
    out: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            inst_id, rest = line.split("\t", 1)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: expected id<TAB>values") from exc
        out[inst_id] = rest.split()
    return out


def load_vector_sidecar(path: str | Path) -> dict[str, np.ndarray]:
    """``id<TAB>v1 v2 ...`` per line, fixed dimension."""
    out: dict[str, np.ndarray] = {}
    dim = None
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            inst_id, rest = line.split("\t", 1)
            vec = np.array([float(v) for v in rest.split()])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: expected id<TAB>decimals") from exc
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise DataError(f"{path}:{lineno}: expected {dim} values, got {len(vec)}")
        out[inst_id] = vec
    return out


# ---------------------------------------------------------------------------
# Advanced component features
# ---------------------------------------------------------------------------

COGNITIVE_COMPONENT = "cognitive_appraisal"

FEATURE_FLAGS = ("dictionaries", "pos_tags", "word_embeddings", "appraisal_predictions")


@dataclass(frozen=True)
class FeatureCombination:
    dictionaries: bool = False
    pos_tags: bool = False
    word_embeddings: bool = False
    appraisal_predictions: bool = False

    def enabled(self) -> tuple[str, ...]:
        return tuple(f for f in FEATURE_FLAGS if getattr(self, f))

    def validate(self, component: str) -> None:
        if self.appraisal_predictions and component != COGNITIVE_COMPONENT:
            raise ConfigError(
                "appraisal predictions are only permitted for the cognitive-appraisal component")


@dataclass
class AdvResources:
    """Everything the advanced feature stack can draw on. ``tfidf`` and the
    POS tag inventory are fit on the training split only."""
    tfidf: TfIdfModel
    lexicons: list[DictionaryLexicon] = field(default_factory=list)
    pos_tags: dict[str, list[str]] | None = None
    pos_inventory: tuple[str, ...] = ()
    embeddings: EmbeddingTable | None = None
    appraisal: dict[str, np.ndarray] | None = None
    appraisal_dim: int = 0

    def fit_pos_inventory(self, instance_ids: list[str]) -> None:
        if self.pos_tags is None:
            return
        tags = sorted({t for i in instance_ids for t in self.pos_tags.get(i, [])})
        self.pos_inventory = tuple(tags)

    def fit_appraisal_dim(self) -> None:
        if self.appraisal:
            self.appraisal_dim = len(next(iter(self.appraisal.values())))


def feature_dim(resources: AdvResources, combination: FeatureCombination) -> int:
    dim = resources.tfidf.dim
    if combination.dictionaries:
        dim += 2 * len(resources.lexicons)
    if combination.pos_tags:
        dim += len(resources.pos_inventory)
    if combination.word_embeddings:
        dim += resources.embeddings.dimension
    if combination.appraisal_predictions:
        dim += resources.appraisal_dim
    return dim


def build_cpm_adv_features(stemmed: list[str], inst_id: str,
                           combination: FeatureCombination,
                           resources: AdvResources) -> tuple[SparseVector, dict[str, tuple[int, int]]]:
    """TF-IDF block plus each enabled block, concatenated; returns the
    vector and per-block (offset, length) spans for introspection."""
    vec = tfidf_transform(resources.tfidf, stemmed)
    offsets = {"tfidf": (0, resources.tfidf.dim)}
    pos = resources.tfidf.dim

    if combination.dictionaries:
        if not resources.lexicons:
            raise ResourceError("dictionaries flag enabled but no lexicons loaded")
        block = dictionary_features(stemmed, resources.lexicons)
        vec = vec.concat_dense(block, pos)
        offsets["dictionaries"] = (pos, len(block))
        pos += len(block)

    if combination.pos_tags:
        if resources.pos_tags is None:
            raise ResourceError("pos_tags flag enabled but no POS sidecar loaded")
        tags = resources.pos_tags.get(inst_id, [])
        block = np.array([float(tags.count(t)) for t in resources.pos_inventory])
        vec = vec.concat_dense(block, pos)
        offsets["pos_tags"] = (pos, len(block))
        pos += len(block)

    if combination.word_embeddings:
        if resources.embeddings is None:
            raise ResourceError("word_embeddings flag enabled but no embedding table loaded")
        block = pooled_embedding_features(stemmed, resources.embeddings)
        vec = vec.concat_dense(block, pos)
        offsets["word_embeddings"] = (pos, len(block))
        pos += len(block)

    if combination.appraisal_predictions:
        if resources.appraisal is None:
            raise ResourceError("appraisal_predictions flag enabled but no appraisal sidecar loaded")
        block = resources.appraisal.get(inst_id)
        if block is None:
            raise ResourceError(f"no appraisal predictions for instance {inst_id!r}")
        vec = vec.concat_dense(block, pos)
        offsets["appraisal_predictions"] = (pos, resources.appraisal_dim)
        pos += resources.appraisal_dim

    return vec, offsets


def _available_flags(resources: AdvResources, component: str) -> list[str]:
    flags = []
    if resources.lexicons:
        flags.append("dictionaries")
    if resources.pos_tags is not None:
        flags.append("pos_tags")
    if resources.embeddings is not None:
        flags.append("word_embeddings")
    if resources.appraisal is not None and component == COGNITIVE_COMPONENT:
        flags.append("appraisal_predictions")
    return flags


def _combo_f1(train_stemmed, train_ids, train_y, dev_stemmed, dev_ids, dev_y,
              combination, resources, component, config) -> float:
    dim = feature_dim(resources, combination)
    Xtr = [build_cpm_adv_features(s, i, combination, resources)[0]
           for s, i in zip(train_stemmed, train_ids)]
    Xdev = [build_cpm_adv_features(s, i, combination, resources)[0]
            for s, i in zip(dev_stemmed, dev_ids)]
    model = train_maxent(Xtr, train_y, (component,), BINARY, dim, config)
    gold = {i: ({component} if y else set()) for i, y in zip(dev_ids, dev_y)}
    pred = {i: predict_maxent(model, x)[0] for i, x in zip(dev_ids, Xdev)}
    return evaluate(gold, pred, (component,)).per_class[component].f1


@dataclass
class FeatureSearchResult:
    best: FeatureCombination
    best_f1: float
    all_results: dict[tuple[str, ...], float]        # enabled flags -> dev F1
    single_feature: dict[str, float]                 # one flag at a time


def feature_combination_search(train_stemmed: list[list[str]], train_ids: list[str],
                               train_y: list[int],
                               dev_stemmed: list[list[str]], dev_ids: list[str],
                               dev_y: list[int],
                               component: str, resources: AdvResources,
                               config: MaxEntConfig | None = None) -> FeatureSearchResult:
    """Exhaustive search over all subsets of the permitted feature flags,
    selected by dev F1 of the component; ties go to fewer features."""
    flags = _available_flags(resources, component)
    results: dict[tuple[str, ...], float] = {}
    for r in range(len(flags) + 1):
        for subset in combinations(flags, r):
            combo = FeatureCombination(**{f: True for f in subset})
            combo.validate(component)
            results[subset] = _combo_f1(train_stemmed, train_ids, train_y,
                                        dev_stemmed, dev_ids, dev_y,
                                        combo, resources, component, config)
    best_subset = max(results, key=lambda s: (results[s], -len(s)))
    single = {f: results[(f,)] for f in flags}
    return FeatureSearchResult(FeatureCombination(**{f: True for f in best_subset}),
                               results[best_subset], results, single)


# ---------------------------------------------------------------------------
# Component -> emotion stacking
# ---------------------------------------------------------------------------

GOLD = "gold"
PREDICTED = "predicted"


def stack_component_features(base: SparseVector, base_dim: int,
                             cpm: list[int] | tuple[int, ...],
                             source: str) -> SparseVector:
    """Extend a feature vector by the 5 binary component dimensions."""
    if len(cpm) != 5 or any(v not in (0, 1) for v in cpm):
        raise DimensionError(f"cpm feature vector must be 5 binary values, got {cpm!r}")
    if source not in (GOLD, PREDICTED):
        raise ConfigError(f"unknown component source {source!r}")
    return base.concat_dense(np.array([float(v) for v in cpm]), base_dim)
