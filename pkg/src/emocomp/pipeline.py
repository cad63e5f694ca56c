"""End-to-end plumbing from corpora to trained models and reports.

This is what the CLI calls into; tests use it directly as well. The
feature-based (maximum entropy) and neural families share the corpus
splitting and evaluation protocol: 90/10 train/test, with a slice of the
training split held out as development data where a model needs one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import (COMPONENTS, SINGLE_LABEL, Corpus, Instance,
                     split_train_test)
from .errors import ConfigError, ResourceError
from .features import (TfIdfModel, load_token_embedding_store,
                       resolve_token_embeddings, tfidf_fit, tfidf_transform)
from .maxent import (BINARY, MULTINOMIAL, AdvResources, FeatureCombination,
                     FeatureSearchResult, MaxEntConfig, MaxEntModel,
                     OneVsRestEnsemble, build_cpm_adv_features,
                     feature_combination_search, feature_dim, predict_maxent,
                     predict_one_vs_rest, stack_component_features,
                     train_maxent, train_one_vs_rest)
from .nn import (Example, ModelConfig, NeuralModel, SingleTaskModel,
                 TrainingLog, build_model, predict_example, train_model)
from .text import stem_tokens, tokenize

ME_TAGS = ("emo-me-base", "cpm-me-base", "cpm-me-adv",
           "emo-cpm-me-pred", "emo-cpm-me-gold")
ALL_TAGS = ME_TAGS + ("emo-nn-base", "cpm-nn-base", "emo-cpm-nn-pred",
                      "emo-cpm-nn-gold", "mtl-mh", "mtl-xs")


def preprocess(instance: Instance) -> list[str]:
    """Lowercased, tokenized, Porter-stemmed tokens."""
    return stem_tokens(tokenize(instance.text))


def emotion_multi_hot(instance: Instance, inventory: tuple[str, ...]) -> np.ndarray:
    return np.array([1.0 if label in instance.emotions else 0.0 for label in inventory])


# ---------------------------------------------------------------------------
# Feature-based family
# ---------------------------------------------------------------------------

@dataclass
class MeArtifact:
    """A trained feature-based model together with its featurizer state."""

    tag: str
    mode: str
    emotion_inventory: tuple[str, ...]
    tfidf: TfIdfModel
    feature_dim: int
    emotion_model: MaxEntModel | OneVsRestEnsemble | None = None
    component_models: dict[str, MaxEntModel] = field(default_factory=dict)
    combinations: dict[str, FeatureCombination] = field(default_factory=dict)
    resources: AdvResources | None = None
    stack_source: str | None = None          # gold | predicted for emo-cpm-me-*
    cpm_artifact: "MeArtifact | None" = None  # predictor used for stacking
    search_results: dict[str, FeatureSearchResult] = field(default_factory=dict)

    def predict_components(self, stemmed: list[str], inst_id: str) -> tuple[int, ...]:
        flags = []
        for j, comp in enumerate(COMPONENTS):
            model = self.component_models[comp]
            combo = self.combinations.get(comp, FeatureCombination())
            if self.resources is not None:
                x, _ = build_cpm_adv_features(stemmed, inst_id, combo, self.resources)
            else:
                x = tfidf_transform(self.tfidf, stemmed)
            labels, _ = predict_maxent(model, x)
            flags.append(1 if labels else 0)
        return tuple(flags)

    def predict_emotions(self, instance: Instance) -> set[str]:
        stemmed = preprocess(instance)
        x = tfidf_transform(self.tfidf, stemmed)
        if self.stack_source is not None:
            if self.stack_source == "gold":
                cpm = instance.cpm
            else:
                cpm = self.cpm_artifact.predict_components(stemmed, instance.id)
            x = stack_component_features(x, self.tfidf.dim, cpm, self.stack_source)
        if self.mode == SINGLE_LABEL:
            labels, _ = predict_maxent(self.emotion_model, x)
            return labels
        labels, _ = predict_one_vs_rest(self.emotion_model, x)
        if not labels and "neutral" in self.emotion_inventory:
            labels = {"neutral"}
        return labels


def _maxent_to_dict(m: MaxEntModel) -> dict:
    return {"classes": list(m.classes), "mode": m.mode,
            "weights": m.weights.tolist(), "bias": m.bias.tolist(),
            "feature_dim": m.feature_dim, "degenerate": m.degenerate,
            "constant_class": m.constant_class}


def _maxent_from_dict(d: dict) -> MaxEntModel:
    return MaxEntModel(tuple(d["classes"]), d["mode"], np.array(d["weights"]),
                       np.array(d["bias"]), d["feature_dim"], d["degenerate"],
                       d["constant_class"])


def save_me_artifact(artifact: MeArtifact, path: str | Path) -> None:
    """Persist a feature-based model with its featurizer state.

    Lexicons and the POS tag inventory travel with the file; embedding and
    appraisal resources must be re-supplied at load time when a stored
    combination uses them.
    """
    def emotion_model_dict(a: MeArtifact):
        if a.emotion_model is None:
            return None
        if isinstance(a.emotion_model, OneVsRestEnsemble):
            return {"kind": "ovr", "labels": list(a.emotion_model.labels),
                    "models": {l: _maxent_to_dict(m) for l, m in a.emotion_model.models.items()}}
        return {"kind": "multinomial", "model": _maxent_to_dict(a.emotion_model)}

    def artifact_dict(a: MeArtifact) -> dict:
        d = {
            "version": 1,
            "tag": a.tag,
            "mode": a.mode,
            "emotion_inventory": list(a.emotion_inventory),
            "tfidf": {"vocabulary": a.tfidf.vocabulary,
                      "document_frequency": a.tfidf.document_frequency,
                      "corpus_size": a.tfidf.corpus_size},
            "feature_dim": a.feature_dim,
            "emotion_model": emotion_model_dict(a),
            "component_models": {c: _maxent_to_dict(m) for c, m in a.component_models.items()},
            "combinations": {c: list(combo.enabled()) for c, combo in a.combinations.items()},
            "stack_source": a.stack_source,
            "cpm_artifact": artifact_dict(a.cpm_artifact) if a.cpm_artifact else None,
        }
        if a.resources is not None:
            d["resources"] = {
                "lexicons": {lex.component: sorted(lex.entries) for lex in a.resources.lexicons},
                "pos_inventory": list(a.resources.pos_inventory),
                "appraisal_dim": a.resources.appraisal_dim,
                "embedding_dim": a.resources.embeddings.dimension if a.resources.embeddings else None,
            }
        return d

    Path(path).write_text(json.dumps(artifact_dict(artifact)), encoding="utf-8")


def load_me_artifact(path: str | Path, embeddings=None, pos_tags=None,
                     appraisal=None) -> MeArtifact:
    from .features import DictionaryLexicon

    def from_dict(d: dict) -> MeArtifact:
        tfidf = TfIdfModel(d["tfidf"]["vocabulary"], d["tfidf"]["document_frequency"],
                           d["tfidf"]["corpus_size"])
        a = MeArtifact(d["tag"], d["mode"], tuple(d["emotion_inventory"]), tfidf,
                       d["feature_dim"], stack_source=d["stack_source"])
        em = d["emotion_model"]
        if em is not None:
            if em["kind"] == "ovr":
                a.emotion_model = OneVsRestEnsemble(
                    tuple(em["labels"]),
                    {l: _maxent_from_dict(m) for l, m in em["models"].items()})
            else:
                a.emotion_model = _maxent_from_dict(em["model"])
        a.component_models = {c: _maxent_from_dict(m) for c, m in d["component_models"].items()}
        a.combinations = {c: FeatureCombination(**{f: True for f in flags})
                          for c, flags in d["combinations"].items()}
        res = d.get("resources")
        if res is not None:
            lexicons = [DictionaryLexicon(c, frozenset(entries))
                        for c, entries in res["lexicons"].items()]
            a.resources = AdvResources(tfidf, lexicons=lexicons,
                                       pos_tags=pos_tags,
                                       pos_inventory=tuple(res["pos_inventory"]),
                                       embeddings=embeddings,
                                       appraisal=appraisal,
                                       appraisal_dim=res["appraisal_dim"])
            used = {f for combo in a.combinations.values() for f in combo.enabled()}
            if "word_embeddings" in used and embeddings is None:
                raise ResourceError("stored model uses embedding features; pass an embedding file")
            if "pos_tags" in used and pos_tags is None:
                raise ResourceError("stored model uses POS features; pass a POS sidecar")
            if "appraisal_predictions" in used and appraisal is None:
                raise ResourceError("stored model uses appraisal features; pass an appraisal sidecar")
        if d["cpm_artifact"]:
            a.cpm_artifact = from_dict(d["cpm_artifact"])
        return a

    return from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def train_emotion_me(corpus: Corpus, config: MaxEntConfig | None = None,
                     stack_source: str | None = None,
                     cpm_artifact: MeArtifact | None = None) -> MeArtifact:
    """Emo-ME-Base, or its component-stacked variants when ``stack_source``
    is 'gold' or 'predicted' (the latter needs a component artifact)."""
    stemmed = [preprocess(i) for i in corpus]
    tfidf = tfidf_fit(stemmed)
    dim = tfidf.dim
    X = [tfidf_transform(tfidf, s) for s in stemmed]
    if stack_source is not None:
        if stack_source == "predicted":
            if cpm_artifact is None:
                raise ConfigError("predicted component stacking needs a component model")
            cpm_values = [cpm_artifact.predict_components(s, i.id)
                          for s, i in zip(stemmed, corpus)]
        else:
            cpm_values = [i.cpm for i in corpus]
        X = [stack_component_features(x, dim, c, stack_source)
             for x, c in zip(X, cpm_values)]
        dim += len(COMPONENTS)
    if corpus.mode == SINGLE_LABEL:
        y = [next(iter(i.emotions)) for i in corpus]
        model = train_maxent(X, y, corpus.emotion_inventory, MULTINOMIAL, dim, config)
    else:
        model = train_one_vs_rest(X, [set(i.emotions) for i in corpus],
                                  corpus.emotion_inventory, dim, config)
    tag = "emo-me-base" if stack_source is None else f"emo-cpm-me-{'gold' if stack_source == 'gold' else 'pred'}"
    return MeArtifact(tag, corpus.mode, corpus.emotion_inventory, tfidf, dim,
                      emotion_model=model, stack_source=stack_source,
                      cpm_artifact=cpm_artifact)


def train_component_me(corpus: Corpus, config: MaxEntConfig | None = None,
                       resources_loader=None, dev_ratio: float = 0.1,
                       seed: int = 0) -> MeArtifact:
    """Cpm-ME-Base (no resources) or Cpm-ME-Adv with a per-component
    exhaustive feature combination search on a held-out dev slice."""
    stemmed = [preprocess(i) for i in corpus]
    tfidf = tfidf_fit(stemmed)
    X_base = [tfidf_transform(tfidf, s) for s in stemmed]
    artifact = MeArtifact("cpm-me-base", corpus.mode, corpus.emotion_inventory,
                          tfidf, tfidf.dim)
    if resources_loader is None:
        for j, comp in enumerate(COMPONENTS):
            y = [i.cpm[j] for i in corpus]
            artifact.component_models[comp] = train_maxent(
                X_base, y, (comp,), BINARY, tfidf.dim, config)
        return artifact

    resources: AdvResources = resources_loader(tfidf, [i.id for i in corpus])
    artifact.tag = "cpm-me-adv"
    artifact.resources = resources
    sub_train, dev = split_train_test(corpus, ratio=1.0 - dev_ratio, seed=seed)
    tr_stem = [preprocess(i) for i in sub_train]
    dv_stem = [preprocess(i) for i in dev]
    for j, comp in enumerate(COMPONENTS):
        result = feature_combination_search(
            tr_stem, [i.id for i in sub_train], [i.cpm[j] for i in sub_train],
            dv_stem, [i.id for i in dev], [i.cpm[j] for i in dev],
            comp, resources, config)
        artifact.combinations[comp] = result.best
        artifact.search_results[comp] = result
        dim = feature_dim(resources, result.best)
        X = [build_cpm_adv_features(s, i.id, result.best, resources)[0]
             for s, i in zip(stemmed, corpus)]
        artifact.component_models[comp] = train_maxent(
            X, [i.cpm[j] for i in corpus], (comp,), BINARY, dim, config)
    return artifact


def evaluate_components_me(artifact: MeArtifact, corpus: Corpus):
    from .metrics import evaluate
    gold = {i.id: {c for c, v in zip(COMPONENTS, i.cpm) if v} for i in corpus}
    pred = {}
    for inst in corpus:
        stemmed = preprocess(inst)
        flags = artifact.predict_components(stemmed, inst.id)
        pred[inst.id] = {c for c, v in zip(COMPONENTS, flags) if v}
    return evaluate(gold, pred, COMPONENTS)


def evaluate_emotions_me(artifact: MeArtifact, corpus: Corpus):
    from .metrics import evaluate
    gold = {i.id: set(i.emotions) for i in corpus}
    pred = {i.id: artifact.predict_emotions(i) for i in corpus}
    return evaluate(gold, pred, corpus.emotion_inventory)


# ---------------------------------------------------------------------------
# Neural family
# ---------------------------------------------------------------------------

def build_examples(corpus: Corpus, embeddings: dict[str, np.ndarray]) -> list[Example]:
    out = []
    for inst in corpus:
        out.append(Example(inst.id, embeddings[inst.id],
                           emotion_multi_hot(inst, corpus.emotion_inventory),
                           np.array([float(v) for v in inst.cpm])))
    return out


def embeddings_for(corpus: Corpus, store_path: str | None = None,
                   fallback_dim: int = 64, seed: int = 0) -> tuple[dict[str, np.ndarray], int]:
    store = load_token_embedding_store(store_path) if store_path else None
    table = resolve_token_embeddings(corpus.instances, tokenize, store=store,
                                     fallback=True, fallback_dim=fallback_dim, seed=seed)
    dim = store.dimension if store else fallback_dim
    return table, dim


def train_neural(tag: str, train_corpus: Corpus, config: ModelConfig,
                 embeddings: dict[str, np.ndarray], input_dim: int,
                 dev_ratio: float = 0.1,
                 frozen_cpm: SingleTaskModel | None = None) -> tuple[NeuralModel, TrainingLog]:
    train_split, dev_split = split_train_test(train_corpus, ratio=1.0 - dev_ratio,
                                              seed=config.seed)
    model = build_model(tag, config, input_dim, train_corpus.emotion_inventory,
                        frozen_cpm=frozen_cpm)
    log = train_model(model, build_examples(train_split, embeddings), train_corpus.mode,
                      dev=build_examples(dev_split, embeddings) or None)
    return model, log


def evaluate_neural(model: NeuralModel, corpus: Corpus,
                    embeddings: dict[str, np.ndarray]):
    """Metrics for the model's primary task over ``corpus``."""
    from .metrics import evaluate
    examples = build_examples(corpus, embeddings)
    if model.has_emo:
        gold = {i.id: set(i.emotions) for i in corpus}
        pred = {ex.id: predict_example(model, ex, corpus.mode)[0] for ex in examples}
        return evaluate(gold, pred, corpus.emotion_inventory)
    gold = {i.id: {c for c, v in zip(COMPONENTS, i.cpm) if v} for i in corpus}
    pred = {}
    for ex in examples:
        _, cpm_probs = predict_example(model, ex, corpus.mode)
        pred[ex.id] = {c for c, p in zip(COMPONENTS, cpm_probs) if p > 0.5}
    return evaluate(gold, pred, COMPONENTS)
