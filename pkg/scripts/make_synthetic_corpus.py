#!/usr/bin/env python3
"""Regenerate the bundled synthetic corpora under data/.

Everything is seeded, so reruns reproduce the checked-in files byte for
byte. Four artifacts are produced:

* ``synthetic_tec.jsonl`` + ``synthetic_tec_stats.json`` — a single-label
  tweet-style corpus whose emotion/component co-occurrence table is
  counted here by brute force and stored alongside, so the statistics
  code path can be checked against precomputed numbers.
* ``synthetic_reman_1000.jsonl`` — a 1000-instance multi-label corpus
  for split-size checks (900/100 at a 0.9 ratio).
* ``overfit_tec.jsonl`` — 40 instances whose tokens map injectively to
  their labels; any model with enough capacity can memorize it.
* ``ablation_corpus.jsonl`` + ``ablation_pos.tsv`` — component flags are
  a function of the POS sidecar only, while the text is uninformative
  filler; the feature-combination search must discover the POS block.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from emocomp.corpus import COMPONENTS, TEC_EMOTIONS, REMAN_EMOTIONS  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"

EMOTION_WORDS = {
    "anger": ["furious", "rage", "annoyed", "mad"],
    "disgust": ["gross", "nasty", "revolting", "yuck"],
    "fear": ["scared", "terrified", "afraid", "panic"],
    "joy": ["happy", "delighted", "wonderful", "yay"],
    "sadness": ["sad", "crying", "miserable", "gloomy"],
    "surprise": ["wow", "unexpected", "astonished", "suddenly"],
}

FILLER = ["the", "a", "today", "really", "just", "so", "about", "this",
          "that", "when", "went", "saw", "thing", "day", "people", "time"]

# per-emotion probability of each component flag firing
COMPONENT_PROFILE = {
    "anger": (0.75, 0.30, 0.55, 0.40, 0.80),
    "disgust": (0.60, 0.45, 0.25, 0.55, 0.70),
    "fear": (0.70, 0.60, 0.50, 0.35, 0.75),
    "joy": (0.55, 0.25, 0.30, 0.65, 0.85),
    "sadness": (0.65, 0.35, 0.20, 0.45, 0.80),
    "surprise": (0.80, 0.40, 0.35, 0.50, 0.60),
}


def write_jsonl(path: Path, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def make_text(rng, emotion_words: list[str] | None, length: int) -> str:
    tokens = [str(rng.choice(FILLER)) for _ in range(length)]
    if emotion_words:
        pos = int(rng.integers(0, len(tokens) + 1))
        tokens.insert(pos, str(rng.choice(emotion_words)))
    return " ".join(tokens)


def make_synthetic_tec(n: int = 120) -> None:
    rng = np.random.default_rng(20240601)
    records = []
    for i in range(n):
        emotion = TEC_EMOTIONS[i % len(TEC_EMOTIONS)]
        profile = COMPONENT_PROFILE[emotion]
        cpm = [int(rng.random() < p) for p in profile]
        records.append({
            "id": f"tec{i:04d}",
            "text": make_text(rng, EMOTION_WORDS[emotion], int(rng.integers(4, 9))),
            "emotions": [emotion],
            "cpm": cpm,
            "domain": "tec",
        })
    write_jsonl(DATA / "synthetic_tec.jsonl", records)

    # brute-force the expected co-occurrence table directly off the records
    counts = {e: [0] * len(COMPONENTS) for e in TEC_EMOTIONS}
    emotion_totals = {e: 0 for e in TEC_EMOTIONS}
    component_totals = [0] * len(COMPONENTS)
    for rec in records:
        for j, flag in enumerate(rec["cpm"]):
            component_totals[j] += flag
        for e in rec["emotions"]:
            emotion_totals[e] += 1
            for j, flag in enumerate(rec["cpm"]):
                counts[e][j] += flag
    # half-up rounding via floor(x + 0.5); round() would be banker's rounding
    import math
    expected = {
        "corpus_size": n,
        "counts": counts,
        "emotion_totals": emotion_totals,
        "component_totals": component_totals,
        "percentages": {
            e: [int(math.floor(100.0 * counts[e][j] / emotion_totals[e] + 0.5))
                if emotion_totals[e] else 0
                for j in range(len(COMPONENTS))]
            for e in TEC_EMOTIONS
        },
        "total_percentages": [int(math.floor(100.0 * component_totals[j] / n + 0.5))
                              for j in range(len(COMPONENTS))],
    }
    (DATA / "synthetic_tec_stats.json").write_text(
        json.dumps(expected, indent=2) + "\n", encoding="utf-8")


def make_synthetic_reman(n: int = 1000) -> None:
    rng = np.random.default_rng(20240602)
    label_pool = [e for e in REMAN_EMOTIONS if e != "neutral"]
    records = []
    for i in range(n):
        k = int(rng.integers(0, 3))
        labels = sorted(str(l) for l in rng.choice(label_pool, size=k, replace=False)) if k else ["neutral"]
        cpm = [int(rng.random() < 0.5) for _ in COMPONENTS]
        words = []
        for label in labels:
            if label in EMOTION_WORDS:
                words.extend(EMOTION_WORDS[label])
        records.append({
            "id": f"rem{i:04d}",
            "text": make_text(rng, words or None, int(rng.integers(5, 12))),
            "emotions": labels,
            "cpm": cpm,
            "domain": "reman",
        })
    write_jsonl(DATA / "synthetic_reman_1000.jsonl", records)


def make_overfit(n: int = 40) -> None:
    # token -> label mapping is injective: instance i contains the unique
    # token "kw<i>" and nothing shared with other labels
    records = []
    for i in range(n):
        emotion = TEC_EMOTIONS[i % len(TEC_EMOTIONS)]
        cpm = [1 if (i >> j) & 1 else 0 for j in range(len(COMPONENTS))]
        records.append({
            "id": f"ov{i:02d}",
            "text": f"kw{i} kw{i} kw{i}",
            "emotions": [emotion],
            "cpm": cpm,
            "domain": "tec",
        })
    write_jsonl(DATA / "overfit_tec.jsonl", records)


def make_ablation(n: int = 200) -> None:
    rng = np.random.default_rng(20240603)
    records = []
    pos_lines = []
    for i in range(n):
        inst_id = f"ab{i:04d}"
        informative = int(rng.random() < 0.5)
        # every component flag is a pure function of the sidecar tag, while
        # the text is shuffled filler shared across both classes
        cpm = [informative] * len(COMPONENTS)
        tags = ["VB", "DT"] + (["NN"] if informative else ["JJ"])
        records.append({
            "id": inst_id,
            "text": make_text(rng, None, int(rng.integers(5, 10))),
            "emotions": [],
            "cpm": cpm,
            "domain": "other",
        })
        pos_lines.append(inst_id + "\t" + " ".join(tags))
    write_jsonl(DATA / "ablation_corpus.jsonl", records)
    (DATA / "ablation_pos.tsv").write_text("\n".join(pos_lines) + "\n", encoding="utf-8")


def main() -> None:
    DATA.mkdir(exist_ok=True)
    make_synthetic_tec()
    make_synthetic_reman()
    make_overfit()
    make_ablation()
    print(f"wrote corpora to {DATA}")


if __name__ == "__main__":
    main()
