"""Synthetic corpora with known structure, for tests and protocol replays.

The bundled corpus uses an orthogonally coded vocabulary: token ``w017`` maps to
the 17th unit vector. Under that coding a word's cosine against a sentence is 1
when the sentence contains the word and 0 otherwise, so a pair's proximity is
governed entirely by how many tokens the two texts share.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import PairRecord, ScoredPair, write_pairs
from .embeddings import EmbeddingTable, save_embeddings

DATA_DIR = Path(__file__).parent / "data"
BUNDLED_PAIRS = DATA_DIR / "synthetic_pairs.tsv"
BUNDLED_EMBEDDINGS = DATA_DIR / "synthetic_embeddings.txt"

BUNDLE_RECORDS = 1913
BUNDLE_VOCAB = 96
BUNDLE_SEED = 20200101

# Fraction of text1 tokens reused in text2, per gold class.
OVERLAP_BANDS = {1: (0.8, 1.0), 0: (0.4, 0.65), -1: (0.0, 0.3)}
CLASS_WEIGHTS = {1: 0.3, 0: 0.35, -1: 0.35}
OOV_WORDS = ("zzyzx", "qwxv", "xylk")


def vocabulary(size: int) -> list[str]:
    return [f"w{i:03d}" for i in range(size)]


def orthogonal_table(size: int) -> EmbeddingTable:
    tokens = vocabulary(size)
    return EmbeddingTable(vectors=np.eye(size), index={t: i for i, t in enumerate(tokens)})


def _render(tokens: list[str]) -> str:
    text = " ".join(tokens)
    return text[:1].upper() + text[1:] + "."


def make_pairs(
    n: int,
    vocab_size: int = BUNDLE_VOCAB,
    seed: int = BUNDLE_SEED,
    fully_oov: int = 5,
) -> list[PairRecord]:
    """Sentence pairs whose token overlap is drawn from the band of their class.

    The last ``fully_oov`` records have a text1 made only of unknown words so that
    scoring must skip them. Some other texts carry a stray unknown word.
    """
    rng = np.random.default_rng(seed)
    vocab = np.array(vocabulary(vocab_size))
    classes = np.array(list(CLASS_WEIGHTS))
    weights = np.array(list(CLASS_WEIGHTS.values()))
    records = []
    for k in range(n):
        cls = int(rng.choice(classes, p=weights))
        length = int(rng.integers(5, 10))
        picked = rng.choice(vocab_size, size=2 * length, replace=False)
        first = list(vocab[picked[:length]])
        lo, hi = OVERLAP_BANDS[cls]
        shared = int(np.clip(round(rng.uniform(lo, hi) * length), 0, length))
        second = first[:shared] + list(vocab[picked[length : 2 * length - shared]])
        second = [second[i] for i in rng.permutation(len(second))]
        if rng.random() < 0.1:
            second.insert(int(rng.integers(0, len(second) + 1)), str(rng.choice(OOV_WORDS)))
        if k >= n - fully_oov:
            first = list(rng.choice(OOV_WORDS, size=3))
        records.append(PairRecord(f"p{k:05d}", _render(first), _render(second), cls))
    return records


def write_bundle(directory=DATA_DIR) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    pairs = directory / BUNDLED_PAIRS.name
    emb = directory / BUNDLED_EMBEDDINGS.name
    write_pairs(make_pairs(BUNDLE_RECORDS), pairs)
    save_embeddings(orthogonal_table(BUNDLE_VOCAB), emb)
    return pairs, emb


def banded_scored_pairs(
    n: int,
    seed: int = 0,
    bands: dict[int, tuple[float, float]] | None = None,
) -> list[ScoredPair]:
    """Scored pairs whose proximity is uniform inside a per-class band.

    Default bands: -1 in [0, 0.3), 0 in [0.4, 0.6), 1 in [0.8, 1]. Classes are
    assigned round-robin so each appears about ``n / 3`` times.
    """
    bands = bands or {-1: (0.0, 0.3), 0: (0.4, 0.6), 1: (0.8, 1.0)}
    rng = np.random.default_rng(seed)
    labels = list(bands)
    out = []
    for k in range(n):
        cls = labels[k % len(labels)]
        lo, hi = bands[cls]
        mu = float(rng.uniform(lo, hi))
        out.append(ScoredPair(PairRecord(f"s{k}", "x", "y", cls), proximity=mu))
    return out
