"""Paraphrase-pair corpora: loading, deterministic splitting and scoring.

Pair files are tab separated with four columns ``id, text1, text2, class``
where class is one of -1 (not paraphrase), 0 (not sure), 1 (paraphrase).
A first line whose class field is not an integer is treated as a header.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import groupsim
from .embeddings import EmbeddingTable, sentence_to_group, tokenize
from .errors import EmptySentenceGroup, InvalidClass, ParseError, SingularGram, TooFewRecords
from .linalg import DEFAULT_TOL

CLASSES = (-1, 0, 1)
PROJECTION_SIM = "projection_sim"
PAIRWISE_MEAN = "pairwise_mean"
MEASURES = (PROJECTION_SIM, PAIRWISE_MEAN)

# Knuth's MMIX linear congruential generator, modulo 2**64.
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PairRecord:
    id: str
    text1: str
    text2: str
    gold_class: int

    def __post_init__(self):
        if self.gold_class not in CLASSES:
            raise ValueError(f"gold_class must be in {CLASSES}, got {self.gold_class}")
        if not self.text1.strip() or not self.text2.strip():
            raise ValueError(f"record {self.id}: texts must be nonempty")


@dataclass(frozen=True)
class ScoredPair:
    record: PairRecord
    proximity: float | None = None
    skipped_reason: str | None = None

    def __post_init__(self):
        if (self.proximity is None) == (self.skipped_reason is None):
            raise ValueError("exactly one of proximity and skipped_reason must be set")

    @property
    def skipped(self) -> bool:
        return self.skipped_reason is not None


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.7
    seed: int = 42

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def _parse_int(field: str) -> int | None:
    try:
        return int(field.strip())
    except ValueError:
        return None


def load_pairs(path) -> list[PairRecord]:
    path = Path(path)
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(f"expected 4 tab-separated columns, got {len(fields)}", lineno, path)
            ident, text1, text2, label = fields
            cls = _parse_int(label)
            if cls is None:
                if not records and lineno == 1:
                    continue
                raise ParseError(f"class {label!r} is not an integer", lineno, path)
            if cls not in CLASSES:
                raise InvalidClass(f"class {cls} not in {{-1, 0, 1}}", lineno, path)
            if not text1.strip() or not text2.strip():
                raise ParseError("empty text", lineno, path)
            records.append(PairRecord(ident.strip() or f"line{lineno}", text1, text2, cls))
    return records


def write_pairs(records: list[PairRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\ttext1\ttext2\tclass\n")
        for r in records:
            fh.write(f"{r.id}\t{r.text1}\t{r.text2}\t{r.gold_class}\n")


def lcg_stream(seed: int):
    """Yield successive 64-bit states of the MMIX generator started at ``seed``."""
    state = seed & _MASK64
    while True:
        state = (state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        yield state


def seeded_permutation(n: int, seed: int) -> list[int]:
    """Fisher-Yates shuffle of ``range(n)`` driven by the MMIX generator.

    For ``i`` from ``n - 1`` down to 1 the swap index is the high 32 bits of the
    next state modulo ``i + 1``.
    """
    order = list(range(n))
    rng = lcg_stream(seed)
    for i in range(n - 1, 0, -1):
        j = (next(rng) >> 32) % (i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def split(records: list[PairRecord], spec: SplitSpec) -> tuple[list[PairRecord], list[PairRecord]]:
    """Seeded shuffle, then cut at ``round(train_fraction * N)`` (halves round up).

    The cut is clamped to ``[1, N - 1]`` so neither part is empty.
    """
    n = len(records)
    if n < 2:
        raise TooFewRecords(f"need at least 2 records to split, got {n}")
    cut = int(math.floor(spec.train_fraction * n + 0.5))
    cut = min(max(cut, 1), n - 1)
    order = seeded_permutation(n, spec.seed)
    shuffled = [records[i] for i in order]
    return shuffled[:cut], shuffled[cut:]


def score_record(
    record: PairRecord,
    table: EmbeddingTable,
    measure: str = PROJECTION_SIM,
    tol: float = DEFAULT_TOL,
    dedup: bool = True,
    variant: str = groupsim.MEAN,
    method: str = groupsim.BASIS,
) -> ScoredPair:
    groups = []
    for side, text in (("text1", record.text1), ("text2", record.text2)):
        try:
            groups.append(sentence_to_group(tokenize(text), table, dedup=dedup).group)
        except EmptySentenceGroup as exc:
            return ScoredPair(record, skipped_reason=f"empty group in {side} (missing: {' '.join(exc.missing)})")
    a, b = groups
    if measure == PROJECTION_SIM:
        try:
            value = groupsim.sim_symmetric(a, b, tol=tol, variant=variant, method=method).value
        except SingularGram:
            return ScoredPair(record, skipped_reason="singular gram matrix")
    elif measure == PAIRWISE_MEAN:
        # Mapped affinely from [-1, 1] onto [0, 1] so thresholds share one range.
        value = (groupsim.pairwise_mean_cosine(a, b) + 1.0) / 2.0
    else:
        raise ValueError(f"unknown measure {measure!r}")
    return ScoredPair(record, proximity=value)


def score_pairs(
    records: list[PairRecord],
    table: EmbeddingTable,
    measure: str = PROJECTION_SIM,
    tol: float = DEFAULT_TOL,
    dedup: bool = True,
    variant: str = groupsim.MEAN,
    method: str = groupsim.BASIS,
    workers: int = 1,
) -> list[ScoredPair]:
    """Score every record; output order always matches input order."""
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")

    def job(rec):
        return score_record(rec, table, measure, tol, dedup, variant, method)

    if workers <= 1:
        return [job(r) for r in records]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, records))


def write_scored(scored: list[ScoredPair], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\tproximity\tgold_class\tskipped_reason\n")
        for s in scored:
            prox = "" if s.proximity is None else repr(s.proximity)
            fh.write(f"{s.record.id}\t{prox}\t{s.record.gold_class}\t{s.skipped_reason or ''}\n")
