"""Threshold classification of proximity values and training of the thresholds.

A proximity ``mu`` in [0, 1] is mapped to a class with two clipping constants
``a <= b``: class 1 when ``mu >= b``, class 0 when ``a <= mu < b``, class -1
when ``mu < a``. The two-class modes merge 0 into -1 (only ``b`` is used) or
0 into 1 (only ``a`` is used).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import ScoredPair
from .errors import DegenerateTraining, InvalidProximity, ParseError
from .metrics import confusion, evaluate

MACRO_PRECISION = "macro_precision"
ACCURACY = "accuracy"
OBJECTIVES = (MACRO_PRECISION, ACCURACY)


class Mode(str, enum.Enum):
    THREE_CLASS = "three_class"
    MERGE_LOW = "two_class_merge_low"  # 0 and -1 merged, reported as -1
    MERGE_HIGH = "two_class_merge_high"  # 1 and 0 merged, reported as 1

    @property
    def labels(self) -> tuple[int, ...]:
        return (-1, 0, 1) if self is Mode.THREE_CLASS else (-1, 1)

    def map_gold(self, cls: int) -> int:
        if cls == 0 and self is Mode.MERGE_LOW:
            return -1
        if cls == 0 and self is Mode.MERGE_HIGH:
            return 1
        return cls


@dataclass(frozen=True)
class ThresholdModel:
    mode: Mode
    lower_a: float | None = None
    upper_b: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        needs_a = self.mode in (Mode.THREE_CLASS, Mode.MERGE_HIGH)
        needs_b = self.mode in (Mode.THREE_CLASS, Mode.MERGE_LOW)
        if needs_a != (self.lower_a is not None) or needs_b != (self.upper_b is not None):
            raise ValueError(f"{self.mode.value} needs lower_a={needs_a}, upper_b={needs_b}")
        for bound in (self.lower_a, self.upper_b):
            if bound is not None and not 0.0 <= bound <= 1.0:
                raise ValueError(f"bounds must lie in [0, 1], got {bound}")
        if self.mode is Mode.THREE_CLASS and self.lower_a > self.upper_b:
            raise ValueError(f"lower_a {self.lower_a} exceeds upper_b {self.upper_b}")


def predict(mu: float, model: ThresholdModel) -> int:
    if not 0.0 <= mu <= 1.0:
        raise InvalidProximity(f"proximity {mu} outside [0, 1]")
    if model.mode is Mode.THREE_CLASS:
        if mu >= model.upper_b:
            return 1
        return 0 if mu >= model.lower_a else -1
    if model.mode is Mode.MERGE_LOW:
        return 1 if mu >= model.upper_b else -1
    return 1 if mu >= model.lower_a else -1


def predict_many(mus, model: ThresholdModel) -> list[int]:
    return [predict(float(mu), model) for mu in mus]


@dataclass
class TrainReport:
    mode: Mode
    lower_a: float | None
    upper_b: float | None
    objective: str
    objective_value: float
    macro_precision: float
    macro_recall: float
    accuracy: float
    candidates: int
    grid_size: int
    n_train: int
    n_skipped: int
    tie_break: list[str] = field(default_factory=list)


def candidate_thresholds(proximities) -> np.ndarray:
    """0, 1, and the midpoints between consecutive distinct proximity values."""
    v = np.unique(np.asarray(proximities, dtype=np.float64))
    mids = (v[:-1] + v[1:]) / 2.0
    return np.unique(np.concatenate(([0.0], mids, [1.0])))


def _ratio(num, den):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.zeros(np.broadcast(num, den).shape)
    np.divide(num, den, out=out, where=den > 0)
    return out


def _scores(tp: list, pred_total: list, support: list, n: int):
    """Macro precision, macro recall and accuracy from per-class count arrays.

    Class order inside the sums is the canonical label order, matching
    ``metrics.evaluate``.
    """
    k = len(tp)
    prec = _ratio(tp[0], pred_total[0])
    rec = _ratio(tp[0], support[0])
    correct = np.asarray(tp[0], dtype=np.float64)
    for i in range(1, k):
        prec = prec + _ratio(tp[i], pred_total[i])
        rec = rec + _ratio(tp[i], support[i])
        correct = correct + tp[i]
    return prec / k, rec / k, correct / n


def _pick(objective, recall, uppers, lowers) -> int:
    """Index of the best candidate: objective, then recall (both high), then bounds (low)."""
    order = np.lexsort((lowers, uppers, -recall, -objective))
    return int(order[0])


def _trace(objective, recall, uppers, lowers, best: int) -> list[str]:
    top = objective == objective[best]
    lines = [f"objective {float(objective[best])!r} attained by {int(top.sum())} candidate(s)"]
    top &= recall == recall[best]
    lines.append(f"highest macro recall {float(recall[best])!r} keeps {int(top.sum())}")
    top &= uppers == uppers[best]
    lines.append(f"lowest upper bound keeps {int(top.sum())}")
    top &= lowers == lowers[best]
    lines.append(f"lowest lower bound keeps {int(top.sum())}")
    return lines


def train(
    scored: list[ScoredPair],
    mode: Mode | str,
    objective: str = MACRO_PRECISION,
) -> tuple[ThresholdModel, TrainReport]:
    """Exhaustive search over the candidate thresholds.

    Skipped pairs are ignored. In three-class mode every ordered pair ``a <= b``
    of candidates is scored.
    """
    mode = Mode(mode)
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    usable = [s for s in scored if not s.skipped]
    n_skipped = len(scored) - len(usable)
    if not usable:
        raise DegenerateTraining("no scored (non-skipped) training pairs")
    mu = np.array([s.proximity for s in usable], dtype=np.float64)
    if np.any((mu < 0.0) | (mu > 1.0)):
        raise InvalidProximity("training proximities must lie in [0, 1]")
    gold = np.array([mode.map_gold(s.record.gold_class) for s in usable])
    labels = mode.labels
    absent = [c for c in labels if not np.any(gold == c)]
    if absent:
        raise DegenerateTraining(f"{mode.value} training data lacks class(es) {absent}")

    cand = candidate_thresholds(mu)
    n = len(mu)
    support = [int(np.sum(gold == c)) for c in labels]
    # below[c][i]: number of gold-c pairs with proximity strictly below cand[i]
    below = [np.searchsorted(np.sort(mu[gold == c]), cand, side="left") for c in labels]

    notes = []
    if np.unique(mu).size == 1:
        notes.append("all training proximities are equal; only the boundary thresholds 0 and 1 are available")

    if mode is Mode.THREE_CLASS:
        best = None
        grid = 0
        for i, obj, rec in _three_class_rows(cand, below, support, n, objective):
            uppers = cand[i:]
            j = _pick(obj, rec, uppers, np.full(uppers.shape, cand[i]))
            grid += uppers.size
            key = (-obj[j], -rec[j], uppers[j], cand[i])
            if best is None or key < best[0]:
                best = (key, i, i + j)
        (neg_obj, neg_rec, upper, lower), _, _ = best
        trace = _three_class_trace(cand, below, support, n, objective, -neg_obj, -neg_rec, upper, lower)
        model = ThresholdModel(mode, lower_a=float(lower), upper_b=float(upper))
    else:
        # Predicted -1 below the threshold, 1 at or above it.
        tp = [below[0], support[1] - below[1]]
        pred_total = [below[0] + below[1], n - below[0] - below[1]]
        prec, rec, acc = _scores(tp, pred_total, support, n)
        obj = prec if objective == MACRO_PRECISION else acc
        zeros = np.zeros_like(cand)
        if mode is Mode.MERGE_LOW:
            j = _pick(obj, rec, cand, zeros)
            trace = _trace(obj, rec, cand, zeros, j)
            model = ThresholdModel(mode, upper_b=float(cand[j]))
        else:
            j = _pick(obj, rec, zeros, cand)
            trace = _trace(obj, rec, zeros, cand, j)
            model = ThresholdModel(mode, lower_a=float(cand[j]))
        grid = cand.size

    final = evaluate(confusion(gold.tolist(), predict_many(mu, model), labels=labels))
    report = TrainReport(
        mode=mode,
        lower_a=model.lower_a,
        upper_b=model.upper_b,
        objective=objective,
        objective_value=final.macro_precision if objective == MACRO_PRECISION else final.accuracy,
        macro_precision=final.macro_precision,
        macro_recall=final.macro_recall,
        accuracy=final.accuracy,
        candidates=int(cand.size),
        grid_size=int(grid),
        n_train=n,
        n_skipped=n_skipped,
        tie_break=notes + trace,
    )
    return model, report


def _three_class_rows(cand, below, support, n, objective):
    """Yield ``(i, objective, recall)`` for lower bound ``cand[i]`` and every upper bound ``cand[i:]``."""
    for i in range(len(cand)):
        lo = [below[c][i] for c in range(3)]
        hi = [below[c][i:] for c in range(3)]
        tp = [lo[0], hi[1] - lo[1], support[2] - hi[2]]
        pred_total = [
            sum(lo),
            sum(hi[c] - lo[c] for c in range(3)),
            sum(support[c] - hi[c] for c in range(3)),
        ]
        prec, rec, acc = _scores(tp, pred_total, support, n)
        yield i, (prec if objective == MACRO_PRECISION else acc), rec


def _three_class_trace(cand, below, support, n, objective, best_obj, best_rec, upper, lower) -> list[str]:
    tied = [0, 0, 0, 0]
    for i, obj, rec in _three_class_rows(cand, below, support, n, objective):
        top = obj == best_obj
        tied[0] += int(top.sum())
        top &= rec == best_rec
        tied[1] += int(top.sum())
        top &= cand[i:] == upper
        tied[2] += int(top.sum())
        tied[3] += int(top.sum()) if cand[i] == lower else 0
    return [
        f"objective {float(best_obj)!r} attained by {tied[0]} candidate(s)",
        f"highest macro recall {float(best_rec)!r} keeps {tied[1]}",
        f"lowest upper bound keeps {tied[2]}",
        f"lowest lower bound keeps {tied[3]}",
    ]


def mapped_gold(scored: list[ScoredPair], mode: Mode | str) -> list[int]:
    mode = Mode(mode)
    return [mode.map_gold(s.record.gold_class) for s in scored if not s.skipped]


# -- persistence -------------------------------------------------------------

_KEYS = ("version", "mode", "lower_a", "upper_b", "measure", "objective", "objective_value", "grid_size")


def _fmt_bound(x: float | None) -> str:
    return "none" if x is None else repr(float(x))


def save_model(path, model: ThresholdModel, report: TrainReport, measure: str) -> None:
    values = {
        "version": __version__,
        "mode": model.mode.value,
        "lower_a": _fmt_bound(model.lower_a),
        "upper_b": _fmt_bound(model.upper_b),
        "measure": measure,
        "objective": report.objective,
        "objective_value": repr(float(report.objective_value)),
        "grid_size": str(report.grid_size),
    }
    Path(path).write_text("".join(f"{k}={values[k]}\n" for k in _KEYS), encoding="utf-8")


def load_model(path) -> tuple[ThresholdModel, dict[str, str]]:
    """Read a model file; returns the model and all key=value fields."""
    path = Path(path)
    fields: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError("expected key=value", lineno, path)
        fields[key.strip()] = value.strip()
    missing = [k for k in ("mode", "lower_a", "upper_b") if k not in fields]
    if missing:
        raise ParseError(f"missing keys {missing}", None, path)

    def bound(key):
        raw = fields[key]
        if raw == "none":
            return None
        try:
            return float(raw)
        except ValueError:
            raise ParseError(f"{key} is not a number: {raw!r}", None, path) from None

    try:
        model = ThresholdModel(Mode(fields["mode"]), lower_a=bound("lower_a"), upper_b=bound("upper_b"))
    except ValueError as exc:
        raise ParseError(str(exc), None, path) from None
    return model, fields
