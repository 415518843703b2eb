"""Confusion matrices and precision / recall / F1 / accuracy reports."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch

CANONICAL_ORDER = (-1, 0, 1)


def _label_order(labels) -> tuple:
    labels = set(labels)
    known = [c for c in CANONICAL_ORDER if c in labels]
    rest = sorted(labels - set(CANONICAL_ORDER))
    return tuple(known + rest)


@dataclass(frozen=True)
class ConfusionMatrix:
    """``counts[i, j]`` is the number of items with gold ``labels[i]`` predicted as ``labels[j]``."""

    labels: tuple
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def cell(self, gold, pred) -> int:
        return int(self.counts[self.labels.index(gold), self.labels.index(pred)])


def confusion(golds, preds, labels=None) -> ConfusionMatrix:
    golds = list(golds)
    preds = list(preds)
    if len(golds) != len(preds):
        raise LengthMismatch(f"{len(golds)} gold labels but {len(preds)} predictions")
    if not golds:
        raise ValueError("need at least one labelled item")
    order = _label_order(labels if labels is not None else golds + preds)
    pos = {c: i for i, c in enumerate(order)}
    counts = np.zeros((len(order), len(order)), dtype=np.int64)
    for g, p in zip(golds, preds):
        counts[pos[g], pos[p]] += 1
    return ConfusionMatrix(labels=order, counts=counts)


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    per_class: dict
    macro_precision: float
    macro_recall: float
    macro_f1: float
    micro_precision: float
    micro_recall: float
    micro_f1: float
    accuracy: float
    total: int
    skipped: int = 0


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def evaluate(cm: ConfusionMatrix, skipped: int = 0) -> EvalReport:
    """Per-class and averaged scores.

    Undefined ratios are 0. Macro averages run over the classes that occur in
    the gold labels; a class that is only ever predicted still lowers other
    classes' precision but is not itself averaged.
    """
    counts = cm.counts
    n = int(counts.sum())
    diag = np.diag(counts)
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    per_class = {}
    for i, label in enumerate(cm.labels):
        p = _ratio(int(diag[i]), int(col[i]))
        r = _ratio(int(diag[i]), int(row[i]))
        per_class[label] = ClassScores(p, r, _f1(p, r), int(row[i]))
    present = [label for i, label in enumerate(cm.labels) if row[i] > 0]
    macro_p = sum(per_class[c].precision for c in present) / len(present)
    macro_r = sum(per_class[c].recall for c in present) / len(present)
    macro_f = sum(per_class[c].f1 for c in present) / len(present)
    tp = int(diag.sum())
    micro_p = _ratio(tp, int(col.sum()))
    micro_r = _ratio(tp, int(row.sum()))
    return EvalReport(
        per_class=per_class,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f,
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f1=_f1(micro_p, micro_r),
        accuracy=_ratio(tp, n),
        total=n,
        skipped=skipped,
    )


def _fmt_label(label) -> str:
    return f"{label:+d}" if isinstance(label, (int, np.integer)) and label != 0 else str(label)


def format_report(report: EvalReport, title: str | None = None) -> str:
    lines = []
    if title:
        lines.append(title)
    lines.append(f"{'':<10}{'Precision':>10}{'Recall':>10}{'F1-score':>10}{'Accuracy':>10}")
    lines.append(
        f"{'macro':<10}{report.macro_precision:>10.4f}{report.macro_recall:>10.4f}"
        f"{report.macro_f1:>10.4f}{report.accuracy:>10.4f}"
    )
    lines.append(
        f"{'micro':<10}{report.micro_precision:>10.4f}{report.micro_recall:>10.4f}{report.micro_f1:>10.4f}"
    )
    lines.append(f"{'class':<10}{'Precision':>10}{'Recall':>10}{'F1-score':>10}{'Support':>10}")
    for label, s in report.per_class.items():
        lines.append(
            f"{_fmt_label(label):<10}{s.precision:>10.4f}{s.recall:>10.4f}{s.f1:>10.4f}{s.support:>10d}"
        )
    lines.append(f"evaluated={report.total} skipped={report.skipped}")
    return "\n".join(lines)


def report_to_tsv(report: EvalReport) -> str:
    rows = ["scope\tprecision\trecall\tf1\taccuracy\tsupport"]
    rows.append(
        f"macro\t{report.macro_precision!r}\t{report.macro_recall!r}\t{report.macro_f1!r}\t{report.accuracy!r}\t{report.total}"
    )
    rows.append(f"micro\t{report.micro_precision!r}\t{report.micro_recall!r}\t{report.micro_f1!r}\t\t{report.total}")
    for label, s in report.per_class.items():
        rows.append(f"{label}\t{s.precision!r}\t{s.recall!r}\t{s.f1!r}\t\t{s.support}")
    rows.append(f"skipped\t\t\t\t\t{report.skipped}")
    return "\n".join(rows) + "\n"
