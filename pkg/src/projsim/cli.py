"""Command-line interface.

Exit codes: 0 success, 1 I/O or unreadable model (also a failed selftest),
2 bad data (unparseable input, out-of-vocabulary sentence), 3 degenerate training.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, classifier, groupsim, metrics
from . import corpus as pairs
from .embeddings import load_embeddings, sentence_to_group, tokenize
from .errors import (
    DegenerateTraining,
    EmptySentenceGroup,
    EmptyTable,
    ParseError,
    ProjSimError,
    SingularGram,
)
from .linalg import DEFAULT_TOL

EXIT_OK, EXIT_IO, EXIT_DATA, EXIT_DEGENERATE = 0, 1, 2, 3

log = logging.getLogger("projsim")


@dataclass(frozen=True)
class RunConfig:
    embeddings: Path | None = None
    corpus: Path | None = None
    test_corpus: Path | None = None
    measure: str = pairs.PROJECTION_SIM
    mode: str = classifier.Mode.MERGE_LOW.value
    fraction: float = 0.7
    seed: int = 42
    tol: float = DEFAULT_TOL
    dedup: bool = True
    sim_form: str = groupsim.MEAN
    variant: str = groupsim.BASIS
    objective: str = classifier.MACRO_PRECISION
    workers: int = 1
    model: Path | None = None
    output: Path | None = None

    def __post_init__(self):
        if not 0.0 < self.fraction < 1.0:
            raise ValueError("--fraction must be in (0, 1)")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in vars(args).items() if k in fields and v is not None})


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_table(cfg: RunConfig):
    if cfg.embeddings is None:
        raise CliError("--embeddings is required", EXIT_DATA)
    return load_embeddings(cfg.embeddings)


def _score(records, table, cfg: RunConfig, measure: str | None = None):
    return pairs.score_pairs(
        records,
        table,
        measure=measure or cfg.measure,
        tol=cfg.tol,
        dedup=cfg.dedup,
        variant=cfg.sim_form,
        method=cfg.variant,
        workers=cfg.workers,
    )


def _partition(cfg: RunConfig):
    """Train and test records: either an internal seeded split or a fixed test file."""
    if cfg.corpus is None:
        raise CliError("--corpus is required", EXIT_DATA)
    records = pairs.load_pairs(cfg.corpus)
    if cfg.test_corpus is not None:
        return records, pairs.load_pairs(cfg.test_corpus)
    return pairs.split(records, pairs.SplitSpec(cfg.fraction, cfg.seed))


def _bound(x) -> str:
    return "--" if x is None else f"{x:.4f}"


def table2_header() -> str:
    return f"{'Method / classes':<40}{'Lower (a)':>10}{'Upper (b)':>10}{'Precision':>10}{'Recall':>10}{'F1-score':>10}{'Accuracy':>10}"


def table2_row(title: str, model: classifier.ThresholdModel, report: metrics.EvalReport) -> str:
    return (
        f"{title:<40}{_bound(model.lower_a):>10}{_bound(model.upper_b):>10}"
        f"{report.macro_precision:>10.4f}{report.macro_recall:>10.4f}{report.macro_f1:>10.4f}{report.accuracy:>10.4f}"
    )


# -- subcommands -------------------------------------------------------------


def cmd_sim(args, out) -> int:
    cfg = RunConfig.from_args(args)
    table = _load_table(cfg)
    groups = []
    for label, text in (("text1", args.text1), ("text2", args.text2)):
        try:
            sv = sentence_to_group(tokenize(text), table, dedup=cfg.dedup)
        except EmptySentenceGroup as exc:
            raise CliError(f"{label}: no token found in the embedding table (missing: {exc.missing})", EXIT_DATA)
        if sv.missing_tokens:
            print(f"{label} missing: {' '.join(sv.missing_tokens)}", file=out)
        groups.append(sv.group)
    result = groupsim.sim_symmetric(groups[0], groups[1], tol=cfg.tol, variant=cfg.sim_form, method=cfg.variant)
    print(f"sim={result.value:.6f}", file=out)
    print(f"text2_to_text1={result.b_to_a:.6f}", file=out)
    print(f"text1_to_text2={result.a_to_b:.6f}", file=out)
    print(f"evaluations={result.evaluations}", file=out)
    if cfg.measure == pairs.PAIRWISE_MEAN:
        print(f"pairwise_mean={groupsim.pairwise_mean_cosine(*groups):.6f}", file=out)
    return EXIT_OK


def cmd_score(args, out) -> int:
    cfg = RunConfig.from_args(args)
    if cfg.corpus is None:
        raise CliError("--corpus is required", EXIT_DATA)
    table = _load_table(cfg)
    scored = _score(pairs.load_pairs(cfg.corpus), table, cfg)
    if cfg.output is not None:
        pairs.write_scored(scored, cfg.output)
    else:
        print("id\tproximity\tgold_class\tskipped_reason", file=out)
        for s in scored:
            prox = "" if s.proximity is None else repr(s.proximity)
            print(f"{s.record.id}\t{prox}\t{s.record.gold_class}\t{s.skipped_reason or ''}", file=out)
    n_skip = sum(s.skipped for s in scored)
    print(f"scored={len(scored) - n_skip} skipped={n_skip}", file=sys.stderr)
    return EXIT_OK


def _train(cfg: RunConfig, train_records, table, measure: str, mode: str):
    scored = _score(train_records, table, cfg, measure)
    return classifier.train(scored, mode, objective=cfg.objective)


def cmd_train(args, out) -> int:
    cfg = RunConfig.from_args(args)
    if cfg.model is None:
        raise CliError("--model is required", EXIT_DATA)
    table = _load_table(cfg)
    train_records, test_records = _partition(cfg)
    model, rep = _train(cfg, train_records, table, cfg.measure, cfg.mode)
    classifier.save_model(cfg.model, model, rep, cfg.measure)
    print(f"split: train={len(train_records)} test={len(test_records)}", file=out)
    print(f"measure={cfg.measure} mode={rep.mode.value} objective={rep.objective}", file=out)
    print(f"{'':<20}{'Lower (a)':>10}{'Upper (b)':>10}", file=out)
    print(f"{'bounds':<20}{_bound(model.lower_a):>10}{_bound(model.upper_b):>10}", file=out)
    print(
        f"train: pairs={rep.n_train} skipped={rep.n_skipped} macro_precision={rep.macro_precision:.4f} "
        f"macro_recall={rep.macro_recall:.4f} accuracy={rep.accuracy:.4f}",
        file=out,
    )
    print(f"grid: candidates={rep.candidates} examined={rep.grid_size}", file=out)
    for line in rep.tie_break:
        print(f"tie-break: {line}", file=out)
    print(f"model written to {cfg.model}", file=out)
    return EXIT_OK


def evaluate_model(model, scored) -> metrics.EvalReport:
    usable = [s for s in scored if not s.skipped]
    golds = classifier.mapped_gold(usable, model.mode)
    preds = classifier.predict_many([s.proximity for s in usable], model)
    if not usable:
        raise CliError("no test pair could be scored", EXIT_DATA)
    cm = metrics.confusion(golds, preds, labels=model.mode.labels)
    return metrics.evaluate(cm, skipped=len(scored) - len(usable))


def cmd_eval(args, out) -> int:
    cfg = RunConfig.from_args(args)
    if cfg.model is None:
        raise CliError("--model is required", EXIT_DATA)
    try:
        model, fields = classifier.load_model(cfg.model)
    except (OSError, ParseError) as exc:
        raise CliError(f"cannot read model {cfg.model}: {exc}", EXIT_IO)
    measure = fields.get("measure", cfg.measure)
    table = _load_table(cfg)
    train_records, test_records = _partition(cfg)

    runs = [(measure, model)]
    if args.compare:
        # Thresholds are measure specific: the other measure gets its own fit
        # on the same training part, mode and objective.
        for other in pairs.MEASURES:
            if other != measure:
                other_model, _ = _train(cfg, train_records, table, other, model.mode.value)
                runs.append((other, other_model))

    print(f"split: train={len(train_records)} test={len(test_records)}", file=out)
    print(table2_header(), file=out)
    reports = []
    for m, mdl in runs:
        rep = evaluate_model(mdl, _score(test_records, table, cfg, m))
        reports.append((m, mdl, rep))
        print(table2_row(f"{m}, {mdl.mode.value}", mdl, rep), file=out)
    for m, mdl, rep in reports:
        print(file=out)
        print(metrics.format_report(rep, title=f"[{m}] {mdl.mode.value}"), file=out)
    if cfg.output is not None:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            for m, mdl, rep in reports:
                fh.write(f"# measure={m} mode={mdl.mode.value}\n")
                fh.write(metrics.report_to_tsv(rep))
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    """Compare the basis and Gram routes of the group cosine on random groups."""
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    done = singular = 0
    while done < args.trials:
        d = int(rng.integers(2, 17))
        n = int(rng.integers(1, d + 1))
        A = rng.uniform(-1.0, 1.0, size=(n, d))
        b = rng.uniform(-1.0, 1.0, size=d)
        try:
            gram = groupsim.cos_to_group_gram(b, A, args.tol)
        except SingularGram:
            singular += 1
            continue
        basis = groupsim.cos_to_group(b, groupsim.build_projector(A, args.tol))
        worst = max(worst, abs(basis - gram))
        done += 1
    ok = worst <= args.limit
    print(f"trials={done} singular_skipped={singular} max_abs_diff={worst:.3e} limit={args.limit:.0e}", file=out)
    print("selftest " + ("passed" if ok else "FAILED"), file=out)
    return EXIT_OK if ok else EXIT_IO


# -- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, corpus_flags: bool = True) -> None:
    p.add_argument("--embeddings", type=Path, help="word2vec text-format embedding file (.gz/.bz2/.xz ok)")
    if corpus_flags:
        p.add_argument("--corpus", type=Path, help="pair TSV: id, text1, text2, class")
        p.add_argument("--workers", type=int, help="threads used for batch scoring (default 1)")
    p.add_argument("--measure", choices=pairs.MEASURES, help="proximity measure (default projection_sim)")
    p.add_argument("--tol", type=float, help=f"rank tolerance (default {DEFAULT_TOL:g})")
    p.add_argument("--dedup", dest="dedup", action="store_true", default=None, help="drop repeated tokens (default)")
    p.add_argument("--no-dedup", dest="dedup", action="store_false")
    p.add_argument("--variant", choices=(groupsim.BASIS, groupsim.GRAM), help="cosine route (default basis)")
    p.add_argument(
        "--sim-form",
        choices=(groupsim.MEAN, groupsim.SUM),
        help="average each direction (mean, default) or halve the raw sums (sum)",
    )


def _protocol(p: argparse.ArgumentParser) -> None:
    p.add_argument("--test-corpus", type=Path, help="fixed test file; disables the internal split")
    p.add_argument("--fraction", type=float, help="training fraction of the split (default 0.7)")
    p.add_argument("--seed", type=int, help="split seed (default 42)")
    p.add_argument("--objective", choices=classifier.OBJECTIVES, help="training objective (default macro_precision)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="projsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="similarity of two sentences")
    p.add_argument("text1")
    p.add_argument("text2")
    _common(p, corpus_flags=False)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("score", help="score every pair of a corpus")
    _common(p)
    p.add_argument("--output", type=Path, help="scored TSV (default stdout)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("train", help="fit classification thresholds")
    _common(p)
    _protocol(p)
    p.add_argument("--mode", choices=[m.value for m in classifier.Mode], help="default two_class_merge_low")
    p.add_argument("--model", type=Path, required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on the test part")
    _common(p)
    _protocol(p)
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--compare", action="store_true", help="also fit and report the other measure")
    p.add_argument("--output", type=Path, help="write the reports as TSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("selftest", help="check the basis route against the Gram route")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--limit", type=float, default=1e-8)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateTraining as exc:
        print(f"error: degenerate training data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        name = exc.filename if exc.filename is not None else ""
        print(f"error: {name}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, EmptyTable, SingularGram, ProjSimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
