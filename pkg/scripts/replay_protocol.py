"""Replay the threshold-training protocol on a corpus and print a results table.

For every measure and classification mode: score all pairs, split 70/30 with a
fixed seed, fit the thresholds on the larger part, evaluate on the rest.

    python scripts/replay_protocol.py [--corpus PAIRS.tsv --embeddings EMB.txt]

Defaults to the bundled synthetic corpus.
"""

import argparse

from projsim import classifier
from projsim.cli import evaluate_model, table2_header, table2_row
from projsim.corpus import MEASURES, SplitSpec, load_pairs, score_pairs, split
from projsim.embeddings import load_embeddings
from projsim.synthetic import BUNDLED_EMBEDDINGS, BUNDLED_PAIRS


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", default=BUNDLED_PAIRS)
    parser.add_argument("--embeddings", default=BUNDLED_EMBEDDINGS)
    parser.add_argument("--fraction", type=float, default=0.7)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--objective", choices=classifier.OBJECTIVES, default=classifier.MACRO_PRECISION)
    args = parser.parse_args()

    table = load_embeddings(args.embeddings)
    train_recs, test_recs = split(load_pairs(args.corpus), SplitSpec(args.fraction, args.seed))
    print(f"train={len(train_recs)} test={len(test_recs)} objective={args.objective}")
    print(table2_header())
    for measure in MEASURES:
        train_scored = score_pairs(train_recs, table, measure=measure)
        test_scored = score_pairs(test_recs, table, measure=measure)
        for mode in classifier.Mode:
            model, _ = classifier.train(train_scored, mode, objective=args.objective)
            print(table2_row(f"{measure}, {mode.value}", model, evaluate_model(model, test_scored)))


if __name__ == "__main__":
    main()
