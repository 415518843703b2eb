"""Regenerate the bundled synthetic corpus and its one-hot embedding table.

    python scripts/make_synthetic_corpus.py [output_dir]
"""

import sys

from projsim.synthetic import DATA_DIR, write_bundle

if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else DATA_DIR
    pairs, emb = write_bundle(target)
    print(f"wrote {pairs}")
    print(f"wrote {emb}")
