"""Write the built-in verification corpus to data/corpus/ as one JSON file per case."""

import argparse
import json
from pathlib import Path

from katohodge.corpus import builtin_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path(__file__).resolve().parents[1] / "data" / "corpus", type=Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for case in builtin_corpus():
        path = args.out / f"{case.name}.json"
        path.write_text(json.dumps(case.to_json(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(builtin_corpus())} cases to {args.out}")


if __name__ == "__main__":
    main()
