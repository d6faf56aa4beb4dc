"""Regenerate the JSON input documents in ``fixtures/`` from the named presentations."""
import argparse
import json
from pathlib import Path

from tmmp_engine.cli import presentation_document
from tmmp_engine.fixtures import ALL


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in ALL.items():
        path = out / f"{name}.json"
        path.write_text(json.dumps(presentation_document(make()), indent=2) + "\n")
        print(path)


if __name__ == "__main__":
    main()
