"""Print one PASS/FAIL line per acceptance criterion and exit non-zero if any fail."""
import runpy
import sys
from pathlib import Path

if __name__ == "__main__":
    tests = Path(__file__).resolve().parent.parent / "tests"
    sys.path.insert(0, str(tests))
    runpy.run_path(str(tests / "test_acceptance.py"), run_name="__main__")
