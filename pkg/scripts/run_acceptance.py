"""Run the acceptance suite and print one PASS/FAIL line per criterion.

    python3 scripts/run_acceptance.py
"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    # -s lets every criterion print its line as it finishes
    sys.exit(pytest.main(["-q", "-s", "-p", "no:cacheprovider", str(ROOT / "tests" / "test_acceptance.py")]))
