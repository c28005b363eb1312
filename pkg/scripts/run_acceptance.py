"""Run every acceptance criterion and print one PASS/FAIL line each."""
import sys

from hermlab.config import Config
from hermlab.verify import CRITERIA, run_criterion

if __name__ == "__main__":
    bad = 0
    for n in sorted(CRITERIA):
        r = run_criterion(n, Config())
        print(r.line(), flush=True)
        bad += not r.passed
    sys.exit(1 if bad else 0)
