"""
Running the named checks
========================

Each check reports its worst slack; negative values beyond the tolerance
would count as failures.
"""

from stabtest.verify import REGISTRY, run_suite

for r in run_suite(n=2, trials=20, seed=1):
    status = "ok  " if r.passed else "FAIL"
    print(f"{status} {r.check_name:<24} instances={r.instances:<6} worst slack={r.worst_slack: .3e}"
          f"   ({REGISTRY[r.check_name].summary})")
