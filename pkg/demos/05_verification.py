"""Run the machine-verification suite in-process and summarize the results,
including the eigenvalue-1/18 multiplicity data for the three-letter chain.

Run:  python3 demos/05_verification.py
"""

from gmpy2 import mpq

from burnside_lab import run_suite, verify_ck_multiplicities

results = run_suite("all", max_n=5)
width = max(len(r.name) for r in results)
for r in results:
    print("%-4s %-*s %r" % (r.status.upper(), width, r.name, r.params))
failed = [r for r in results if not r.passed]
print("\n%d checks, %d failed" % (len(results), len(failed)))

print("\neigenvalue 1/18 of the three-letter chain:")
for n in (3, 4, 5, 6):
    result = verify_ck_multiplicities(3, n, mpq(1, 18))
    print("  n=%d: multiplicity %s (orbit chain: %s)  [%s]"
          % (n, result.details.get("multiplicity"),
             result.details["lumped_multiplicity"], result.details["method"]))
