"""
Running the verification suites
===============================

Every identity is a named check swept over a range of primes. A check
passes only if every prime matches exactly. The report serializes to JSON.
"""

import json

from diophfp.verify import VerifyConfig, report_json, run_suites

# %%
# A quick sweep with every bound capped at 61, on two worker processes.
report = run_suites(VerifyConfig.capped(61, jobs=2), pmax=61)
for r in report.results:
    print(f"{r.status:4s} {r.name:40s} p in {r.p_range}")
print("all pass:", report.passed, report.wall_time)

# %%
# The JSON document that `diophfp verify` writes.
doc = json.loads(report_json(report))
print(json.dumps(doc["results"][0], indent=2))
