"""Driving the verification suite from Python.

Assembles a small experiment configuration, runs it, prints the report
rows, and writes the CSV/JSON artifacts plus plot data for the checks that
fit a rate. The same thing is available from the command line as
``speclap run --config <file>``.
"""

import dataclasses
import os
import tempfile

from speclap.reporting import emit_plotdata, emit_report, parse_config, run_suite

CONFIG = """
# two domains, four checks; bare shapes would combine with a sizes= list
domain = interval:200
domain = square:24
seed = 2025

[check]
name = partition

[check]
name = semigroup_bounded
alpha = 1
p = 2

[check]
name = smoothing_rate
domain = interval:200
alpha = 2
s1 = 0
s2 = 1
p1 = 2
p2 = 2

[check]
name = gaussian_kernel
"""

cfg = parse_config(CONFIG)
print(f"planned domains: {cfg.domains}")
print(f"planned checks:  {[c.name for c in cfg.checks]}")

out = os.path.join(tempfile.mkdtemp(), "reports")
suite = run_suite(dataclasses.replace(cfg, out_dir=out))

print("\nreport rows")
for row in suite.rows:
    print(f"  [{row.status:>6s}] {row.check:18s} {row.domain:14s} "
          f"measured={row.measured:.6g} target={row.target:.6g}")

counts = suite.counts()
print(f"\ntotal={counts['total']} pass={counts['pass']} fail={counts['fail']} "
      f"inconclusive={counts['inconclusive']}")

paths = emit_report(suite, out, formats=("csv", "json"))
plots = emit_plotdata(suite, out, svg=True)
print(f"\nwrote {paths['csv']}")
print(f"wrote {paths['json']}")
for p in plots:
    print(f"wrote {p}")

print("\nCSV content:")
with open(paths["csv"]) as fh:
    for line in fh:
        print("  " + line.rstrip())
