"""End-to-end checks of the cqstat executable: exit codes, file layout and
JSON schema conformance."""
import csv
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

cli, schema_dir, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
shutil.rmtree(work, ignore_errors=True)
work.mkdir(parents=True)

failures = []


def run(*args):
    return subprocess.run([cli, *args], capture_output=True, text=True)


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


conf = work / "small.conf"
conf.write_text("gamma = 1\naxis1 = g 0.5 1.5 3\naxis2 = eta 0.5 1.5 3\nformat = csv, json, svg\n")
out = work / "grid"
r = run("grid", "--config", str(conf), "--out", str(out), "--workers", "2")
expect(r.returncode == 0, "grid exits 0")
for ext in ("csv", "json", "svg"):
    expect((out / f"grid.{ext}").is_file(), f"grid.{ext} written")

schema = json.loads((schema_dir / "grid_result.schema.json").read_text())
doc = json.loads((out / "grid.json").read_text())
try:
    jsonschema.validate(doc, schema)
    expect(True, "grid.json validates against the schema")
except jsonschema.ValidationError as e:
    expect(False, f"grid.json validates against the schema: {e.message}")
expect(len(doc["points"]) == 9, "nine grid points")

with open(out / "grid.csv", newline="") as fh:
    rows = list(csv.reader(fh))
expect(rows[0] == ["axis1", "axis2", "mean_n", "g2", "q", "classification", "s", "p", "n_cut",
                   "fidelity_qnbd", "n_max_used", "residual", "converged"], "csv header order")
expect(len(rows) == 10, "csv has one row per point")
expect("<svg" in (out / "grid.svg").read_text(), "svg document")

r = run("phase", "--g", "0.1", "--eta", "0.1", "--phi-steps", "9", "--no-fit", "--out", str(work / "phase"))
expect(r.returncode == 0, "phase exits 0")
doc = json.loads((work / "phase" / "phase.json").read_text())
try:
    jsonschema.validate(doc, schema)
    expect(True, "phase.json validates against the schema")
except jsonschema.ValidationError as e:
    expect(False, f"phase.json validates against the schema: {e.message}")
expect(doc["kind"] == "phase" and len(doc["points"]) == 9, "phase profile has nine samples")

r = run("dist", "--g", "0.6", "--eta", "0.6", "--out", str(work / "dist"))
expect(r.returncode == 0, "dist exits 0")
expect((work / "dist" / "dist.csv").is_file() and (work / "dist" / "dist.json").is_file(), "dist files written")

r = run("validity", "--steps", "11", "--format", "csv,json,svg", "--out", str(work / "validity"))
expect(r.returncode == 0, "validity exits 0")
expect(all((work / "validity" / f"validity.{e}").is_file() for e in ("csv", "json", "svg")), "validity files written")

r = run("grid", "--g", "0", "--axis", "gamma:0:1:2", "--n-max", "3", "--out", str(work / "partial"))
expect(r.returncode == 2, f"partial failure exits 2 (got {r.returncode})")
r = run("grid", "--g", "0", "--axis", "gamma:0:0:2", "--n-max", "3", "--out", str(work / "total"))
expect(r.returncode == 3, f"total failure exits 3 (got {r.returncode})")

bad = work / "bad.conf"
bad.write_text("g = 1\nnot a pair\n")
expect(run("grid", "--config", str(bad)).returncode == 1, "malformed config exits 1")
expect(run("grid", "--config", str(work / "missing.conf")).returncode == 1, "missing config exits 1")
expect(run("grid", "--axis", "kappa:1:2:3").returncode == 1, "kappa axis exits 1")
expect(run("grid", "--g", "-1", "--axis", "eta:0:1:2").returncode == 1, "negative coupling exits 1")
expect(run("grid", "--format", "png", "--axis", "eta:0:1:2").returncode == 1, "unknown format exits 1")
expect(run("bogus").returncode == 1, "unknown subcommand exits 1")

sys.exit(1 if failures else 0)
