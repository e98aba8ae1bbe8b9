#!/usr/bin/env python3
"""End-to-end checks of the ham executable: schemas, exit codes, determinism."""

import argparse
import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

FAILURES = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        FAILURES.append(what)


def run(ham, args, env=None):
    full = dict(os.environ)
    full.pop("HAM_THREADS", None)
    if env:
        full.update(env)
    return subprocess.run([ham, *args], capture_output=True, env=full, timeout=600)


def schema(schema_dir, name):
    with open(Path(schema_dir) / name) as f:
        return json.load(f)


def validates(doc, sch):
    try:
        jsonschema.validate(doc, sch)
        return True
    except jsonschema.ValidationError as e:
        print("     " + e.message)
        return False


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ham", required=True)
    ap.add_argument("--schema-dir", required=True)
    a = ap.parse_args()
    ham = a.ham
    config_schema = schema(a.schema_dir, "config.schema.json")
    check_schema = schema(a.schema_dir, "check_report.schema.json")
    table_schema = schema(a.schema_dir, "table.schema.json")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        cfg = {"spatial": {"alpha": 0.5, "d": 1}, "temporal": {"kind": "fractional", "H": 0.7},
               "seed": 5}
        check(validates(cfg, config_schema), "example config matches the config schema")
        (tmp / "cfg.json").write_text(json.dumps(cfg))

        r = run(ham, ["--config", str(tmp / "cfg.json"), "check"])
        check(r.returncode == 0, "check exits 0")
        rep = json.loads(r.stdout)
        check(validates(rep, check_schema), "check report matches its schema")
        check(validates(rep["config"], config_schema), "resolved config matches the config schema")
        check(rep["dalang"]["finite"], "dalang integral finite for alpha = 0.5")

        r = run(ham, ["--format", "json", "moments", "--t", "0.5", "--n-max", "3",
                      "--samples", "20000", "--seed", "3"])
        check(r.returncode == 0, "moments exits 0")
        tab = json.loads(r.stdout)
        check(validates(tab, table_schema), "moments JSON matches the table schema")
        check(validates(tab["config"], config_schema), "moments config matches the config schema")
        check(len(tab["rows"]) == 4, "moments has n_max + 1 rows")

        r = run(ham, ["moments", "--t", "0.5", "--n-max", "2", "--samples", "5000"])
        lines = [l for l in r.stdout.decode().splitlines() if not l.startswith("#")]
        check(lines[0].count(",") == 7, "moments CSV has 8 columns")
        check(len(lines) == 4, "moments CSV has header plus 3 rows")

        r = run(ham, ["--format", "json", "holder", "--points", "4"])
        check(r.returncode == 0 and validates(json.loads(r.stdout), table_schema),
              "holder JSON matches the table schema")

        sim = ["simulate", "--t-grid", "0.5,1", "--x-grid", "0,0.5", "--features", "512",
               "--replicates", "16", "--seed", "11"]
        for args, name in ((["moments", "--t", "1", "--n-max", "3", "--samples", "20000",
                             "--seed", "9"], "moments"), (sim, "simulate")):
            outs = []
            for threads in ("1", "8", "8"):
                out = tmp / f"{name}_{threads}_{len(outs)}.csv"
                r = run(ham, ["--threads", threads, "--out", str(out), *args])
                check(r.returncode == 0, f"{name} with {threads} threads exits 0")
                outs.append(out.read_bytes())
            check(outs[0] == outs[1], f"{name} output identical for 1 and 8 threads")
            check(outs[1] == outs[2], f"{name} output identical across reruns")

        side = json.loads((tmp / "simulate_8_2.csv.json").read_text())
        check(len(side["cells"]) == 4, "simulate sidecar has one cell per grid point")
        check(validates(side["config"], config_schema), "sidecar config matches the config schema")

        base = run(ham, ["--threads", "1", *sim]).stdout
        env = run(ham, sim, env={"HAM_THREADS": "4"})
        check(env.returncode == 0 and env.stdout == base, "HAM_THREADS is honored and harmless")

        bad = tmp / "bad.json"
        bad.write_text('{"spatial": {"alpha": 2.5, "d": 3}}')
        r = run(ham, ["--config", str(bad), "check"])
        check(r.returncode == 1, "inadmissible alpha exits 1")
        check(b"spatial.alpha" in r.stderr, "rejection names the offending field")
        check(r.stdout == b"", "rejection writes nothing to stdout")

        bad.write_text('{"seed": 1, "seed": 2}')
        check(run(ham, ["--config", str(bad), "moments"]).returncode == 1, "duplicate key exits 1")
        check(run(ham, ["holder", "--points", "1"]).returncode == 1, "holder with 1 point exits 1")
        check(run(ham, ["frobnicate"]).returncode == 1, "unknown subcommand exits 1")
        check(run(ham, ["--config", str(tmp / "missing.json"), "check"]).returncode == 1,
              "missing config file exits 1")
        r = run(ham, ["--out", str(tmp / "no" / "dir.csv"), "moments", "--samples", "100"])
        check(r.returncode == 1, "unwritable output exits 1")
        r = run(ham, ["simulate", "--features", "8", "--replicates", "4"])
        check(r.returncode == 0, "small simulate exits 0")

    print(f"{len(FAILURES)} failure(s)")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
