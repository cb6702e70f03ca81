"""End-to-end checks of the abacus command-line tool. Usage: cli_test.py ABACUS DATA_DIR CASE"""

import hashlib
import json
import math
import os
import subprocess
import sys
import tempfile

ABACUS, DATA, CASE = sys.argv[1], sys.argv[2], sys.argv[3]


def run(*args, expect=0):
    p = subprocess.run([ABACUS, *args], capture_output=True, text=True)
    if p.returncode != expect:
        sys.exit(f"{' '.join(args)}: exit {p.returncode}, expected {expect}\n{p.stdout}\n{p.stderr}")
    return p.stdout


def data(name):
    return os.path.join(DATA, name)


def run_schedule(name, *extra, expect=0):
    out = tempfile.mkdtemp()
    run("run", "--schedule", data(name), "--out", out, *extra, expect=expect)
    return out


def manifest(out):
    with open(os.path.join(out, "manifest.json")) as f:
        m = json.load(f)
    for name in m["files"]:
        assert os.path.exists(os.path.join(out, name)), name
    return m


def csv_rows(text):
    lines = text.strip().splitlines()
    head = lines[0].split(",")
    return [dict(zip(head, map(float, l.split(",")))) for l in lines[1:]]


def check(cond, msg):
    if not cond:
        sys.exit(msg)


def case_not_modal():
    m = manifest(run_schedule("not.json"))
    check(m["final_readout"]["p1"] >= 0.999, m["final_readout"])
    check(len(m["steps"]) == 1 and m["engine"] == "modal", m)


def case_hadamard_grid():
    m = manifest(run_schedule("hadamard.json", "--engine", "grid"))
    r = m["final_readout"]
    check(0.498 <= r["p0"] <= 0.502 and 0.498 <= r["p1"] <= 0.502, r)


def case_malformed():
    run_schedule("malformed.json", expect=2)
    run("run", "--schedule", data("missing.json"), expect=2)
    run("run", "--bogus-flag", expect=2)
    run("spectrum", "--gate", "[[1,0],[1,0],[0,0],[1,0]]", expect=2)


def case_contract():
    run_schedule("generic.json", expect=3)
    m = manifest(run_schedule("generic.json", "--engine", "grid", "--grid-nodes", "512"))
    check(abs(m["final_readout"]["p0"] + m["final_readout"]["p1"] - 1.0) < 1e-8, m)


def case_accuracy():
    run_schedule("not.json", "--engine", "grid", "--grid-nodes", "256", "--dt", "0.8", "--check-halving", expect=4)


def case_compiled():
    m = manifest(run_schedule("compiled.json", "--bit", "0"))
    # target [[0.6, 0.8i], [0.8i, 0.6]] on |0> gives populations (0.36, 0.64)
    r = m["final_readout"]
    check(abs(r["p0"] - 0.36) < 1e-8 and abs(r["p1"] - 0.64) < 1e-8, r)


def case_determinism():
    digests = []
    for _ in range(2):
        out = run_schedule("hadamard.json", "--engine", "grid", "--grid-nodes", "512", "--seed", "5")
        h = hashlib.sha256()
        for name in sorted(os.listdir(out)):
            with open(os.path.join(out, name), "rb") as f:
                h.update(f.read())
        digests.append(h.hexdigest())
    check(digests[0] == digests[1], "runs differ")


def case_json_format():
    out = run_schedule("not.json", "--format", "json")
    m = manifest(out)
    with open(os.path.join(out, m["files"][1])) as f:
        s = json.load(f)
    check(len(s["plus"]) == s["nodes"], "bad snapshot")


def case_program():
    out = tempfile.mkdtemp()
    run("run", "--program", data("cnot_program.json"), "--out", out)
    with open(os.path.join(out, "results.json")) as f:
        r = json.load(f)
    check(r["cnot"][0]["applied"], r)
    check(r["readouts"][0]["p0"] >= 0.999 and r["readouts"][1]["p1"] >= 0.999, r)


def case_config_precedence():
    out = tempfile.mkdtemp()
    run("--config", data("run.toml"), "run", "--schedule", data("not.json"), "--out", out)
    m = manifest(out)
    check(m["engine"] == "grid" and m["grid"]["nodes"] == 1024, m)
    run("--config", data("run.toml"), "run", "--schedule", data("not.json"), "--out", out, "--engine", "modal")
    m = manifest(out)
    check(m["engine"] == "modal" and m["grid"]["nodes"] == 1024, m)


def case_spectrum():
    rows = csv_rows(run("spectrum", "--theta", "3.1415926535897931", "--count", "5"))
    check([r["E_over_hbar_omega"] for r in rows] == [1.5, 3.5, 5.5, 7.5, 9.5], rows)
    rows = csv_rows(run("spectrum", "--gate", "BLOCH(1.0,2.0)", "--count", "6"))
    check([r["E_over_hbar_omega"] for r in rows] == [n + 0.5 for n in range(6)], rows)
    a = csv_rows(run("spectrum", "--theta", "1.5707963267948966", "--count", "6"))
    f = csv_rows(run("spectrum", "--theta", "1.5707963267948966", "--count", "6", "--method", "fd"))
    check(all(abs(x["E_over_hbar_omega"] - y["E_over_hbar_omega"]) < 1e-4 for x, y in zip(a, f)), (a, f))
    run("spectrum", "--count", "3", expect=2)


def case_scatter():
    rows = csv_rows(run("scatter", "--gate", "HADAMARD", "--points", "20"))
    check(all(abs(r["T_left"] - 0.5) < 1e-12 for r in rows), rows)
    rows = csv_rows(run("scatter", "--gate", "NOT"))
    check(all(abs(r["T_left"] - 1.0) < 1e-12 for r in rows), rows)
    rows = csv_rows(run("scatter", "--gate", "-I"))
    check(all(r["T_left"] < 1e-12 and r["unitarity_residual"] < 1e-12 for r in rows), rows)


def case_verify():
    text = run("verify", "quick", "--criteria", "4", "6", "9")
    check(text.count("PASS") == 3, text)
    text = run("verify", "quick", "--criteria", "1", "--grid-nodes", "64", expect=1)
    check("FAIL" in text, text)


globals()["case_" + CASE]()
