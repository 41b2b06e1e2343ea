"""End-to-end checks of the command line tool."""
import json
import pathlib
import random
import struct
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET

CLI = sys.argv[1]
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def png_size(path):
    head = pathlib.Path(path).read_bytes()[:24]
    return struct.unpack(">II", head[16:24])


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    rng = random.Random(3)
    series = tmp / "series.csv"
    series.write_text("\n".join(",".join(f"{rng.uniform(0, 100):.4f}" for _ in range(72)) for _ in range(2)) + "\n")

    for tech in ("chg", "bhg", "cbp", "hg"):
        r = run("render", "--input", str(series), "--technique", tech, "--size", "24", "--out", str(tmp / f"{tech}.png"))
        check(r.returncode == 0 and png_size(tmp / f"{tech}.png") == (24, 24), f"{tech} png is 24x24")

    r = run("render", "--input", str(series), "--row", "1", "--technique", "cbp", "--interval", "3",
            "--out", str(tmp / "cbp.svg"))
    check(r.returncode == 0, "cbp svg renders")
    root = ET.parse(tmp / "cbp.svg").getroot()
    lines = [e for e in root.iter() if e.tag.endswith("polyline")]
    check(len(lines) == 1 and len(lines[0].get("points").split()) == 24, "cbp median has 24 vertices")

    r = run("render", "--input", str(tmp / "missing.csv"), "--out", str(tmp / "never.png"))
    check(r.returncode != 0 and not (tmp / "never.png").exists(), "missing input fails without output")

    bad = tmp / "bad.csv"
    bad.write_text("1,2,500\n")
    r = run("render", "--input", str(bad), "--out", str(tmp / "bad.png"))
    check(r.returncode != 0 and not (tmp / "bad.png").exists(), "out of range series is rejected")

    r = run("render", "--input", str(series), "--technique", "xyz", "--out", str(tmp / "x.png"))
    check(r.returncode != 0, "unknown technique is rejected")

    cfg = tmp / "config.json"
    cfg.write_text(json.dumps({"candidates": 2}))
    bundle = tmp / "bundle"
    r = run("bundle", "--seed", "7", "--participants", "2", "--config", str(cfg), "--out", str(bundle))
    check(r.returncode == 0, "bundle builds")
    manifest = json.loads((bundle / "ui" / "manifest.json").read_text())
    keys = json.loads((bundle / "private" / "keys.json").read_text())
    check(manifest["seed"] == 7 and len(manifest["participants"]) == 2, "manifest has seed and participants")
    check(all(len(p["trials"]) == 78 for p in manifest["participants"]), "78 trials per participant")
    check("private" not in json.dumps(manifest), "manifest does not reference private files")

    # a log answering every trial with its key, plus one wrong yes/no answer
    log = {"schema": 1, "participant": "P1", "trials": [], "ratings": []}
    clock = 0
    flipped = None
    for t in manifest["participants"][0]["trials"]:
        answer = json.loads(json.dumps(keys["trials"][t["trial_id"]]["key"]))
        if flipped is None and answer["type"] == "yes_no":
            answer["yes"] = not answer["yes"]
            flipped = (t["task"], t["technique"])
        log["trials"].append({"trial_id": t["trial_id"], "skipped": False, "answer": answer,
                              "start_ms": clock, "end_ms": clock + 1500, "training_rounds": 0})
        clock += 2000
    log["ratings"].append({"task": "T01", "technique": "CHG", "confidence": 5, "difficulty": 2})
    log_path = tmp / "log.json"
    log_path.write_text(json.dumps(log))

    r = run("score", "--bundle", str(bundle), "--log", str(log_path), "--out", str(tmp / "metrics.csv"))
    check(r.returncode == 0, "score succeeds")
    rows = (tmp / "metrics.csv").read_text().splitlines()
    header = rows[0].split(",")
    body = [dict(zip(header, line.split(","))) for line in rows[1:]]
    errs = {(b["task"], b["technique"]): float(b["mean_error"]) for b in body if b["level"] == "participant"}
    check(len(errs) == 37, "37 task/technique observations")
    reps = sum(1 for t in manifest["participants"][0]["trials"] if (t["task"], t["technique"]) == flipped)
    check(all(abs(v - (1 / reps if k == flipped else 0)) < 1e-12 for k, v in errs.items()),
          "key answers score zero and the flipped answer counts once")
    check(all(float(b["mean_time_s"]) == 1.5 for b in body if b["level"] == "participant"), "times in seconds")

    log["ratings"][0]["confidence"] = 9
    log_path.write_text(json.dumps(log))
    r = run("score", "--bundle", str(bundle), "--log", str(log_path))
    check(r.returncode == 3 and "confidence" in r.stderr, "invalid rating is rejected")

print(f"{len(failures)} failed")
sys.exit(1 if failures else 0)
