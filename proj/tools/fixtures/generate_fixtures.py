#!/usr/bin/env python3
"""Regenerate the bundled offline catalog snapshot.

Reads Cremona's tables through PARI's elldata package and writes one JSON
object per curve with catalog-style labels: isogeny classes of a conductor
are ordered by their a_p sequences, curves within a class by their reduced
a-invariants.  Requires `cypari` and an elldata directory:

    pip install cypari passagemath-pari-elldata
    python3 generate_fixtures.py --datadir <.../share/pari> --max-conductor 600
"""
import argparse
import json
import re
from pathlib import Path

import cypari

pari = cypari.pari
KODAIRA_ADDITIVE = {1: "II", 2: "III", 3: "IV", -1: "I0*", -2: "IV*", -3: "III*", -4: "II*"}


def kodaira_symbol(code):
    code = int(code)
    if code == 0:
        return "I0"
    if code in KODAIRA_ADDITIVE:
        return KODAIRA_ADDITIVE[code]
    if code >= 5:
        return f"I{code - 4}"
    return f"I{-code - 4}*"


def class_letters(index):
    letters = ""
    while True:
        letters = chr(ord("a") + index % 26) + letters
        index = index // 26 - 1
        if index < 0:
            return letters


def curves_of_conductor(n, primes):
    try:
        found = pari(f"ellsearch({n})")
    except cypari.PariError:
        return []
    classes = {}
    for entry in found:
        cremona = str(entry[0])
        m = re.fullmatch(r"(\d+)([a-z]+)(\d+)", cremona)
        classes.setdefault(m.group(2), []).append((cremona, [int(a) for a in entry[1]]))
    keyed = []
    for members in classes.values():
        e = pari.ellinit(members[0][1])
        keyed.append(([int(pari.ellap(e, p)) for p in primes], members))
    keyed.sort()
    out = []
    for class_index, (_, members) in enumerate(keyed):
        members.sort(key=lambda m: m[1])
        for number, (cremona, ainvs) in enumerate(members, start=1):
            out.append((f"{n}.{class_letters(class_index)}{number}", cremona, ainvs, len(members)))
    return out


def optimal_cremona(cremona):
    # 990h is the one class in Cremona's tables where the optimal curve is not number 1.
    if cremona.startswith("990h"):
        return cremona == "990h3"
    return cremona.endswith("1") and not cremona[-2].isdigit()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--datadir", required=True)
    ap.add_argument("--max-conductor", type=int, default=600)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[2] / "data" / "fixtures"))
    ap.add_argument("--snapshot", default="2026-10-18T00:00:00Z")
    args = ap.parse_args()
    pari.allocatemem(2 * 10**9)
    pari.default("datadir", args.datadir)
    primes = [int(p) for p in pari("primes(100)")]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    counts = {}
    with open(out / "curves.jsonl", "w") as fh:
        for n in range(1, args.max_conductor + 1):
            curves = curves_of_conductor(n, primes)
            if not curves:
                continue
            counts[str(n)] = {"classes": len({c[0].rstrip("0123456789") for c in curves}), "curves": len(curves)}
            for label, cremona, ainvs, class_size in curves:
                e = pari.ellinit(ainvs)
                assert int(pari.ellglobalred(e)[0]) == n
                optimal = optimal_cremona(cremona)
                kodaira = {}
                for p in pari.factor(n)[0]:
                    kodaira[str(int(p))] = kodaira_symbol(pari.elllocalred(e, p)[1])
                record = {
                    "label": label,
                    "cremona_label": cremona,
                    "conductor": n,
                    "ainvs": ainvs,
                    "optimal": optimal,
                    "torsion_order": int(pari.elltors(e)[0]),
                    "class_size": class_size,
                    "kodaira": kodaira,
                    "source": "fixture",
                    "fetched_at": args.snapshot,
                }
                if optimal:
                    record["modular_degree"] = int(pari.ellmoddegree(e))
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
    with open(out / "class_counts.json", "w") as fh:
        json.dump({"max_conductor": args.max_conductor, "snapshot": args.snapshot, "conductors": counts},
                  fh, sort_keys=True, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
