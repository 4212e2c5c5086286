#!/usr/bin/env python3
"""Generate newform eigenvalue files with PARI/GP (via cypari2).

Writes one canonical JSON file per level in the format read by
`apfive validate` / `apfive eliminate`. Used when the LMFDB API is not
reachable.

    pip install cypari2
    python3 tools/gen_newforms.py --levels 70,350 --out data
"""
import argparse
import json
import os
import sys
import tempfile

import cypari2

PRIME_BOUND = 199


GP_EXTRACT = """
extract(i) = my(P = substpol(Pf[i], 'y, 'x), d = poldegree(P), c = mfcoefs(B[i], %d));
  [Vecrev(P), vector(#pr, k, my(v = lift(c[pr[k] + 1]));
    v = if(type(v) == "t_POL", Vecrev(substpol(v, 'y, 'x), d), concat([v], vector(d - 1)));
    apply(q -> [numerator(q), denominator(q)], v))]
""" % PRIME_BOUND


def classes_for_level(pari, level):
    pari("mf = mfinit([%d, 2], 0)" % level)
    pari("B = mfeigenbasis(mf)")
    pari("Pf = mffields(mf)")
    pari("pr = primes([2, %d])" % PRIME_BOUND)
    pari(GP_EXTRACT)
    primes = json.loads(str(pari("pr")))
    count = int(pari("#B"))
    out = []
    for i in range(1, count + 1):
        poly, rows = json.loads(str(pari("extract(%d)" % i)))
        if poly[-1] != 1:
            raise SystemExit("non-monic field polynomial at level %d" % level)
        ap = [{"p": p, "coords": coords} for p, coords in zip(primes, rows)]
        out.append({"field_poly": poly, "ap": ap})
    # labels: level.2.index after sorting by (degree, a_p fingerprint)
    out.sort(key=lambda c: (len(c["field_poly"]), json.dumps(c["ap"])))
    width = len(str(len(out)))
    for k, c in enumerate(out):
        c["label"] = "%d.2.%s" % (level, str(k + 1).zfill(width))
    return [{"label": c["label"], "field_poly": c["field_poly"], "ap": c["ap"]} for c in out]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels", default="70,350,8960,44800")
    ap.add_argument("--out", default="data")
    ap.add_argument("--stack", type=int, default=10**9)
    ap.add_argument("--stack-max", type=int, default=4 * 10**9)
    args = ap.parse_args()
    pari = cypari2.Pari()
    pari.allocatemem(args.stack, max(args.stack, args.stack_max))
    os.makedirs(args.out, exist_ok=True)
    for level in [int(s) for s in args.levels.split(",")]:
        classes = classes_for_level(pari, level)
        doc = {"level": level, "weight": 2, "classes": classes}
        path = os.path.join(args.out, "level_%d.json" % level)
        fd, tmp = tempfile.mkstemp(dir=args.out)
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, separators=(",", ":"))
            fh.write("\n")
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
        print("level %d: %d classes -> %s" % (level, len(classes), path), file=sys.stderr)


if __name__ == "__main__":
    main()
