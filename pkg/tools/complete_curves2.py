"""Second completion round: twist search in both directions, then large
targeted boxes for anything left."""

import sys
import time
from math import gcd
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gen_curves import (  # noqa: E402
    MATCH_PRIMES,
    ap_bruteforce,
    conductor_exponents_match,
    discriminant,
    load_targets,
    minimalize,
)
from complete_curves import curve_matches, squarefree_divisor_twists, twist_models  # noqa: E402
from x0plus import arith  # noqa: E402


def kronecker(d, p):
    from x0plus.arith import kronecker_symbol

    return kronecker_symbol(d, p)


def main():
    base = Path(__file__).parents[1] / "work"
    targets = load_targets(base / "newforms.tsv")
    found = {}
    for line in (base / "curves_raw.tsv").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        lev, oid, *ai = line.split("\t")
        found[(int(lev), oid)] = tuple(int(x) for x in ai)

    def save():
        lines = [
            f"{k[0]}\t{k[1]}\t" + "\t".join(str(x) for x in v)
            for k, v in sorted(found.items())
        ]
        (base / "curves_raw.tsv").write_text("\n".join(lines) + "\n")

    missing = sorted(set(targets) - set(found))
    print(f"missing at start: {len(missing)}", flush=True)

    # pass 1: twists of every found curve, matched against missing targets
    progress = True
    while progress and missing:
        progress = False
        for key in list(missing):
            rec = targets[key]
            N = rec["level"]
            prN = set(arith.prime_divisors(N))
            got = None
            for (lev0, _), a0 in list(found.items()):
                if set(arith.prime_divisors(lev0)) - prN:
                    continue
                for d in squarefree_divisor_twists(N):
                    at = twist_models(a0, d)
                    if curve_matches(at, rec):
                        got = minimalize(at)
                        break
                if got:
                    break
            if got:
                found[key] = got
                missing.remove(key)
                progress = True
                print(f"  twist-of-found located {key}", flush=True)
        save()
    print(f"after twist pass: {len(missing)}", flush=True)

    # pass 2: search small boxes for a twist of the missing class
    if missing:
        h4, h6 = 120, 1200
        cands = []
        a6r = np.arange(-h6, h6 + 1, dtype=np.int64)
        allp = [p for p in range(2, 624) if len(arith.factorize(p).factors) == 1 and arith.factorize(p).factors[0][1] == 1]
        for a1 in (0, 1):
            for a2 in (-1, 0, 1):
                for a3 in (0, 1):
                    for a4 in range(-h4, h4 + 1):
                        b2 = a1 * a1 + 4 * a2
                        b4 = 2 * a4 + a1 * a3
                        b6v = a3 * a3 + 4 * a6r
                        b8v = (
                            a1 * a1 * a6r + 4 * a2 * a6r - a1 * a3 * a4
                            + a2 * a3 * a3 - a4 * a4
                        )
                        disc = (
                            -b2 * b2 * b8v - 8 * b4**3 - 27 * b6v * b6v
                            + 9 * b2 * b4 * b6v
                        )
                        rem = np.abs(disc)
                        ok = rem > 0
                        rem = np.where(ok, rem, 1)
                        for p in allp:
                            while True:
                                div = rem % p == 0
                                if not div.any():
                                    break
                                rem = np.where(div, rem // p, rem)
                        good = ok & (rem == 1)
                        for a6 in a6r[good]:
                            cands.append((a1, a2, a3, a4, int(a6)))
        print(f"pass-2 box: {len(cands)} candidates", flush=True)
        tr_cache = {}

        def traces(a):
            if a not in tr_cache:
                d = abs(discriminant(a))
                tr_cache[a] = {
                    q: (ap_bruteforce(a, q) if d % q else None) for q in MATCH_PRIMES
                }
            return tr_cache[a]

        for key in list(missing):
            rec = targets[key]
            N = rec["level"]
            prN = set(arith.prime_divisors(N))
            got = None
            t0 = time.time()
            for d in [1] + squarefree_divisor_twists(N):
                # twisted eigen-system of the target
                want = {}
                okd = True
                for q, aq in rec["ap"].items():
                    chi = kronecker(d, q)
                    if chi == 0:
                        continue
                    want[q] = chi * aq
                for a in cands:
                    tr = traces(a)
                    okc = True
                    for q, v in want.items():
                        if tr.get(q) is None:
                            if q not in prN and abs(discriminant(a)) % q == 0:
                                okc = False
                                break
                            continue
                        if tr[q] != v:
                            okc = False
                            break
                    if not okc:
                        continue
                    supp = set(arith.prime_divisors(abs(discriminant(a))))
                    if supp - prN:
                        continue
                    # untwist and verify against the original target
                    back = twist_models(a, d)
                    if curve_matches(back, rec):
                        got = minimalize(back)
                        break
                if got:
                    break
            if got:
                found[key] = got
                missing.remove(key)
                print(f"  untwist located {key} ({time.time()-t0:.0f}s)", flush=True)
            save()
    print(f"after untwist pass: {len(missing)}: {missing}", flush=True)

    # pass 3: heavy targeted boxes
    for key in list(missing):
        rec = targets[key]
        N = rec["level"]
        pr = arith.prime_divisors(N)
        t0 = time.time()
        got = None
        h4, h6 = 500, 40000
        a6r = np.arange(-h6, h6 + 1, dtype=np.int64)
        for a1 in (0, 1):
            for a2 in (-1, 0, 1):
                for a3 in (0, 1):
                    for a4 in range(-h4, h4 + 1):
                        b2 = a1 * a1 + 4 * a2
                        b4 = 2 * a4 + a1 * a3
                        b6v = a3 * a3 + 4 * a6r
                        b8v = (
                            a1 * a1 * a6r + 4 * a2 * a6r - a1 * a3 * a4
                            + a2 * a3 * a3 - a4 * a4
                        )
                        disc = (
                            -b2 * b2 * b8v - 8 * b4**3 - 27 * b6v * b6v
                            + 9 * b2 * b4 * b6v
                        )
                        rem = np.abs(disc)
                        ok = rem > 0
                        rem = np.where(ok, rem, 1)
                        for p in pr:
                            while True:
                                div = rem % p == 0
                                if not div.any():
                                    break
                                rem = np.where(div, rem // p, rem)
                        good = ok & (rem == 1)
                        for a6 in a6r[good]:
                            a = (a1, a2, a3, a4, int(a6))
                            if curve_matches(a, rec):
                                got = minimalize(a)
                                break
                        if got:
                            break
                    if got:
                        break
                if got:
                    break
            if got:
                break
        if got:
            found[key] = got
            missing.remove(key)
            print(f"  heavy box located {key} ({time.time()-t0:.0f}s)", flush=True)
        else:
            print(f"  UNRESOLVED {key} ({time.time()-t0:.0f}s)", flush=True)
        save()
    print(f"final missing: {missing}", flush=True)


if __name__ == "__main__":
    main()
