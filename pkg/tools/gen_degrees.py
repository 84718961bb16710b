"""Compute modular degrees of the strong parametrization for every
positive-rank rational orbit, via the intersection pairing on integral
homology.  Emits work/degrees.tsv: level, orbit_id, degree."""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gen_curves import load_targets  # noqa: E402
from homology import Homology  # noqa: E402


def main():
    base = Path(__file__).parents[1] / "work"
    targets = load_targets(base / "newforms.tsv")
    out_path = base / "degrees.tsv"
    done = {}
    if out_path.exists():
        for line in out_path.read_text().splitlines():
            lev, oid, deg = line.split("\t")
            done[(int(lev), oid)] = int(deg)
    t0 = time.time()
    by_level = {}
    for (N, oid), rec in sorted(targets.items()):
        by_level.setdefault(N, []).append((oid, rec))
    with open(out_path, "a") as fh:
        for N in sorted(by_level):
            todo = [(o, r) for o, r in by_level[N] if (N, o) not in done]
            if not todo:
                continue
            H = Homology(N)
            for oid, rec in todo:
                deg = H.degree(rec["ap"])
                fh.write(f"{N}\t{oid}\t{deg}\n")
                fh.flush()
            print(f"level {N} done ({time.time()-t0:.0f}s)", flush=True)
    print("degrees complete")


if __name__ == "__main__":
    main()
