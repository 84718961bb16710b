"""Generate the newform-orbit fixture (eigenvalue database) for levels <= LMAX.

For each level: build weight-2 modular symbols, cut out the new cuspidal
plus-subspace, split it into Galois orbits over Q, and record per orbit the
dimension, Atkin-Lehner signs, Hecke power sums, and (for one-dimensional
orbits) parity and L(f,1)-vanishing data.  Every stage is validated against
the classical dimension formulas; a level failing any check aborts the run.

Output TSV columns: level, orbit_id, dim, al_signs, hecke, rank_hint.
"""

import argparse
import sys
import time
from math import gcd, isqrt
from pathlib import Path

import numpy as np
import sympy as sp

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from msym import (  # noqa: E402
    EXTRA_PRIMES,
    mmod,
    MOD,
    MSpace,
    charpoly_mod,
    intersect_mod,
    kernel_mod,
    rref_mod,
    solve_mod,
)
from x0plus import arith, geometry  # noqa: E402

HECKE_PRIMES = [2, 3, 5, 7, 11, 13]
MATCH_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
XSYM = sp.Symbol("x")

_SPACE_CACHE: dict = {}
_LEVEL_CACHE: dict = {}


def get_space(N, p):
    key = (N, p)
    if key not in _SPACE_CACHE:
        _SPACE_CACHE[key] = MSpace(N, mod=p)
    return _SPACE_CACHE[key]


def lift_sym(x, p):
    x %= p
    return x - p if x > p // 2 else x


class LevelData:
    """Mod-p modular symbol data for one level, with validated dimensions."""

    def __init__(self, N, p=MOD):
        self.N = N
        self.p = p
        self.space = get_space(N, p)
        self.g = geometry.genus_x0(N)
        ncusp = geometry.nu_inf(N)
        if self.space.dim != 2 * self.g + ncusp - 1:
            raise RuntimeError(f"relative dimension wrong at N={N}, p={p}")
        cusps, B = self.space.cusps_and_boundary()
        if len(cusps) != ncusp:
            raise RuntimeError(f"cusp count wrong at N={N}: {len(cusps)} vs {ncusp}")
        self.cuspidal = kernel_mod(B, p)
        if self.cuspidal.shape[1] != 2 * self.g:
            raise RuntimeError(f"cuspidal dimension wrong at N={N}, p={p}")
        S = self.space.star()
        plus = kernel_mod((S - np.eye(self.space.dim, dtype=np.int64)) % p, p)
        self.plus_cuspidal = intersect_mod([self.cuspidal, plus], p)
        if self.plus_cuspidal.shape[1] != self.g:
            raise RuntimeError(f"plus-cuspidal dimension wrong at N={N}, p={p}")
        self.new_plus = self._new_subspace(self.plus_cuspidal)
        self.dim_new = geometry.dim_s2_new(N)
        if self.new_plus.shape[1] != self.dim_new:
            raise RuntimeError(
                f"new subspace dimension wrong at N={N}, p={p}: "
                f"{self.new_plus.shape[1]} vs {self.dim_new}"
            )
        self._ops: dict = {}

    def _new_subspace(self, inside):
        N, p = self.N, self.p
        cur = inside
        for q in arith.prime_divisors(N):
            M = N // q
            target = get_space(M, p)
            if target.dim == 0:
                continue
            for t in (1, q):
                D = self.space.degeneracy(target, t)
                img = mmod(D, cur, p)
                K = kernel_mod(img, p)
                cur = mmod(cur, K, p)
                R, piv = rref_mod(cur.T, p)
                cur = np.ascontiguousarray(R[: len(piv)].T)
                if cur.shape[1] == 0:
                    return cur
        return cur

    def op_on_new(self, kind, arg):
        key = (kind, arg)
        if key in self._ops:
            return self._ops[key]
        V = self.new_plus
        if kind == "T":
            Tfull = self.space.hecke(arg)
        elif kind == "W":
            Tfull = self.space.atkin_lehner(arg)
        else:
            raise ValueError(kind)
        A = solve_mod(V, mmod(Tfull, V, self.p), self.p)
        self._ops[key] = A
        return A


def get_level(N, p=MOD) -> LevelData:
    key = (N, p)
    if key not in _LEVEL_CACHE:
        _LEVEL_CACHE[key] = LevelData(N, p=p)
    return _LEVEL_CACHE[key]


def combo_matrix(ld: LevelData, combo):
    p = ld.p
    A = None
    for q, c in combo:
        Aq = ld.op_on_new("T", q)
        A = (c * Aq) % p if A is None else (A + c * Aq) % p
    return A


def integer_charpoly(N, combo, base: LevelData):
    """Exact Z charpoly of the combo operator on the new plus-subspace via CRT.

    Only called once squarefreeness holds mod the base prime, which already
    implies squarefreeness over Z; the CRT makes the coefficients exact.
    """
    d = base.new_plus.shape[1]
    B = sum(abs(c) * (2 * isqrt(q) + 2) for q, c in combo)  # >= sum |c| 2 sqrt(q)
    bound = 2 * int(sp.binomial(d, d // 2)) * max(B, 2) ** d
    primes = [base.p]
    prod = base.p
    i = 0
    while prod < 2 * bound:
        primes.append(EXTRA_PRIMES[i])
        prod *= EXTRA_PRIMES[i]
        i += 1
    residues = []
    for p in primes:
        ld = base if p == base.p else get_level(N, p)
        residues.append(charpoly_mod(combo_matrix(ld, combo), p))
    coeffs = []
    for k in range(d + 1):
        x, m = 0, 1
        for p, cs in zip(primes, residues):
            t = ((cs[k] - x) * pow(m, -1, p)) % p
            x += m * t
            m *= p
        x %= m
        if x > m // 2:
            x -= m
        coeffs.append(x)
    return sp.Poly(coeffs, XSYM)


def candidate_combos(usable):
    yield from ([(q, 1)] for q in usable)
    for i in range(1, len(usable)):
        for c in (1, 2, 3, 5, 7, 11):
            yield [(usable[0], 1), (usable[i], c)]
    for i in range(1, len(usable)):
        for j in range(i + 1, len(usable)):
            for c in (1, 2, 3):
                yield [(usable[0], 1), (usable[i], 2), (usable[j], c)]


def split_orbits(N, ld: LevelData):
    """Split the new plus-subspace into Galois orbits over Q."""
    d = ld.new_plus.shape[1]
    if d == 0:
        return []
    p = ld.p
    usable = [q for q in MATCH_PRIMES if N % q]
    chosen = None
    for combo in candidate_combos(usable):
        A = combo_matrix(ld, combo)
        cs = charpoly_mod(A, p)
        fp = sp.Poly([c % p for c in cs], XSYM, modulus=p, symmetric=False)
        if sp.gcd(fp, fp.diff()).degree() == 0:
            chosen = combo
            break
    if chosen is None:
        raise RuntimeError(f"no squarefree Hecke combo found at N={N}")
    f = integer_charpoly(N, chosen, ld)
    factors = sp.factor_list(f)[1]
    assert sum(g.degree() * e for g, e in factors) == d
    A = combo_matrix(ld, chosen)

    orbits = []
    for g, e in sorted(factors, key=lambda t: (t[0].degree(), t[0].all_coeffs())):
        assert e == 1
        deg = g.degree()
        coeffs = [int(c) % p for c in g.all_coeffs()]  # descending
        gA = np.zeros((d, d), dtype=np.int64)
        for c in coeffs:
            gA = (mmod(gA, A, p) + c * np.eye(d, dtype=np.int64)) % p
        K = kernel_mod(gA, p)
        if K.shape[1] != deg:
            raise RuntimeError(f"orbit kernel dimension mismatch at N={N}")
        orbits.append({"dim": deg, "poly": g, "K": K})
    return orbits


def orbit_invariants(N, ld: LevelData, orbits, match_primes=True):
    """Attach AL signs and Hecke power sums to each orbit (exact integers)."""
    p = ld.p
    for orb in orbits:
        K = orb["K"]
        deg = orb["dim"]
        sums = {}
        primes = MATCH_PRIMES if (match_primes and deg == 1) else HECKE_PRIMES
        for q in primes:
            if N % q == 0:
                continue
            Aq_orb = solve_mod(K, mmod(ld.op_on_new("T", q), K, p), p)
            Mk = np.eye(deg, dtype=np.int64)
            s = []
            for k in range(1, 5):
                Mk = mmod(Mk, Aq_orb, p)
                tr = lift_sym(int(np.trace(Mk)), p)
                if tr * tr > deg * deg * (4 * q) ** k:
                    raise RuntimeError(f"power sum out of Deligne range N={N} q={q}")
                s.append(tr)
            sums[q] = s
        orb["hecke"] = sums
        signs = {}
        for q, e in arith.factorize(N).factors:
            W_orb = solve_mod(K, mmod(ld.op_on_new("W", q**e), K, p), p)
            if np.array_equal(W_orb % p, np.eye(deg, dtype=np.int64) % p):
                signs[q] = 1
            elif np.array_equal((-W_orb) % p, np.eye(deg, dtype=np.int64) % p):
                signs[q] = -1
            else:
                raise RuntimeError(f"w_{q**e} not scalar on an orbit at N={N}")
        orb["al"] = signs
        eps = 1
        for s in signs.values():
            eps *= s
        orb["fricke"] = eps
    return orbits


_WINDING_CACHE: dict = {}


def _winding_setup(N, p):
    key = (N, p)
    if key in _WINDING_CACHE:
        return _WINDING_CACHE[key]
    space = get_space(N, p)
    S = space.star()
    P = kernel_mod((S - np.eye(space.dim, dtype=np.int64)) % p, p)
    e = space.symbol_vector(space.p1.index(0, 1))
    e_plus = solve_mod(P, e[:, None] % p, p)[:, 0]
    _WINDING_CACHE[key] = (space, P, e_plus, {})
    return _WINDING_CACHE[key]


def _winding_nonzero_mod(N, orb, p):
    """True if the f-isotypic part of the {0,oo} winding path is nonzero mod p.

    Works in the star-plus part of the relative space, where each newform
    system occurs once.  For a Hecke combo with orbit eigenvalue a that is
    simple and semisimple there, the f-part of e vanishes iff e lies in the
    image of (T - a).
    """
    space, P, e_plus, tcache = _winding_setup(N, p)
    dim = P.shape[1]
    usable = [q for q in MATCH_PRIMES if N % q and q in orb["hecke"]]
    for combo in candidate_combos(usable):
        ckey = tuple(combo)
        if ckey not in tcache:
            T = None
            for q, c in combo:
                Tq = space.hecke(q)
                T = (c * Tq) % p if T is None else (T + c * Tq) % p
            tcache[ckey] = solve_mod(P, mmod(T, P, p), p)
        Tp = tcache[ckey]
        a = sum(c * orb["hecke"][q][0] for q, c in combo)
        B = (Tp - a * np.eye(dim, dtype=np.int64)) % p
        r1 = len(rref_mod(B, p)[1])
        if dim - r1 != 1:
            continue  # eigenvalue collision; try the next combo
        if len(rref_mod(mmod(B, B, p), p)[1]) != r1:
            continue  # not semisimple at a; try the next combo
        r2 = len(rref_mod(np.hstack([B, e_plus[:, None]]), p)[1])
        return r2 > r1
    raise RuntimeError(f"no separating combo for winding test at N={N}")


def winding_flags(N, ld: LevelData, orbits):
    """L(f,1) != 0 flags for dim-1 orbits (None for parity-odd or dim > 1)."""
    for orb in orbits:
        if orb["dim"] != 1 or orb["fricke"] == 1:
            # fricke +1 means sign of the functional equation -1: L(f,1) = 0
            orb["winding_nonzero"] = None
            continue
        nz = _winding_nonzero_mod(N, orb, ld.p)
        if not nz:
            # confirm a zero with an independent prime
            nz = _winding_nonzero_mod(N, orb, EXTRA_PRIMES[0])
            if nz:
                raise RuntimeError(f"winding zero not confirmed at N={N}")
        orb["winding_nonzero"] = nz
    return orbits


def rank_hint(orb):
    if orb["dim"] != 1:
        return ""
    if orb["fricke"] == 1:
        return "1"  # odd analytic rank; equals 1 for all conductors <= 623
    return "0" if orb["winding_nonzero"] else "2"


def orbit_letter(k):
    out = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        out = chr(ord("a") + r) + out
    return out


def process_level(N, match_primes=True):
    if geometry.dim_s2_new(N) == 0:
        return []
    ld = get_level(N)
    orbits = split_orbits(N, ld)
    orbit_invariants(N, ld, orbits, match_primes=match_primes)
    winding_flags(N, ld, orbits)
    rational = sorted(
        (o for o in orbits if o["dim"] == 1),
        key=lambda o: [o["hecke"][q][0] for q in HECKE_PRIMES if N % q],
    )
    others = sorted(
        (o for o in orbits if o["dim"] > 1),
        key=lambda o: (o["dim"], [o["hecke"][q][0] for q in HECKE_PRIMES if N % q]),
    )
    for k, orb in enumerate(rational + others):
        orb["id"] = orbit_letter(k)
    return rational + others


def orbit_tsv_line(N, orb):
    al = ";".join(f"{q}:{s:+d}" for q, s in sorted(orb["al"].items()))
    hk = ";".join(
        f"{q}:{','.join(str(x) for x in orb['hecke'][q])}" for q in sorted(orb["hecke"])
    )
    return f"{N}\t{orb['id']}\t{orb['dim']}\t{al or '-'}\t{hk}\t{rank_hint(orb)}"


def generate(level_min, level_max, out_path, match_primes=True):
    t0 = time.time()
    mode = "a" if level_min > 1 else "w"
    with open(out_path, mode) as fh:
        if mode == "w":
            fh.write(
                "# newform orbit data: level, orbit_id, dim, al_signs,"
                " hecke power sums s1..s4 per prime, rank_hint\n"
                "# generated by tools/gen_newforms.py (weight-2 modular symbols);"
                " orbit letters follow Cremona's conventions for rational orbits\n"
            )
        for N in range(level_min, level_max + 1):
            for orb in process_level(N, match_primes=match_primes):
                fh.write(orbit_tsv_line(N, orb) + "\n")
            fh.flush()
            _SPACE_CACHE.clear()
            _LEVEL_CACHE.clear()
            _WINDING_CACHE.clear()
            if N % 25 == 0:
                print(f"  level {N} done ({time.time() - t0:.1f}s)", flush=True)
    print(f"wrote {out_path} (levels {level_min}..{level_max}, {time.time()-t0:.1f}s)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--min", type=int, default=1)
    ap.add_argument("--max", type=int, default=623)
    ap.add_argument(
        "--out", default=str(Path(__file__).parents[1] / "work" / "newforms.tsv")
    )
    a = ap.parse_args()
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    generate(a.min, a.max, a.out)
