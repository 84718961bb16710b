"""Generate explicit models of X0+(N) from exact q-expansions.

For genus-2 levels the two-dimensional w_N-fixed subspace of S2(Gamma0(N))
is assembled orbit block by orbit block with exact rational coefficients;
x = F1/F2 and y = q x'/F2 then satisfy y^2 = f(x) for a sextic (or quintic)
f found by exact linear algebra on Laurent coefficients.  For genus-4
levels the same machinery produces the canonical ideal (one quadric, one
cubic) in P^3.

Every generated or transcribed model is ultimately validated downstream by
comparing brute-force point counts with eigenvalue counts.
"""

import sys
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

import numpy as np
import sympy as sp

sys.path.insert(0, str(Path(__file__).resolve().parent))
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from msym import MOD, MSpace, kernel_mod, mmod, rref_mod, solve_mod  # noqa: E402
from homology import rational_reconstruct  # noqa: E402
from x0plus import arith, geometry  # noqa: E402
from x0plus.dataset import load_newforms  # noqa: E402

XS = sp.Symbol("x")


# ---- exact orbit Hecke matrices at one level --------------------------------

class ExactLevel:
    """Exact (reconstructed and verified) orbit data at one level."""

    def __init__(self, M, db, prec=50):
        self.M = M
        self.prec = prec
        self.db = db
        self.space = MSpace(M, mod=MOD)
        p = MOD
        cusps, B = self.space.cusps_and_boundary()
        C = kernel_mod(B, p)
        S = self.space.star()
        plus = kernel_mod((S - np.eye(self.space.dim, dtype=np.int64)) % p, p)
        from msym import intersect_mod

        PC = intersect_mod([C, plus], p)
        cur = PC
        for q in arith.prime_divisors(M):
            tgt = MSpace(M // q, mod=p)
            if tgt.dim == 0:
                continue
            for t in (1, q):
                D = self.space.degeneracy(tgt, t)
                K = kernel_mod(mmod(D, cur, p), p)
                cur = mmod(cur, K, p)
                R, piv = rref_mod(cur.T, p)
                cur = np.ascontiguousarray(R[: len(piv)].T)
        self.new_plus = cur
        assert cur.shape[1] == geometry.dim_s2_new(M), f"new dim mismatch at {M}"
        self._orbit_bases = None

    def orbit_basis(self, orbit):
        """Mod-p basis of the orbit subspace inside new_plus coordinates."""
        p = MOD
        d = self.new_plus.shape[1]
        # identify by eigen data: kernel of prod over stored primes of
        # small-degree annihilators; use a separating Hecke combo
        usable = [q for q in orbit.hecke if self.M % q]
        for q0 in usable:
            A = solve_mod(
                self.new_plus, mmod(self.space.hecke(q0), self.new_plus, p), p
            )
            # the orbit's minimal polynomial of a_q0: from power sums via
            # Newton's identities
            poly = _min_poly_from_power_sums(orbit.hecke[q0], orbit.dim)
            if poly is None:
                continue
            coeffs = [int(c) % p for c in poly]
            gA = np.zeros((d, d), dtype=np.int64)
            for c in coeffs:
                gA = (mmod(gA, A, p) + c * np.eye(d, dtype=np.int64)) % p
            K = kernel_mod(gA, p)
            if K.shape[1] == orbit.dim:
                return K
        raise RuntimeError(f"cannot isolate orbit {self.M}{orbit.orbit_id}")

    def orbit_matrix_exact(self, orbit, K, n):
        """Exact rational matrix of T_n on the orbit (n coprime to M)."""
        p = MOD
        V = mmod(self.new_plus, K, p)
        A = solve_mod(V, mmod(self.space.hecke(n), V, p), p)
        out = []
        for row in A:
            out_row = []
            for x in row:
                r = rational_reconstruct(int(x), p)
                if r is None:
                    raise RuntimeError("reconstruction failure")
                out_row.append(r)
            out.append(out_row)
        return out


def _min_poly_from_power_sums(sums, d):
    """Monic minimal polynomial (descending coeffs) of a_p from s1..s4 via
    Newton's identities, when d <= 4 (enough here)."""
    if d > 4 or len(sums) < d:
        return None
    e = [1]
    for k in range(1, d + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * Fraction(sums[i - 1])
        e.append(acc / k)
    coeffs = [(-1) ** k * e[k] for k in range(d + 1)]
    if any(c.denominator != 1 for c in coeffs):
        return None
    return [int(c) for c in coeffs]


# ---- q-expansions of the Fricke-fixed subspace -------------------------------

def _matrix_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [
        [sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)]
        for i in range(n)
    ]


def _matrix_pow_list(A, top):
    out = [None] * (top + 1)
    d = len(A)
    out[0] = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    for k in range(1, top + 1):
        out[k] = _matrix_mul(out[k - 1], A)
    return out


class OrbitSeries:
    """Exact a_n matrices of one newform orbit, n = 1..prec."""

    def __init__(self, level, orbit, db, prec):
        self.level = level
        self.orbit = orbit
        self.prec = prec
        d = orbit.dim
        self.An = {1: _identity(d)}
        if d == 1:
            # rational orbit: scalars; good primes from the stored sums,
            # bad primes from the Atkin-Lehner relation a_p = -eps_p (p || M)
            for n in range(2, prec + 1):
                self.An[n] = [[Fraction(self._scalar_an(n))]]
        else:
            ex = ExactLevel(level, db, prec)
            K = ex.orbit_basis(orbit)
            mats = {}
            for p in _primes_upto(prec):
                if level % p == 0:
                    e = arith.valuation(level, p)
                    eps = orbit.al_signs[p]
                    ap = -eps if e == 1 else 0
                    mats[p] = _scalar_matrix(Fraction(ap), d)
                else:
                    mats[p] = ex.orbit_matrix_exact(orbit, K, p)
            self._fill(mats, prec, d)

    def _scalar_an(self, n):
        out = Fraction(1)
        M = self.level
        for p, e in arith.factorize(n).factors:
            if M % p == 0:
                vp = arith.valuation(M, p)
                ap = -self.orbit.al_signs[p] if vp == 1 else 0
                out *= Fraction(ap) ** e
            else:
                a = Fraction(self.orbit.power_sums(p)[0])
                t0, t1 = Fraction(2)**0, a  # T_{p^0} = 1, T_p = a
                tprev, tcur = Fraction(1), a
                for _ in range(e - 1):
                    tprev, tcur = tcur, a * tcur - p * tprev
                out *= tcur
        return out

    def _fill(self, mats, prec, d):
        for p in _primes_upto(prec):
            pk = p
            if self.level % p == 0:
                prev2, prev1 = None, mats[p]
                while pk <= prec:
                    self.An[pk] = _matrix_power(mats[p], arith.valuation(pk, p))
                    pk *= p
            else:
                t = {0: _identity(d), 1: mats[p]}
                k = 1
                while p ** (k + 1) <= prec:
                    k += 1
                    t[k] = _mat_sub(
                        _matrix_mul(mats[p], t[k - 1]), _mat_scale(p, t[k - 2])
                    )
                for kk in range(1, k + 1):
                    self.An[p**kk] = t[kk]
        for n in range(2, prec + 1):
            if n in self.An:
                continue
            f = arith.factorize(n).factors
            acc = _identity(d)
            for p, e in f:
                acc = _matrix_mul(acc, self.An[p**e])
            self.An[n] = acc

    def trace_series(self, B):
        """a_n(g) for the rational form g with a_n = Tr(B * A_n)."""
        out = [Fraction(0)] * (self.prec + 1)
        for n in range(1, self.prec + 1):
            M = _matrix_mul(B, self.An[n])
            out[n] = sum(M[i][i] for i in range(len(M)))
        return out


def _identity(d):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]


def _scalar_matrix(c, d):
    return [[c if i == j else Fraction(0) for j in range(d)] for i in range(d)]


def _matrix_power(A, e):
    out = _identity(len(A))
    for _ in range(e):
        out = _matrix_mul(out, A)
    return out


def _mat_sub(A, B):
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(A, B)]


def _mat_scale(c, A):
    return [[c * x for x in row] for row in A]


def _primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % r for r in range(2, isqrt(p) + 1))]


def fricke_fixed_series(N, db, prec=50):
    """Exact q-expansion basis of the w_N-fixed subspace of S2(Gamma0(N))."""
    series = []
    for M in arith.divisors(N):
        R = N // M
        for orbit in db.orbits_of_level(M):
            mult2 = arith.factorize(R).sigma0
            eps = orbit.fricke_sign
            if arith.is_square(R):
                mult2 += eps
            if mult2 == 0:
                continue
            osz = OrbitSeries(M, orbit, db, prec)
            # rational basis forms of the orbit block
            basis_mats = [_identity(orbit.dim)]
            if orbit.dim > 1:
                q0 = next(q for q in orbit.hecke if M % q)
                gen = osz.An[q0]
                B = _identity(orbit.dim)
                for _ in range(orbit.dim - 1):
                    B = _matrix_mul(B, gen)
                    basis_mats.append(B)
            for B in basis_mats:
                an = osz.trace_series(B)
                # fixed combos: f_u + eps (R/u^2) f_{R/u} over divisor pairs
                for u in arith.divisors(R):
                    v = R // u
                    if u > v:
                        continue
                    if u == v:
                        if eps != 1:
                            continue
                        vec = [Fraction(0)] * (prec + 1)
                        for n in range(1, prec // u + 1):
                            vec[n * u] += an[n]
                        series.append(vec)
                    else:
                        vec = [Fraction(0)] * (prec + 1)
                        for n in range(1, prec // u + 1):
                            vec[n * u] += an[n]
                        scale = Fraction(eps * R, u * u)
                        for n in range(1, prec // v + 1):
                            vec[n * v] += scale * an[n]
                        series.append(vec)
    # sanity: dimension equals the quotient genus
    gplus = geometry.genus_x0_plus(N, db).genus
    assert len(series) == gplus, (N, len(series), gplus)
    return _echelonize(series)


def _echelonize(series):
    rows = [list(r) for r in series]
    pivots = []
    r = 0
    ncols = len(rows[0])
    for c in range(1, ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / Fraction(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    assert r == len(rows), "series basis degenerate"
    return rows, pivots


# ---- Laurent series helpers --------------------------------------------------

class Laurent:
    """Finite-precision Laurent series sum c_k q^k, k >= val, k < cut."""

    def __init__(self, coeffs, val, cut):
        self.val = val
        self.cut = cut
        self.c = coeffs  # list indexed by k - val

    @staticmethod
    def from_power(vec, cut):
        return Laurent([Fraction(x) for x in vec[:cut]], 0, cut)

    def __getitem__(self, k):
        if k < self.val or k >= self.cut or k - self.val >= len(self.c):
            return Fraction(0)
        return self.c[k - self.val]

    def mul(self, other):
        val = self.val + other.val
        cut = min(self.val + other.cut, other.val + self.cut)
        out = [Fraction(0)] * (cut - val)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            ki = self.val + i
            for j, b in enumerate(other.c):
                if b == 0:
                    continue
                k = ki + other.val + j
                if k >= cut:
                    break
                out[k - val] += a * b
        return Laurent(out, val, cut)

    def add(self, other):
        val = min(self.val, other.val)
        cut = min(self.cut, other.cut)
        out = [Fraction(0)] * (cut - val)
        for k in range(val, cut):
            out[k - val] = self[k] + other[k]
        return Laurent(out, val, cut)

    def scale(self, c):
        return Laurent([c * x for x in self.c], self.val, self.cut)

    def inverse(self):
        # leading coefficient must be nonzero
        lead = 0
        while self.c[lead] == 0:
            lead += 1
        val = self.val + lead
        a = self.c[lead:]
        n = len(a)
        inv = [Fraction(0)] * n
        inv[0] = 1 / a[0]
        for k in range(1, n):
            s = Fraction(0)
            for i in range(1, k + 1):
                s += a[i] * inv[k - i]
            inv[k] = -s / a[0]
        return Laurent(inv, -val, -val + n)

    def qderiv(self):
        out = [Fraction(k) * self[k] for k in range(self.val, self.cut)]
        return Laurent(out, self.val, self.cut)

    def power(self, e):
        out = Laurent([Fraction(1)], 0, self.cut - min(self.val, 0) + 1)
        base = self
        for _ in range(e):
            out = out.mul(base)
        return out


def fit_hyperelliptic(N, db, prec=48):
    """Fit y^2 = f(x) for a genus-2 level; returns integer coefficients of f."""
    rows, pivots = fricke_fixed_series(N, db, prec)
    assert len(rows) == 2
    cut = prec
    F1 = Laurent.from_power(rows[0], cut)
    F2 = Laurent.from_power(rows[1], cut)
    x = F1.mul(F2.inverse())
    y = x.qderiv().mul(F2.inverse()).scale(Fraction(1))
    # unknowns c0..c6: match y^2 = sum c_i x^i on Laurent coefficients
    xs = [Laurent([Fraction(1)], 0, cut) ]
    for i in range(1, 7):
        xs.append(xs[-1].mul(x))
    y2 = y.mul(y)
    lo = min([t.val for t in xs] + [y2.val])
    hi = min([t.cut for t in xs] + [y2.cut])
    eqs = []
    rhs = []
    for k in range(lo, hi):
        eqs.append([xs[i][k] for i in range(7)])
        rhs.append(y2[k])
    A = sp.Matrix(eqs)
    b = sp.Matrix(rhs)
    aug = A.row_join(b)
    red, piv = aug.rref()
    assert len(piv) <= 7 and all(pp < 7 for pp in piv), "inconsistent sextic fit"
    c = [sp.Rational(0)] * 7
    for r, pp in enumerate(piv):
        c[pp] = red[r, 7]
    # verify all equations
    for row, val in zip(eqs, rhs):
        assert sum(Fraction(int(ci.p), int(ci.q)) * xi for ci, xi in zip(c, row)) == val
    cf = [Fraction(int(ci.p), int(ci.q)) for ci in c]
    # rescale y by l to clear denominators: c_i -> l^2 c_i integers
    l = 1
    for ci in cf:
        den = ci.denominator
        # need l^2 divisible by den
        l = l * den // gcd(l, den)
    cf = [ci * l * l for ci in cf]
    g = 0
    for ci in cf:
        g = gcd(g, int(ci))
    # keep content only if it is a square (so y-rescaling stays rational)
    sq = isqrt(g)
    if sq * sq == g and g > 0:
        cf = [ci / (sq * sq) for ci in cf]
    out = [int(ci) for ci in cf]
    while out and out[-1] == 0:
        out.pop()
    return out
