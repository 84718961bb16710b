"""Integral homology of X0(N) with its intersection pairing, and modular
degrees of rational newform orbits.

The degree of the strong (optimal) parametrization X0(N) -> E attached to a
rational orbit f is computed purely from integral structure:

    deg = |<b1, b2>|

where {b1, b2} is any basis of the saturated f-isotypic sublattice of
H1(X0(N), Z) and <,> is the topological intersection pairing.  This uses
optimality (the quotient map onto H1(E, Z) is onto) and nothing about E.

The pairing itself is computed combinatorially: Manin symbols are the edges
of the Farey cellulation, two cycles only cross near cusps, and the local
crossing count at a cusp is a bilinear "chord interleaving" sum over the
cyclically ordered edge-ends of the fan at that cusp.
"""

import sys
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from msym import (  # noqa: E402
    EXTRA_PRIMES,
    MOD,
    MSpace,
    Rat,
    gcdex,
    kernel_mod,
    mmod,
    rref_mod,
    solve_mod,
    _merel_set,
)


def slift(p, q):
    """An SL2(Z) matrix [p, r; q, s] with first column (p, q), gcd(p,q)=1."""
    g, x, y = gcdex(p, q)
    assert g == 1
    return (p, -y, q, x)


def minv(m):
    a, b, c, d = m
    assert a * d - b * c == 1
    return (d, -b, -c, a)


def mmul(m1, m2):
    a, b, c, d = m1
    e, f, g, h = m2
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def transporter(c1, c2, N):
    """Some m in Gamma0(N) with m(c1) = c2, for equivalent cusps (p, q)."""
    p1, q1 = c1
    p2, q2 = c2
    g1 = slift(p1, q1)
    g2 = slift(p2, q2)
    s1, s2 = g1[3], g2[3]
    # m = g2 T^k g1^{-1}; bottom-left = (q2*s1 - s2*q1) - k*q1*q2 = 0 mod N
    rhs = (q2 * s1 - s2 * q1) % N
    a = (q1 * q2) % N
    g = gcd(a, N)
    if rhs % g:
        return None
    if N // g == 1:
        k = 0
    else:
        k = (rhs // g * pow(a // g, -1, N // g)) % (N // g)
    m = mmul(mmul(g2, (1, k, 0, 1)), minv(g1))
    assert m[2] % N == 0 and m[0] * m[3] - m[1] * m[2] == 1
    return m


def rational_reconstruct(r, m):
    """p/q with r = p/q mod m, |p|, q <= sqrt(m/2); None if impossible."""
    bound = isqrt(m // 2)
    a, b = m, r % m
    p0, p1 = 0, 1
    while b > bound:
        q = a // b
        a, b = b, a - q * b
        p0, p1 = p1, p0 - q * p1
    if abs(p1) > bound or p1 == 0:
        return None
    if p1 < 0:
        p1, b = -p1, -b
    if gcd(p1, m) != 1:
        return None
    return Fraction(b, p1)


class Homology:
    """Exact modular symbol homology of X0(N) with intersection pairing."""

    def __init__(self, N):
        self.N = N
        self.sp = MSpace(N, mod=None)
        self.D = self.sp.dim
        # integral coordinate columns; tracks denominators if they ever occur
        self.cols = {}
        self.denom = 1
        for i, col in self.sp.coord.items():
            l = 1
            for v in col.values():
                l = l * v.denominator // gcd(l, v.denominator)
            self.denom = self.denom * l // gcd(self.denom, l)
            self.cols[i] = dict(col)
        if self.denom != 1:
            raise NotImplementedError(
                f"non-integral symbol lattice at N={N} (denominator {self.denom});"
                " lattice-aware intersection not implemented"
            )
        cusps, B = self.sp.cusps_and_boundary()
        self.cusps = cusps
        self.boundary = np.array(
            [[int(x) for x in row] for row in B], dtype=np.int64
        )
        self._pairing = None
        self._hecke_mod = {}

    # ---- exact sparse operator application -----------------------------
    def symbol_col_int(self, i):
        return self.cols.get(i, {})

    def hecke_apply_exact(self, n, vec):
        """T_n applied to an exact integer coordinate vector (as Fractions)."""
        sp = self.sp
        N = self.N
        out = [Fraction(0)] * self.D
        mats = list(_merel_set(n))
        for k, i in enumerate(sp.free):
            c = vec[k]
            if not c:
                continue
            cc, dd = sp.p1[i]
            for a, b, c2, d2 in mats:
                c1 = (a * cc + c2 * dd) % N
                d1 = (b * cc + d2 * dd) % N
                if gcd(gcd(c1, d1), N) == 1:
                    for r, v in self.symbol_col_int(sp.p1.index(c1, d1)).items():
                        out[r] += c * v
        return out

    def hecke_mod(self, n, p=MOD):
        key = (n, p)
        if key not in self._hecke_mod:
            sp = self.sp
            N = self.N
            out = np.zeros((self.D, self.D), dtype=np.int64)
            mats = list(_merel_set(n))
            for k, i in enumerate(sp.free):
                cc, dd = sp.p1[i]
                for a, b, c2, d2 in mats:
                    c1 = (a * cc + c2 * dd) % N
                    d1 = (b * cc + d2 * dd) % N
                    if gcd(gcd(c1, d1), N) == 1:
                        for r, v in self.symbol_col_int(sp.p1.index(c1, d1)).items():
                            out[r, k] += int(v)
            self._hecke_mod[key] = out % p
        return self._hecke_mod[key]

    # ---- the intersection pairing ---------------------------------------
    def pairing2(self):
        """Integer matrix P with <c, d> = (c^T P d) / 2 for cuspidal cycles."""
        if self._pairing is not None:
            return self._pairing
        sp = self.sp
        N = self.N
        # vertex data: representative, scaling matrix inverse, width
        vdata = []
        for (p, q) in self.cusps:
            sig = slift(p, q)
            h = N // gcd(q * q, N)
            vdata.append((p, q, minv(sig), h))

        def find_class(p, q):
            # same equivalence test the boundary map used, via transporter
            for idx, (p2, q2, _, _) in enumerate(vdata):
                if transporter((p, q), (p2, q2), N) is not None:
                    return idx
            raise RuntimeError("cusp class not found")

        # collect edge-ends: (vertex, angle key, end sign)
        from msym import sl2_lift

        ends_at = [[] for _ in vdata]
        for k, i in enumerate(sp.free):
            cc, dd = sp.p1[i]
            a, b, c2, d2 = sl2_lift(cc, dd, N)
            # edge from gamma(0) = b/d2 to gamma(oo) = a/c2
            for which, (pp, qq), (op, oq) in (
                (0, (b, d2), (a, c2)),
                (1, (a, c2), (b, d2)),
            ):
                pr, qr = pp, qq
                if qr < 0:
                    pr, qr = -pr, -qr
                g = gcd(abs(pr), qr) or 1
                pr, qr = pr // g, qr // g
                v = find_class(pr, qr)
                p2v, q2v, siginv, h = vdata[v]
                m = transporter((pr, qr), (p2v, q2v), N)
                delta = mmul(siginv, m)
                num = delta[0] * op + delta[1] * oq
                den = delta[2] * op + delta[3] * oq
                assert den != 0, "edge endpoint collapsed to the vertex"
                r = Fraction(num, den) % h
                # end sign: +1 at the 0-end (outflow for +coefficient), -1 at oo
                sgn = 1 if which == 0 else -1
                # tier: push-off side marker used when the same edge occurs in
                # both argument chains; the oo-end copy sits CCW, the 0-end CW
                tier = 1 if which == 1 else -1
                ends_at[v].append((k, r, sgn, tier))

        P = np.zeros((self.D, self.D), dtype=np.int64)
        for v, items in enumerate(ends_at):
            for (k1, r1, s1, _t1) in items:
                for (k2, r2, s2, t2) in items:
                    # position of the c-end: (r1, 0); of the d-end: (r2, t2)
                    if r1 != r2:
                        sg = 1 if r1 > r2 else -1
                    else:
                        sg = 1 if 0 > t2 else -1
                    P[k1, k2] += s1 * s2 * sg
        self._pairing = P
        return P

    # ---- rational orbit lattices and degrees ----------------------------
    def fplane(self, eigs):
        """Exact primitive integer basis (v1, v2) of the f-isotypic plane in
        the cuspidal subspace, for a rational orbit with eigenvalues eigs."""
        p = MOD
        B = self.boundary % p
        K = kernel_mod(B, p)  # cuspidal basis mod p
        usable = sorted(q for q in eigs if self.N % q)
        combos = [[(q, 1)] for q in usable]
        combos += [
            [(usable[0], 1), (usable[i], c)]
            for c in (1, 2, 3, 5)
            for i in range(1, len(usable))
        ]
        for combo in combos:
            A = None
            for q, c in combo:
                Tq = self.hecke_mod(q, p)
                A = (c * Tq) % p if A is None else (A + c * Tq) % p
            a = sum(c * eigs[q] for q, c in combo)
            Ac = solve_mod(K, mmod(A, K, p), p)
            Bm = (Ac - a * np.eye(Ac.shape[0], dtype=np.int64)) % p
            r1 = len(rref_mod(Bm, p)[1])
            if Bm.shape[0] - r1 != 2:
                continue
            if len(rref_mod(mmod(Bm, Bm, p), p)[1]) != r1:
                continue
            ker = kernel_mod(Bm, p)
            W = mmod(K, ker, p)  # ambient, 2 columns
            # normalize to echelon so entries are reductions of small rationals
            R, piv = rref_mod(W.T, p)
            W = R[:2].T % p
            vs = []
            for j in range(2):
                col = [rational_reconstruct(int(x), p) for x in W[:, j]]
                if any(c is None for c in col):
                    break
                l = 1
                for c in col:
                    l = l * c.denominator // gcd(l, c.denominator)
                v = [int(c * l) for c in col]
                g = 0
                for x in v:
                    g = gcd(g, abs(x))
                vs.append([x // (g or 1) for x in v])
            if len(vs) != 2:
                continue
            if not self._verify_eigvec(vs, eigs):
                continue
            return vs
        raise RuntimeError(f"no separated f-plane found at N={self.N}")

    def _verify_eigvec(self, vs, eigs):
        for v in vs:
            vv = np.array(v, dtype=object)
            if np.any(self.boundary @ vv != 0):
                return False
            vf = [Fraction(x) for x in v]
            for q, a in eigs.items():
                if self.N % q == 0:
                    continue
                tv = self.hecke_apply_exact(q, vf)
                if tv != [a * x for x in vf]:
                    return False
        return True

    def degree(self, eigs):
        """Modular degree of the optimal curve attached to a rational orbit.

        The saturated lattice L = Z^D  ∩  span_Q(v1, v2) is parametrized by
        (alpha, beta) in the dual of the lattice generated by the coordinate
        rows (v1_i, v2_i); the degree is the pairing of a basis of L.
        """
        v1, v2 = self.fplane(eigs)
        a, b, c = _row_lattice_2d(zip(v1, v2))
        assert a > 0 and c > 0, "f-plane vectors not independent"
        duals = [
            (Fraction(1, a), Fraction(0)),
            (Fraction(-b, a * c), Fraction(1, c)),
        ]
        bvecs = []
        for al, be in duals:
            bv = [al * x + be * y for x, y in zip(v1, v2)]
            assert all(z.denominator == 1 for z in bv), "dual vector not integral"
            bvecs.append([int(z) for z in bv])
        P = self.pairing2()
        w = [0] * self.D
        for i in range(self.D):
            bi = bvecs[1][i]
            if bi:
                for j in range(self.D):
                    w[j] += int(P[j, i]) * bi
        val = sum(x * y for x, y in zip(bvecs[0], w))
        assert val % 2 == 0, "odd intersection doubling"
        return abs(val) // 2


def _row_lattice_2d(rows):
    """Hermite basis [[a, b], [0, c]] of the lattice generated by 2-vectors."""
    a = b = c = 0
    for x, y in rows:
        if x:
            if a == 0:
                a, b = (x, y) if x > 0 else (-x, -y)
            else:
                g, u, v = gcdex(a, x)
                c = gcd(c, abs((a // g) * y - (x // g) * b))
                a, b = g, u * b + v * y
        else:
            c = gcd(c, abs(y))
    if c:
        b %= c
    return a, b, c
