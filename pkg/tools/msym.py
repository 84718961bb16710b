"""Weight-2 modular symbols for Gamma0(N), used to generate the eigenvalue
fixtures shipped with the package.

The space M = Q[P^1(Z/N)] / (x + x.S, x + x.T + x.T^2) is the relative
homology H_1(X0(N), cusps).  Everything below (Hecke, Atkin-Lehner,
degeneracy and boundary maps, the star involution) acts on that quotient.
Linear algebra runs either modulo a 31-bit prime (fast path, numpy) or over
exact Fractions (used where integral structure matters).

Validation hooks compare every computed dimension against the classical
genus/cusp formulas, so a bad prime or a bug cannot slip through silently.

References: Cremona, "Algorithms for modular elliptic curves"; Stein,
"Modular forms: a computational approach"; Merel's Heilbronn-matrix
description of T_n on Manin symbols.
"""

import sys
from fractions import Fraction
from math import gcd

import numpy as np

sys.setrecursionlimit(100000)

MOD = 2**31 - 1
EXTRA_PRIMES = [
    2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423,
    2147483399, 2147483353, 2147483323, 2147483269, 2147483249,
]


def gcdex(a, b):
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = gcdex(b, a % b)
    return (g, y, x - (a // b) * y)


def lift_unit(n, d, a):
    """Lift a unit a mod d (d | n) to a unit mod n."""
    if n == 1:
        return 1
    u, v = 1, n
    g = gcd(v, d)
    while g > 1:
        u *= g
        v //= g
        g = gcd(v, g)
    # n = u*v with v coprime to d, rad(u) | rad(d)
    g, x, y = gcdex(u, v)
    return (u * x + a * y * v) % n


class P1:
    """P^1(Z/NZ) with canonical representatives and O(1) index lookup."""

    def __init__(self, N):
        self.N = N
        reps = set()
        if N == 1:
            self._list = [(0, 0)]
            self._index = {(0, 0): 0}
            return
        for c in [d for d in range(1, N + 1) if N % d == 0]:
            for d in range(N):
                try:
                    reps.add(self.reduce(c, d))
                except ValueError:
                    pass
        reps.add((0, 1))
        self._list = sorted(reps)
        self._index = {cd: i for i, cd in enumerate(self._list)}

    def __len__(self):
        return len(self._list)

    def __getitem__(self, i):
        return self._list[i]

    def reduce(self, u, v):
        N = self.N
        if N == 1:
            return (0, 0)
        u %= N
        v %= N
        if u == 0:
            if gcd(v, N) == 1:
                return (0, 1)
            raise ValueError("not a projective point")
        g, s, _ = gcdex(u, N)
        if gcd(g, v) > 1:
            raise ValueError("not a projective point")
        # s*u = g (mod N); lift s to a unit mod N so scaling is projective
        s = lift_unit(N, N // g, s % (N // g))
        v = (s * v) % N
        if g == 1:
            return (1, v)
        # minimize v over units t = 1 mod N/g (the stabilizer of the g-slot)
        vmin = v
        for t in range(1 + N // g, N, N // g):
            if gcd(t, N) == 1:
                w = (v * t) % N
                if w < vmin:
                    vmin = w
        return (g, vmin)

    def index(self, u, v):
        return self._index[self.reduce(u, v)]


def sl2_lift(c, d, N):
    """A matrix [[a, b], [c2, d2]] in SL2(Z) with (c2, d2) = (c, d) mod N."""
    if N == 1:
        return 1, 0, 0, 1
    c %= N
    d %= N
    if (c, d) == (0, 1):
        return 1, 0, 0, 1
    c2, d2 = (c if c else N), d
    l = 0
    while gcd(c2, d2 + l * N) > 1:
        l += 1
    d2 += l * N
    g, x, y = gcdex(c2, d2)
    assert g == 1
    # det = a*d2 - b*c2 = y*d2 + x*c2 = 1
    return y, -x, c2, d2


class Rat:
    """Exact point of P^1(Q): pair (p, q), q >= 0, gcd = 1; infinity = (1, 0)."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        if q < 0:
            p, q = -p, -q
        g = gcd(abs(p), q)
        if g > 1:
            p //= g
            q //= g
        if q == 0:
            p = 1
        self.p = p
        self.q = q

    def key(self):
        return (self.p, self.q)


def apply_moebius(m, x: Rat) -> Rat:
    a, b, c, d = m
    return Rat(a * x.p + b * x.q, c * x.p + d * x.q)


class MSpace:
    """The relative weight-2 modular symbol space for Gamma0(N).

    mod=None gives exact Fraction arithmetic; otherwise a prime modulus.
    """

    def __init__(self, N, mod=MOD):
        self.N = N
        self.mod = mod
        self.p1 = P1(N)
        self.nsym = len(self.p1)
        self._build_relations()
        self._cusps = None
        self._hecke_cache = {}

    # ---- field helpers -------------------------------------------------
    def _inv(self, a):
        if self.mod:
            return pow(a, self.mod - 2, self.mod)
        return Fraction(1, 1) / a

    def _nrm(self, a):
        if self.mod:
            return a % self.mod
        return a

    # ---- relation quotient ---------------------------------------------
    def _sigma(self, i):
        c, d = self.p1[i]
        return self.p1.index(d, -c)

    def _tau(self, i):
        c, d = self.p1[i]
        return self.p1.index(d, -c - d)

    def _build_relations(self):
        n = self.nsym
        rows = {}

        def add_row(cols):
            row = {}
            for j, coef in cols:
                row[j] = row.get(j, 0) + coef
            row = {j: c for j, c in row.items() if c}
            if row:
                key = tuple(sorted(row.items()))
                rows[key] = row

        for i in range(n):
            add_row([(i, 1), (self._sigma(i), 1)])
            t = self._tau(i)
            tt = self._tau(t)
            add_row([(i, 1), (t, 1), (tt, 1)])

        pivots = {}  # col -> reduced row dict with coeff 1 at col
        for row in rows.values():
            row = dict(row)
            if self.mod:
                row = {j: c % self.mod for j, c in row.items() if c % self.mod}
            while row:
                c = max(row)
                if c in pivots:
                    piv = pivots[c]
                    f = row[c]
                    for j, pc in piv.items():
                        row[j] = self._nrm(row.get(j, 0) - f * pc)
                        if not row[j]:
                            del row[j]
                else:
                    break
            if not row:
                continue
            c = max(row)
            inv = self._inv(row[c])
            pivots[c] = {j: self._nrm(v * inv) for j, v in row.items()}

        free = [j for j in range(n) if j not in pivots]
        self.free = free
        self.dim = len(free)
        fidx = {j: k for k, j in enumerate(free)}

        # resolve pivot columns to free-generator coordinates
        resolved = {}

        def resolve(c):
            if c in resolved:
                return resolved[c]
            row = pivots[c]
            out = {}
            for j, coef in row.items():
                if j == c:
                    continue
                if j in fidx:
                    out[fidx[j]] = self._nrm(out.get(fidx[j], 0) - coef)
                else:
                    sub = resolve(j)
                    for k, v in sub.items():
                        out[k] = self._nrm(out.get(k, 0) - coef * v)
            out = {k: v for k, v in out.items() if v}
            resolved[c] = out
            return out

        # iterative resolution to avoid deep recursion
        order = sorted(pivots)
        stack = list(order)
        while stack:
            c = stack[-1]
            if c in resolved:
                stack.pop()
                continue
            deps = [j for j in pivots[c] if j != c and j not in fidx and j not in resolved]
            if deps:
                stack.extend(deps)
            else:
                resolve(c)
                stack.pop()

        if self.mod:
            coord = np.zeros((self.dim, n), dtype=np.int64)
            for k, j in enumerate(free):
                coord[k, j] = 1
            for c in pivots:
                for k, v in resolved[c].items():
                    coord[k, c] = v
            self.coord = coord
        else:
            cols = {}
            for k, j in enumerate(free):
                cols[j] = {k: Fraction(1)}
            for c in pivots:
                cols[c] = {k: Fraction(v) for k, v in resolved[c].items()}
            self.coord = cols  # dict: symbol index -> sparse dict row->Fraction

    def symbol_vector(self, i):
        """Coordinates of the i-th Manin symbol in the quotient."""
        if self.mod:
            return self.coord[:, i].copy()
        out = np.empty(self.dim, dtype=object)
        out[:] = Fraction(0)
        for k, v in self.coord.get(i, {}).items():
            out[k] = v
        return out

    # ---- paths ----------------------------------------------------------
    def path_symbol_list(self, a: Rat, b: Rat):
        """{a, b} as a list of (symbol index, +-1) via convergents."""
        out = []
        for x, sgn in ((b, 1), (a, -1)):
            if x.q == 0:
                continue  # {oo, oo} contributes nothing
            # convergents of x.p / x.q
            p, q = x.p, x.q
            cf = []
            while q:
                a0 = p // q
                cf.append(a0)
                p, q = q, p - a0 * q
            pm1, qm1 = 1, 0
            pj, qj = cf[0], 1
            e = pj * qm1 - pm1 * qj  # = -1
            out.append((self.p1.index(qj, e * qm1), sgn))
            for a0 in cf[1:]:
                pm1, qm1, pj, qj = pj, qj, a0 * pj + pm1, a0 * qj + qm1
                e = pj * qm1 - pm1 * qj
                out.append((self.p1.index(qj, e * qm1), sgn))
        return out

    def path_vector(self, a: Rat, b: Rat):
        v = None
        for i, sgn in self.path_symbol_list(a, b):
            w = self.symbol_vector(i)
            v = sgn * w if v is None else v + sgn * w
        if v is None:
            v = self.symbol_vector(0) * 0
        return self._nrm_vec(v)

    def _nrm_vec(self, v):
        if self.mod:
            return np.mod(v, self.mod)
        return v

    # ---- operators -------------------------------------------------------
    def _monomial_operator(self, images):
        """Matrix of a monomial right action: images[i] = list of (j, coef)."""
        if self.mod:
            out = np.zeros((self.dim, self.dim), dtype=np.int64)
            for k, i in enumerate(self.free):
                for j, coef in images(i):
                    out[:, k] += coef * self.coord[:, j]
            return np.mod(out, self.mod)
        out = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for k, i in enumerate(self.free):
            for j, coef in images(i):
                for r, v in self.coord.get(j, {}).items():
                    out[r][k] += coef * v
        return np.array(out, dtype=object)

    def star(self):
        """Star involution (complex conjugation): (c:d) -> (-c:d)."""

        def images(i):
            c, d = self.p1[i]
            return [(self.p1.index(-c, d), 1)]

        return self._monomial_operator(images)

    def hecke(self, n):
        """T_n via Merel's Heilbronn-type matrices (use with gcd(n, N) = 1)."""
        if n in self._hecke_cache:
            return self._hecke_cache[n]
        mats = list(_merel_set(n))
        N = self.N

        def images(i):
            c, d = self.p1[i]
            out = []
            for a, b, cc, dd in mats:
                c1 = (a * c + cc * d) % N
                d1 = (b * c + dd * d) % N
                g = gcd(gcd(c1, d1), N)
                if g == 1:
                    out.append((self.p1.index(c1, d1), 1))
            return out

        m = self._monomial_operator(images)
        self._hecke_cache[n] = m
        return m

    def _path_operator(self, m, target=None):
        """Operator sending each generator path {g0, goo} to {m g0, m g oo}.

        target defaults to self; for degeneracy maps it is the lower-level
        space and the result is a (target.dim x self.dim) matrix.
        """
        t = target or self
        if self.mod:
            out = np.zeros((t.dim, self.dim), dtype=np.int64)
        else:
            out = np.empty((t.dim, self.dim), dtype=object)
            out[:] = Fraction(0)
        for k, i in enumerate(self.free):
            c, d = self.p1[i]
            a, b, c2, d2 = sl2_lift(c, d, self.N)
            g = (
                m[0] * a + m[1] * c2,
                m[0] * b + m[1] * d2,
                m[2] * a + m[3] * c2,
                m[2] * b + m[3] * d2,
            )
            x0 = Rat(g[1], g[3])
            x1 = Rat(g[0], g[2])
            out[:, k] = t.path_vector(x0, x1)
        if self.mod:
            out = np.mod(out, self.mod)
        return out

    def atkin_lehner(self, Q):
        """w_Q for an exact divisor Q || N, as a matrix on the quotient."""
        N = self.N
        assert N % Q == 0 and gcd(Q, N // Q) == 1 and Q > 1
        g, x, y = gcdex(Q, N // Q)
        assert g == 1
        # W = [[Q*a, b], [N*c, Q*d]], det = Q  <=>  Q*a*d - (N/Q)*b*c = 1;
        # take a = c = 1, d = x, b = -y using Q*x + (N/Q)*y = 1
        W = (Q, -y, N, Q * x)
        assert W[0] * W[3] - W[1] * W[2] == Q
        return self._path_operator(W)

    def degeneracy(self, target, t):
        """delta_t : level N -> level M (M | N, t | N/M) on the quotients."""
        assert self.N % target.N == 0 and (self.N // target.N) % t == 0
        return self._path_operator((t, 0, 0, 1), target=target)

    # ---- boundary --------------------------------------------------------
    def cusps_and_boundary(self):
        """Cusp classes and the boundary matrix (ncusps x dim)."""
        if self._cusps is not None:
            return self._cusps

        N = self.N
        classes = []  # representatives (p, q)

        def find_class(p, q):
            g, s, _ = gcdex(p, q)
            for idx, (p2, q2, s2) in enumerate(classes):
                m = gcd(N, q * q2)
                if (s * q2 - s2 * q) % m == 0:
                    return idx
            g2, s2, _ = gcdex(p, q)
            classes.append((p, q, s2))
            return len(classes) - 1

        if self.mod:
            B = np.zeros((0, self.dim), dtype=np.int64)
            rows = []
        else:
            rows = []
        entries = []
        for k, i in enumerate(self.free):
            c, d = self.p1[i]
            a, b, c2, d2 = sl2_lift(c, d, self.N)
            top = find_class(a, c2)  # g(oo)
            bot = find_class(b, d2)  # g(0)
            entries.append((k, top, bot))
        ncusp = len(classes)
        if self.mod:
            B = np.zeros((ncusp, self.dim), dtype=np.int64)
            for k, top, bot in entries:
                B[top, k] += 1
                B[bot, k] -= 1
            B = np.mod(B, self.mod)
        else:
            B = np.zeros((ncusp, self.dim), dtype=object)
            B[:] = Fraction(0)
            for k, top, bot in entries:
                B[top, k] += 1
                B[bot, k] -= 1
        self._cusps = ([(p, q) for p, q, _ in classes], B)
        return self._cusps


def _merel_set(n):
    """Merel's matrices X_n computing T_n on Manin symbols."""
    for a in range(1, n + 1):
        for d in range((n + a - 1) // a, n + 2 - a):
            bc = a * d - n
            if bc == 0:
                for b in range(a):
                    yield a, b, 0, d
                for c in range(1, d):
                    yield a, 0, c, d
            else:
                for b in range((bc - 1) // (d - 1) + 1, a):
                    if bc % b == 0:
                        yield a, b, bc // b, d


# ---- mod-p linear algebra (numpy, int64, p < 2^31) ------------------------

def mmod(A, B, p):
    """A @ B mod p without int64 overflow (p < 2^31, inner dim <= 2^11).

    Splits A into 16-bit halves so every accumulated sum stays below 2^63.
    """
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    b_vec = B.ndim == 1
    if b_vec:
        B = B[:, None]
    hi = A >> 16
    lo = A & 0xFFFF
    out = ((((hi @ B) % p) << 16) + lo @ B) % p
    return out[:, 0] if b_vec else out


def rref_mod(A, p):
    """Row-reduced echelon form of A mod p; returns (R, pivot_cols)."""
    A = np.mod(np.array(A, dtype=np.int64), p)
    m, n = A.shape
    piv = []
    r = 0
    for c in range(n):
        if r == m:
            break
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        i = r + rows[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        other = np.nonzero(A[:, c])[0]
        other = other[other != r]
        if other.size:
            A[other] = (A[other] - np.outer(A[other, c], A[r])) % p
        piv.append(c)
        r += 1
    return A[:r], piv


def kernel_mod(A, p):
    """Basis (as columns) of the kernel of A mod p."""
    A = np.atleast_2d(np.array(A, dtype=np.int64))
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref_mod(A, p)
    free = [c for c in range(n) if c not in piv]
    K = np.zeros((n, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        K[c, k] = 1
        for r, pc in enumerate(piv):
            K[pc, k] = (-R[r, c]) % p
    return K


def solve_mod(A, B, p):
    """Solve A X = B mod p for full-column-rank A; asserts consistency."""
    A = np.array(A, dtype=np.int64) % p
    B = np.array(B, dtype=np.int64) % p
    n = A.shape[1]
    aug = np.hstack([A, B])
    R, piv = rref_mod(aug, p)
    assert piv[:n] == list(range(n)) and all(c >= n for c in piv[n:]) and len(piv) == n, (
        "inconsistent or rank-deficient solve"
    )
    X = R[:n, n:]
    assert np.array_equal(mmod(A, X, p), B % p)
    return X


def intersect_mod(bases, p):
    """Intersection of column-span subspaces given by a list of basis matrices."""
    cur = bases[0]
    for B in bases[1:]:
        # solve cur x = B y  =>  kernel of [cur | -B]
        M = np.hstack([cur, (-B) % p])
        K = kernel_mod(M, p)
        cur = mmod(cur, K[: cur.shape[1]], p)
        # re-extract an independent basis of the column span
        R, piv = rref_mod(cur.T, p)
        cur = np.ascontiguousarray(R[: len(piv)].T)
    return cur


def charpoly_mod(A, p):
    """Characteristic polynomial of A mod p, as descending coefficients
    [1, c1, ..., cn] for x^n + c1 x^(n-1) + ... + cn (Faddeev-LeVerrier;
    requires p > n)."""
    A = np.array(A, dtype=np.int64) % p
    n = A.shape[0]
    if n == 0:
        return [1]
    Mk = np.eye(n, dtype=np.int64)
    cs = [1]
    for k in range(1, n + 1):
        AM = mmod(A, Mk, p)
        tr = int(np.trace(AM)) % p
        ck = (-tr * pow(k, p - 2, p)) % p
        cs.append(ck)
        Mk = (AM + ck * np.eye(n, dtype=np.int64)) % p
    return [int(x) % p for x in cs]
