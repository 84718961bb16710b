"""Point counts over F_{p^n}: Eichler-Shimura eigenvalue counts for X0(N)
and X0+(N), elliptic-curve counts, and brute-force model counts that serve
as independent oracles.

Eigenvalue counts need no finite-field arithmetic: traces of Frobenius
powers come from the stored Hecke power sums.  Model counts enumerate the
field; F_{p^2} is realized as F_p(sqrt of a non-residue) with vectorized
arithmetic, and the rarely-needed degree-3 and 4 extensions use explicit
polynomial arithmetic modulo a small irreducible.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .arith import DomainError, divisors, factorize, is_square
from .dataset import CurveModel, EllipticCurveRecord, MONOMIALS3, NewformOrbitRecord


class DataError(RuntimeError):
    """Required eigenvalue data is missing from the database."""


class ResourceError(RuntimeError):
    """Enumeration would exceed the supported search size."""


@dataclass(frozen=True)
class PrimePower:
    p: int
    n: int

    def __post_init__(self):
        if self.n < 1 or self.n > 4:
            raise DomainError("exponent must be 1..4")
        if self.n >= 3 and self.p > 7:
            raise DomainError("cubic and quartic extensions supported for p <= 7 only")
        f = factorize(self.p)
        if f.omega != 1 or f.factors[0][1] != 1:
            raise DomainError(f"{self.p} is not prime")

    @property
    def q(self) -> int:
        return self.p**self.n

    def __str__(self):
        return f"{self.p}^{self.n}" if self.n > 1 else str(self.p)


@dataclass(frozen=True)
class CountReport:
    description: str
    p: int
    n: int
    count: int
    method: str

    @property
    def q(self) -> int:
        return self.p**self.n


def hasse_weil_ok(count: int, q: int, genus: int) -> bool:
    """|count - q - 1| <= 2 g sqrt(q), checked exactly."""
    return (count - q - 1) ** 2 <= 4 * genus * genus * q


# ---- Frobenius traces from power sums ---------------------------------------

def frobenius_power_trace(orbit: NewformOrbitRecord, pp: PrimePower) -> int:
    """Sum over the orbit of alpha^n + beta^n for the Frobenius roots at p."""
    p, n = pp.p, pp.n
    if orbit.level % p == 0:
        raise DomainError(f"bad reduction: {p} divides the level {orbit.level}")
    sums = orbit.power_sums(p)
    if len(sums) < n:
        raise DataError(
            f"orbit {orbit.level}{orbit.orbit_id}: s{n}({p}) not stored"
        )
    d = orbit.dim
    s = sums
    if n == 1:
        return s[0]
    if n == 2:
        return s[1] - 2 * d * p
    if n == 3:
        return s[2] - 3 * p * s[0]
    return s[3] - 4 * p * s[1] + 2 * d * p * p


def plus_multiplicity_num(orbit: NewformOrbitRecord, N: int) -> int:
    """2 * (multiplicity of each embedded form of the orbit in the w_N-fixed
    subspace of S2(Gamma0(N))): sigma0(N/M) + [N/M square] * eps_M(f)."""
    R = N // orbit.level
    out = factorize(R).sigma0
    if is_square(R):
        out += orbit.fricke_sign
    return out


def count_x0(N: int, pp: PrimePower, db) -> CountReport:
    """|X0(N)(F_q)| via Eichler-Shimura."""
    if N % pp.p == 0:
        raise DomainError(f"bad reduction: {pp.p} | {N}")
    total = 0
    for M in divisors(N):
        mult = factorize(N // M).sigma0
        for orb in db.orbits_of_level(M):
            total += mult * frobenius_power_trace(orb, pp)
    return CountReport(f"X0({N})", pp.p, pp.n, pp.q + 1 - total, "Eigenvalue")


def count_x0_plus(N: int, pp: PrimePower, db) -> CountReport:
    """|X0+(N)(F_q)| via Eichler-Shimura on the w_N-fixed subspace."""
    if N % pp.p == 0:
        raise DomainError(f"bad reduction: {pp.p} | {N}")
    total2 = 0
    for M in divisors(N):
        for orb in db.orbits_of_level(M):
            total2 += plus_multiplicity_num(orb, N) * frobenius_power_trace(orb, pp)
    if total2 % 2:
        raise DataError(f"odd doubled trace at N={N}")
    return CountReport(
        f"X0+({N})", pp.p, pp.n, pp.q + 1 - total2 // 2, "Eigenvalue"
    )


def ec_trace(rec: EllipticCurveRecord, p: int) -> int:
    """a_p of the curve by direct counting on the Weierstrass model."""
    a1, a2, a3, a4, a6 = (x % p for x in rec.weierstrass)
    if p == 2:
        count = 0
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    count += 1
        return 2 - count
    x = np.arange(p, dtype=np.int64)
    rhs = (((x + a2) * x + a4) % p * x + a6) % p
    t = (a1 * x + a3) % p
    d = (t * t + 4 * rhs) % p
    sq = np.zeros(p, dtype=bool)
    i = np.arange(p, dtype=np.int64)
    sq[(i * i) % p] = True
    chi = np.where(d == 0, 0, np.where(sq[d], 1, -1))
    return p - int((1 + chi).sum())


def count_ec(rec: EllipticCurveRecord, pp: PrimePower) -> CountReport:
    """|E(F_q)| from the Frobenius roots of x^2 - a_p x + p."""
    p, n = pp.p, pp.n
    if rec.conductor % p == 0:
        raise DomainError(f"bad reduction: {p} | cond({rec.label})")
    a = ec_trace(rec, p)
    # alpha^n + beta^n by the two-term recurrence t_k = a t_{k-1} - p t_{k-2}
    t0, t1 = 2, a
    for _ in range(n - 1):
        t0, t1 = t1, a * t1 - p * t0
    return CountReport(f"E({rec.label})", p, n, pp.q + 1 - t1, "Eigenvalue")


# ---- finite fields for model counts ------------------------------------------

def _nonresidue(p: int) -> int:
    for s in range(2, p):
        if pow(s, (p - 1) // 2, p) == p - 1:
            return s
    raise ValueError(f"no non-residue found mod {p}")


def _irreducible(p: int, n: int):
    """Ascending coefficients of a monic irreducible of degree n over F_p."""
    import itertools

    for tail in itertools.product(range(p), repeat=n):
        coeffs = list(tail) + [1]
        if coeffs[0] == 0:
            continue
        # irreducible iff no roots (n<=3) plus, for n=4, no quadratic factors
        if any(
            sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0
            for x in range(p)
        ):
            continue
        if n < 4:
            return coeffs
        ok = True
        for b0 in range(p):
            for b1 in range(p):
                # divide by x^2 + b1 x + b0 and test zero remainder
                r = list(coeffs)
                for k in range(n, 1, -1):
                    lead = r[k] % p
                    if lead:
                        r[k - 1] = (r[k - 1] - lead * b1) % p
                        r[k - 2] = (r[k - 2] - lead * b0) % p
                        r[k] = 0
                if r[0] % p == 0 and r[1] % p == 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return coeffs
    raise ValueError("no irreducible polynomial found")


class GF:
    """F_{p^n} elements as length-n coefficient tuples over F_p."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.q = p**n
        if n == 1:
            self.modulus = None
        else:
            self.modulus = _irreducible(p, n)

    def elements(self):
        import itertools

        if self.n == 1:
            return [(x,) for x in range(self.p)]
        return [tuple(t) for t in itertools.product(range(self.p), repeat=self.n)]

    def mul(self, a, b):
        p, n = self.p, self.n
        if n == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        # reduce by the monic modulus
        m = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(n):
                    prod[k - n + i] -= c * m[i]
            prod[k] = 0
        return tuple(x % p for x in prod[:n])

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def scalar(self, c):
        return ((c % self.p,) + (0,) * (self.n - 1))

    def pow(self, a, e):
        out = self.scalar(1)
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def is_square(self, a) -> int:
        """1 for nonzero square, -1 for non-square, 0 for zero."""
        if all(x == 0 for x in a):
            return 0
        r = self.pow(a, (self.q - 1) // 2)
        return 1 if r == self.scalar(1) else -1

    def eval_int_poly(self, coeffs, x):
        out = self.scalar(0)
        for c in reversed(coeffs):
            out = self.add(self.mul(out, x), self.scalar(c))
        return out


def _hyperelliptic_count_q2_vectorized(coeffs, p):
    """Affine count of y^2 = f(x) over F_{p^2} (p odd) with numpy pairs."""
    s = _nonresidue(p)
    ga = np.repeat(np.arange(p, dtype=np.int64), p)
    gb = np.tile(np.arange(p, dtype=np.int64), p)
    fa = np.zeros_like(ga)
    fb = np.zeros_like(gb)
    for c in reversed(coeffs):
        fa, fb = (fa * ga + s * fb * gb + c) % p, (fa * gb + fb * ga) % p
    # chi(x) = legendre(Norm(x)) with Norm(a + b t) = a^2 - s b^2
    norm = (fa * fa - s * fb * fb) % p
    sq = np.zeros(p, dtype=bool)
    i = np.arange(p, dtype=np.int64)
    sq[(i * i) % p] = True
    zero = (fa == 0) & (fb == 0)
    chi = np.where(zero, 0, np.where(sq[norm], 1, -1))
    return int((1 + chi).sum())


def count_hyperelliptic_model(model: CurveModel, pp: PrimePower) -> CountReport:
    """|C(F_q)| for y^2 = f(x) by direct enumeration (p odd, good reduction)."""
    if model.kind != "hyperelliptic":
        raise DomainError("not a hyperelliptic model")
    p, n = pp.p, pp.n
    if p == 2:
        raise DomainError("characteristic 2 not supported for y^2 = f(x)")
    if p in model.bad_primes:
        raise DomainError(f"bad reduction at {p} for model {model.level}")
    coeffs = model.poly
    if n == 2:
        affine = _hyperelliptic_count_q2_vectorized(coeffs, p)
        lc_sq = GF(p, 2).is_square(GF(p, 2).scalar(coeffs[-1]))
    elif n == 1:
        x = np.arange(p, dtype=np.int64)
        f = np.zeros_like(x)
        for c in reversed(coeffs):
            f = (f * x + c) % p
        sq = np.zeros(p, dtype=bool)
        i = np.arange(p, dtype=np.int64)
        sq[(i * i) % p] = True
        chi = np.where(f == 0, 0, np.where(sq[f], 1, -1))
        affine = int((1 + chi).sum())
        lc_sq = 1 if pow(coeffs[-1] % p, (p - 1) // 2, p) == 1 else -1
    else:
        gf = GF(p, n)
        affine = 0
        for x in gf.elements():
            affine += 1 + gf.is_square(gf.eval_int_poly(coeffs, x))
        lc_sq = gf.is_square(gf.scalar(coeffs[-1]))
    if model.degree == 5:
        inf = 1
    else:
        inf = 2 if lc_sq == 1 else 0
    return CountReport(
        f"X0+({model.level}) hyperelliptic model",
        p,
        n,
        affine + inf,
        "ModelBruteForce",
    )


def _petri_int_forms(model: CurveModel):
    """Integer polynomial coefficients of the quadric (as {(i, j): c} with
    i <= j) and the cubic, plus the primes of the cleared denominators."""
    coeffs = {}
    denq = 1
    for i in range(4):
        for j in range(i, 4):
            v = model.quadric[i][j] * (1 if i == j else 2)
            coeffs[(i, j)] = v
            denq = denq * v.denominator // gcd(denq, v.denominator)
    Q = {k: int(v * denq) for k, v in coeffs.items()}
    denc = 1
    for v in model.cubic:
        denc = denc * v.denominator // gcd(denc, v.denominator)
    C = [int(v * denc) for v in model.cubic]
    cleared = set(p for p, _ in factorize(denq).factors)
    cleared |= set(p for p, _ in factorize(denc).factors)
    return Q, C, cleared


def count_petri_model(model: CurveModel, pp: PrimePower) -> CountReport:
    """Points of P^3(F_q) where the quadric and cubic both vanish."""
    if model.kind != "petri":
        raise DomainError("not a Petri model")
    p, n = pp.p, pp.n
    q = pp.q
    if q > 10**4:
        raise ResourceError(f"q = {q} too large for projective enumeration")
    if p in model.bad_primes:
        raise DomainError(f"bad reduction at {p} for model {model.level}")
    Q, C, cleared = _petri_int_forms(model)
    if p in cleared:
        raise DomainError(f"prime {p} divides a model denominator")
    if n <= 2 and p > 2:
        count = _petri_count_vectorized(Q, C, p, n)
    else:
        count = _petri_count_generic(Q, C, p, n)
    return CountReport(
        f"X0+({model.level}) Petri model", p, n, count, "ModelBruteForce"
    )


def _petri_count_vectorized(Q, C, p, n):
    """Chart-by-chart projective enumeration with numpy (n = 1 or 2).

    For the 3-dimensional chart the quadric is evaluated on a (y, z) grid by
    Horner with two field multiplications per point; the cubic is evaluated
    only on the quadric's zero locus, which has O(q) points per slice.
    """
    s = _nonresidue(p) if n == 2 else 0

    def smul(x, y):
        return ((x[0] * y[0] + s * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def sadd(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sint(c):
        return (c % p, 0)

    field = (
        [(a, 0) for a in range(p)]
        if n == 1
        else [(a, b) for a in range(p) for b in range(p)]
    )
    qn = len(field)
    va = np.array([t[0] for t in field], dtype=np.int64)
    vb = np.array([t[1] for t in field], dtype=np.int64)

    def vmul(x, y):
        return ((x[0] * y[0] + s * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def vscale(c, x):
        # c a scalar pair, x a vector pair
        return (
            (c[0] * x[0] + s * c[1] * x[1]) % p,
            (c[0] * x[1] + c[1] * x[0]) % p,
        )

    def vconst(c, shape_like):
        return (
            np.full_like(shape_like, c[0]),
            np.full_like(shape_like, c[1]),
        )

    quad_terms = []
    for (i, j), coef in Q.items():
        if coef % p:
            e = [0, 0, 0, 0]
            e[i] += 1
            e[j] += 1
            quad_terms.append((coef % p, tuple(e)))
    cubic_terms = [(c % p, e) for c, e in zip(C, MONOMIALS3) if c % p]

    def collect(terms, fixed):
        """Coefficient dict {(e_y, e_z): scalar pair} after fixing x, w."""
        out = {}
        for coef, (ex, ey, ez, ew) in terms:
            xval, wval = fixed
            if wval is None and ew:
                continue  # w = 0 kills the term
            c = sint(coef)
            for _ in range(ex):
                c = smul(c, xval)
            key = (ey, ez)
            out[key] = sadd(out.get(key, (0, 0)), c)
        return out

    # powers of the field vector, reused everywhere
    vpow = [(np.ones(qn, dtype=np.int64), np.zeros(qn, dtype=np.int64))]
    for _ in range(3):
        vpow.append(vmul(vpow[-1], (va, vb)))

    total = 0
    # ---- chart (x : y : z : 1) ----
    y2a, y2b = vpow[2]
    for x in field:
        qd = collect(quad_terms, (x, 1))
        # z-Horner: q(y, z) = qz2 z^2 + (c10 y + c01) z + (c20 y^2 + c1 y + c0)
        czz = qd.get((0, 2), (0, 0))
        c1z = sadd(
            vscale(qd.get((1, 1), (0, 0)), vpow[1]),
            vconst(qd.get((0, 1), (0, 0)), va),
        )
        c0z = sadd(
            sadd(
                vscale(qd.get((2, 0), (0, 0)), vpow[2]),
                vscale(qd.get((1, 0), (0, 0)), vpow[1]),
            ),
            vconst(qd.get((0, 0), (0, 0)), va),
        )
        # grid: rows indexed by y, cols by z
        za = va[None, :]
        zb = vb[None, :]
        ra = np.full((qn, qn), czz[0], dtype=np.int64)
        rb = np.full((qn, qn), czz[1], dtype=np.int64)
        ra, rb = (ra * za + s * rb * zb) % p, (ra * zb + rb * za) % p
        ra = (ra + c1z[0][:, None]) % p
        rb = (rb + c1z[1][:, None]) % p
        ra, rb = (ra * za + s * rb * zb) % p, (ra * zb + rb * za) % p
        ra = (ra + c0z[0][:, None]) % p
        rb = (rb + c0z[1][:, None]) % p
        yi, zi = np.nonzero((ra == 0) & (rb == 0))
        if yi.size == 0:
            continue
        # cubic on the quadric zero locus only
        cd = collect(cubic_terms, (x, 1))
        ya_, yb_ = va[yi], vb[yi]
        za_, zb_ = va[zi], vb[zi]
        acc_a = np.zeros(yi.size, dtype=np.int64)
        acc_b = np.zeros(yi.size, dtype=np.int64)
        ypows = [(np.ones(yi.size, dtype=np.int64), np.zeros(yi.size, dtype=np.int64))]
        zpows = [(np.ones(yi.size, dtype=np.int64), np.zeros(yi.size, dtype=np.int64))]
        for _ in range(3):
            ypows.append(vmul(ypows[-1], (ya_, yb_)))
            zpows.append(vmul(zpows[-1], (za_, zb_)))
        for (ey, ez), c in cd.items():
            term = vscale(c, vmul(ypows[ey], zpows[ez]))
            acc_a = (acc_a + term[0]) % p
            acc_b = (acc_b + term[1]) % p
        total += int(((acc_a == 0) & (acc_b == 0)).sum())
    # ---- chart (x : y : 1 : 0) ----
    for x in field:
        qd = collect(quad_terms, (x, None))
        cd = collect(cubic_terms, (x, None))

        def val(dct):
            acc = (np.zeros(qn, dtype=np.int64), np.zeros(qn, dtype=np.int64))
            for (ey, ez), c in dct.items():
                # z is fixed to 1 here: only ey matters
                term = vscale(c, vpow[ey])
                acc = ((acc[0] + term[0]) % p, (acc[1] + term[1]) % p)
            return acc

        # substitute z = 1: fold ez into the coefficient (z^ez = 1)
        qv = val(qd)
        cv = val(cd)
        total += int(((qv[0] == 0) & (qv[1] == 0) & (cv[0] == 0) & (cv[1] == 0)).sum())
    # ---- chart (x : 1 : 0 : 0) ----
    qacc = (np.zeros(qn, dtype=np.int64), np.zeros(qn, dtype=np.int64))
    cacc = (np.zeros(qn, dtype=np.int64), np.zeros(qn, dtype=np.int64))
    for coef, (ex, ey, ez, ew) in quad_terms:
        if ez or ew:
            continue
        term = vscale(sint(coef), vpow[ex])
        qacc = ((qacc[0] + term[0]) % p, (qacc[1] + term[1]) % p)
    for coef, (ex, ey, ez, ew) in cubic_terms:
        if ez or ew:
            continue
        term = vscale(sint(coef), vpow[ex])
        cacc = ((cacc[0] + term[0]) % p, (cacc[1] + term[1]) % p)
    total += int(((qacc[0] == 0) & (qacc[1] == 0) & (cacc[0] == 0) & (cacc[1] == 0)).sum())
    # ---- the point (1 : 0 : 0 : 0) ----
    if Q[(0, 0)] % p == 0 and C[0] % p == 0:
        total += 1
    return total


def _petri_count_generic(Q, C, p, n):
    gf = GF(p, n)
    els = gf.elements()
    one = gf.scalar(1)
    zero = gf.scalar(0)

    def both_vanish(pt):
        acc = zero
        for (i, j), coef in Q.items():
            if coef % p:
                term = gf.mul(pt[i], pt[j])
                acc = gf.add(acc, gf.mul(gf.scalar(coef), term))
        if acc != zero:
            return False
        acc = zero
        for coef, exps in zip(C, MONOMIALS3):
            if coef % p == 0:
                continue
            term = one
            for idx, e in enumerate(exps):
                for _ in range(e):
                    term = gf.mul(term, pt[idx])
            acc = gf.add(acc, gf.mul(gf.scalar(coef), term))
        return acc == zero

    total = 0
    for x in els:
        for y in els:
            for z in els:
                if both_vanish((x, y, z, one)):
                    total += 1
    for x in els:
        for y in els:
            if both_vanish((x, y, one, zero)):
                total += 1
    for x in els:
        if both_vanish((x, one, zero, zero)):
            total += 1
    if both_vanish((one, zero, zero, zero)):
        total += 1
    return total
