"""Degree-3-map criteria for genus-2 quotients: rational point search,
points at infinity, and the slice-divisor trick (an effective rational
divisor of degree 3 from an irreducible cubic factor of f(x) - c^2).

Polynomial factorization over Q at degree <= 6 is hand-rolled: content
extraction, rational roots, then bounded integer-coefficient searches for
quadratic and cubic factors (a nontrivial factorization of a degree <= 6
polynomial always has a factor of degree <= 3).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional, Tuple

from .arith import DomainError, is_square
from .dataset import CurveModel


# ---- exact polynomial helpers (ascending integer coefficient tuples) --------

def _content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    return g or 1


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_exact(a, b):
    """Quotient of integer polys when the division is exact over Q, else None."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) < len(b):
        return None
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = a[:]
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] / b[-1]
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    if any(r):
        return None
    return q


def _strip_rational_roots(cur):
    """Strip all rational roots; returns (list of (num, den) roots, rest)."""
    roots = []
    changed = True
    while changed and len(cur) > 1:
        changed = False
        if cur[0] == 0:
            roots.append((0, 1))
            cur = cur[1:]
            changed = True
            continue
        for den in _divisors(abs(cur[-1])):
            for num_abs in _divisors(abs(cur[0])):
                if gcd(num_abs, den) != 1:
                    continue
                for num in (num_abs, -num_abs):
                    d = len(cur) - 1
                    val = sum(c * num**i * den ** (d - i) for i, c in enumerate(cur))
                    if val == 0:
                        q = _poly_divmod_exact(cur, [-num, den])
                        l = 1
                        for c in q:
                            l = l * c.denominator // gcd(l, c.denominator)
                        cur = [int(c * l) for c in q]
                        g = _content(cur)
                        cur = [c // g for c in cur]
                        roots.append((num, den))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return roots, cur


def _signed_divisors(n):
    out = []
    for d in _divisors(abs(n)):
        out += [d, -d]
    return out


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out += [i, n // i]
        i += 1
    return sorted(set(out))


def _find_factor(cur, d):
    """A degree-d integer factor of cur (primitive, no rational roots), or
    None.  Search constrained by h(1) | cur(1) and h(-1) | cur(-1)."""
    v1 = sum(cur)
    v2 = sum(c * (-1) ** i for i, c in enumerate(cur))
    assert v1 != 0 and v2 != 0, "rational roots were not stripped"
    top, low = cur[-1], cur[0]
    for lead in _signed_divisors(top):
        if top % lead:
            continue
        for c0 in _signed_divisors(low):
            if low % c0:
                continue
            for t1 in _signed_divisors(v1):
                for t2 in _signed_divisors(v2):
                    if d == 2:
                        # h = lead x^2 + m x + c0; h(1) = t1 determines m
                        m = t1 - lead - c0
                        if lead - m + c0 != t2:
                            continue
                        cand = [c0, m, lead]
                    else:
                        # h = lead x^3 + a x^2 + b x + c0
                        if (t1 + t2) % 2 or (t1 - t2) % 2:
                            continue
                        a = (t1 + t2) // 2 - c0
                        b = (t1 - t2) // 2 - lead
                        cand = [c0, b, a, lead]
                    q = _poly_divmod_exact(cur, cand)
                    if q is not None:
                        return cand
    return None


@dataclass(frozen=True)
class FactoredPoly:
    content: Fraction
    factors: Tuple[Tuple[Tuple[int, ...], int], ...]  # (ascending coeffs, mult)

    def reassemble(self):
        out = [Fraction(self.content)]
        for f, m in self.factors:
            for _ in range(m):
                out = [Fraction(x) for x in _poly_mul(out, list(f))]
        return out


def factor_rational_poly(coeffs) -> FactoredPoly:
    """Complete factorization over Q of a polynomial of degree <= 6.

    Input: rational coefficients, ascending.  Output: content and primitive
    integer irreducible factors with positive leading coefficients.
    """
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise DomainError("zero polynomial")
    if len(coeffs) - 1 > 6:
        raise DomainError("degree > 6 unsupported")
    l = 1
    for c in coeffs:
        l = l * c.denominator // gcd(l, c.denominator)
    ic = [int(c * l) for c in coeffs]
    g = _content(ic)
    content = Fraction(g, l)
    cur = [c // g for c in ic]
    if cur[-1] < 0:
        cur = [-c for c in cur]
        content = -content
    factors: List[Tuple[int, ...]] = []
    roots, cur = _strip_rational_roots(cur)
    for num, den in roots:
        # root num/den <-> factor (den x - num), normalized positive lead
        f = (-num, den) if den > 0 else (num, -den)
        factors.append(f)
        content *= 1  # factors are primitive; content already exact
    while len(cur) - 1 >= 4:
        found = None
        for d in (2, 3):
            found = _find_factor(cur, d)
            if found:
                break
        if not found:
            break
        q = _poly_divmod_exact(cur, found)
        l2 = 1
        for c in q:
            l2 = l2 * c.denominator // gcd(l2, c.denominator)
        qq = [int(c * l2) for c in q]
        qq = [c // _content(qq) for c in qq]
        ff = [c // _content(found) for c in found]
        if ff[-1] < 0:
            ff = [-c for c in ff]
        if qq[-1] < 0:
            qq = [-c for c in qq]
        factors.append(tuple(ff))
        cur = qq
    if len(cur) - 1 >= 1:
        factors.append(tuple(cur))
    counts = {}
    for f in sorted(factors, key=lambda t: (len(t), t)):
        counts[f] = counts.get(f, 0) + 1
    fp = FactoredPoly(content, tuple((f, m) for f, m in counts.items()))
    assert fp.reassemble() == coeffs, "factorization does not reassemble"
    return fp


# ---- rational point machinery -------------------------------------------------

def search_rational_points(model: CurveModel, height_bound: int = 100):
    """All affine points (x, y), x = a/b with |a|, b <= bound, y^2 = f(x)."""
    if model.kind != "hyperelliptic":
        raise DomainError("need a hyperelliptic model")
    f = model.poly
    deg = model.degree
    pts = []
    for b in range(1, height_bound + 1):
        for a in range(-height_bound, height_bound + 1):
            if gcd(abs(a), b) != 1:
                continue
            # G = b^6 f(a/b) is an integer for deg <= 6
            G = sum(c * a**i * b ** (6 - i) for i, c in enumerate(f))
            if G < 0:
                continue
            r = isqrt(G)
            if r * r == G:
                x = Fraction(a, b)
                y = Fraction(r, b**3)
                pts.append((x, y))
                if y != 0:
                    pts.append((x, -y))
    pts = sorted(set(pts))
    return pts


@dataclass(frozen=True)
class InfinityReport:
    count_rational: int
    swapped_by_hyperelliptic_involution: bool


def infinity_points(model: CurveModel) -> InfinityReport:
    """Rational points at infinity of y^2 = f(x) and their involution action."""
    if model.degree == 5:
        return InfinityReport(1, False)
    lc = model.poly[-1]
    rational = is_square(lc) if lc > 0 else False
    return InfinityReport(2 if rational else 0, True)


def slice_divisor_search(model: CurveModel, c_range=None):
    """An irreducible cubic factor of f(x) - c^2 for some c, if one exists.

    Its roots t_i give points (t_i, c) forming a rational effective divisor
    of degree 3, hence a degree-3 function by Riemann-Roch on a genus-2
    curve.  Requires deg f = 5.
    """
    if model.degree != 5:
        raise DomainError("slice search needs a degree-5 model")
    if c_range is None:
        c_range = default_slice_range()
    for c in c_range:
        shifted = [Fraction(x) for x in model.poly]
        shifted[0] -= Fraction(c) * Fraction(c)
        fp = factor_rational_poly(shifted)
        for f, mult in fp.factors:
            if len(f) - 1 == 3 and mult == 1:
                return c, f
    return None


def default_slice_range():
    vals = set()
    for num in range(0, 4):
        for den in (1, 2, 3):
            if gcd(num, den) == 1 or num == 0:
                vals.add(Fraction(num, den))
                vals.add(Fraction(-num, den))
    return sorted(vals, key=lambda v: (abs(v), v < 0))


@dataclass(frozen=True)
class Genus2Verdict:
    level: int
    criterion: Optional[str]  # ThreeRationalPoints | SwappedInfinityPair |
    #                           SliceDivisor | None
    witnesses: tuple


def genus2_cubic_verdict(model: CurveModel, ec_db=None, height_bound=100) -> Genus2Verdict:
    """First firing degree-3-map criterion for a genus-2 quotient model."""
    inf = infinity_points(model)
    pts = search_rational_points(model, height_bound)
    total = len(pts) + inf.count_rational
    if total >= 3:
        wit = [f"infinity x{inf.count_rational}"] if inf.count_rational else []
        wit += [f"({p[0]},{p[1]})" for p in pts[: 3 - inf.count_rational + 1]]
        return Genus2Verdict(model.level, "ThreeRationalPoints", tuple(wit))
    if model.degree == 6 and inf.count_rational == 2:
        return Genus2Verdict(
            model.level,
            "SwappedInfinityPair",
            ("two rational points at infinity swapped by (x, y) -> (x, -y)",),
        )
    if model.degree == 5:
        hit = slice_divisor_search(model)
        if hit is not None:
            c, cubic = hit
            return Genus2Verdict(
                model.level,
                "SliceDivisor",
                (f"c={c}", "cubic=" + ",".join(str(t) for t in cubic)),
            )
    return Genus2Verdict(model.level, None, (f"points found: {total}",))
