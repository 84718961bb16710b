"""Rational quadratic form analysis for the genus-4 trigonal classification:
congruence diagonalization, rank, discriminant square class, isotropy, and
the field over which the quadric surface acquires its rulings.

A rank-3 quadric is a cone (one ruling, rational vertex).  A rank-4 quadric
is ruled over Q iff its discriminant class is 1 and it is isotropic; with
nonsquare discriminant d the rulings live over Q(sqrt(d)) once the form is
isotropic there, and over a biquadratic extension otherwise.  Local
solvability (Hilbert symbols, Hasse invariants) turns failed witness
searches into definitive anisotropy verdicts.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from typing import Optional, Tuple

from .arith import DomainError, factorize, prime_divisors, square_class


@dataclass(frozen=True)
class SymmetricForm:
    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = self.matrix
        if len(m) != 4 or any(len(r) != 4 for r in m):
            raise DomainError("need a 4x4 matrix")
        for i in range(4):
            for j in range(4):
                if m[i][j] != m[j][i]:
                    raise DomainError("matrix not symmetric")

    @staticmethod
    def from_upper(entries) -> "SymmetricForm":
        """Build from the 10 upper-triangle entries, row by row."""
        entries = [Fraction(e) for e in entries]
        if len(entries) != 10:
            raise DomainError("need 10 upper-triangle entries")
        m = [[Fraction(0)] * 4 for _ in range(4)]
        k = 0
        for i in range(4):
            for j in range(i, 4):
                m[i][j] = m[j][i] = entries[k]
                k += 1
        return SymmetricForm(tuple(tuple(r) for r in m))

    def evaluate(self, v) -> Fraction:
        v = [Fraction(x) for x in v]
        return sum(
            self.matrix[i][j] * v[i] * v[j] for i in range(4) for j in range(4)
        )


@dataclass(frozen=True)
class QuadricClassification:
    rank: int
    diagonal: Tuple[int, ...]  # square classes, zeros allowed
    disc_class: int  # 0 when rank < 4
    verdict: str  # "Cone" | "RuledOverQ" | "RuledOverQuadratic" |
    #              "RuledOverBiquadratic" | "Degenerate"
    field: Tuple[int, ...]  # () for Q, (d,) quadratic, (d1, d2) biquadratic
    isotropy_witness: Optional[Tuple[int, ...]]

    def field_square_classes(self) -> frozenset:
        """The nontrivial square classes of the ruling field (field invariant)."""
        if len(self.field) == 0:
            return frozenset()
        if len(self.field) == 1:
            return frozenset(self.field)
        d1, d2 = self.field
        return frozenset({d1, d2, square_class(d1 * d2)})


def diagonalize(form: SymmetricForm):
    """(diagonal entries, T) with T^t M T exactly diagonal, T invertible."""
    M = [[Fraction(x) for x in row] for row in form.matrix]
    T = [[Fraction(1 if i == j else 0) for j in range(4)] for i in range(4)]

    def col_op(dst, src, f):
        # col_dst += f * col_src applied symmetrically, tracked on T
        for i in range(4):
            M[i][dst] += f * M[i][src]
        for j in range(4):
            M[dst][j] += f * M[src][j]
        for i in range(4):
            T[i][dst] += f * T[i][src]

    def col_swap(a, b):
        for i in range(4):
            M[i][a], M[i][b] = M[i][b], M[i][a]
        for j in range(4):
            M[a][j], M[b][j] = M[b][j], M[a][j]
        for i in range(4):
            T[i][a], T[i][b] = T[i][b], T[i][a]

    for k in range(4):
        if M[k][k] == 0:
            swapped = False
            for j in range(k + 1, 4):
                if M[j][j] != 0:
                    col_swap(k, j)
                    swapped = True
                    break
            if not swapped:
                for j in range(k + 1, 4):
                    if M[k][j] != 0:
                        col_op(k, j, Fraction(1))  # hyperbolic pre-step
                        break
        if M[k][k] == 0:
            continue
        for j in range(k + 1, 4):
            if M[k][j] != 0:
                col_op(j, k, -M[k][j] / M[k][k])
    diag = tuple(M[i][i] for i in range(4))
    # exact congruence check
    for i in range(4):
        for j in range(4):
            s = sum(
                T[a][i] * form.matrix[a][b] * T[b][j]
                for a in range(4)
                for b in range(4)
            )
            assert s == (diag[i] if i == j else 0), "congruence identity failed"
    return diag, tuple(tuple(r) for r in T)


def diagonal_square_classes(diag) -> Tuple[int, ...]:
    return tuple(0 if d == 0 else square_class(d) for d in diag)


# ---- local solvability -------------------------------------------------------

def hilbert_symbol(a: int, b: int, p) -> int:
    """Hilbert symbol (a, b)_p; p a prime or the string "real"."""
    assert a != 0 and b != 0
    if p == "real":
        return -1 if a < 0 and b < 0 else 1
    if p == 2:
        alpha, u = _split(a, 2)
        beta, v = _split(b, 2)
        eps = ((u - 1) // 2) * ((v - 1) // 2)
        omega_u = (u * u - 1) // 8
        omega_v = (v * v - 1) // 8
        e = eps + alpha * omega_v + beta * omega_u
        return -1 if e % 2 else 1
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    e = alpha * beta * ((p - 1) // 2)
    out = -1 if e % 2 else 1
    if beta % 2:
        out *= _legendre(u, p)
    if alpha % 2:
        out *= _legendre(v, p)
    return out


def _split(a: int, p: int):
    e = 0
    while a % p == 0:
        a //= p
        e += 1
    return e, a


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1 if r == p - 1 else 0


def hasse_invariant(diag, p) -> int:
    out = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            out *= hilbert_symbol(diag[i], diag[j], p)
    return out


def _is_local_square(d: int, p) -> bool:
    if p == "real":
        return d > 0
    e, u = _split(d, p)
    if e % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return _legendre(u, p) == 1


def anisotropic_places(diag):
    """Places where the rank-4 diagonal form is anisotropic (Hasse-Minkowski).

    A quaternary form over Q_p is anisotropic iff its discriminant is a
    local square and its Hasse invariant equals -(-1,-1)_p; over R iff it is
    definite.
    """
    assert len(diag) == 4 and all(d != 0 for d in diag)
    disc = 1
    for d in diag:
        disc *= d
    places = []
    if all(d > 0 for d in diag) or all(d < 0 for d in diag):
        places.append("real")
    primes = set()
    for d in diag:
        primes.update(prime_divisors(abs(d)))
    primes.add(2)
    for p in sorted(primes):
        if _is_local_square(disc, p) and hasse_invariant(diag, p) == -hilbert_symbol(
            -1, -1, p
        ):
            places.append(p)
    return places


def isotropy_search(diag, height_bound: int = 10**4):
    """A nonzero integer vector v with sum d_i v_i^2 = 0, or None.

    The input is a rank-4 integer diagonal (nonzero entries).  Absence is
    definitive: it is certified by a local obstruction (definiteness over R
    or anisotropy over some Q_p), never by search exhaustion alone.
    """
    if len(diag) != 4 or any(d == 0 for d in diag):
        raise DomainError("need a rank-4 diagonal")
    diag = [int(d) for d in diag]
    if all(d > 0 for d in diag) or all(d < 0 for d in diag):
        return None  # definite
    if anisotropic_places(diag):
        return None
    # isotropic over Q, so a witness exists; sweep boxes of growing height,
    # preferring small nonnegative entries
    for h in range(1, height_bound + 1):
        vals = [0]
        for t in range(1, h + 1):
            vals += [t, -t]
        for v in product(vals, repeat=4):
            if not any(v) or max(abs(t) for t in v) != h:
                continue
            if sum(d * t * t for d, t in zip(diag, v)) == 0:
                return v
    raise DomainError(
        "isotropic form but no witness below the height bound;"
        " raise the bound"
    )


def _minimal_splitting_quadratic(diag):
    """Smallest-|d| squarefree d such that the anisotropic form becomes
    isotropic over Q(sqrt(d)): d must be a non-square at every place where
    the form is anisotropic."""
    places = anisotropic_places(diag)
    assert places, "form is isotropic; no splitting field needed"
    for absd in range(2, 10**4):
        for d in (-absd, absd):
            if square_class(d) != d:
                continue
            if all(not _is_local_square(d, v) for v in places):
                return d
    raise DomainError("no small splitting quadratic found")


def classify_quadric(form: SymmetricForm) -> QuadricClassification:
    """Rank, discriminant class and ruling-field verdict of a quadric."""
    diag, T = diagonalize(form)
    classes = diagonal_square_classes(diag)
    nonzero = [c for c in classes if c != 0]
    rank = len(nonzero)
    if rank <= 2:
        return QuadricClassification(rank, classes, 0, "Degenerate", (), None)
    if rank == 3:
        return QuadricClassification(rank, classes, 0, "Cone", (), None)
    disc = 1
    for c in nonzero:
        disc *= c
    disc = square_class(disc)
    witness = isotropy_search(list(nonzero))
    if disc == 1:
        if witness is not None:
            # map the diagonal witness back to form coordinates
            w = _witness_to_form_coords(witness, T)
            return QuadricClassification(
                rank, classes, disc, "RuledOverQ", (), w
            )
        d = _minimal_splitting_quadratic(list(nonzero))
        return QuadricClassification(
            rank, classes, disc, "RuledOverQuadratic", (d,), None
        )
    # nonsquare discriminant: rulings conjugate over K0 = Q(sqrt(disc));
    # isotropy over K0 decides quadratic vs biquadratic
    if _isotropic_over_quadratic(list(nonzero), disc):
        w = _witness_to_form_coords(witness, T) if witness is not None else None
        return QuadricClassification(
            rank, classes, disc, "RuledOverQuadratic", (disc,), w
        )
    d2 = _second_generator(list(nonzero), disc)
    return QuadricClassification(
        rank, classes, disc, "RuledOverBiquadratic", (disc, d2), None
    )


def _witness_to_form_coords(witness, T):
    out = [sum(T[i][j] * witness[j] for j in range(4)) for i in range(4)]
    lcm = 1
    for x in out:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    out = [int(x * lcm) for x in out]
    g = 0
    for x in out:
        g = gcd(g, abs(x))
    return tuple(x // (g or 1) for x in out)


def _isotropic_over_quadratic(diag, d0) -> bool:
    """Isotropy of the rank-4 form over Q(sqrt(d0)), via rational local data.

    The form stays anisotropic over a completion of the quadratic field only
    at split places, i.e. where d0 is a local square; at such places the
    local field is Q_p (or R) itself.
    """
    for v in anisotropic_places(diag):
        if _is_local_square(d0, v):
            return False
    return True


def _second_generator(diag, d0) -> int:
    """Smallest squarefree d2 with the form isotropic over Q(sqrt d0, sqrt d2)."""
    obstructions = [v for v in anisotropic_places(diag) if _is_local_square(d0, v)]
    assert obstructions, "already isotropic over the quadratic field"
    for absd in range(2, 10**4):
        for d2 in (-absd, absd):
            if square_class(d2) != d2 or d2 == d0:
                continue
            # the completions of the biquadratic field at a place v contain
            # Q_v iff d0, d2 (hence d0 d2) are all local squares at v
            if all(not _is_local_square(d2, v) for v in obstructions):
                return d2
    raise DomainError("no small second generator found")
