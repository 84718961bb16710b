"""Exact integer/rational arithmetic: factorization, multiplicative functions,
square classes, class numbers of imaginary quadratic discriminants.

Everything here is exact; the largest inputs in practice are four-digit
levels, so trial division is always sufficient.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class DomainError(ValueError):
    """Input outside an operation's mathematical domain."""


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer.

    factors is an ordered tuple of (prime, exponent) pairs with strictly
    increasing primes and all exponents >= 1; the empty tuple represents 1.
    """

    n: int
    factors: tuple

    @property
    def omega(self):
        """Number of distinct prime divisors."""
        return len(self.factors)

    @property
    def sigma0(self):
        """Number of divisors."""
        out = 1
        for _, e in self.factors:
            out *= e + 1
        return out

    def divisors(self):
        """All positive divisors, sorted."""
        ds = [1]
        for p, e in self.factors:
            ds = [d * p**k for d in ds for k in range(e + 1)]
        return sorted(ds)

    def exact_divisors(self):
        """Divisors d with d || n, i.e. gcd(d, n/d) = 1, sorted."""
        ds = [1]
        for p, e in self.factors:
            ds = ds + [d * p**e for d in ds]
        return sorted(ds)

    def euler_phi(self):
        out = 1
        for p, e in self.factors:
            out *= p ** (e - 1) * (p - 1)
        return out

    def is_squarefree(self):
        return all(e == 1 for _, e in self.factors)


@lru_cache(maxsize=None)
def factorize(n: int) -> Factorization:
    """Factor a positive integer by trial division."""
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    m = n
    factors = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def prime_divisors(n: int):
    return [p for p, _ in factorize(n).factors]


def divisors(n: int):
    return factorize(n).divisors()


def exact_divisors(n: int):
    return factorize(n).exact_divisors()


def sigma0(n: int) -> int:
    return factorize(n).sigma0


def omega(n: int) -> int:
    return factorize(n).omega


def euler_phi(n: int) -> int:
    return factorize(n).euler_phi()


def is_squarefree(n: int) -> bool:
    return factorize(n).is_squarefree()


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def dedekind_psi(n: int) -> int:
    """psi(n) = n * prod_{p|n} (1 + 1/p), as an exact integer."""
    f = factorize(n)
    out = n
    for p, _ in f.factors:
        out = out // p * (p + 1)
    return out


def square_class(q) -> int:
    """The unique squarefree integer d with q = d * (nonzero rational square).

    Accepts ints and Fractions; q = 0 is a domain error.
    """
    q = Fraction(q)
    if q == 0:
        raise DomainError("square_class undefined at 0")
    n = q.numerator * q.denominator  # same square class as q
    sign = 1 if n > 0 else -1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                out *= p
        p += 1 if p == 2 else 2
    return sign * out * n


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the standard extension of the Jacobi symbol."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # pull out the even part of n
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol (a|n) for odd n > 0 by quadratic reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def reduced_forms(D: int):
    """All reduced primitive positive-definite forms (a, b, c) of discriminant D.

    Reduced means |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"not a negative discriminant: {D}")
    forms = []
    b = D % 2
    while 3 * b * b <= -D:
        ac4 = b * b - D
        if ac4 % 4 == 0:
            ac = ac4 // 4
            a = max(b, 1)
            while a * a <= ac:
                if ac % a == 0:
                    c = ac // a
                    if gcd(gcd(a, b), c) == 1:
                        forms.append((a, b, c))
                        if 0 < b < a < c:
                            forms.append((a, -b, c))
                a += 1
        b += 2
    return sorted(forms)


@lru_cache(maxsize=None)
def class_number(D: int) -> int:
    """h(D): reduced primitive positive-definite forms of discriminant D < 0.

    Counts forms of the given discriminant even when D is not fundamental,
    i.e. this is the order class number.
    """
    return len(reduced_forms(D))


def valuation(n: int, p: int) -> int:
    """Largest e with p^e | n (n != 0)."""
    if n == 0:
        raise DomainError("valuation of 0")
    e = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        e += 1
    return e
