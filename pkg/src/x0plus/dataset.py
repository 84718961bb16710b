"""Parsers and validated record types for the external data the pipeline
consumes: newform eigenvalue data, elliptic-curve records, explicit curve
models, and the known gonality/bielliptic classification lists.

All files are UTF-8 text with '#' comment lines.  Formats:

* newforms (TSV): level, orbit_id, dim, al_signs ("q:+1" joined by ';',
  or "-" for level 1), hecke ("p:s1,s2[,s3,s4]" joined by ';').
* curves (CSV): label, conductor, rank, torsion_order, two_torsion,
  three_isogeny, modular_degree, al_signs, a1, a2, a3, a4, a6.
* models (TSV): level, kind, payload fields; rationals as "num/den".
* known lists: "name: n1 n2 ...".
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Optional, Tuple

from .arith import factorize, prime_divisors


class ParseError(ValueError):
    """Malformed input line."""


class IntegrityError(ValueError):
    """Input parsed but violates a structural invariant."""


@dataclass(frozen=True)
class NewformOrbitRecord:
    """A Galois orbit of weight-2 newforms at the given level."""

    level: int
    orbit_id: str
    dim: int
    al_signs: Dict[int, int]
    hecke: Dict[int, Tuple[int, ...]]

    @property
    def prime_bound(self) -> int:
        return max(self.hecke) if self.hecke else 0

    def al_sign(self, d: int) -> int:
        """Eigenvalue of w_{d-part}: product of signs over primes dividing d."""
        out = 1
        for q in self.al_signs:
            if d % q == 0:
                out *= self.al_signs[q]
        return out

    @property
    def fricke_sign(self) -> int:
        return self.al_sign(self.level)

    def power_sums(self, p: int) -> Tuple[int, ...]:
        if p not in self.hecke:
            raise KeyError(f"no power sums at p={p} for orbit {self.level}{self.orbit_id}")
        return self.hecke[p]

    def validate(self):
        if set(self.al_signs) != set(prime_divisors(self.level)):
            raise IntegrityError(
                f"orbit {self.level}{self.orbit_id}: AL signs must cover exactly"
                " the primes dividing the level"
            )
        if any(s not in (-1, 1) for s in self.al_signs.values()):
            raise IntegrityError(f"orbit {self.level}{self.orbit_id}: AL sign not +-1")
        for p, sums in self.hecke.items():
            if self.level % p == 0:
                raise IntegrityError(
                    f"orbit {self.level}{self.orbit_id}: power sums at bad prime {p}"
                )
            for k, s in enumerate(sums, start=1):
                if s * s > self.dim * self.dim * (4 * p) ** k:
                    raise IntegrityError(
                        f"orbit {self.level}{self.orbit_id}: power sum s{k}({p})"
                        f"={s} violates the Deligne bound"
                    )
        for p in (2, 3, 5, 7):
            if self.level % p and p in self.hecke and len(self.hecke[p]) < 4:
                raise IntegrityError(
                    f"orbit {self.level}{self.orbit_id}: s3, s4 required at p={p}"
                )


class NewformDatabase:
    def __init__(self, orbits: List[NewformOrbitRecord]):
        self._by_level: Dict[int, List[NewformOrbitRecord]] = {}
        seen = set()
        for orb in orbits:
            key = (orb.level, orb.orbit_id)
            if key in seen:
                raise IntegrityError(f"duplicate orbit {orb.level}{orb.orbit_id}")
            seen.add(key)
            self._by_level.setdefault(orb.level, []).append(orb)

    def orbits_of_level(self, M: int) -> List[NewformOrbitRecord]:
        return self._by_level.get(M, [])

    def orbit(self, M: int, orbit_id: str) -> NewformOrbitRecord:
        for orb in self.orbits_of_level(M):
            if orb.orbit_id == orbit_id:
                return orb
        raise KeyError(f"no orbit {M}{orbit_id}")

    def levels(self) -> List[int]:
        return sorted(self._by_level)

    def max_level(self) -> int:
        return max(self._by_level, default=0)

    def __len__(self):
        return sum(len(v) for v in self._by_level.values())


def _parse_al_signs(text: str, lineno: int) -> Dict[int, int]:
    signs: Dict[int, int] = {}
    if text == "-" or text == "":
        return signs
    for part in text.split(";"):
        try:
            q_s, s_s = part.split(":")
            q, s = int(q_s), int(s_s)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad AL sign entry {part!r}") from exc
        if s not in (-1, 1):
            raise ParseError(f"line {lineno}: AL sign must be +-1, got {s}")
        if q in signs:
            raise ParseError(f"line {lineno}: duplicate AL prime {q}")
        signs[q] = s
    return signs


def load_newforms(source) -> NewformDatabase:
    """Parse the newform TSV from a file-like object or string iterable."""
    orbits = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.rstrip("\n")
        if not line or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 5:
            raise ParseError(f"line {lineno}: expected 5 tab-separated fields")
        try:
            level = int(parts[0])
            dim = int(parts[2])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad integer field") from exc
        if level < 1 or dim < 1:
            raise ParseError(f"line {lineno}: level and dim must be positive")
        al = _parse_al_signs(parts[3], lineno)
        hecke: Dict[int, Tuple[int, ...]] = {}
        for part in parts[4].split(";"):
            try:
                p_s, sums_s = part.split(":")
                p = int(p_s)
                sums = tuple(int(x) for x in sums_s.split(","))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad power sum entry {part!r}") from exc
            if len(sums) not in (2, 3, 4):
                raise ParseError(f"line {lineno}: need s1,s2[,s3,s4] at p={p}")
            hecke[p] = sums
        rec = NewformOrbitRecord(level, parts[1], dim, al, hecke)
        try:
            rec.validate()
        except IntegrityError:
            raise
        orbits.append(rec)
    return NewformDatabase(orbits)


@dataclass(frozen=True)
class EllipticCurveRecord:
    """Isogeny-class representative with the invariants the sieve consumes."""

    label: str
    conductor: int
    rank: int
    torsion_order: int
    two_torsion_nontrivial: bool
    has_rational_3_isogeny: bool
    modular_degree: int
    al_signs: Dict[int, int]
    weierstrass: Tuple[int, int, int, int, int]

    def al_sign(self, d: int) -> int:
        out = 1
        for q in self.al_signs:
            if d % q == 0:
                out *= self.al_signs[q]
        return out

    @property
    def fricke_sign(self) -> int:
        return self.al_sign(self.conductor)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.weierstrass
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def two_torsion_from_model(self) -> bool:
        """Rational 2-torsion exists iff 4x^3 + b2 x^2 + 2 b4 x + b6 has a
        rational root."""
        b2, b4, b6, _ = self.b_invariants()
        return _cubic_has_rational_root(4, b2, 2 * b4, b6)

    def validate(self):
        if set(self.al_signs) != set(prime_divisors(self.conductor)):
            raise IntegrityError(f"curve {self.label}: AL signs must cover the conductor")
        if self.two_torsion_nontrivial != self.two_torsion_from_model():
            raise IntegrityError(
                f"curve {self.label}: 2-torsion flag inconsistent with model"
            )
        if self.two_torsion_nontrivial != (self.torsion_order % 2 == 0):
            raise IntegrityError(
                f"curve {self.label}: 2-torsion flag inconsistent with torsion order"
            )
        if self.discriminant() == 0:
            raise IntegrityError(f"curve {self.label}: singular model")
        if self.fricke_sign == 1 and self.rank % 2 == 0:
            raise IntegrityError(
                f"curve {self.label}: Fricke sign +1 forces odd rank"
            )


def _cubic_has_rational_root(c3, c2, c1, c0) -> bool:
    # rational root p/q: p | c0, q | c3 (after removing content)
    g = gcd(gcd(abs(c3), abs(c2)), gcd(abs(c1), abs(c0)))
    if g:
        c3, c2, c1, c0 = c3 // g, c2 // g, c1 // g, c0 // g
    if c0 == 0:
        return True

    def divisors_of(n):
        n = abs(n)
        out = []
        i = 1
        while i * i <= n:
            if n % i == 0:
                out += [i, n // i]
            i += 1
        return sorted(set(out))

    for q in divisors_of(c3):
        for p in divisors_of(c0):
            for sgn in (1, -1):
                num = p * sgn
                if c3 * num**3 + c2 * num**2 * q + c1 * num * q * q + c0 * q**3 == 0:
                    return True
    return False


class CurveDatabase:
    def __init__(self, curves: List[EllipticCurveRecord]):
        self._curves = sorted(curves, key=lambda c: (c.conductor, c.label))
        self._by_label = {}
        for c in self._curves:
            if c.label in self._by_label:
                raise IntegrityError(f"duplicate curve label {c.label}")
            self._by_label[c.label] = c

    def curve(self, label: str) -> EllipticCurveRecord:
        return self._by_label[label]

    def has_curve(self, label: str) -> bool:
        return label in self._by_label

    def all_curves(self) -> List[EllipticCurveRecord]:
        return list(self._curves)

    def curves_with_conductor_dividing(self, N: int, min_rank: int = 0):
        """Records with conductor | N and rank >= min_rank, (conductor, label)
        sorted."""
        return [
            c
            for c in self._curves
            if N % c.conductor == 0 and c.rank >= min_rank
        ]

    def __len__(self):
        return len(self._curves)


def load_elliptic_curves(source) -> CurveDatabase:
    curves = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 13:
            raise ParseError(f"line {lineno}: expected 13 comma-separated fields")
        try:
            rec = EllipticCurveRecord(
                label=parts[0],
                conductor=int(parts[1]),
                rank=int(parts[2]),
                torsion_order=int(parts[3]),
                two_torsion_nontrivial=_parse_bool(parts[4], lineno),
                has_rational_3_isogeny=_parse_bool(parts[5], lineno),
                modular_degree=int(parts[6]),
                al_signs=_parse_al_signs(parts[7], lineno),
                weierstrass=tuple(int(x) for x in parts[8:13]),
            )
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        rec.validate()
        curves.append(rec)
    return CurveDatabase(curves)


def _parse_bool(s: str, lineno: int) -> bool:
    if s not in ("0", "1"):
        raise ParseError(f"line {lineno}: boolean field must be 0 or 1")
    return s == "1"


MONOMIALS3 = [
    (3, 0, 0, 0), (2, 1, 0, 0), (2, 0, 1, 0), (2, 0, 0, 1), (1, 2, 0, 0),
    (1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 2, 0), (1, 0, 1, 1), (1, 0, 0, 2),
    (0, 3, 0, 0), (0, 2, 1, 0), (0, 2, 0, 1), (0, 1, 2, 0), (0, 1, 1, 1),
    (0, 1, 0, 2), (0, 0, 3, 0), (0, 0, 2, 1), (0, 0, 1, 2), (0, 0, 0, 3),
]


@dataclass(frozen=True)
class CurveModel:
    """An explicit model of X0+(N): hyperelliptic or Petri."""

    level: int
    kind: str  # "hyperelliptic" or "petri"
    # hyperelliptic: y^2 = f(x), ascending integer coefficients
    poly: Optional[Tuple[int, ...]] = None
    # petri: symmetric 4x4 rational quadric + degree-3 form (MONOMIALS3 order)
    quadric: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    cubic: Optional[Tuple[Fraction, ...]] = None
    bad_primes: Tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        assert self.poly is not None
        return len(self.poly) - 1

    def poly_eval(self, x: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.poly):
            out = out * x + c
        return out

    def validate(self):
        if self.kind == "hyperelliptic":
            if self.poly is None or not 5 <= len(self.poly) - 1 <= 6:
                raise IntegrityError(f"model {self.level}: need degree 5 or 6")
            if self.poly[-1] == 0:
                raise IntegrityError(f"model {self.level}: leading coefficient zero")
            if _poly_not_squarefree(self.poly):
                raise IntegrityError(f"model {self.level}: f must be squarefree")
        elif self.kind == "petri":
            if self.quadric is None or self.cubic is None:
                raise IntegrityError(f"model {self.level}: incomplete Petri data")
            for i in range(4):
                for j in range(4):
                    if self.quadric[i][j] != self.quadric[j][i]:
                        raise IntegrityError(f"model {self.level}: quadric not symmetric")
        else:
            raise IntegrityError(f"model {self.level}: unknown kind {self.kind}")


def _poly_not_squarefree(coeffs) -> bool:
    # gcd(f, f') has positive degree iff disc-type resultant vanishes;
    # a subresultant gcd over Q suffices at degree <= 6
    f = list(Fraction(c) for c in coeffs)
    fp = [i * c for i, c in enumerate(f)][1:]

    def polymod(a, b):
        a = a[:]
        while len(a) >= len(b) > 0 and any(a):
            if a[-1] == 0:
                a.pop()
                continue
            q = a[-1] / b[-1]
            off = len(a) - len(b)
            for i, c in enumerate(b):
                a[off + i] -= q * c
            a.pop()
        while a and a[-1] == 0:
            a.pop()
        return a

    a, b = f, fp
    while b:
        a, b = b, polymod(a, b)
    return len(a) > 1


class ModelDatabase:
    def __init__(self, models: List[CurveModel]):
        self._by_level = {}
        for m in models:
            if m.level in self._by_level:
                raise IntegrityError(f"duplicate model for level {m.level}")
            self._by_level[m.level] = m

    def model(self, N: int) -> CurveModel:
        return self._by_level[N]

    def has_model(self, N: int) -> bool:
        return N in self._by_level

    def levels(self) -> List[int]:
        return sorted(self._by_level)

    def hyperelliptic_levels(self) -> List[int]:
        return sorted(
            N for N, m in self._by_level.items() if m.kind == "hyperelliptic"
        )

    def petri_levels(self) -> List[int]:
        return sorted(N for N, m in self._by_level.items() if m.kind == "petri")


def _parse_fraction(s: str, lineno: int) -> Fraction:
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"line {lineno}: bad rational {s!r}") from exc


def load_models(source) -> ModelDatabase:
    models = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.rstrip("\n")
        if not line or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        kind = parts[1]
        level = int(parts[0])
        if kind == "hyperelliptic":
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: hyperelliptic needs 4 fields")
            coeffs = tuple(int(x) for x in parts[2].split(","))
            bad = tuple(int(x) for x in parts[3].split(",") if x)
            m = CurveModel(level, kind, poly=coeffs, bad_primes=bad)
        elif kind == "petri":
            if len(parts) != 5:
                raise ParseError(f"line {lineno}: petri needs 5 fields")
            up = [_parse_fraction(x, lineno) for x in parts[2].split(",")]
            if len(up) != 10:
                raise ParseError(f"line {lineno}: quadric needs 10 entries")
            q = [[Fraction(0)] * 4 for _ in range(4)]
            k = 0
            for i in range(4):
                for j in range(i, 4):
                    q[i][j] = q[j][i] = up[k]
                    k += 1
            cub = tuple(_parse_fraction(x, lineno) for x in parts[3].split(","))
            if len(cub) != 20:
                raise ParseError(f"line {lineno}: cubic needs 20 coefficients")
            bad = tuple(int(x) for x in parts[4].split(",") if x)
            m = CurveModel(
                level,
                kind,
                quadric=tuple(tuple(row) for row in q),
                cubic=cub,
                bad_primes=bad,
            )
        else:
            raise ParseError(f"line {lineno}: unknown model kind {kind!r}")
        m.validate()
        models.append(m)
    return ModelDatabase(models)


@dataclass(frozen=True)
class KnownLists:
    """The classification lists the pipeline consumes as given data."""

    genus0: frozenset
    genus1: frozenset
    hyperelliptic: frozenset
    bielliptic: frozenset
    gonality3: frozenset

    def validate(self):
        if self.genus0 & self.genus1:
            raise IntegrityError("genus-0 and genus-1 lists intersect")
        if (self.genus0 | self.genus1) & self.hyperelliptic:
            raise IntegrityError("low-genus lists intersect the hyperelliptic list")
        if (self.genus0 | self.genus1) & self.gonality3:
            raise IntegrityError("low-genus lists intersect the gonality-3 list")
        if self.hyperelliptic & self.gonality3:
            raise IntegrityError("hyperelliptic and trigonal lists intersect")


def load_known_lists(source) -> KnownLists:
    data = {}
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            name, values = line.split(":")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: expected 'name: n1 n2 ...'") from exc
        data[name.strip()] = frozenset(int(x) for x in values.split())
    try:
        kl = KnownLists(
            genus0=data["genus0"],
            genus1=data["genus1"],
            hyperelliptic=data["hyperelliptic"],
            bielliptic=data["bielliptic"],
            gonality3=data["gonality3"],
        )
    except KeyError as exc:
        raise ParseError(f"missing list {exc}") from exc
    kl.validate()
    return kl


def _lines(source):
    if isinstance(source, str):
        return source.splitlines(keepends=True)
    return source


# ---- serialization (round-trip support) -------------------------------------

def dump_newforms(db: NewformDatabase) -> str:
    lines = []
    for level in db.levels():
        for orb in db.orbits_of_level(level):
            al = ";".join(f"{q}:{s:+d}" for q, s in sorted(orb.al_signs.items()))
            hk = ";".join(
                f"{p}:{','.join(str(x) for x in orb.hecke[p])}"
                for p in sorted(orb.hecke)
            )
            lines.append(f"{level}\t{orb.orbit_id}\t{orb.dim}\t{al or '-'}\t{hk}")
    return "\n".join(lines) + "\n"


def dump_elliptic_curves(db: CurveDatabase) -> str:
    lines = []
    for c in db.all_curves():
        al = ";".join(f"{q}:{s:+d}" for q, s in sorted(c.al_signs.items()))
        a = ",".join(str(x) for x in c.weierstrass)
        lines.append(
            f"{c.label},{c.conductor},{c.rank},{c.torsion_order},"
            f"{1 if c.two_torsion_nontrivial else 0},"
            f"{1 if c.has_rational_3_isogeny else 0},{c.modular_degree},{al},{a}"
        )
    return "\n".join(lines) + "\n"
