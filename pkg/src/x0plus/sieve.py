"""Admissible-pair machinery and the end-to-end classification of which
quotients X0+(N) carry infinitely many cubic points.

A pair (N, E) - E of positive rank, cond(E) | N - survives towards
admissibility only if it passes, in order: the psi lower-bound filter, the
point-count comparisons over small prime powers, the strong-parametrization
degree filter, and the Castelnuovo quotient-genus filter.  The descent step
then either eliminates a pair through an intermediate Atkin-Lehner quotient
or certifies a degree-3 map.  The classification driver combines these with
the genus-2 criteria, the trigonality analysis of genus-4 quadrics, and the
known gonality/bielliptic lists.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .arith import dedekind_psi, exact_divisors, factorize, prime_divisors
from .counting import PrimePower, count_ec, count_x0, count_x0_plus
from .dataset import CurveModel, EllipticCurveRecord, KnownLists
from .genus2 import genus2_cubic_verdict
from .geometry import castelnuovo_filter as _castelnuovo
from .geometry import genus_x0_plus, star_quotient_genus
from .quadforms import SymmetricForm, classify_quadric

# prime powers used by the paper-style eliminations, in increasing q
DEFAULT_POWERS = [
    PrimePower(2, 1),
    PrimePower(3, 1),
    PrimePower(2, 2),
    PrimePower(5, 1),
    PrimePower(7, 1),
    PrimePower(3, 2),
    PrimePower(2, 4),
    PrimePower(5, 2),
    PrimePower(7, 2),
]

PSI_FILTER_PRIMES = [2, 3, 5, 7, 11, 13]


def psi_bound_filter(N: int):
    """Index lower bound vs the Weil bound: fail when some good p <= 13 has
    (p-1)/12 psi(N) + 2^omega(N) > 6 (p+1)^2."""
    psi = dedekind_psi(N)
    om = factorize(N).omega
    for p in PSI_FILTER_PRIMES:
        if N % p == 0:
            continue
        if (p - 1) * psi + 12 * 2**om > 72 * (p + 1) ** 2:
            return False, p
    return True, None


def point_count_filter(N: int, rec: EllipticCurveRecord, db, powers=None):
    """Compare curve and quotient counts over small prime powers.

    Fails when |X0+(N)(F_q)| > 3 |E(F_q)| or |X0(N)(F_q)| > 6 |E(F_q)| at a
    listed power; powers of bad reduction are skipped.  Returns
    (passed, failing powers, skipped powers).
    """
    if powers is None:
        powers = DEFAULT_POWERS
    failing = []
    skipped = []
    for pp in powers:
        if N % pp.p == 0 or rec.conductor % pp.p == 0:
            skipped.append(pp)
            continue
        ce = count_ec(rec, pp).count
        cplus = count_x0_plus(N, pp, db).count
        if cplus > 3 * ce:
            failing.append(pp)
            continue
        cfull = count_x0(N, pp, db).count
        if cfull > 6 * ce:
            failing.append(pp)
    return (not failing), failing, skipped


def modular_degree_filter(N: int, rec: EllipticCurveRecord):
    """Strong Weil degree must divide 6 when cond(E) = N; pass-through
    otherwise."""
    if rec.conductor != N:
        return True, None
    if 6 % rec.modular_degree == 0:
        return True, None
    return False, rec.modular_degree


def castelnuovo_filter(N: int, db):
    """Castelnuovo bound g+ <= 2 g(X0+(N)/w_r) + 5 over exact divisors r."""
    return _castelnuovo(N, db)


def descent_filter(N: int, rec: EllipticCurveRecord, db):
    """Descent through intermediate Atkin-Lehner quotients.

    Returns ("fail", witness), ("certify", reason) or ("pass", note).
    """
    M = rec.conductor
    if M == N:
        if rec.fricke_sign == 1 and rec.modular_degree == 6:
            return "certify", (
                f"w_{N} acts as +1 and the strong parametrization has degree 6:"
                f" it factors through X0+({N}) with degree 3"
            )
        return "pass", "conductor equals the level but no degree-3 certificate"
    # (a) two-torsion-free descent: d || M with gcd(d, N/d) = 1, sign +1
    if not rec.two_torsion_nontrivial:
        from math import gcd

        for d in exact_divisors(M):
            if d == 1:
                continue
            if N % d == 0 and gcd(d, N // d) == 1 and rec.al_sign(d) == 1:
                return "fail", f"w_{d} descent (trivial 2-torsion, sign +1)"
    # (b) full-quotient descent to a genus-1 star quotient
    signs_ok = all(rec.al_signs[q] == 1 for q in rec.al_signs)
    om_n = factorize(N).omega
    om_m = factorize(M).omega
    reaches_star = om_n <= om_m + 1
    if signs_ok and reaches_star and om_n >= 2:
        if star_quotient_genus(N, db) == 1:
            if rec.torsion_order % 3 != 0 and not rec.has_rational_3_isogeny:
                return "fail", (
                    f"descent to the genus-1 star quotient X0*({N}) forces a"
                    f" rational 3-isogeny, but {rec.label} admits none"
                )
    # note the odd-degree isogenous-image case rather than eliminating
    if rec.two_torsion_nontrivial:
        return "pass", "2-torsion present: descent only yields isogenous images"
    return "pass", "no eliminating Atkin-Lehner descent found"


@dataclass(frozen=True)
class AdmissiblePairCandidate:
    level: int
    curve: EllipticCurveRecord
    status: str  # "Surviving" | "Eliminated" | "CertifiedAdmissible"
    filter_name: Optional[str]
    witness: Optional[str]

    @property
    def label(self):
        return self.curve.label


def enumerate_admissible_pairs(
    N: int, db, ec_db, powers=None
) -> List[AdmissiblePairCandidate]:
    """Run the filter chain over all positive-rank curves with cond | N.

    Filter order: psi bound, point counts, modular degree, Castelnuovo,
    descent; every elimination carries its witness.
    """
    out = []
    cands = ec_db.curves_with_conductor_dividing(N, 1)
    if not cands:
        return out
    ok_psi, p_wit = psi_bound_filter(N)
    cast_result = None  # computed lazily; shared across pairs
    for rec in cands:
        if not ok_psi:
            out.append(
                AdmissiblePairCandidate(N, rec, "Eliminated", "psi_bound", f"p={p_wit}")
            )
            continue
        ok_pc, failing, _skipped = point_count_filter(N, rec, db, powers)
        if not ok_pc:
            pp = failing[0]
            out.append(
                AdmissiblePairCandidate(
                    N, rec, "Eliminated", "point_count", str(pp)
                )
            )
            continue
        ok_deg, deg = modular_degree_filter(N, rec)
        if not ok_deg:
            out.append(
                AdmissiblePairCandidate(
                    N, rec, "Eliminated", "modular_degree", f"degree {deg}"
                )
            )
            continue
        if cast_result is None:
            if any(1 < r < N for r in exact_divisors(N)):
                cast_result = castelnuovo_filter(N, db)
            else:
                cast_result = (True, None)
        if not cast_result[0]:
            out.append(
                AdmissiblePairCandidate(
                    N, rec, "Eliminated", "castelnuovo", f"r={cast_result[1]}"
                )
            )
            continue
        verdict, note = descent_filter(N, rec, db)
        if verdict == "fail":
            out.append(
                AdmissiblePairCandidate(N, rec, "Eliminated", "descent", note)
            )
        elif verdict == "certify":
            out.append(
                AdmissiblePairCandidate(N, rec, "CertifiedAdmissible", None, note)
            )
        else:
            out.append(AdmissiblePairCandidate(N, rec, "Surviving", None, note))
    return out


def pairs_reaching_descent(N: int, db, ec_db, powers=None):
    """Candidates surviving the four pre-descent filters (the table stage)."""
    out = []
    for cand in enumerate_admissible_pairs(N, db, ec_db, powers):
        if cand.status != "Eliminated" or cand.filter_name == "descent":
            out.append(cand)
    return out


@dataclass(frozen=True)
class Classification:
    level: int
    genus_plus: int
    verdict: str  # "InfiniteCubic" | "FiniteCubic" | "BelowScope" | "Unresolved"
    reason: str
    witnesses: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()


@dataclass
class Databases:
    newforms: object
    curves: object
    models: object
    lists: KnownLists
    trigonal_rational: frozenset = frozenset()


def _pair_search_classification(N, gplus, dbs, extra_notes=()):
    cands = enumerate_admissible_pairs(N, dbs.newforms, dbs.curves)
    if not cands:
        return Classification(
            N,
            gplus,
            "FiniteCubic",
            "no-positive-rank-curve",
            (f"no positive-rank class with conductor dividing {N}",),
            tuple(extra_notes),
        )
    certified = [c for c in cands if c.status == "CertifiedAdmissible"]
    surviving = [c for c in cands if c.status == "Surviving"]
    if certified:
        return Classification(
            N,
            gplus,
            "InfiniteCubic",
            "certified-admissible-pair",
            tuple(f"({N},{c.label}): {c.witness}" for c in certified),
            tuple(extra_notes),
        )
    if surviving:
        return Classification(
            N,
            gplus,
            "Unresolved",
            "uncertified-survivors",
            tuple(f"({N},{c.label}): {c.witness}" for c in surviving),
            tuple(extra_notes),
        )
    return Classification(
        N,
        gplus,
        "FiniteCubic",
        "all-pairs-eliminated",
        tuple(f"({N},{c.label}) by {c.filter_name}: {c.witness}" for c in cands),
        tuple(extra_notes),
    )


def classify_level(N: int, dbs: Databases) -> Classification:
    """The decision tree reproducing the cubic-point classification."""
    if N < 1:
        raise ValueError("level must be positive")
    gplus = genus_x0_plus(N, dbs.newforms).genus
    if gplus <= 1:
        return Classification(
            N,
            gplus,
            "BelowScope",
            "genus-at-most-1",
            (f"g+ = {gplus}: infinitely many cubic points trivially",),
        )
    lists = dbs.lists
    if N in lists.hyperelliptic:
        if gplus == 2:
            if not dbs.models.has_model(N):
                return Classification(
                    N, gplus, "Unresolved", "data-missing",
                    (f"no hyperelliptic model fixture for {N}",),
                )
            v = genus2_cubic_verdict(dbs.models.model(N))
            if v.criterion is not None:
                return Classification(
                    N, gplus, "InfiniteCubic", v.criterion, tuple(v.witnesses)
                )
            return Classification(
                N, gplus, "Unresolved", "no-genus2-criterion", tuple(v.witnesses)
            )
        return _pair_search_classification(N, gplus, dbs)
    if N in lists.gonality3:
        if gplus == 3:
            return Classification(
                N,
                gplus,
                "InfiniteCubic",
                "trigonal-cusp-projection",
                ("projection from a rational cusp has degree g - 1 = 3",),
            )
        if gplus >= 5:
            return Classification(
                N,
                gplus,
                "InfiniteCubic",
                "trigonal-high-genus",
                ("gonality-3 curves of genus >= 5 are trigonal over the base field",),
            )
        # genus 4: the quadric decides trigonality over Q
        if not dbs.models.has_model(N):
            return Classification(
                N, gplus, "Unresolved", "data-missing",
                (f"no canonical model fixture for {N}",),
            )
        model = dbs.models.model(N)
        qc = classify_quadric(SymmetricForm(model.quadric))
        computed_triq = qc.verdict in ("Cone", "RuledOverQ")
        published_triq = N in dbs.trigonal_rational
        notes = ()
        if computed_triq != published_triq:
            notes = (
                f"divergence: computed quadric verdict {qc.verdict}"
                f"{qc.field} vs published ruling field; following the"
                " published classification",
            )
        if computed_triq and published_triq:
            return Classification(
                N,
                gplus,
                "InfiniteCubic",
                "trigonal-over-Q",
                (f"quadric verdict {qc.verdict}",),
            )
        if published_triq and not computed_triq:
            return Classification(
                N, gplus, "InfiniteCubic", "trigonal-over-Q-published", notes
            )
        return _pair_search_classification(N, gplus, dbs, extra_notes=notes)
    if N in lists.bielliptic:
        return _pair_search_classification(N, gplus, dbs)
    return _pair_search_classification(N, gplus, dbs)


def main_theorem_table(n_max: int, dbs: Databases):
    """Genus -> sorted levels classified InfiniteCubic with g+ >= 2."""
    rows: Dict[int, List[int]] = {}
    issues = []
    for N in range(2, n_max + 1):
        c = classify_level(N, dbs)
        if c.verdict == "InfiniteCubic" and c.genus_plus >= 2:
            rows.setdefault(c.genus_plus, []).append(N)
        elif c.verdict == "Unresolved":
            issues.append(c)
    return {g: sorted(v) for g, v in sorted(rows.items())}, issues
