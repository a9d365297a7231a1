"""
Summand Certificates

A family of knots whose first Upsilon singularities fall in disjoint,
ordered intervals and whose slope change there is exactly one maps onto a
triangular matrix with unit diagonal under K -> ((xi/2) dUpsilon'_K(xi)),
so the family spans a free summand of the concordance group.

The family used here is J_n, the n-fold iterated (p, 1)-cable of a knot D
with Upsilon_D = Upsilon_{T(2,3)} and tau(D) = g3(D) = 1.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from cable import CableParams, tau_bounds
from cfk import upsilon
from pin import KnotFacts
from plfun import PLFunc, precompose_scale, restrict, singularities, subtract_linear
from shared_components import (
    Certificate,
    DomainError,
    InputError,
    SummandCertificateModel,
    SummandEntryModel,
    XiIntervalModel,
    format_rational,
)
from staircase import torus_knot_complex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class XiInterval:
    """[1/p^n, 2/(1 + p^n)]."""
    p: int
    n: int
    lo: Fraction
    hi: Fraction

    def overlaps(self, other: "XiInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def to_model(self) -> XiIntervalModel:
        return XiIntervalModel(p=self.p, n=self.n, lo=format_rational(self.lo), hi=format_rational(self.hi))


def first_singularity(f: PLFunc) -> Optional[Fraction]:
    """Smallest interior breakpoint, or None when f is linear."""
    interior = singularities(f)
    return interior[0] if interior else None


def xi_interval(p: int, n: int) -> XiInterval:
    """
    Interval holding the first singularity of J_n.

    Raises:
        InputError: If p < 2 or n < 1
    """
    if p < 2:
        raise InputError(f"p must be >= 2, got {p}")
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    power = p ** n
    return XiInterval(p, n, Fraction(1, power), Fraction(2, 1 + power))


def _as_sequence(p: Union[int, Sequence[int]], n: Optional[int]) -> List[int]:
    if isinstance(p, int):
        if n is None or n < 0:
            raise InputError(f"need n >= 0 with a single p, got {n}")
        return [p] * n
    ps = list(p)
    if n is not None and n != len(ps):
        raise InputError(f"n={n} does not match {len(ps)} cabling parameters")
    return ps


def iterated_lower_bound(upsD: PLFunc, p: Union[int, Sequence[int]], n: Optional[int] = None) -> PLFunc:
    """
    Lower bound for Upsilon of the iterated (p, 1)-cable of D.

    Starting from upsD on [1, 2], each cabling step applies
    bound(t) -> bound(pt) - (p - 1)t, so n steps land on [1/P, 2/P] with P
    the product of the p values. `p` may be a list for mixed iterated cables.

    Raises:
        DomainError: If upsD is not defined on all of [0, 2]
        InputError: If some p < 2
    """
    if not upsD.is_total:
        raise DomainError("iterated_lower_bound needs Upsilon_D on all of [0, 2]")
    ps = _as_sequence(p, n)
    if any(q < 2 for q in ps):
        raise InputError(f"every cabling parameter must be >= 2, got {ps}")
    bound = restrict(upsD, 1, 2)
    for q in ps:
        bound = subtract_linear(precompose_scale(bound, q), q - 1)
    return bound


def iterated_facts(facts_D: KnotFacts, p: Union[int, Sequence[int]], n: Optional[int] = None) -> KnotFacts:
    """
    tau and g3 of an iterated (p, 1)-cable.

    g3 multiplies by p at each step. tau is pinned by the cabling range
    [p tau, p tau + p - 1] together with tau <= g3, which forces p tau when
    tau = g3.

    Raises:
        InputError: If tau is not determined by these constraints
    """
    tau, g3 = facts_D.tau, facts_D.g3
    for q in _as_sequence(p, n):
        lo, hi = tau_bounds(tau, CableParams(q, 1))
        g3 *= q
        hi = min(hi, g3)
        if lo != hi:
            raise InputError(f"tau of the ({q}, 1)-cable is only known to lie in [{lo}, {hi}]")
        tau = lo
    return KnotFacts(tau=tau, g3=g3, g4=g3)


def slope_change_one(facts: KnotFacts, xi_hi: Fraction) -> Certificate:
    """
    Certify (xi/2) dUpsilon'(xi) = 1 at the first singularity xi <= xi_hi.

    Passes iff xi_hi < 4/(g3 + tau).

    Raises:
        InputError: If tau < 0
    """
    if facts.tau < 0:
        raise InputError(f"slope_change_one needs tau >= 0, got {facts.tau}")
    supplied = {"tau": str(facts.tau), "g3": str(facts.g3)}
    total = facts.g3 + facts.tau
    if total == 0:
        return Certificate("slope-change-one", False, xi_hi, "g3 + tau = 0: no singularity to certify", 1, supplied)
    threshold = Fraction(4, total)
    passed = xi_hi < threshold
    relation = "<" if passed else ">="
    detail = f"xi <= {format_rational(xi_hi)} {relation} 4/(g3+tau) = {format_rational(threshold)}"
    return Certificate("slope-change-one", passed, None if passed else xi_hi, detail, 1, supplied)


def xi_upper_from_bound(tau: int, bound: PLFunc) -> Optional[Fraction]:
    """
    First t in the bound's domain where the line -tau*t would drop below it.

    Upsilon = -tau*t up to its first singularity, so that singularity cannot
    lie beyond this t. Returns None if the line never drops below the bound.
    """
    gap = subtract_linear(bound, -tau)
    for a, b, m, c in gap.pieces():
        ga, gb = m * a + c, m * b + c
        if ga > 0:
            return a
        if gb > 0:
            return a - ga / m
    return None


def certify_xi_interval(upsD: PLFunc, facts_D: KnotFacts, p: int, n: int) -> Certificate:
    """
    Recompute both ends of the J_n interval and compare with xi_interval.

    The lower end is 1/g3 (Upsilon is -tau*t below it); the upper end comes
    from xi_upper_from_bound on iterated_lower_bound.
    """
    expected = xi_interval(p, n)
    facts = iterated_facts(facts_D, p, n)
    lo = Fraction(1, facts.g3)
    hi = xi_upper_from_bound(facts.tau, iterated_lower_bound(upsD, p, n))
    supplied = {"tau(D)": str(facts_D.tau), "g3(D)": str(facts_D.g3)}
    if hi is None:
        return Certificate("xi-interval", False, None, "the iterated bound never forces a singularity", 2, supplied)
    if (lo, hi) != (expected.lo, expected.hi):
        return Certificate(
            "xi-interval", False, hi,
            f"recomputed [{format_rational(lo)}, {format_rational(hi)}] != "
            f"[{format_rational(expected.lo)}, {format_rational(expected.hi)}]",
            2, supplied,
        )
    return Certificate(
        "xi-interval", True, None,
        f"[{format_rational(lo)}, {format_rational(hi)}]", 2, supplied,
    )


@dataclass(frozen=True)
class SummandEntry:
    label: str
    interval: XiInterval
    slope_change: Certificate

    @property
    def delta(self) -> Optional[int]:
        return 1 if self.slope_change.passed else None


@dataclass(frozen=True)
class SummandCertificate:
    """
    Verdict for a family ordered by increasing interval.

    matrix[a][b] is (xi_a/2) dUpsilon'_{K_b}(xi_a): 1 on the diagonal and 0
    above it, where K_b is still linear at xi_a. Below the diagonal nothing is
    computed; those entries are 0 with certified[a][b] False, and
    triangularity needs only the certified ones.
    """
    family: Tuple[SummandEntry, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    verdict: str
    detail: str = ""
    facts_supplied: Dict[str, str] = field(default_factory=dict)
    facts_verified: Tuple[str, ...] = ()
    certified: Tuple[Tuple[bool, ...], ...] = ()

    @property
    def rank(self) -> int:
        return len(self.family) if self.verdict == "independent-summand" else 0

    def to_model(self) -> SummandCertificateModel:
        return SummandCertificateModel(
            verdict=self.verdict,
            rank=self.rank,
            detail=self.detail,
            family=[
                SummandEntryModel(
                    label=e.label,
                    interval=e.interval.to_model(),
                    delta=e.delta,
                    slope_change=e.slope_change.to_model(),
                )
                for e in self.family
            ],
            matrix=[list(row) for row in self.matrix],
            certified=[list(row) for row in self.certified],
            facts_supplied=dict(self.facts_supplied),
            facts_verified=list(self.facts_verified),
        )


def independence_certificate(family: Sequence[Tuple[str, XiInterval, Certificate]],
                             facts_supplied: Optional[Dict[str, str]] = None) -> SummandCertificate:
    """
    Triangular-matrix certificate for a family of (label, interval, slope-change certificate).

    "independent-summand" iff the intervals are pairwise disjoint, strictly
    decreasing in the given order, and every slope-change certificate
    passes; otherwise "inconclusive" naming the failing entry or pair.
    """
    entries = [SummandEntry(label, interval, cert) for label, interval, cert in family]
    verified: List[str] = []
    supplied = dict(facts_supplied or {})

    for a, b in zip(entries, entries[1:]):
        if not b.interval.hi < a.interval.lo:
            return SummandCertificate(
                tuple(entries), (), "inconclusive",
                f"intervals of {a.label} and {b.label} are not strictly decreasing", supplied,
            )
    for i, a in enumerate(entries):
        for b in entries[i + 1:]:
            if a.interval.overlaps(b.interval):
                return SummandCertificate(
                    tuple(entries), (), "inconclusive",
                    f"intervals of {a.label} and {b.label} overlap", supplied,
                )
    verified.append(f"{len(entries)} intervals pairwise disjoint and ordered")
    for e in entries:
        if not e.slope_change.passed:
            return SummandCertificate(
                tuple(entries), (), "inconclusive",
                f"slope change of {e.label} not certified: {e.slope_change.detail}", supplied,
                tuple(verified),
            )
    verified.append("every diagonal slope change equals 1")

    ordered = list(reversed(entries))
    size = len(ordered)
    matrix = tuple(tuple(1 if a == b else 0 for b in range(size)) for a in range(size))
    certified = tuple(tuple(b >= a for b in range(size)) for a in range(size))
    logger.info(f"summand certificate: rank >= {size}")
    return SummandCertificate(tuple(ordered), matrix, "independent-summand",
                              f"rank >= {size}", supplied, tuple(verified), certified)


def d_facts() -> KnotFacts:
    """tau(D) = g3(D) = 1."""
    return KnotFacts(tau=1, g3=1, g4=1)


def upsilon_d() -> PLFunc:
    """Upsilon_D = Upsilon_{T(2,3)}."""
    return upsilon(torus_knot_complex(2, 3))


def summand_certificate(p: int, max_n: int) -> SummandCertificate:
    """
    Certificate for J_1 .. J_max_n, the iterated (p, 1)-cables of D.

    Raises:
        InputError: If p < 2, max_n < 0, or an interval cannot be recomputed
    """
    if max_n < 0:
        raise InputError(f"max_n must be >= 0, got {max_n}")
    upsD, facts_D = upsilon_d(), d_facts()
    family = []
    for n in range(1, max_n + 1):
        interval = xi_interval(p, n)
        check = certify_xi_interval(upsD, facts_D, p, n)
        if not check.passed:
            raise InputError(f"J_{n}: {check.detail}")
        facts = iterated_facts(facts_D, p, n)
        family.append((f"J_{n}", interval, slope_change_one(facts, interval.hi)))
    supplied = {"tau(D)": "1", "g3(D)": "1", "Upsilon_D": "|1-t|-1"}
    return independence_certificate(family, supplied)
