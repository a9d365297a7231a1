"""
Cable Bounds

Upsilon of a (p, q)-cable is squeezed, for 0 <= t <= 2/p, between

    Upsilon_K(pt) - (p-1)(q+1)t/2  and  Upsilon_K(pt) - (p-1)(q-1)t/2,

and the symmetry Upsilon(t) = Upsilon(2 - t) of the cable carries the same
pair to [2 - 2/p, 2]. Nothing is claimed on the middle range.

The module also checks the grading arithmetic the bounds rest on (the
Alexander grading of a cable generator and the two filtration inclusions it
gives) and the monotonicity of Upsilon(K_{p,q}) + (p-1)qt/2 in q.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import List, Optional, Sequence, Tuple

from cfk import Complex
from config import config
from plfun import (
    PLFunc,
    first_violation,
    precompose_scale,
    reflect,
    restrict,
    subtract_linear,
)
from shared_components import (
    BoundPairModel,
    Certificate,
    DomainError,
    InputError,
    format_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CableParams:
    """Cabling parameters: p strands, q twists, gcd(p, q) = 1."""
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise InputError(f"p must be >= 1, got {self.p}")
        if gcd(self.p, abs(self.q)) != 1:
            raise InputError(f"p={self.p} and q={self.q} are not coprime")

    @classmethod
    def from_n(cls, p: int, n: int) -> "CableParams":
        """The (p, pn + 1) cable."""
        return cls(p, p * n + 1)

    @property
    def n(self) -> Optional[int]:
        """n with q = pn + 1, when there is one."""
        if (self.q - 1) % self.p == 0:
            return (self.q - 1) // self.p
        return None

    @property
    def edge(self) -> Fraction:
        return Fraction(2, self.p)


@dataclass(frozen=True)
class BoundPair:
    """
    Lower and upper bounds on [0, 2/p] and their reflections on [2 - 2/p, 2].

    For p = 1 both pairs live on [0, 2].
    """
    params: CableParams
    lower: PLFunc
    upper: PLFunc
    reflected_lower: PLFunc
    reflected_upper: PLFunc

    def regions(self) -> List[Tuple[PLFunc, PLFunc]]:
        return [(self.lower, self.upper), (self.reflected_lower, self.reflected_upper)]

    def to_model(self) -> BoundPairModel:
        return BoundPairModel(
            p=self.params.p,
            q=self.params.q,
            lower=self.lower.to_model(),
            upper=self.upper.to_model(),
            reflected_lower=self.reflected_lower.to_model(),
            reflected_upper=self.reflected_upper.to_model(),
        )

    @classmethod
    def from_model(cls, model: BoundPairModel) -> "BoundPair":
        params = CableParams(model.p, model.q)
        pair = cls(
            params,
            PLFunc.from_model(model.lower),
            PLFunc.from_model(model.upper),
            PLFunc.from_model(model.reflected_lower),
            PLFunc.from_model(model.reflected_upper),
        )
        edge = params.edge
        if pair.lower.domain != (0, edge) or pair.upper.domain != (0, edge):
            raise InputError(f"bounds must live on [0, {format_rational(edge)}]")
        if pair.reflected_lower.domain != (2 - edge, 2) or pair.reflected_upper.domain != (2 - edge, 2):
            raise InputError(f"reflected bounds must live on [{format_rational(2 - edge)}, 2]")
        return pair


def cable_bounds(upsK: PLFunc, params: CableParams) -> BoundPair:
    """
    Bounds on Upsilon of K_{p,q} from Upsilon of K.

    Raises:
        DomainError: If upsK is not defined on all of [0, 2]
    """
    if not upsK.is_total:
        raise DomainError("cable_bounds needs Upsilon_K on all of [0, 2]")
    p, q = params.p, params.q
    scaled = precompose_scale(upsK, p)
    lower = subtract_linear(scaled, Fraction((p - 1) * (q + 1), 2))
    upper = subtract_linear(scaled, Fraction((p - 1) * (q - 1), 2))
    logger.debug(f"cable_bounds p={p} q={q}: lower {lower}, upper {upper}")
    return BoundPair(params, lower, upper, reflect(lower), reflect(upper))


def check_bounds(candidate: PLFunc, bounds: BoundPair) -> Certificate:
    """
    Check lower <= candidate <= upper on both constrained ranges.

    Every breakpoint of the three functions and every midpoint between them
    is compared exactly; the first violation is the witness.

    Raises:
        DomainError: If the candidate is not defined on all of [0, 2]
    """
    if not candidate.is_total:
        raise DomainError("check_bounds needs a candidate on all of [0, 2]")
    checked = 0
    for lower, upper in bounds.regions():
        lo, hi = lower.domain
        piece = restrict(candidate, lo, hi)
        for below, above, side in ((lower, piece, "lower"), (piece, upper, "upper")):
            checked += 1
            t = first_violation(below, above)
            if t is not None:
                detail = (
                    f"{side} bound violated at t={format_rational(t)}: "
                    f"candidate {format_rational(piece.eval(t))}, "
                    f"bound {format_rational((lower if side == 'lower' else upper).eval(t))}"
                )
                return Certificate("cable-bounds", False, t, detail, checked)
    return Certificate("cable-bounds", True, checked=checked)


def tau_bounds(tau_K: int, params: CableParams) -> Tuple[int, int]:
    """
    p tau + (p-1)(q-1)/2 <= tau(K_{p,q}) <= p tau + (p-1)(q+1)/2.

    For q = pn + 1 these read p tau + pn(p-1)/2 and p tau + (pn+2)(p-1)/2.
    """
    p, q = params.p, params.q
    return p * tau_K + (p - 1) * (q - 1) // 2, p * tau_K + (p - 1) * (q + 1) // 2


def grading_transform(A: int, l: int, p: int, n: int) -> int:
    """
    Alexander grading A' = pA + pn(p-1)/2 + l of a cable generator.

    Raises:
        InputError: If l is outside [0, p - 1]
    """
    if p < 1:
        raise InputError(f"p must be >= 1, got {p}")
    if not 0 <= l <= p - 1:
        raise InputError(f"l={l} outside [0, {p - 1}]")
    return p * A + p * n * (p - 1) // 2 + l


def cable_generators(c: Complex, p: int) -> List[Tuple[int, int]]:
    """(A, l) for every generator of c and every strand index l."""
    return [(g.alex, l) for g in c.generators for l in range(p)]


def sandwich_samples(p: int, count: int = 16) -> List[Tuple[Fraction, Fraction]]:
    """`count` (t, s) pairs with t spread over (0, 2/p] and s over half-integers."""
    return [
        (Fraction(2 * (i + 1), p * count), Fraction(i - count // 2, 2))
        for i in range(count)
    ]


def sandwich_check(gens: Sequence[Tuple[int, int]], p: int, n: int,
                   samples: Sequence[Tuple[Fraction, Fraction]]) -> Certificate:
    """
    Check the two filtration inclusions between K and its (p, pn+1) cable.

    For every generator (A, l), every U-power k in a window and every sample
    (t, s), with F_pt = (pt/2)A + k and F'_t = (t/2)A' + k:

        F'_t <= s + pn(p-1)t/4        implies  F_pt <= s
        F_pt <= s                     implies  F'_t <= s + (pn+2)(p-1)t/4

    Raises:
        InputError: If a sample t lies outside [0, 2/p]
    """
    edge = Fraction(2, p)
    for t, _ in samples:
        if not 0 <= t <= edge:
            raise InputError(f"sample t={format_rational(t)} outside [0, {format_rational(edge)}]")

    primed = [(A, l, grading_transform(A, l, p, n)) for A, l in gens]
    reach = max((abs(s) for _, s in samples), default=Fraction(0))
    reach += max((abs(a) for _, _, a in primed), default=0)
    window = ceil(reach) + 1 + config.compute.window_slack

    checked = 0
    for A, l, A_prime in primed:
        for t, s in samples:
            tight = s + Fraction(p * n * (p - 1), 4) * t
            loose = s + Fraction((p * n + 2) * (p - 1), 4) * t
            for k in range(-window, window + 1):
                f_pt = p * t / 2 * A + k
                f_prime = t / 2 * A_prime + k
                checked += 2
                if f_prime <= tight and f_pt > s:
                    return Certificate(
                        "sandwich", False, t,
                        f"(A={A}, l={l}, k={k}, s={format_rational(s)}): "
                        f"F'={format_rational(f_prime)} <= {format_rational(tight)} but F_pt={format_rational(f_pt)}",
                        checked,
                    )
                if f_pt <= s and f_prime > loose:
                    return Certificate(
                        "sandwich", False, t,
                        f"(A={A}, l={l}, k={k}, s={format_rational(s)}): "
                        f"F_pt={format_rational(f_pt)} <= s but F'={format_rational(f_prime)} > {format_rational(loose)}",
                        checked,
                    )
    logger.debug(f"sandwich p={p} n={n}: {checked} implications hold")
    return Certificate("sandwich", True, checked=checked)


def hbar_check(family: Sequence[Tuple[int, PLFunc]], p: int) -> Certificate:
    """
    Monotonicity of hbar(q, t) = Upsilon_{K_{p,q}}(t) + (p-1)qt/2 in q.

    For every q_i > q_j, 0 <= hbar(q_i, t) - hbar(q_j, t) <= (p-1)t on [0, 2/p].

    Raises:
        InputError: If an entry is not coprime to p or two entries share q
    """
    qs = [q for q, _ in family]
    for q in qs:
        if gcd(p, abs(q)) != 1:
            raise InputError(f"q={q} is not coprime to p={p}")
    if len(set(qs)) != len(qs):
        raise InputError(f"family has repeated q values: {qs}")

    edge = Fraction(2, p)
    hbar = {q: subtract_linear(restrict(ups, 0, edge), -Fraction((p - 1) * q, 2)) for q, ups in family}
    zero = PLFunc.zero((0, edge))
    band = PLFunc.linear(p - 1, 0, (0, edge))

    checked = 0
    for qi in qs:
        for qj in qs:
            if qi <= qj:
                continue
            diff = hbar[qi] - hbar[qj]
            for below, above, side in ((zero, diff, "below 0"), (diff, band, "above (p-1)t")):
                checked += 1
                t = first_violation(below, above)
                if t is not None:
                    return Certificate(
                        "hbar", False, t,
                        f"hbar({qi}) - hbar({qj}) = {format_rational(diff.eval(t))} is {side} "
                        f"at t={format_rational(t)}",
                        checked,
                    )
    return Certificate("hbar", True, checked=checked)
