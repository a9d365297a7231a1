"""
Pinning Upsilon from Knot Floer Homology

Knot Floer homology does not determine Upsilon, but together with tau, a
four-genus bound and cabling bounds it can leave a single candidate. This
module turns that argument into a search.

Each Maslov-0 lattice point (i, j) (algebraic grading i, Alexander grading j)
of HFK-hat tensored with F[U, U^-1] defines the line

    F_t = i + t(j - i)/2,   i.e.  Upsilon = -2i + t(i - j),

so a candidate Upsilon on [0, 1] is a continuous chain of such lines. The
search starts on the point (0, tau), may switch to another point on the same
F_t level at each candidate singularity, and keeps only chains that pass the
pruning rules. Survivors are reflected to [1, 2].
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from cable import BoundPair, CableParams, cable_bounds, check_bounds, tau_bounds
from cfk import Complex, upsilon
from plfun import PLFunc, lower_envelope, singularities
from shared_components import (
    ComplexError,
    HFKEntryModel,
    HFKTableModel,
    InputError,
    UpsilonError,
    format_rational,
)
from staircase import torus_knot_complex

logger = logging.getLogger(__name__)

Point = Tuple[int, int]

ONE = Fraction(1)


@dataclass(frozen=True)
class HFKTable:
    """
    Ranks of HFK-hat by (Alexander, Maslov) grading.

    `entries` is always symmetry-completed under (i, d) -> (-i, d - 2i).
    """
    entries: Tuple[Tuple[int, int, int], ...]

    @classmethod
    def from_entries(cls, entries: Sequence[Tuple[int, int, int]]) -> "HFKTable":
        """
        Build a table from any half (or all) of the entries.

        Raises:
            InputError: If the table is empty, a rank is not positive, or an
                entry conflicts with its mirror
        """
        if not entries:
            raise InputError("HFK table is empty")
        ranks: Dict[Tuple[int, int], int] = {}
        for alex, maslov, rank in entries:
            if rank < 1:
                raise InputError(f"rank must be positive at ({alex}, {maslov})")
            if ranks.get((alex, maslov), rank) != rank:
                raise InputError(f"conflicting ranks at ({alex}, {maslov})")
            ranks[(alex, maslov)] = rank
        for (alex, maslov), rank in list(ranks.items()):
            mirror = (-alex, maslov - 2 * alex)
            if ranks.setdefault(mirror, rank) != rank:
                raise InputError(
                    f"rank {rank} at ({alex}, {maslov}) conflicts with rank {ranks[mirror]} "
                    f"at its mirror {mirror}"
                )
        return cls(tuple(sorted(((a, m, r) for (a, m), r in ranks.items()), reverse=True)))

    @property
    def top_alexander(self) -> int:
        return max(a for a, _, _ in self.entries)

    def to_model(self) -> HFKTableModel:
        return HFKTableModel(entries=[HFKEntryModel(alex=a, maslov=m, rank=r) for a, m, r in self.entries])

    @classmethod
    def from_model(cls, model: HFKTableModel) -> "HFKTable":
        return cls.from_entries([(e.alex, e.maslov, e.rank) for e in model.entries])


@dataclass(frozen=True)
class LatticeSet:
    """Maslov-0 lattice points (algebraic grading, Alexander grading)."""
    points: FrozenSet[Point]

    def level(self, point: Point, t: Fraction) -> Fraction:
        i, j = point
        return i + t * (j - i) / 2

    def sorted_points(self) -> List[Point]:
        return sorted(self.points)


@dataclass(frozen=True)
class KnotFacts:
    """Supplied invariants: tau, a Seifert genus bound g3 and a four-genus bound g4."""
    tau: int
    g3: int
    g4: int

    def __post_init__(self) -> None:
        if not abs(self.tau) <= self.g4 <= self.g3:
            raise InputError(f"need |tau| <= g4 <= g3, got tau={self.tau} g4={self.g4} g3={self.g3}")


def lattice_from_hfk(h: HFKTable) -> LatticeSet:
    """Entry (i, m) with m even gives the point (-m/2, i - m/2); odd m gives nothing."""
    points = frozenset((-m // 2, a - m // 2) for a, m, _ in h.entries if m % 2 == 0)
    if any((j, i) not in points for i, j in points):
        raise ComplexError("Maslov-0 lattice is not symmetric under (i, j) -> (j, i)")
    return LatticeSet(points)


def hfk_table_from_complex(c: Complex) -> HFKTable:
    """
    HFK-hat of a reduced model: its generators.

    Raises:
        ComplexError: If some differential term keeps both filtration levels
    """
    alex = {g.name: g.alex for g in c.generators}
    for g in c.generators:
        for term in c.terms(g.name):
            if term.upower == 0 and alex.get(term.target) == g.alex:
                raise ComplexError(f"{g.name} -> {term.target} preserves both filtrations; model is not reduced")
    counts: Dict[Tuple[int, int], int] = {}
    for g in c.generators:
        counts[(g.alex, g.maslov)] = counts.get((g.alex, g.maslov), 0) + 1
    return HFKTable.from_entries([(a, m, r) for (a, m), r in counts.items()])


def family_t2m3_hfk(n: int) -> HFKTable:
    """
    HFK-hat of the (2, 2n+1)-cable of T(2,-3), non-negative Alexander half.

    Raises:
        InputError: If n < 2
    """
    if n < 2:
        raise InputError(f"the table shape needs n >= 2, got {n}")
    entries = [
        (n + 2, 2, 1),
        (n + 1, 1, 1),
        (n, 1, 1),
        (n, 0, 1),
        (n - 1, 0, 1),
        (n - 1, -1, 1),
    ]
    entries += [(i, i - n, 1) for i in range(n - 1)]
    return HFKTable.from_entries(entries)


def candidate_singularities(ls: LatticeSet, exhaustive: bool = True) -> List[Fraction]:
    """
    Times t in (0, 1) where Upsilon may bend.

    By default every t at which some pair of points lies on a line of slope
    1 - 2/t. With `exhaustive=False` only the t at which the least F_t level
    over the lattice is shared by two points, i.e. the interior breakpoints
    of the lower envelope of the point lines. That subset can miss real
    singularities; the cabling family uses it because it reproduces the
    single candidate 2/3 there.
    """
    pts = ls.sorted_points()
    if len(pts) < 2:
        return []
    if not exhaustive:
        env = lower_envelope(((Fraction(j - i, 2), i) for i, j in pts), domain=(0, 1))
        return [t for t in singularities(env) if 0 < t < 1]

    times: Set[Fraction] = set()
    for (i, j), (k, l) in combinations(pts, 2):
        denom = (j - i) - (l - k)
        if k == i or denom == 0:
            continue
        t = Fraction(2 * (k - i), denom)
        if 0 < t < 1:
            times.add(t)
    return sorted(times)


def _point_upsilon(point: Point, t: Fraction) -> Fraction:
    i, j = point
    return -2 * i + t * (i - j)


def _within_genus(point: Point, a: Fraction, b: Fraction, g4: int) -> bool:
    # |Upsilon(t)| <= g4 t is convex, so the piece endpoints decide
    return all(abs(_point_upsilon(point, t)) <= g4 * t for t in (a, b))


def _chain_to_function(chain: Sequence[Tuple[Fraction, Point]]) -> PLFunc:
    """Chain of (start time, point) on [0, 1], reflected to [0, 2]."""
    times = [t for t, _ in chain] + [ONE]
    points = [(times[0], _point_upsilon(chain[0][1], times[0]))]
    for (a, p), b in zip(chain, times[1:]):
        points.append((b, _point_upsilon(p, b)))
    mirrored = [(2 - t, v) for t, v in reversed(points[:-1])]
    return PLFunc.from_points(points + mirrored)


def pin_upsilon(ls: LatticeSet, facts: KnotFacts, bounds: Optional[BoundPair] = None,
                exhaustive: bool = True) -> List[PLFunc]:
    """
    Every Upsilon consistent with the lattice, the facts and the bounds.

    Pruning: each slope is i - j for a lattice point on the active level;
    (t/2) times every slope change is an integer; |Upsilon(t)| <= g4 t; the
    reflected function lies within `bounds` when given.
    `exhaustive` is passed to candidate_singularities; only the default
    pairwise set is guaranteed to keep the true Upsilon.

    Returns:
        Survivors sorted by breakpoints

    Raises:
        UpsilonError: If nothing survives
    """
    start = (0, facts.tau)
    if start not in ls.points:
        raise UpsilonError(f"no Maslov-0 lattice point at (0, {facts.tau}) to start Upsilon = -tau t")

    cands = candidate_singularities(ls, exhaustive)
    stops = cands + [ONE]
    pts = ls.sorted_points()
    survivors: Set[PLFunc] = set()
    explored = 0

    def extend(chain: List[Tuple[Fraction, Point]], idx: int) -> None:
        nonlocal explored
        explored += 1
        t0, active = chain[-1]
        t1 = stops[idx]
        if not _within_genus(active, t0, t1, facts.g4):
            return
        if t1 == ONE:
            f = _chain_to_function(chain)
            if bounds is None or check_bounds(f, bounds).passed:
                survivors.add(f)
            return
        level = ls.level(active, t1)
        for nxt in pts:
            if nxt != active and ls.level(nxt, t1) != level:
                continue
            if nxt != active:
                jump = t1 / 2 * ((nxt[0] - nxt[1]) - (active[0] - active[1]))
                if jump.denominator != 1:
                    continue
                chain.append((t1, nxt))
                extend(chain, idx + 1)
                chain.pop()
            else:
                extend(chain, idx + 1)

    extend([(Fraction(0), start)], 0)
    logger.info(f"pin search: {len(cands)} candidate times, {explored} branches, {len(survivors)} survivors")
    if not survivors:
        raise UpsilonError("no Upsilon is consistent with the inputs")
    return sorted(survivors, key=lambda f: f.breakpoints)


def upsilon_t2m3() -> PLFunc:
    """Upsilon of T(2,-3), computed from its staircase."""
    return upsilon(torus_knot_complex(2, -3))


def family_facts(n: int) -> KnotFacts:
    """tau = n - 1; g3 = n + 2 read off the table, used as the four-genus bound too."""
    return KnotFacts(tau=n - 1, g3=n + 2, g4=n + 2)


def pin_family_survivors(n: int, use_bounds: bool = True, exhaustive: bool = False) -> List[PLFunc]:
    """
    Survivors for the (2, 2n+1)-cable of T(2,-3), with or without cabling bounds.

    Branches only at lower-envelope breakpoints unless `exhaustive`.
    """
    facts = family_facts(n)
    params = CableParams(2, 2 * n + 1)
    lo, hi = tau_bounds(-1, params)
    if not lo <= facts.tau <= hi:
        raise UpsilonError(f"tau={facts.tau} outside the cabling range [{lo}, {hi}]")
    bounds = cable_bounds(upsilon_t2m3(), params) if use_bounds else None
    return pin_upsilon(lattice_from_hfk(family_t2m3_hfk(n)), facts, bounds, exhaustive)


def pin_family_T2m3_cables(n: int) -> PLFunc:
    """
    Upsilon of the (2, 2n+1)-cable of T(2,-3).

    Raises:
        InputError: If n < 2
        UpsilonError: If the survivor is not unique
    """
    if n < 8:
        logger.warning(f"n={n} < 8: uniqueness of the survivor is not expected")
    survivors = pin_family_survivors(n)
    if len(survivors) != 1:
        raise UpsilonError(
            f"n={n}: {len(survivors)} survivors: " + ", ".join(str(f) for f in survivors)
        )
    f = survivors[0]
    logger.info(f"n={n}: Upsilon pinned to {f} (breaks at {', '.join(format_rational(t) for t in f.times)})")
    return f
