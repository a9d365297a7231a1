"""
Piecewise-Linear Functions

Exact algebra of continuous piecewise-linear functions on subintervals of
[0, 2], the codomain of Upsilon. All arithmetic uses Fraction; a function is
stored as its canonical breakpoint list (no interior breakpoint where the
left and right slopes agree), so two functions are equal exactly when their
breakpoint lists are equal.
"""

import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from shared_components import DomainError, PLFuncModel, UpsilonError, format_rational, parse_rational

logger = logging.getLogger(__name__)

RationalLike = Union[Fraction, int, str]
Point = Tuple[Fraction, Fraction]
Line = Tuple[Fraction, Fraction]  # (slope, intercept)

ZERO = Fraction(0)
TWO = Fraction(2)


def _q(value: RationalLike) -> Fraction:
    return parse_rational(value)


def _canonical(points: Sequence[Point]) -> Tuple[Point, ...]:
    """Drop interior breakpoints whose left and right slopes agree."""
    if len(points) <= 2:
        return tuple(points)
    kept: List[Point] = [points[0]]
    for i in range(1, len(points) - 1):
        (t0, v0), (t1, v1), (t2, v2) = kept[-1], points[i], points[i + 1]
        if (v1 - v0) * (t2 - t1) != (v2 - v1) * (t1 - t0):
            kept.append(points[i])
    kept.append(points[-1])
    return tuple(kept)


@dataclass(frozen=True)
class PLFunc:
    """
    A continuous piecewise-linear function on [lo, hi] with 0 <= lo < hi <= 2.

    Total functions (the type of Upsilon) live on [0, 2]; partial ones, such
    as the cabling bounds on [0, 2/p], carry their own endpoints and refuse
    to be combined with functions on a different domain.
    """
    breakpoints: Tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = self.breakpoints
        if len(pts) < 2:
            raise DomainError("a PLFunc needs at least two breakpoints")
        if pts[0][0] < 0 or pts[-1][0] > 2:
            raise DomainError(
                f"domain [{format_rational(pts[0][0])}, {format_rational(pts[-1][0])}] is not inside [0, 2]"
            )
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not a < b:
                raise DomainError("breakpoint times must be strictly increasing")

    # -- construction -------------------------------------------------

    @classmethod
    def from_points(cls, points: Iterable[Tuple[RationalLike, RationalLike]]) -> "PLFunc":
        """Build a canonical function from (t, value) pairs in increasing t."""
        pts = [(_q(t), _q(v)) for t, v in points]
        if len(pts) < 2:
            raise DomainError("a PLFunc needs at least two breakpoints")
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not a < b:
                raise DomainError("breakpoint times must be strictly increasing")
        return cls(_canonical(pts))

    @classmethod
    def linear(cls, slope: RationalLike, intercept: RationalLike,
               domain: Tuple[RationalLike, RationalLike] = (0, 2)) -> "PLFunc":
        """The function slope * t + intercept on the given domain."""
        m, c = _q(slope), _q(intercept)
        lo, hi = _q(domain[0]), _q(domain[1])
        return cls(((lo, m * lo + c), (hi, m * hi + c)))

    @classmethod
    def zero(cls, domain: Tuple[RationalLike, RationalLike] = (0, 2)) -> "PLFunc":
        return cls.linear(0, 0, domain)

    # -- basic queries ------------------------------------------------

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.breakpoints[0][0], self.breakpoints[-1][0]

    @property
    def is_total(self) -> bool:
        return self.domain == (ZERO, TWO)

    @property
    def times(self) -> List[Fraction]:
        return [t for t, _ in self.breakpoints]

    def eval(self, t: RationalLike) -> Fraction:
        """
        Evaluate exactly by linear interpolation.

        Raises:
            DomainError: If t lies outside the domain
        """
        t = _q(t)
        lo, hi = self.domain
        if t < lo or t > hi:
            raise DomainError(
                f"t={format_rational(t)} outside [{format_rational(lo)}, {format_rational(hi)}]"
            )
        times = self.times
        i = bisect.bisect_left(times, t)
        if times[i] == t:
            return self.breakpoints[i][1]
        (t0, v0), (t1, v1) = self.breakpoints[i - 1], self.breakpoints[i]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    __call__ = eval

    def pieces(self) -> List[Tuple[Fraction, Fraction, Fraction, Fraction]]:
        """(start, end, slope, intercept) for every linear piece."""
        out = []
        for (t0, v0), (t1, v1) in zip(self.breakpoints, self.breakpoints[1:]):
            m = (v1 - v0) / (t1 - t0)
            out.append((t0, t1, m, v0 - m * t0))
        return out

    # -- algebra --------------------------------------------------------

    def _check_same_domain(self, other: "PLFunc") -> None:
        if self.domain != other.domain:
            raise DomainError(
                "domain mismatch: [{}, {}] vs [{}, {}]".format(
                    *(format_rational(x) for x in self.domain + other.domain)
                )
            )

    def __add__(self, other: "PLFunc") -> "PLFunc":
        return add(self, other)

    def __neg__(self) -> "PLFunc":
        return negate(self)

    def __sub__(self, other: "PLFunc") -> "PLFunc":
        return add(self, negate(other))

    def __mul__(self, k: int) -> "PLFunc":
        return scale(self, k)

    __rmul__ = __mul__

    # -- serialization --------------------------------------------------

    def to_model(self) -> PLFuncModel:
        lo, hi = self.domain
        return PLFuncModel(
            domain=(format_rational(lo), format_rational(hi)),
            breakpoints=[(format_rational(t), format_rational(v)) for t, v in self.breakpoints],
        )

    @classmethod
    def from_model(cls, model: PLFuncModel) -> "PLFunc":
        f = cls.from_points(model.breakpoints)
        declared = (parse_rational(model.domain[0]), parse_rational(model.domain[1]))
        if declared != f.domain:
            raise DomainError("declared domain does not match the first and last breakpoints")
        return f

    def __str__(self) -> str:
        body = ", ".join(f"({format_rational(t)}, {format_rational(v)})" for t, v in self.breakpoints)
        return f"PLFunc[{body}]"


def _from_values(times: Sequence[Fraction], values: Sequence[Fraction]) -> PLFunc:
    return PLFunc(_canonical(list(zip(times, values))))


def _merged_times(funcs: Sequence[PLFunc]) -> List[Fraction]:
    return sorted({t for f in funcs for t in f.times})


def add(f: PLFunc, g: PLFunc) -> PLFunc:
    """Pointwise sum on a common domain."""
    f._check_same_domain(g)
    times = _merged_times([f, g])
    return _from_values(times, [f.eval(t) + g.eval(t) for t in times])


def scale(f: PLFunc, k: Union[int, Fraction]) -> PLFunc:
    """Pointwise multiple k * f."""
    k = Fraction(k)
    if k == 0:
        return PLFunc.zero(f.domain)
    return PLFunc(tuple((t, k * v) for t, v in f.breakpoints))


def negate(f: PLFunc) -> PLFunc:
    return scale(f, -1)


def reflect(f: PLFunc) -> PLFunc:
    """t -> f(2 - t); the domain [lo, hi] becomes [2 - hi, 2 - lo]."""
    return PLFunc(tuple((TWO - t, v) for t, v in reversed(f.breakpoints)))


def precompose_scale(f: PLFunc, p: int) -> PLFunc:
    """
    g(t) = f(p t) on [lo/p, hi/p]; for a total f this is [0, 2/p].

    Raises:
        DomainError: If p < 1
    """
    if p < 1:
        raise DomainError(f"scale factor must be a positive integer, got {p}")
    return PLFunc(tuple((t / p, v) for t, v in f.breakpoints))


def restrict(f: PLFunc, lo: RationalLike, hi: RationalLike) -> PLFunc:
    """Restriction to [lo, hi], which must lie inside the domain."""
    lo, hi = _q(lo), _q(hi)
    flo, fhi = f.domain
    if not (flo <= lo < hi <= fhi):
        raise DomainError(
            f"cannot restrict [{format_rational(flo)}, {format_rational(fhi)}] "
            f"to [{format_rational(lo)}, {format_rational(hi)}]"
        )
    times = [lo] + [t for t in f.times if lo < t < hi] + [hi]
    return _from_values(times, [f.eval(t) for t in times])


def subtract_linear(f: PLFunc, slope: RationalLike, intercept: RationalLike = 0) -> PLFunc:
    """f(t) - (slope * t + intercept)."""
    return add(f, PLFunc.linear(-_q(slope), -_q(intercept), f.domain))


def _crossings(funcs: Sequence[PLFunc], times: Sequence[Fraction]) -> List[Fraction]:
    """Times strictly between consecutive entries of `times` where two pieces cross."""
    extra: List[Fraction] = []
    for a, b in zip(times, times[1:]):
        lines = []
        for f in funcs:
            va, vb = f.eval(a), f.eval(b)
            m = (vb - va) / (b - a)
            lines.append((m, va - m * a))
        for (m1, c1), (m2, c2) in combinations(set(lines), 2):
            if m1 == m2:
                continue
            x = (c2 - c1) / (m1 - m2)
            if a < x < b:
                extra.append(x)
    return extra


def _envelope(funcs: Sequence[PLFunc], pick) -> PLFunc:
    if not funcs:
        raise UpsilonError("envelope of an empty set")
    for g in funcs[1:]:
        funcs[0]._check_same_domain(g)
    times = _merged_times(funcs)
    times = sorted(set(times) | set(_crossings(funcs, times)))
    return _from_values(times, [pick(f.eval(t) for f in funcs) for t in times])


def pointwise_min(funcs: Sequence[PLFunc]) -> PLFunc:
    """Exact pointwise minimum of functions on a common domain."""
    return _envelope(list(funcs), min)


def pointwise_max(funcs: Sequence[PLFunc]) -> PLFunc:
    """Exact pointwise maximum of functions on a common domain."""
    return _envelope(list(funcs), max)


def _lines_to_funcs(lines: Iterable[Tuple[RationalLike, RationalLike]],
                    domain: Tuple[RationalLike, RationalLike]) -> List[PLFunc]:
    funcs = [PLFunc.linear(m, c, domain) for m, c in set((_q(m), _q(c)) for m, c in lines)]
    if not funcs:
        raise UpsilonError("envelope of an empty line set")
    return funcs


def lower_envelope(lines: Iterable[Tuple[RationalLike, RationalLike]],
                   domain: Tuple[RationalLike, RationalLike] = (0, 2)) -> PLFunc:
    """Pointwise min of the lines (slope, intercept); concave on the domain."""
    return pointwise_min(_lines_to_funcs(lines, domain))


def upper_envelope(lines: Iterable[Tuple[RationalLike, RationalLike]],
                   domain: Tuple[RationalLike, RationalLike] = (0, 2)) -> PLFunc:
    """Pointwise max of the lines (slope, intercept); convex on the domain."""
    return pointwise_max(_lines_to_funcs(lines, domain))


def slopes(f: PLFunc) -> List[Tuple[Tuple[Fraction, Fraction], Fraction]]:
    """((start, end), slope) for every piece, in order."""
    return [((a, b), m) for a, b, m, _ in f.pieces()]


def singularities(f: PLFunc) -> List[Fraction]:
    """Interior breakpoints of the canonical form."""
    return f.times[1:-1]


def delta_slope(f: PLFunc, t0: RationalLike) -> Fraction:
    """
    Right slope minus left slope at t0; zero where f is linear around t0.

    Raises:
        DomainError: If t0 lies outside the domain
    """
    t0 = _q(t0)
    lo, hi = f.domain
    if t0 < lo or t0 > hi:
        raise DomainError(f"t0={format_rational(t0)} outside the domain")
    times = f.times
    i = bisect.bisect_left(times, t0)
    if i >= len(times) or times[i] != t0 or i == 0 or i == len(times) - 1:
        return ZERO
    pieces = f.pieces()
    return pieces[i][2] - pieces[i - 1][2]


def initial_slope(f: PLFunc) -> Fraction:
    """Slope of the first piece."""
    return f.pieces()[0][2]


def first_violation(lower: PLFunc, upper: PLFunc) -> Optional[Fraction]:
    """
    First t where lower(t) > upper(t), or None.

    Checks every breakpoint of both functions and every midpoint between
    consecutive ones, which is exact for piecewise-linear functions.
    """
    lower._check_same_domain(upper)
    times = _merged_times([lower, upper])
    checkpoints = sorted(set(times) | {(a + b) / 2 for a, b in zip(times, times[1:])})
    for t in checkpoints:
        if lower.eval(t) > upper.eval(t):
            return t
    return None


def sample_times(f: PLFunc, count: int) -> List[Fraction]:
    """Breakpoints plus `count` evenly spaced rationals covering the domain."""
    lo, hi = f.domain
    if count < 2:
        uniform = [lo, hi]
    else:
        uniform = [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]
    return sorted(set(uniform) | set(f.times))


def to_csv_rows(f: PLFunc, count: int) -> List[Tuple[str, str]]:
    """(t, value) string rows for plotting."""
    return [(format_rational(t), format_rational(f.eval(t))) for t in sample_times(f, count)]
