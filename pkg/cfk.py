"""
Knot Floer Complexes

Finite models of CFK-infinity over F2[U, U^-1] and the computation of tau
and Upsilon from them.

A model lists base generators x with an Alexander grading A(x) and a Maslov
grading M(x), all at algebraic grading 0, and a differential whose terms
U^u * y have u >= 0. The full complex has the F2-basis U^-k x for every
integer k, with

    algebraic grading k,  Alexander grading A(x) + k,  Maslov grading M(x) + 2k.

Since U lowers the Maslov grading by 2, each Maslov degree is finite
dimensional: a generator contributes exactly one element U^-k x to degree d
when M(x) and d have the same parity. In degree 0 that element has

    F_t(U^-k x) = (t/2)(A(x) + k) + (1 - t/2) k = (A(x)/2) t + k,

a line in t, and Upsilon is -2 times the minimal F_t level at which a cycle
of the nonzero class of H_0 appears.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config import config
from plfun import PLFunc, initial_slope, pointwise_min, upper_envelope
from shared_components import (
    ComplexError,
    ComplexModel,
    DifferentialModel,
    GeneratorModel,
    OracleCapError,
    TermModel,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Generator:
    """A base generator with Alexander grading `alex` and Maslov grading `maslov`."""
    name: str
    alex: int
    maslov: int


@dataclass(frozen=True)
class Term:
    """The term U^upower * target of a differential."""
    target: str
    upower: int


@dataclass(frozen=True)
class Complex:
    """
    A finite bifiltered model of CFK-infinity.

    `differential` maps a generator name to the terms of its boundary;
    generators without an entry are cycles.
    """
    generators: Tuple[Generator, ...]
    differential: Dict[str, Tuple[Term, ...]] = field(default_factory=dict, hash=False)
    name: str = ""

    def gen(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def terms(self, name: str) -> Tuple[Term, ...]:
        return self.differential.get(name, ())

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    @classmethod
    def from_model(cls, model: ComplexModel) -> "Complex":
        diff: Dict[str, Tuple[Term, ...]] = {}
        for entry in model.differential:
            terms = tuple(Term(t.gen, t.upower) for t in entry.terms)
            diff[entry.source] = diff.get(entry.source, ()) + terms
        gens = tuple(Generator(g.name, g.alex, g.maslov) for g in model.generators)
        return cls(gens, diff, model.name)

    def to_model(self) -> ComplexModel:
        return ComplexModel(
            name=self.name,
            generators=[GeneratorModel(name=g.name, alex=g.alex, maslov=g.maslov) for g in self.generators],
            differential=[
                DifferentialModel(
                    source=g.name,
                    terms=[TermModel(gen=t.target, upower=t.upower) for t in self.terms(g.name)],
                )
                for g in self.generators
                if self.terms(g.name)
            ],
        )


# ---------------------------------------------------------------------------
# F2 linear algebra on int bitsets


class _Echelon:
    """
    Row-echelon basis over F2 keyed by leading bit.

    Each stored row carries a companion bitset recording which input vectors
    were combined to produce it, so a vector that reduces to zero yields the
    dependency that killed it.
    """

    def __init__(self) -> None:
        self.rows: Dict[int, Tuple[int, int]] = {}

    def reduce(self, vec: int, combo: int = 0) -> Tuple[int, int]:
        while vec:
            lead = vec.bit_length() - 1
            row = self.rows.get(lead)
            if row is None:
                break
            vec ^= row[0]
            combo ^= row[1]
        return vec, combo

    def insert(self, vec: int, combo: int = 0) -> Tuple[bool, int]:
        """Add a vector; returns (independent, dependency combo if not)."""
        vec, combo = self.reduce(vec, combo)
        if vec:
            self.rows[vec.bit_length() - 1] = (vec, combo)
            return True, 0
        return False, combo

    def contains(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> List[int]:
        return [row[0] for _, row in sorted(self.rows.items())]


# ---------------------------------------------------------------------------
# Validation


def _boundary_terms_mod2(c: Complex, name: str) -> Dict[Tuple[str, int], int]:
    counts: Dict[Tuple[str, int], int] = {}
    for term in c.terms(name):
        key = (term.target, term.upower)
        counts[key] = counts.get(key, 0) ^ 1
    return {k: v for k, v in counts.items() if v}


def _structural_violations(c: Complex) -> List[str]:
    violations: List[str] = []
    if not c.generators:
        return ["empty complex: not knot-like"]
    seen = set()
    for g in c.generators:
        if g.name in seen:
            violations.append(f"duplicate generator name '{g.name}'")
        seen.add(g.name)
    for source in c.differential:
        if source not in seen:
            violations.append(f"differential of unknown generator '{source}'")
    if violations:
        return violations

    by_name = {g.name: g for g in c.generators}
    for g in c.generators:
        for term in c.terms(g.name):
            target = by_name.get(term.target)
            if target is None:
                violations.append(f"{g.name}: term targets unknown generator '{term.target}'")
                continue
            if term.upower < 0:
                violations.append(f"{g.name}: negative U-power {term.upower} on '{term.target}'")
            if target.maslov - 2 * term.upower != g.maslov - 1:
                violations.append(
                    f"{g.name}: Maslov mismatch on U^{term.upower}{term.target} "
                    f"({target.maslov} - 2*{term.upower} != {g.maslov} - 1)"
                )
            if target.alex - term.upower > g.alex:
                violations.append(
                    f"{g.name}: Alexander filtration raised by U^{term.upower}{term.target}"
                )
    if violations:
        return violations

    for g in c.generators:
        square: Dict[Tuple[str, int], int] = {}
        for (h, u), _ in _boundary_terms_mod2(c, g.name).items():
            for (h2, u2), _ in _boundary_terms_mod2(c, h).items():
                key = (h2, u + u2)
                square[key] = square.get(key, 0) ^ 1
        nonzero = sorted(k for k, v in square.items() if v)
        if nonzero:
            h2, u2 = nonzero[0]
            violations.append(f"{g.name}: d^2 != 0 (contains U^{u2}{h2})")
    return violations


def validate(c: Complex) -> List[str]:
    """
    Check every structural and knot-like condition on a model.

    Returns:
        List of human-readable violations; empty means the complex is valid
    """
    violations = _structural_violations(c)
    if violations:
        return violations
    window = _window_size(c)
    h0 = homology_rank(c, 0, window)
    h1 = homology_rank(c, 1, window)
    if h0 != 1 or h1 != 0:
        violations.append(f"not knot-like: rank H_0 = {h0}, rank H_1 = {h1} (expected 1 and 0)")
    return violations


def _require_valid(c: Complex) -> None:
    violations = validate(c)
    if violations:
        raise ComplexError("; ".join(violations))


# ---------------------------------------------------------------------------
# Graded pieces of the full complex


@dataclass(frozen=True)
class _Element:
    """U^-k x in the full complex."""
    gen: Generator
    k: int

    @property
    def alex(self) -> int:
        return self.gen.alex + self.k

    @property
    def line(self) -> Tuple[Fraction, Fraction]:
        # F_t = (A/2) t + k
        return Fraction(self.gen.alex, 2), Fraction(self.k)


def _window_size(c: Complex, extra: int = 0) -> int:
    """
    Half-width K of the U-power window [-K, K].

    Never smaller than #generators + max|A| + max U-power + slack, and large
    enough that every degree -1, 0, 1 element is inside.
    """
    slack = config.compute.window_slack
    max_alex = max((abs(g.alex) for g in c.generators), default=0)
    max_u = max((t.upower for terms in c.differential.values() for t in terms), default=0)
    max_m = max((abs(g.maslov) for g in c.generators), default=0)
    base = len(c.generators) + max_alex + max_u + slack
    return max(base, (max_m + 1) // 2 + 1 + slack) + extra


def _elements(c: Complex, degree: int, window: int) -> List[_Element]:
    out = []
    for g in c.generators:
        if (degree - g.maslov) % 2 == 0:
            k = (degree - g.maslov) // 2
            if -window <= k <= window:
                out.append(_Element(g, k))
    return out


def _boundary_matrix(c: Complex, source: Sequence[_Element], target: Sequence[_Element]) -> List[int]:
    """Bitset over `target` of the boundary of each source element (truncated to the window)."""
    index = {(e.gen.name, e.k): i for i, e in enumerate(target)}
    rows = []
    for e in source:
        vec = 0
        for (h, u), _ in _boundary_terms_mod2(c, e.gen.name).items():
            j = index.get((h, e.k - u))
            if j is not None:
                vec ^= 1 << j
        rows.append(vec)
    return rows


def homology_rank(c: Complex, degree: int, window: Optional[int] = None) -> int:
    """F2 rank of H_degree of the windowed full complex."""
    if window is None:
        window = _window_size(c)
    here = _elements(c, degree, window)
    below = _elements(c, degree - 1, window)
    above = _elements(c, degree + 1, window)
    rank_out = _Echelon()
    for vec in _boundary_matrix(c, here, below):
        rank_out.insert(vec)
    rank_in = _Echelon()
    for vec in _boundary_matrix(c, above, here):
        rank_in.insert(vec)
    return len(here) - rank_out.rank - rank_in.rank


@dataclass
class _DegreeZero:
    """Degree-0 data of a windowed complex: elements, boundaries B_0 and a class representative."""
    elements: List[_Element]
    out_rows: List[int]
    boundaries: _Echelon
    representative: int


def _degree_zero(c: Complex, window: int) -> _DegreeZero:
    zero = _elements(c, 0, window)
    if not zero:
        raise ComplexError("not knot-like: no Maslov-0 elements")
    out_rows = _boundary_matrix(c, zero, _elements(c, -1, window))
    boundaries = _Echelon()
    for vec in _boundary_matrix(c, _elements(c, 1, window), zero):
        boundaries.insert(vec)

    cycles_elim = _Echelon()
    cycles: List[int] = []
    for i, vec in enumerate(out_rows):
        independent, combo = cycles_elim.insert(vec, 1 << i)
        if not independent:
            cycles.append(combo)
    nonzero = [z for z in cycles if not boundaries.contains(z)]
    extended = _Echelon()
    for vec in boundaries.basis():
        extended.insert(vec)
    rank = sum(1 for z in cycles if extended.insert(z)[0])
    if rank != 1 or not nonzero:
        raise ComplexError(f"not knot-like: rank H_0 = {rank} in the window")
    representative = nonzero[0]
    _check_u_torsion_free(c, zero, representative, window)
    return _DegreeZero(zero, out_rows, boundaries, representative)


def _check_u_torsion_free(c: Complex, zero: Sequence[_Element], z: int, window: int) -> None:
    """U^j z must stay nonzero in H_{-2j} while it remains inside the inner half-window."""
    support = [zero[i] for i in range(len(zero)) if (z >> i) & 1]
    for j in (1, 2):
        if any(abs(e.k - j) > window // 2 for e in support):
            break
        degree = -2 * j
        here = _elements(c, degree, window)
        index = {(e.gen.name, e.k): i for i, e in enumerate(here)}
        shifted = 0
        for e in support:
            shifted ^= 1 << index[(e.gen.name, e.k - j)]
        boundaries = _Echelon()
        for vec in _boundary_matrix(c, _elements(c, degree + 1, window), here):
            boundaries.insert(vec)
        if boundaries.contains(shifted):
            raise ComplexError(f"distinguished class dies under U^{j}: complex is not knot-like")


# ---------------------------------------------------------------------------
# Filtered sweep


def _sweep(data: _DegreeZero, t: Fraction) -> _Element:
    """
    Add degree-0 elements in increasing F_t order; return the element whose
    addition first creates a cycle outside B_0.
    """
    def key(i: int):
        e = data.elements[i]
        m, b = e.line
        return (m * t + b, e.alex, e.gen.name)

    elim = _Echelon()
    for i in sorted(range(len(data.elements)), key=key):
        independent, combo = elim.insert(data.out_rows[i], 1 << i)
        if not independent and not data.boundaries.contains(combo):
            return data.elements[i]
    raise ComplexError("no distinguished H_0 class found: complex is not knot-like")


def _f_at(e: _Element, t: Fraction) -> Fraction:
    m, b = e.line
    return m * t + b


def nu(c: Complex, t: Fraction) -> Fraction:
    """nu(C, F_t): the minimal F_t level carrying the nonzero class of H_0."""
    _require_valid(c)
    t = Fraction(t)
    if t < 0 or t > 2:
        raise ComplexError(f"t={t} outside [0, 2]")
    data = _degree_zero(c, _window_size(c))
    return _f_at(_sweep(data, t), t)


@dataclass(frozen=True)
class UpsilonReport:
    """Upsilon together with how it was obtained."""
    upsilon: PLFunc
    window: int
    realizers: Tuple[Tuple[Fraction, Fraction, str, int], ...]
    oracle_checked: bool
    oracle_note: str = ""


def _candidate_times(elements: Iterable[_Element]) -> List[Fraction]:
    lines = {e.line for e in elements}
    times = {Fraction(0), Fraction(2)}
    for (m1, b1), (m2, b2) in combinations(lines, 2):
        if m1 != m2:
            x = (b2 - b1) / (m1 - m2)
            if 0 < x < 2:
                times.add(x)
    return sorted(times)


def _nu_function(c: Complex, window: int) -> Tuple[PLFunc, List[Tuple[Fraction, Fraction, str, int]]]:
    data = _degree_zero(c, window)
    times = _candidate_times(data.elements)
    intervals = list(zip(times, times[1:]))
    mids = [(a + b) / 2 for a, b in intervals]

    workers = config.compute.parallel_workers
    if workers > 1 and len(mids) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            realizers = list(pool.map(lambda t: _sweep(data, t), mids))
    else:
        realizers = [_sweep(data, t) for t in mids]

    points = [(times[0], _f_at(realizers[0], times[0]))]
    for (a, b), e, nxt in zip(intervals, realizers, realizers[1:] + [None]):
        value = _f_at(e, b)
        if nxt is not None and _f_at(nxt, b) != value:
            raise ComplexError(f"nu is discontinuous at t={b}: window too small or complex invalid")
        points.append((b, value))
    trace = [(a, b, e.gen.name, e.k) for (a, b), e in zip(intervals, realizers)]
    return PLFunc.from_points(points), trace


def _stable_upsilon(c: Complex, window: int) -> Tuple[PLFunc, List[Tuple[Fraction, Fraction, str, int]]]:
    """
    Upsilon from nu on `window`, recomputed on a grown window as a check.

    _window_size already holds every degree -1, 0 and 1 element, so growing
    the window adds nothing the sweep can see. A mismatch therefore means
    _window_size is wrong for this complex; it is an assertion, not a
    convergence test.
    """
    nu_f, trace = _nu_function(c, window)
    grown, _ = _nu_function(c, window + config.compute.stability_growth)
    if grown != nu_f:
        raise ComplexError(f"Upsilon unstable under window growth from {window}")
    return PLFunc.from_points((t, -2 * v) for t, v in nu_f.breakpoints), trace


def upsilon_report(c: Complex, oracle_cap: Optional[int] = None) -> UpsilonReport:
    """
    Upsilon with metadata: window used, realizing element per interval, and
    whether the brute-force oracle confirmed the result. `oracle_cap`
    overrides the configured cap for this complex only.

    Raises:
        ComplexError: If the complex is invalid, not knot-like, or the result
            changes when the U-power window grows
    """
    _require_valid(c)
    window = _window_size(c)
    ups, trace = _stable_upsilon(c, window)

    checked, note = False, ""
    try:
        oracle = upsilon_oracle(c, oracle_cap)
    except OracleCapError as e:
        note = str(e)
        logger.info(f"{c.name or 'complex'}: oracle skipped ({e})")
    else:
        if oracle != ups:
            raise ComplexError(f"sweep and oracle disagree: {ups} vs {oracle}")
        checked = True
    return UpsilonReport(ups, window, tuple(trace), checked, note)


def upsilon(c: Complex) -> PLFunc:
    """
    Upsilon_K(t) = -2 nu(C, F_t) as an exact function on [0, 2].

    Raises:
        ComplexError: If the complex is invalid, not knot-like, or unstable
    """
    _require_valid(c)
    result, _ = _stable_upsilon(c, _window_size(c))
    logger.debug(f"upsilon({c.name or 'complex'}) = {result}")
    return result


def upsilon_oracle(c: Complex, cap: Optional[int] = None) -> PLFunc:
    """
    Brute-force Upsilon: enumerate every cycle z* + b with b in B_0, take the
    max of its terms' F_t lines, and the min over all cycles.

    Raises:
        OracleCapError: If dim B_0 exceeds `cap`, itself never above the configured cap
    """
    _require_valid(c)
    data = _degree_zero(c, _window_size(c))
    basis = data.boundaries.basis()
    cap = config.compute.oracle_cap if cap is None else min(cap, config.compute.oracle_cap)
    if len(basis) > cap:
        raise OracleCapError(f"dim B_0 = {len(basis)} exceeds cap {cap}")

    envelopes: Dict[frozenset, PLFunc] = {}
    z = data.representative
    for step in range(1 << len(basis)):
        if step:
            # Gray code: flip the basis vector at the lowest set bit of step
            z ^= basis[(step & -step).bit_length() - 1]
        lines = frozenset(data.elements[i].line for i in range(len(data.elements)) if (z >> i) & 1)
        if lines not in envelopes:
            envelopes[lines] = upper_envelope(lines)
    nu_f: Optional[PLFunc] = None
    for env in envelopes.values():
        nu_f = env if nu_f is None else pointwise_min([nu_f, env])
    assert nu_f is not None
    return PLFunc.from_points((t, -2 * v) for t, v in nu_f.breakpoints)


def tau(c: Complex) -> int:
    """tau = minus the slope of Upsilon at t = 0."""
    slope = -initial_slope(upsilon(c))
    if slope.denominator != 1:
        raise ComplexError(f"non-integral initial slope {slope}")
    return int(slope)


def genus_bound(c: Complex) -> int:
    """max |A| over the generators."""
    return max((abs(g.alex) for g in c.generators), default=0)


# ---------------------------------------------------------------------------
# Constructions


def tensor(c1: Complex, c2: Complex) -> Complex:
    """Tensor product over F2[U, U^-1] (connected sum); names are 'a|b'."""
    def pair(a: str, b: str) -> str:
        return f"{a}|{b}"

    gens = tuple(
        Generator(pair(g1.name, g2.name), g1.alex + g2.alex, g1.maslov + g2.maslov)
        for g1 in c1.generators
        for g2 in c2.generators
    )
    diff: Dict[str, Tuple[Term, ...]] = {}
    for g1 in c1.generators:
        for g2 in c2.generators:
            counts: Dict[Tuple[str, int], int] = {}
            for (h, u), _ in _boundary_terms_mod2(c1, g1.name).items():
                key = (pair(h, g2.name), u)
                counts[key] = counts.get(key, 0) ^ 1
            for (h, u), _ in _boundary_terms_mod2(c2, g2.name).items():
                key = (pair(g1.name, h), u)
                counts[key] = counts.get(key, 0) ^ 1
            terms = tuple(Term(n, u) for (n, u), v in sorted(counts.items()) if v)
            if terms:
                diff[pair(g1.name, g2.name)] = terms
    name = f"{c1.name}#{c2.name}" if c1.name or c2.name else ""
    return Complex(gens, diff, name)


def dual(c: Complex) -> Complex:
    """Mirror model: gradings negated, every arrow reversed with the same U-power."""
    gens = tuple(Generator(g.name, -g.alex, -g.maslov) for g in c.generators)
    reversed_terms: Dict[str, List[Term]] = {}
    for g in c.generators:
        for term in c.terms(g.name):
            reversed_terms.setdefault(term.target, []).append(Term(g.name, term.upower))
    order = {name: i for i, name in enumerate(c.names)}
    diff = {
        name: tuple(sorted(terms, key=lambda t: (order.get(t.target, 0), t.upower)))
        for name, terms in reversed_terms.items()
    }
    return Complex(gens, diff, f"-{c.name}" if c.name else "")


def unknot() -> Complex:
    """The one-generator model of the unknot."""
    return Complex((Generator("x", 0, 0),), {}, "unknot")
