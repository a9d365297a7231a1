"""
L-space Knot Staircases

Alexander polynomials of torus knots and their cables, and the staircase
models of CFK-infinity they determine for L-space knots.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Tuple

import sympy as sp

from cfk import Complex, Generator, Term, dual, validate
from shared_components import (
    ComplexError,
    InputError,
    LaurentPolyModel,
    NotLSpaceError,
    StaircaseSpecModel,
)

logger = logging.getLogger(__name__)

_t = sp.Symbol("t")


@dataclass(frozen=True)
class LaurentPoly:
    """
    Integer Laurent polynomial in t.

    `terms` holds (exponent, coefficient) pairs with nonzero coefficients,
    exponents strictly decreasing.
    """
    terms: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        exps = [e for e, _ in self.terms]
        if any(c == 0 for _, c in self.terms):
            raise InputError("LaurentPoly terms must have nonzero coefficients")
        if any(a <= b for a, b in zip(exps, exps[1:])):
            raise InputError("LaurentPoly exponents must be strictly decreasing")

    @classmethod
    def from_dict(cls, coeffs: Dict[int, int]) -> "LaurentPoly":
        return cls(tuple(sorted(((int(e), int(c)) for e, c in coeffs.items() if c), reverse=True)))

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(((0, 1),))

    @classmethod
    def from_expr(cls, expr: sp.Expr) -> "LaurentPoly":
        """Read a sympy expression in t with integer coefficients and integer exponents."""
        expr = sp.expand(expr)
        coeffs: Dict[int, int] = {}
        for term in sp.Add.make_args(expr):
            coeff, power = term.as_coeff_exponent(_t)
            if not (coeff.is_Integer and power.is_Integer):
                raise InputError(f"not an integer Laurent term: {term}")
            coeffs[int(power)] = coeffs.get(int(power), 0) + int(coeff)
        return cls.from_dict(coeffs)

    @property
    def coefficients(self) -> Dict[int, int]:
        return dict(self.terms)

    @property
    def exponents(self) -> List[int]:
        return [e for e, _ in self.terms]

    def to_expr(self) -> sp.Expr:
        return sp.Add(*[c * _t ** e for e, c in self.terms])

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly.from_expr(self.to_expr() * other.to_expr())

    def substitute_power(self, p: int) -> "LaurentPoly":
        """P(t) -> P(t^p)."""
        return LaurentPoly.from_dict({e * p: c for e, c in self.terms})

    def at_one(self) -> int:
        return sum(c for _, c in self.terms)

    def is_symmetric(self) -> bool:
        coeffs = self.coefficients
        return all(coeffs.get(-e) == c for e, c in coeffs.items())

    def to_model(self) -> LaurentPolyModel:
        return LaurentPolyModel(coeffs={str(e): c for e, c in sorted(self.terms)})

    @classmethod
    def from_model(cls, model: LaurentPolyModel) -> "LaurentPoly":
        try:
            coeffs = {int(e): c for e, c in model.coeffs.items()}
        except ValueError as e:
            raise InputError(f"LaurentPoly exponents must be integers: {e}")
        return cls.from_dict(coeffs)

    def __str__(self) -> str:
        return str(self.to_expr()) if self.terms else "0"


def _check_coprime(p: int, q: int) -> None:
    if p <= 0:
        raise InputError(f"p must be positive, got {p}")
    if q == 0:
        raise InputError("q must be nonzero")
    if gcd(p, abs(q)) != 1:
        raise InputError(f"p={p} and q={q} are not coprime")


def torus_alexander(p: int, q: int) -> LaurentPoly:
    """
    Symmetrized Alexander polynomial of T(p, q).

    (t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), shifted so that it is symmetric.
    For q < 0 this is the polynomial of T(p, |q|).

    Raises:
        InputError: If p <= 0, q == 0 or gcd(p, |q|) != 1
    """
    _check_coprime(p, q)
    q = abs(q)
    if p == 1 or q == 1:
        return LaurentPoly.one()
    num = sp.Poly((_t ** (p * q) - 1) * (_t - 1), _t)
    den = sp.Poly((_t ** p - 1) * (_t ** q - 1), _t)
    quo, rem = sp.div(num, den)
    if not rem.is_zero:
        raise ComplexError(f"cyclotomic division left a remainder for T({p},{q})")
    genus = (p - 1) * (q - 1) // 2
    return LaurentPoly.from_expr(quo.as_expr() * _t ** (-genus))


def cable_alexander(dK: LaurentPoly, p: int, q: int) -> LaurentPoly:
    """Delta_{K_{p,q}}(t) = Delta_K(t^p) * Delta_{T(p,q)}(t)."""
    return dK.substitute_power(p) * torus_alexander(p, q)


@dataclass(frozen=True)
class StaircaseSpec:
    """Exponents a_0 > a_1 > ... > a_2m of an L-space knot polynomial."""
    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        a = self.exponents
        if not a:
            raise InputError("staircase needs at least one exponent")
        if len(a) % 2 == 0:
            raise InputError(f"staircase needs an odd number of exponents, got {len(a)}")
        if any(x <= y for x, y in zip(a, a[1:])):
            raise InputError(f"staircase exponents must strictly decrease: {list(a)}")
        if any(a[i] != -a[-1 - i] for i in range(len(a))):
            raise InputError(f"staircase exponents must be symmetric about 0: {list(a)}")

    @classmethod
    def from_model(cls, model: StaircaseSpecModel) -> "StaircaseSpec":
        return cls(tuple(model.exponents))

    def to_model(self) -> StaircaseSpecModel:
        return StaircaseSpecModel(exponents=list(self.exponents))


def staircase_complex(spec: StaircaseSpec, name: str = "") -> Complex:
    """
    The staircase model with generators z_0 .. z_2m.

    alex(z_k) = a_k, maslov(z_0) = 0, and for odd k

        d z_k = U^(a_{k-1} - a_k) z_{k-1} + z_{k+1}

    with Maslov gradings fixed by requiring each term to drop by one.

    Raises:
        ComplexError: If the result fails validation
    """
    a = spec.exponents
    maslov = [0] * len(a)
    diff: Dict[str, Tuple[Term, ...]] = {}
    for k in range(1, len(a), 2):
        step = a[k - 1] - a[k]
        maslov[k] = maslov[k - 1] - 2 * step + 1
        maslov[k + 1] = maslov[k] - 1
        diff[f"z{k}"] = (Term(f"z{k - 1}", step), Term(f"z{k + 1}", 0))
    gens = tuple(Generator(f"z{k}", a[k], maslov[k]) for k in range(len(a)))
    c = Complex(gens, diff, name)

    violations = validate(c)
    if violations:
        raise ComplexError(f"staircase {list(a)} is invalid: {'; '.join(violations)}")
    logger.debug(f"staircase {list(a)}: maslov {maslov}")
    return c


def lspace_exponents(d: LaurentPoly) -> StaircaseSpec:
    """
    Exponents of an L-space knot polynomial.

    Raises:
        NotLSpaceError: If the coefficients do not alternate +1, -1, ..., +1
            from the top exponent down
    """
    coeffs = [c for _, c in d.terms]
    if not coeffs:
        raise NotLSpaceError("zero polynomial")
    for i, c in enumerate(coeffs):
        expected = 1 if i % 2 == 0 else -1
        if c != expected:
            raise NotLSpaceError(
                f"coefficient {c} at t^{d.terms[i][0]} breaks the +1/-1 alternation; not L-space form"
            )
    if len(coeffs) % 2 == 0 or not d.is_symmetric():
        raise NotLSpaceError(f"{d} is not a symmetric alternating polynomial; not L-space form")
    return StaircaseSpec(tuple(d.exponents))


def lspace_knot_complex(d: LaurentPoly, name: str = "") -> Complex:
    """Staircase model of the L-space knot with Alexander polynomial d."""
    return staircase_complex(lspace_exponents(d), name)


def torus_knot_complex(p: int, q: int) -> Complex:
    """Staircase of T(p, q) for q > 0, the dual of the T(p, |q|) staircase for q < 0."""
    c = lspace_knot_complex(torus_alexander(p, q), f"T({p},{abs(q)})")
    return dual(c) if q < 0 else c


def alexander_of_complex(c: Complex) -> LaurentPoly:
    """Graded Euler characteristic sum (-1)^M t^A over the generators."""
    coeffs: Dict[int, int] = {}
    for g in c.generators:
        coeffs[g.alex] = coeffs.get(g.alex, 0) + (-1) ** (g.maslov % 2)
    return LaurentPoly.from_dict(coeffs)


def staircase_battery(max_generators: int = 9) -> Iterable[Tuple[str, Complex]]:
    """Torus knots T(p, q), 2 <= p < q, and T(2,3) cables whose staircases stay within max_generators."""
    for p in range(2, 8):
        for q in range(p + 1, 16):
            if gcd(p, q) != 1:
                continue
            d = torus_alexander(p, q)
            if len(d.terms) <= max_generators:
                yield f"T({p},{q})", lspace_knot_complex(d, f"T({p},{q})")
    base = torus_alexander(2, 3)
    for q in (3, 5, 7, 9, 11):
        d = cable_alexander(base, 2, q)
        if len(d.terms) <= max_generators:
            yield f"T(2,3)_(2,{q})", lspace_knot_complex(d, f"T(2,3)_(2,{q})")
