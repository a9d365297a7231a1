#!/usr/bin/env python3
"""
Upsilon Toolkit CLI

Command-line front end for the toolkit. Every subcommand prints exact
rational JSON (or sampled CSV with --emit csv) on stdout and logs on stderr.

Usage:
    ups torus 2 3
    ups complex eval unknot.json
    ups pin --family-t2m3 --n 8
    ups verify paper-values

Exit codes: 0 success or pass, 1 failed check or computation error,
2 malformed input.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from base_cli import BaseCommand, CommandResult
from cable import (
    BoundPair,
    CableParams,
    cable_bounds,
    cable_generators,
    check_bounds,
    hbar_check,
    sandwich_check,
    sandwich_samples,
    tau_bounds,
)
from cfk import Complex, dual, genus_bound, tau, tensor, upsilon, upsilon_report, unknot
from config import config
from pin import (
    HFKTable,
    KnotFacts,
    lattice_from_hfk,
    pin_family_survivors,
    pin_family_T2m3_cables,
    pin_upsilon,
)
from plfun import PLFunc, delta_slope, reflect, restrict, singularities, slopes
from shared_components import (
    BoundPairModel,
    ComplexModel,
    CriterionModel,
    HFKTableModel,
    InputError,
    LaurentPolyModel,
    PLFuncModel,
    UpsilonError,
    VerifyReportModel,
    format_rational,
    read_json,
)
from staircase import (
    LaurentPoly,
    StaircaseSpec,
    cable_alexander,
    lspace_knot_complex,
    staircase_battery,
    staircase_complex,
    torus_alexander,
    torus_knot_complex,
)
from summand import (
    certify_xi_interval,
    d_facts,
    iterated_lower_bound,
    summand_certificate,
    upsilon_d,
    xi_interval,
)

logger = logging.getLogger(__name__)


def _read_plfunc(path: str) -> PLFunc:
    return PLFunc.from_model(read_json(path, PLFuncModel))


def _read_complex(path: str) -> Complex:
    return Complex.from_model(read_json(path, ComplexModel))


# ---------------------------------------------------------------------------
# Subcommands


class TorusCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("torus", "Upsilon of the torus knot T(p, q)")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("p", type=int)
        parser.add_argument("q", type=int)

    def execute(self, args: argparse.Namespace) -> CommandResult:
        f = upsilon(torus_knot_complex(args.p, args.q))
        return CommandResult(f.to_model(), curves=[(f"Upsilon T({args.p},{args.q})", f)])


class ComplexCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("complex", "Upsilon, tau or a full report for a CFK-infinity model file")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("action", choices=["eval", "tau", "report"])
        parser.add_argument("file", help="complex JSON")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        c = _read_complex(args.file)
        label = f"Upsilon {c.name or args.file}"
        if args.action == "eval":
            f = upsilon(c)
            return CommandResult(f.to_model(), curves=[(label, f)])
        if args.action == "tau":
            return CommandResult({"name": c.name, "tau": tau(c), "genus_bound": genus_bound(c)})
        report = upsilon_report(c)
        payload = {
            "name": c.name,
            "upsilon": report.upsilon.to_model().model_dump(mode="json"),
            "window": report.window,
            "oracle_checked": report.oracle_checked,
            "oracle_note": report.oracle_note,
            "realizers": [
                {"from": format_rational(a), "to": format_rational(b), "generator": g, "k": k}
                for a, b, g, k in report.realizers
            ],
        }
        return CommandResult(payload, curves=[(label, report.upsilon)])


class StaircaseCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("staircase", "Staircase model of the L-space knot with a given Alexander polynomial")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("file", help="Laurent polynomial JSON, e.g. {\"coeffs\": {\"1\": 1, \"0\": -1, \"-1\": 1}}")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        d = LaurentPoly.from_model(read_json(args.file, LaurentPolyModel))
        return CommandResult(lspace_knot_complex(d, str(d)).to_model())


class CableBoundsCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("cable-bounds", "Bounds on Upsilon of the (p, q)-cable of K")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--ups", required=True, help="Upsilon_K as PLFunc JSON")
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--q", type=int, required=True)

    def execute(self, args: argparse.Namespace) -> CommandResult:
        bounds = cable_bounds(_read_plfunc(args.ups), CableParams(args.p, args.q))
        curves = [
            ("lower", bounds.lower),
            ("upper", bounds.upper),
            ("reflected_lower", bounds.reflected_lower),
            ("reflected_upper", bounds.reflected_upper),
        ]
        return CommandResult(bounds.to_model(), curves=curves)


class CheckBoundsCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("check-bounds", "Check a candidate Upsilon of a cable against the cabling bounds")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--candidate", required=True, help="candidate Upsilon of the cable")
        parser.add_argument("--ups", required=True, help="Upsilon_K")
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--q", type=int, required=True)

    def execute(self, args: argparse.Namespace) -> CommandResult:
        bounds = cable_bounds(_read_plfunc(args.ups), CableParams(args.p, args.q))
        cert = check_bounds(_read_plfunc(args.candidate), bounds)
        return CommandResult(cert.to_model(), exit_code=0 if cert.passed else 1)


class PinCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("pin", "Every Upsilon consistent with HFK-hat, tau, g4 and cabling bounds")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--hfk", help="HFK table JSON")
        source.add_argument("--family-t2m3", action="store_true", help="the (2, 2n+1)-cables of T(2,-3)")
        parser.add_argument("--tau", type=int)
        parser.add_argument("--g4", type=int)
        parser.add_argument("--bounds", help="BoundPair JSON from cable-bounds")
        parser.add_argument("--n", type=int)
        parser.add_argument("--no-bounds", action="store_true", help="family mode: skip the cabling bounds")
        candidates = parser.add_mutually_exclusive_group()
        candidates.add_argument("--exhaustive", action="store_true",
                                help="family mode: branch at every pairwise slope solution")
        candidates.add_argument("--envelope", action="store_true",
                                help="HFK mode: branch only at lower-envelope breakpoints (may lose the true Upsilon)")

    def execute(self, args: argparse.Namespace) -> CommandResult:
        if args.family_t2m3:
            if args.n is None:
                raise InputError("--family-t2m3 needs --n")
            if args.envelope:
                raise InputError("--envelope is the default in family mode")
            if args.no_bounds or args.exhaustive:
                survivors = pin_family_survivors(args.n, use_bounds=not args.no_bounds, exhaustive=args.exhaustive)
                return self._survivors(survivors)
            f = pin_family_T2m3_cables(args.n)
            return CommandResult(f.to_model(), curves=[(f"Upsilon (T(2,-3))_(2,{2 * args.n + 1})", f)])

        if args.tau is None or args.g4 is None:
            raise InputError("--hfk needs --tau and --g4")
        table = HFKTable.from_model(read_json(args.hfk, HFKTableModel))
        facts = KnotFacts(tau=args.tau, g3=table.top_alexander, g4=args.g4)
        bounds = BoundPair.from_model(read_json(args.bounds, BoundPairModel)) if args.bounds else None
        return self._survivors(pin_upsilon(lattice_from_hfk(table), facts, bounds, exhaustive=not args.envelope))

    def _survivors(self, survivors: Sequence[PLFunc]) -> CommandResult:
        return CommandResult(
            [f.to_model() for f in survivors],
            curves=[(f"survivor {i}", f) for i, f in enumerate(survivors)],
        )


class SummandCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("summand", "Independence certificate for the iterated (p, 1)-cables J_1 .. J_N")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--max-n", type=int, required=True)

    def execute(self, args: argparse.Namespace) -> CommandResult:
        cert = summand_certificate(args.p, args.max_n)
        return CommandResult(cert.to_model(), exit_code=0 if cert.verdict == "independent-summand" else 1)


class VerifyCommand(BaseCommand):
    def __init__(self) -> None:
        super().__init__("verify", "Run a verification suite")

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("suite", choices=sorted(SUITES))

    def execute(self, args: argparse.Namespace) -> CommandResult:
        report = verify_suite(args.suite)
        return CommandResult(report, exit_code=0 if report.verdict == "pass" else 1)


COMMANDS: List[BaseCommand] = [
    TorusCommand(),
    ComplexCommand(),
    StaircaseCommand(),
    CableBoundsCommand(),
    CheckBoundsCommand(),
    PinCommand(),
    SummandCommand(),
    VerifyCommand(),
]


# ---------------------------------------------------------------------------
# Verification suites


@dataclass
class _Suite:
    name: str
    criteria: List[CriterionModel] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def check(self, cid: str, fn: Callable[[], Tuple[bool, int, str]]) -> None:
        try:
            passed, checked, detail = fn()
        except UpsilonError as e:
            passed, checked, detail = False, 0, f"{type(e).__name__}: {e}"
        logger.info(f"[{self.name}] {cid}: {'pass' if passed else 'FAIL'} {detail}")
        self.criteria.append(
            CriterionModel(id=cid, verdict="pass" if passed else "fail", checked=checked, detail=detail)
        )

    def report(self) -> VerifyReportModel:
        ok = all(c.verdict == "pass" for c in self.criteria)
        return VerifyReportModel(
            suite=self.name, verdict="pass" if ok else "fail",
            criteria=self.criteria, warnings=self.warnings,
        )


def _pl(*points: Tuple[int, object]) -> PLFunc:
    return PLFunc.from_points(points)


def _family_expected(n: int) -> PLFunc:
    """-(n-1)t on [0, 2/3], 2-(n+2)t on [2/3, 1], reflected."""
    third = Fraction(2, 3)
    v = -(n - 1) * third
    return _pl((0, 0), (third, v), (1, 2 - (n + 2)), (2 - third, v), (2, 0))


def _first_mismatch(pairs: Sequence[Tuple[str, PLFunc, PLFunc]]) -> Tuple[bool, int, str]:
    for label, got, want in pairs:
        if got != want:
            return False, len(pairs), f"{label}: got {got}, expected {want}"
    return True, len(pairs), ""


def _suite_reference_values() -> _Suite:
    s = _Suite("paper-values")
    t23 = staircase_complex(StaircaseSpec((1, 0, -1)))

    s.check("Upsilon T(2,3)", lambda: _first_mismatch(
        [("T(2,3)", upsilon(t23), _pl((0, 0), (1, -1), (2, 0)))]
    ))
    s.check("Upsilon T(2,-3)", lambda: _first_mismatch(
        [("T(2,-3)", upsilon(dual(t23)), _pl((0, 0), (1, 1), (2, 0)))]
    ))

    def torus_tau() -> Tuple[bool, int, str]:
        pairs = [(p, q) for p in range(2, 8) for q in range(p + 1, 8) if gcd(p, q) == 1]
        for p, q in pairs:
            got = tau(torus_knot_complex(p, q))
            if got != (p - 1) * (q - 1) // 2:
                return False, len(pairs), f"tau T({p},{q}) = {got}"
        return True, len(pairs), f"{len(pairs)} torus knots"
    s.check("torus tau", torus_tau)

    def sharpness() -> Tuple[bool, int, str]:
        zero = PLFunc.zero()
        cases = [(2, 3, "upper"), (3, 4, "upper"), (2, 5, "upper"), (2, -3, "lower"), (3, -4, "lower")]
        for p, q, side in cases:
            bounds = cable_bounds(zero, CableParams(p, q))
            target = bounds.upper if side == "upper" else bounds.lower
            got = restrict(upsilon(torus_knot_complex(p, q)), 0, Fraction(2, p))
            if got != target:
                return False, len(cases), f"T({p},{q}) does not attain the {side} bound"
        return True, len(cases), ""
    s.check("sharpness on unknot cables", sharpness)

    def cable_example() -> Tuple[bool, int, str]:
        bounds = cable_bounds(upsilon(dual(t23)), CableParams(2, 17))
        half = Fraction(1, 2)
        return _first_mismatch([
            ("lower", restrict(bounds.lower, half, 1), _pl((half, 2 - Fraction(11, 2)), (1, -9))),
            ("upper", restrict(bounds.upper, half, 1), _pl((half, -3), (1, -8))),
        ])
    s.check("cable bounds of (T(2,-3))_(2,17)", cable_example)

    s.check("pinned family", lambda: _first_mismatch(
        [(f"n={n}", pin_family_T2m3_cables(n), _family_expected(n)) for n in range(8, 13)]
    ))

    def two_candidates() -> Tuple[bool, int, str]:
        got = pin_family_survivors(8, use_bounds=False)
        want = sorted([_family_expected(8), _pl((0, 0), (1, -7), (2, 0))], key=lambda f: f.breakpoints)
        return got == want, 1, f"{len(got)} survivors"
    s.check("survivors without bounds", two_candidates)

    def summand() -> Tuple[bool, int, str]:
        cert = summand_certificate(3, 6)
        return cert.verdict == "independent-summand", len(cert.family), cert.detail
    s.check("summand certificate p=3", summand)
    return s


@dataclass
class PropertyCorpus:
    """Knots to check, with the dual and connected-sum relations among them."""
    knots: List[Tuple[str, Complex]] = field(default_factory=list)
    duals: List[Tuple[str, str]] = field(default_factory=list)
    sums: List[Tuple[str, str, str]] = field(default_factory=list)


def property_corpus() -> PropertyCorpus:
    """
    Staircases with at most nine generators, their duals, and for every pair
    (a, b) with a <= b in battery order the tensors a # b and a # -b.
    """
    singles = list(staircase_battery(9))
    mirrors = [(f"-{label}", dual(c)) for label, c in singles]
    corpus = PropertyCorpus(knots=[("unknot", unknot())] + singles + mirrors)
    corpus.duals = [(label, mirror) for (label, _), (mirror, _) in zip(singles, mirrors)]
    for i, j in combinations_with_replacement(range(len(singles)), 2):
        la, a = singles[i]
        for lb, b in (singles[j], mirrors[j]):
            total = f"{la}#{lb}"
            corpus.knots.append((total, tensor(a, b)))
            corpus.sums.append((la, lb, total))
    return corpus


def _single_knot_properties(f: PLFunc, g: int) -> Optional[str]:
    if f.eval(0) != 0:
        return "Upsilon(0) != 0"
    if reflect(f) != f:
        return "not symmetric under t -> 2 - t"
    for _, m in slopes(f):
        if m.denominator != 1:
            return f"non-integral slope {m}"
    for t in singularities(f):
        if (t / 2 * delta_slope(f, t)).denominator != 1:
            return f"(t/2) delta slope not integral at t={format_rational(t)}"
    for t in [x for x in f.times if x <= 1] + [Fraction(1)]:
        if abs(f.eval(t)) > g * t:
            return f"|Upsilon| > g t at t={format_rational(t)}"
    return None


def _suite_properties(corpus: Optional[PropertyCorpus] = None) -> _Suite:
    s = _Suite("properties")
    corpus = property_corpus() if corpus is None else corpus
    if not corpus.knots:
        s.warnings.append("empty corpus: every property holds vacuously")
        return s

    values: Dict[str, PLFunc] = {}
    budget = config.compute.suite_oracle_cap

    def single() -> Tuple[bool, int, str]:
        skipped = 0
        for label, c in corpus.knots:
            report = upsilon_report(c, budget)
            values[label] = report.upsilon
            if not report.oracle_checked:
                skipped += 1
                s.warnings.append(f"oracle skipped on {label}: {report.oracle_note}")
            problem = _single_knot_properties(report.upsilon, genus_bound(c))
            if problem:
                return False, len(values), f"{label}: {problem}"
        return True, len(corpus.knots), f"{len(corpus.knots) - skipped} also confirmed by the oracle"
    s.check("single-knot properties", single)

    def algebra() -> Tuple[bool, int, str]:
        checked = 0
        for label, mirror in corpus.duals:
            if label not in values or mirror not in values:
                continue
            checked += 1
            if values[mirror] != -values[label]:
                return False, checked, f"dual of {label} is not the negation"
        for a, b, total in corpus.sums:
            if any(k not in values for k in (a, b, total)):
                continue
            checked += 1
            if values[total] != values[a] + values[b]:
                return False, checked, f"{total} is not additive"
        return True, checked, ""
    s.check("additivity and dual negation", algebra)
    return s


def _suite_bounds() -> _Suite:
    s = _Suite("bounds")
    base = torus_alexander(2, 3)
    ups_base = upsilon(lspace_knot_complex(base))
    cables = {q: lspace_knot_complex(cable_alexander(base, 2, q), f"T(2,3)_(2,{q})") for q in (3, 5, 7, 9, 11)}
    cable_ups = {q: upsilon(c) for q, c in cables.items()}

    def containment() -> Tuple[bool, int, str]:
        for q, f in cable_ups.items():
            cert = check_bounds(f, cable_bounds(ups_base, CableParams(2, q)))
            if not cert.passed:
                return False, len(cable_ups), f"q={q}: {cert.detail}"
        return True, len(cable_ups), ""
    s.check("cabling bounds on L-space cables", containment)

    def tau_ranges() -> Tuple[bool, int, str]:
        for q, c in cables.items():
            lo, hi = tau_bounds(1, CableParams(2, q))
            if not lo <= tau(c) <= hi:
                return False, len(cables), f"q={q}: tau {tau(c)} outside [{lo}, {hi}]"
        return True, len(cables), ""
    s.check("tau cabling range", tau_ranges)

    def sandwich() -> Tuple[bool, int, str]:
        total = 0
        for label, c in staircase_battery(9):
            cert = sandwich_check(cable_generators(c, 2), 2, 1, sandwich_samples(2, 16))
            total += cert.checked
            if not cert.passed:
                return False, total, f"{label}: {cert.detail}"
        return True, total, ""
    s.check("filtration sandwich", sandwich)

    def hbar() -> Tuple[bool, int, str]:
        torus = [(q, upsilon(torus_knot_complex(2, q))) for q in (3, 5, 7)]
        certs = [hbar_check(torus, 2), hbar_check(sorted(cable_ups.items()), 2)]
        bad = [c for c in certs if not c.passed]
        return not bad, sum(c.checked for c in certs), bad[0].detail if bad else ""
    s.check("hbar monotonicity", hbar)
    return s


def _suite_summand() -> _Suite:
    s = _Suite("summand")

    def certificate() -> Tuple[bool, int, str]:
        cert = summand_certificate(3, 6)
        size = len(cert.matrix)
        triangular = all(
            cert.matrix[a][a] == 1 and all(cert.matrix[a][b] == 0 for b in range(a + 1, size))
            for a in range(size)
        )
        return cert.verdict == "independent-summand" and triangular, size, cert.detail
    s.check("summand certificate p=3, n<=6", certificate)

    def disjoint() -> Tuple[bool, int, str]:
        checked = 0
        for p in range(2, 11):
            for n in range(2, 13):
                checked += 1
                if not xi_interval(p, n).hi < xi_interval(p, n - 1).lo:
                    return False, checked, f"p={p} n={n}"
        return True, checked, ""
    s.check("interval ordering", disjoint)

    def intervals() -> Tuple[bool, int, str]:
        upsD, facts = upsilon_d(), d_facts()
        for n in range(1, 7):
            cert = certify_xi_interval(upsD, facts, 3, n)
            if not cert.passed:
                return False, n, cert.detail
        return True, 6, ""
    s.check("recomputed intervals p=3", intervals)

    def consistency() -> Tuple[bool, int, str]:
        upsD = upsilon_d()
        for p in range(2, 6):
            lo, hi = Fraction(1, p), Fraction(2, p)
            via_cable = restrict(cable_bounds(upsD, CableParams(p, 1)).lower, lo, hi)
            if iterated_lower_bound(upsD, p, 1) != via_cable:
                return False, p - 1, f"p={p}"
        return True, 4, ""
    s.check("iterated bound matches cabling bound", consistency)
    return s


SUITES = {
    "paper-values": _suite_reference_values,
    "properties": _suite_properties,
    "bounds": _suite_bounds,
    "summand": _suite_summand,
}


def verify_suite(name: str, corpus: Optional[PropertyCorpus] = None) -> VerifyReportModel:
    """
    Run one named suite. `corpus` replaces the default knots of the properties suite.

    Raises:
        InputError: If the suite name is unknown
    """
    if name not in SUITES:
        raise InputError(f"unknown suite '{name}'; choose from {', '.join(sorted(SUITES))}")
    if name == "properties":
        return _suite_properties(corpus).report()
    return SUITES[name]().report()


# ---------------------------------------------------------------------------
# Entry points


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ups", description="Upsilon invariants of knots and their cables")
    subparsers = parser.add_subparsers(dest="subcommand", metavar="<command>")
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch, and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "command", None) is None:
        parser.print_help(sys.stderr)
        return 2
    logger.debug(f"configuration: {config.to_dict()}")
    return args.command.run(args)


def main() -> None:
    """Console script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
