"""
Shared Components Module

This module contains shared components and utilities used across the Upsilon
toolkit: the exception hierarchy, the exact rational codec, the pydantic
models for every JSON interface, the certificate type and centralized error
handling.
"""

import re
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, StrictBool, StrictInt, ValidationError

from config import config

logger = logging.getLogger(__name__)

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


class UpsilonError(ValueError):
    """Base class for all errors raised by the toolkit."""


class DomainError(UpsilonError):
    """A piecewise-linear function was used outside its domain."""


class ComplexError(UpsilonError):
    """A chain complex is invalid, not knot-like, or unstable under truncation."""


class NotLSpaceError(UpsilonError):
    """An Alexander polynomial is not of L-space form."""


class OracleCapError(UpsilonError):
    """The brute-force oracle would enumerate more cycles than allowed."""


class InputError(UpsilonError):
    """Malformed input file or command-line argument."""


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse an exact rational from "a", "-a" or "a/b".

    Args:
        text: String form, or an int/Fraction passed through

    Returns:
        The reduced Fraction

    Raises:
        InputError: If the text is not an exact rational (floats are rejected)
    """
    if isinstance(text, bool):
        raise InputError(f"not a rational: {text!r}")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"rationals must be strings like 'a/b', got {type(text).__name__}")
    match = _RATIONAL_RE.match(text)
    if not match:
        raise InputError(f"not an exact rational: '{text}'")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InputError(f"zero denominator in '{text}'")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    """Serialize a rational as "a" or "a/b"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class _StrictModel(BaseModel):
    """Base model: unknown fields are rejected."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class PLFuncModel(_StrictModel):
    """Wire form of a piecewise-linear function."""
    domain: Tuple[str, str] = ("0", "2")
    breakpoints: List[Tuple[str, str]] = Field(min_length=1)


class GeneratorModel(_StrictModel):
    """A base generator of a CFK-infinity model."""
    name: str = Field(min_length=1)
    alex: StrictInt
    maslov: StrictInt


class TermModel(_StrictModel):
    """One term U^upower * gen of a differential."""
    gen: str
    upower: StrictInt


class DifferentialModel(_StrictModel):
    """The differential of one generator."""
    source: str = Field(alias="from")
    terms: List[TermModel] = Field(default_factory=list)


class ComplexModel(_StrictModel):
    """Wire form of a finite CFK-infinity model."""
    name: str = ""
    generators: List[GeneratorModel]
    differential: List[DifferentialModel] = Field(default_factory=list)


class LaurentPolyModel(_StrictModel):
    """Integer Laurent polynomial; keys are exponents as strings."""
    coeffs: Dict[str, StrictInt]


class StaircaseSpecModel(_StrictModel):
    """Exponent sequence of a staircase."""
    exponents: List[StrictInt] = Field(min_length=1)


class HFKEntryModel(_StrictModel):
    """One summand F^rank in Alexander grading alex and Maslov grading maslov."""
    alex: StrictInt
    maslov: StrictInt
    rank: StrictInt = Field(default=1, ge=1)


class HFKTableModel(_StrictModel):
    """Maslov-graded knot Floer homology ranks."""
    entries: List[HFKEntryModel] = Field(min_length=1)


class BoundPairModel(_StrictModel):
    """Cabling bounds on [0, 2/p] and their reflected copies on [2-2/p, 2]."""
    p: StrictInt
    q: StrictInt
    lower: PLFuncModel
    upper: PLFuncModel
    reflected_lower: PLFuncModel
    reflected_upper: PLFuncModel


class WitnessModel(_StrictModel):
    """Where and why a check failed."""
    t: Optional[str] = None
    detail: str


class CertificateModel(_StrictModel):
    """A machine-checkable verdict."""
    kind: str = "check"
    verdict: Literal["pass", "fail"]
    witness: Optional[WitnessModel] = None
    checked: int = 0
    facts: Dict[str, str] = Field(default_factory=dict)


class XiIntervalModel(_StrictModel):
    """Where the first singularity of one family member must lie."""
    p: StrictInt
    n: StrictInt
    lo: str
    hi: str


class SummandEntryModel(_StrictModel):
    """One family member of a summand certificate."""
    label: str
    interval: XiIntervalModel
    delta: Optional[StrictInt] = None
    slope_change: CertificateModel


class SummandCertificateModel(_StrictModel):
    """Triangular-matrix verdict for a family of knots."""
    kind: str = "summand"
    verdict: Literal["independent-summand", "inconclusive"]
    rank: StrictInt
    detail: str = ""
    family: List[SummandEntryModel] = Field(default_factory=list)
    matrix: List[List[StrictInt]] = Field(default_factory=list)
    certified: List[List[StrictBool]] = Field(default_factory=list)
    facts_supplied: Dict[str, str] = Field(default_factory=dict)
    facts_verified: List[str] = Field(default_factory=list)


class CriterionModel(_StrictModel):
    """Outcome of one acceptance criterion."""
    id: str
    verdict: Literal["pass", "fail"]
    checked: int = 0
    detail: str = ""


class VerifyReportModel(_StrictModel):
    """Outcome of a verification suite."""
    suite: str
    verdict: Literal["pass", "fail"]
    criteria: List[CriterionModel] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)


@dataclass(frozen=True)
class Certificate:
    """
    Result of an exact check.

    `checked` counts the individual comparisons performed; `facts` records
    supplied inputs the verdict depends on but did not verify.
    """
    kind: str
    passed: bool
    witness_t: Optional[Fraction] = None
    detail: str = ""
    checked: int = 0
    facts: Dict[str, str] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_model(self) -> CertificateModel:
        witness = None
        if not self.passed or self.detail:
            witness = WitnessModel(
                t=format_rational(self.witness_t) if self.witness_t is not None else None,
                detail=self.detail,
            )
        return CertificateModel(
            kind=self.kind,
            verdict="pass" if self.passed else "fail",
            witness=witness,
            checked=self.checked,
            facts=dict(self.facts),
        )


M = TypeVar("M", bound=BaseModel)


def read_json(path: Union[str, Path], model: Type[M]) -> M:
    """
    Read and validate a JSON file.

    Args:
        path: File to read
        model: Pydantic model to validate against

    Returns:
        The validated model

    Raises:
        InputError: If the file is missing, is not JSON, or fails validation
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    try:
        return model.model_validate_json(raw)
    except ValidationError as e:
        raise InputError(f"{path}: {e.error_count()} validation error(s): {e.errors()[0]['msg']}")


def dump_json(payload: Union[BaseModel, List[BaseModel], Dict[str, Any]]) -> str:
    """Serialize a model (or a list of models) with the configured indent."""
    indent = config.output.indent or None
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(indent=indent, by_alias=True)
    if isinstance(payload, list):
        data: Any = [item.model_dump(mode="json", by_alias=True) for item in payload]
    else:
        data = payload
    return json.dumps(data, indent=indent)


class ErrorHandler:
    """
    Centralized error handling utility.

    This class provides consistent error messages and exit codes
    across the command-line front end.
    """

    @staticmethod
    def handle_input_error(error: Exception) -> str:
        """
        Handle malformed inputs.

        Args:
            error: Input error

        Returns:
            User-friendly error message
        """
        error_msg = str(error).lower()

        if "cannot read" in error_msg:
            return f"Input file could not be read: {error}"
        elif "validation error" in error_msg or "extra" in error_msg:
            return f"Input file does not match the expected format: {error}"
        elif "rational" in error_msg or "denominator" in error_msg:
            return f"Invalid exact rational: {error}"
        else:
            return f"Input error: {error}"

    @staticmethod
    def handle_math_error(error: Exception) -> str:
        """
        Handle errors raised by the computations.

        Args:
            error: Computation error

        Returns:
            User-friendly error message
        """
        if isinstance(error, ComplexError):
            return f"Complex rejected: {error}"
        elif isinstance(error, NotLSpaceError):
            return f"Not an L-space knot polynomial: {error}"
        elif isinstance(error, OracleCapError):
            return f"Oracle cap exceeded: {error}"
        elif isinstance(error, DomainError):
            return f"Domain error: {error}"
        else:
            return f"Computation error: {error}"

    @staticmethod
    def handle_general_error(error: Exception) -> str:
        """
        Handle general errors.

        Args:
            error: General error

        Returns:
            User-friendly error message
        """
        return f"An unexpected error occurred: {str(error)}"

    @staticmethod
    def exit_code(error: Exception) -> int:
        """Exit code for an exception: 2 for bad input, 1 otherwise."""
        if isinstance(error, (InputError, ValidationError)):
            return 2
        return 1


# Global instances
error_handler = ErrorHandler()
