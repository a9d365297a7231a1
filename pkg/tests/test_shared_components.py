"""
Test Shared Components Module

This module contains tests for the shared components and utilities.
"""

import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from shared_components import (
    Certificate,
    ComplexError,
    ComplexModel,
    DomainError,
    ErrorHandler,
    InputError,
    NotLSpaceError,
    OracleCapError,
    PLFuncModel,
    UpsilonError,
    dump_json,
    format_rational,
    parse_rational,
    read_json,
)


class TestRationals:
    """Test cases for the exact rational codec."""

    def test_parse(self):
        """Test integers, fractions and pass-through values."""
        assert parse_rational("3") == 3
        assert parse_rational("-14/3") == Fraction(-14, 3)
        assert parse_rational(" 4 / 6 ") == Fraction(2, 3)
        assert parse_rational(Fraction(1, 2)) == Fraction(1, 2)
        assert parse_rational(7) == 7

    def test_rejects_inexact(self):
        """Test that floats, booleans and malformed strings are refused."""
        for bad in ("0.5", "1/0", "a/b", "", 0.5, True):
            with pytest.raises(InputError):
                parse_rational(bad)

    def test_format(self):
        """Test 'a' and 'a/b' output."""
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(Fraction(-2, 3)) == "-2/3"


class TestModels:
    """Test cases for the JSON models and file helpers."""

    def test_unknown_fields_rejected(self):
        """Test that models forbid extra keys."""
        with pytest.raises(ValidationError):
            PLFuncModel.model_validate({"breakpoints": [["0", "0"], ["2", "0"]], "colour": "red"})

    def test_read_json(self, tmp_path):
        """Test reading a valid file."""
        path = tmp_path / "f.json"
        path.write_text(json.dumps({"breakpoints": [["0", "0"], ["1", "-1"], ["2", "0"]]}))
        model = read_json(path, PLFuncModel)
        assert model.domain == ("0", "2")
        assert len(model.breakpoints) == 3

    def test_read_json_errors(self, tmp_path):
        """Test missing files and invalid content become InputError."""
        with pytest.raises(InputError, match="cannot read"):
            read_json(tmp_path / "missing.json", PLFuncModel)
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"generators": "none"}))
        with pytest.raises(InputError, match="validation error"):
            read_json(path, ComplexModel)

    def test_dump_json_list(self):
        """Test that a list of models is serialized as a JSON array."""
        models = [PLFuncModel(breakpoints=[("0", "0"), ("2", "0")])]
        assert json.loads(dump_json(models))[0]["domain"] == ["0", "2"]


class TestCertificate:
    """Test cases for the Certificate type."""

    def test_pass_without_witness(self):
        """Test that a clean pass has no witness."""
        model = Certificate("cable-bounds", True, checked=4).to_model()
        assert model.verdict == "pass"
        assert model.witness is None
        assert model.checked == 4

    def test_fail_with_witness(self):
        """Test that a failure carries t and the detail."""
        cert = Certificate("hbar", False, Fraction(1, 3), "below 0", 2, {"tau": "1"})
        model = cert.to_model()
        assert cert.verdict == "fail"
        assert model.witness.t == "1/3"
        assert model.witness.detail == "below 0"
        assert model.facts == {"tau": "1"}


class TestErrorHandler:
    """Test cases for the ErrorHandler class."""

    def test_handle_input_error(self):
        """Test input error messages."""
        assert "could not be read" in ErrorHandler.handle_input_error(InputError("cannot read x.json"))
        assert "expected format" in ErrorHandler.handle_input_error(InputError("x.json: 1 validation error(s)"))
        assert "exact rational" in ErrorHandler.handle_input_error(InputError("not an exact rational: '0.5'"))
        assert "Input error" in ErrorHandler.handle_input_error(InputError("--hfk needs --tau"))

    def test_handle_math_error(self):
        """Test messages for each computation error."""
        assert "Complex rejected" in ErrorHandler.handle_math_error(ComplexError("d^2 != 0"))
        assert "L-space" in ErrorHandler.handle_math_error(NotLSpaceError("bad"))
        assert "Oracle cap" in ErrorHandler.handle_math_error(OracleCapError("too big"))
        assert "Domain error" in ErrorHandler.handle_math_error(DomainError("outside"))
        assert "Computation error" in ErrorHandler.handle_math_error(UpsilonError("no survivor"))

    def test_handle_general_error(self):
        """Test general error handling."""
        result = ErrorHandler.handle_general_error(Exception("test error"))
        assert "unexpected error" in result
        assert "test error" in result

    def test_exit_codes(self):
        """Test 2 for bad input and 1 for everything else."""
        assert ErrorHandler.exit_code(InputError("x")) == 2
        assert ErrorHandler.exit_code(ComplexError("x")) == 1
        assert ErrorHandler.exit_code(RuntimeError("x")) == 1
