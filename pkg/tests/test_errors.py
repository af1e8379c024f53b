"""Tests for ``errors`` module."""
import pytest

from stonework import errors


class TestHierarchy:
    """Test which errors count as input errors."""

    @staticmethod
    @pytest.mark.parametrize(
        "error_class",
        [
            errors.NotReflexive,
            errors.NotAGroupoid,
            errors.UnknownFixture,
            errors.NotBasic,
            errors.NotAProperFilter,
            errors.SourceTargetMismatch,
        ],
    )
    def test_input_errors(error_class: type) -> None:
        """Test structure and precondition errors map to bad input."""
        assert issubclass(error_class, errors.InputError)
        assert not issubclass(error_class, errors.ConsistencyError)

    @staticmethod
    def test_lemma_violations_are_consistency_errors() -> None:
        """Test failed lemmas are internal errors."""
        assert issubclass(errors.LemmaViolated, errors.ConsistencyError)
        assert not issubclass(errors.ConsistencyError, errors.InputError)


class TestMessages:
    """Test error messages and attributes."""

    @staticmethod
    def test_parse_error_position() -> None:
        """Test path, line and column are kept."""
        err = errors.ParseError("poset.json", 3, 7, "Expecting value")

        assert str(err) == "poset.json:3:7: Expecting value"
        assert (err.line, err.column) == (3, 7)

    @staticmethod
    def test_schema_error_field() -> None:
        """Test the failing field is named."""
        err = errors.SchemaError("isg.json", "mult", "expected a 2 x 2 table")

        assert str(err) == "isg.json: field 'mult': expected a 2 x 2 table"

    @staticmethod
    def test_structure_error_default_message() -> None:
        """Test the law and witness make the default message."""
        err = errors.NotAntisymmetric(("x", "y"))

        assert err.witness == ("x", "y")
        assert "('x', 'y')" in str(err)

    @staticmethod
    def test_carrier_too_large() -> None:
        """Test size and cap are kept."""
        err = errors.CarrierTooLarge(70, 64, "space")

        assert (err.size, err.cap) == (70, 64)
        assert str(err) == "space has 70 elements, cap is 64"


class TestEnsure:
    """Test the assertion helper."""

    @staticmethod
    def test_passes() -> None:
        """Test nothing happens on success."""
        errors.ensure(True, "always")

    @staticmethod
    def test_raises_with_witness() -> None:
        """Test the assertion and witness are attached."""
        with pytest.raises(errors.ConsistencyError) as exc_info:
            errors.ensure(False, "join is union", ("a", "b"))

        assert exc_info.value.assertion == "join is union"
        assert exc_info.value.witness == ("a", "b")
        assert "consistency check 'join is union' failed" in str(exc_info.value)
