"""Tests for ``ingest`` module."""
import pathlib

import pytest

from stonework import errors, groupoid, ingest, morphisms
from stonework.ingest import Kind
from tests.conftest import EXAMPLES_DIR


GOOD_DIR = EXAMPLES_DIR / "good"
BAD_DIR = EXAMPLES_DIR / "bad"


class TestGoodFiles:
    """Test every good example is ingested as its kind."""

    @staticmethod
    @pytest.mark.parametrize(
        ("file_name", "kind"),
        [
            ("poset_b2.json", Kind.POSET),
            ("poset_chain3.json", Kind.POSET),
            ("isg_evs_s_joins.json", Kind.ISG),
            ("space_sierpinski.json", Kind.SPACE),
            ("space_discrete2.json", Kind.SPACE),
            ("groupoid_pair2.json", Kind.GROUPOID),
            ("groupoid_unit_basis.json", Kind.GROUPOID),
            ("morphism_identity_b2.json", Kind.MORPHISM),
            ("partial_map_swap.json", Kind.PARTIAL_MAP),
        ],
    )
    def test_kind(file_name: str, kind: Kind) -> None:
        """Test the validator of the declared kind is used."""
        structure = ingest.ingest(GOOD_DIR / file_name)

        assert ingest.kind_of(structure) is kind

    @staticmethod
    def test_every_good_file_is_covered() -> None:
        """Test no good example is left out."""
        assert len(list(GOOD_DIR.glob("*.json"))) == 9

    @staticmethod
    def test_morphism_ends_resolve_relative_to_the_file() -> None:
        """Test the identity relation on the four element lattice."""
        m = ingest.ingest(GOOD_DIR / "morphism_identity_b2.json")

        assert isinstance(m, morphisms.BasicMorphismRel)
        assert m.source.elements == ("0", "x", "y", "xy")
        assert m.is_vee

    @staticmethod
    def test_declared_basis() -> None:
        """Test a basis given in the file replaces the bisections."""
        G = ingest.ingest(GOOD_DIR / "groupoid_unit_basis.json")

        assert ingest.declared_basis(G) == (frozenset({0}),)

    @staticmethod
    def test_empty_declared_basis(tmp_path: pathlib.Path) -> None:
        """Test an explicit empty basis is kept and refused as a basis."""
        path = tmp_path / "groupoid.json"
        path.write_text(
            '{"kind": "groupoid", "arrows": ["u"], "product": [["u", "u", "u"]],'
            ' "inv": ["u"], "units": ["u"], "basis": []}'
        )
        G = ingest.ingest(path)

        assert ingest.declared_basis(G) == ()
        with pytest.raises(errors.NotABasis):
            groupoid.etale_basis_report(G, ingest.declared_basis(G))

    @staticmethod
    def test_bisections_by_default() -> None:
        """Test groupoids without a basis use every bisection."""
        G = ingest.ingest(GOOD_DIR / "groupoid_pair2.json")

        assert ingest.declared_basis(G) == groupoid.bisections(G)

    @staticmethod
    def test_cap() -> None:
        """Test the carrier cap applies to files."""
        with pytest.raises(errors.CarrierTooLarge):
            ingest.ingest(GOOD_DIR / "poset_b2.json", cap=3)


class TestBadFiles:
    """Test every bad example fails with the matching error."""

    @staticmethod
    @pytest.mark.parametrize(
        ("file_name", "error"),
        [
            ("invalid_json.json", errors.ParseError),
            ("unknown_kind.json", errors.SchemaError),
            ("isg_non_square.json", errors.SchemaError),
            ("poset_not_antisymmetric.json", errors.NotAntisymmetric),
            ("space_not_a_basis.json", errors.NotABasis),
            ("groupoid_missing_unit_product.json", errors.NotAGroupoid),
            ("morphism_missing_source.json", errors.InputError),
        ],
    )
    def test_error(file_name: str, error: type) -> None:
        """Test the error class of each bad file."""
        with pytest.raises(error):
            ingest.ingest(BAD_DIR / file_name)

    @staticmethod
    def test_every_bad_file_is_covered() -> None:
        """Test no bad example is left out."""
        assert len(list(BAD_DIR.glob("*.json"))) == 7

    @staticmethod
    def test_parse_error_position() -> None:
        """Test the position of the syntax error."""
        with pytest.raises(errors.ParseError) as exc_info:
            ingest.parse(BAD_DIR / "invalid_json.json")

        assert exc_info.value.line == 4

    @staticmethod
    def test_schema_error_names_the_field() -> None:
        """Test the validator message of a short table."""
        with pytest.raises(errors.SchemaError, match="field 'mult': expected a 3 x 3 table"):
            ingest.parse(BAD_DIR / "isg_non_square.json")

    @staticmethod
    def test_unknown_kind_lists_the_kinds() -> None:
        """Test the known kinds are named."""
        with pytest.raises(errors.SchemaError, match="got 'lattice'"):
            ingest.parse(BAD_DIR / "unknown_kind.json")

    @staticmethod
    def test_missing_field(tmp_path: pathlib.Path) -> None:
        """Test a poset without a zero."""
        path = tmp_path / "poset.json"
        path.write_text('{"kind": "poset", "elements": ["0"], "leq": [["0", "0"]]}')

        with pytest.raises(errors.SchemaError, match="field 'zero'"):
            ingest.parse(path)

    @staticmethod
    def test_not_an_object(tmp_path: pathlib.Path) -> None:
        """Test a top level list."""
        path = tmp_path / "list.json"
        path.write_text("[]")

        with pytest.raises(errors.SchemaError, match="expected a JSON object"):
            ingest.parse(path)

    @staticmethod
    def test_unreadable_file(tmp_path: pathlib.Path) -> None:
        """Test a missing file is an input error."""
        with pytest.raises(errors.InputError, match="cannot read structure file"):
            ingest.ingest(tmp_path / "missing.json")

    @staticmethod
    def test_partial_map_ends_must_be_spaces(tmp_path: pathlib.Path) -> None:
        """Test a partial map between posets."""
        path = tmp_path / "map.json"
        source = (GOOD_DIR / "poset_b2.json").as_posix()
        path.write_text(
            f'{{"kind": "partial_map", "source": "{source}", "target": "{source}", "map": {{}}}}'
        )

        with pytest.raises(errors.SchemaError, match="partial map ends must be spaces"):
            ingest.ingest(path)
