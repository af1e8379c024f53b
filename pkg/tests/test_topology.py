"""Tests for ``topology`` module."""
import pytest

from stonework import errors, fixtures, topology
from stonework.filters import FilterSet


class TestSpace:
    """Test space validation."""

    @staticmethod
    def test_empty_set_is_added() -> None:
        """Test the basis always holds ``{}``."""
        X = topology.space(["1"], [["1"]])

        assert X.basis == (frozenset(), frozenset({0}))

    @staticmethod
    def test_uncovered_point() -> None:
        """Test a point outside every basis set."""
        with pytest.raises(errors.NotABasis, match="'2' is in no basis set"):
            topology.space(["1", "2"], [["1"]])

    @staticmethod
    def test_missing_intersection() -> None:
        """Test overlapping sets without a basis set around their common point."""
        with pytest.raises(errors.NotABasis) as exc_info:
            topology.space(["1", "2", "3"], [["1", "2"], ["2", "3"]])

        assert exc_info.value.witness == ("2",)

    @staticmethod
    def test_unknown_point() -> None:
        """Test basis sets naming unknown points."""
        with pytest.raises(errors.UnknownElement):
            topology.space(["1"], [["1", "9"]])

    @staticmethod
    def test_cap() -> None:
        """Test spaces above the cap."""
        with pytest.raises(errors.CarrierTooLarge):
            topology.space(["1", "2"], [["1"], ["2"]], cap=1)


class TestSeparation:
    """Test the separation and local compactness checks."""

    @staticmethod
    def test_sierpinski_space() -> None:
        """Test Sierpiński space is T0 but not T1."""
        X = topology.sierpinski_space()

        assert topology.is_t0(X)
        assert not topology.is_t1(X)
        assert not topology.is_discrete(X)
        assert topology.minimal_neighbourhood(X, "y") == ("x", "y")
        assert topology.closure(X, X.subset(["x"])) == {0, 1}

    @staticmethod
    def test_sierpinski_characterizations_all_fail() -> None:
        """Test each clause is false on Sierpiński space."""
        X = topology.sierpinski_space()

        assert not any(topology.lclh_characterizations(X).values())
        assert not any(topology.hausdorff_characterizations(X).values())

    @staticmethod
    def test_sierpinski_is_locally_compact_only() -> None:
        """Test the closed point has no Hausdorff neighbourhood."""
        X = topology.sierpinski_space()

        assert topology.is_locally_compact(X)
        assert not topology.is_locally_hausdorff(X)

    @staticmethod
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_discrete_spaces(n: int) -> None:
        """Test discrete spaces satisfy every clause."""
        X = topology.discrete_space([str(i) for i in range(1, n + 1)])

        assert topology.is_t1(X)
        assert topology.is_discrete(X)
        assert all(topology.lclh_characterizations(X).values())
        assert all(topology.hausdorff_characterizations(X).values())

    @staticmethod
    def test_powerset_is_a_union_basis() -> None:
        """Test every subset of a discrete space as the basis."""
        assert topology.is_union_basis(topology.discrete_space(["1", "2"])) == (True, None)

    @staticmethod
    def test_singletons_are_not_a_union_basis() -> None:
        """Test the missing union of two singletons is reported."""
        X = topology.discrete_space(["1", "2"], powerset=False)

        assert topology.is_union_basis(X) == (
            False,
            ("{1}", "{2}", "Hausdorff union missing from basis"),
        )


class TestDuality:
    """Test the passage between posets and spaces."""

    @staticmethod
    def test_inclusion_poset_labels() -> None:
        """Test basis sets are labelled by their points."""
        P = topology.inclusion_poset(topology.discrete_space(["1", "2"]))

        assert P.elements == ("{}", "{1}", "{2}", "{1,2}")
        assert P.zero_id == "{}"

    @staticmethod
    def test_basis_to_poset_needs_a_union_basis() -> None:
        """Test Sierpiński space has no ∪-basis."""
        with pytest.raises(errors.NotAUnionBasis):
            topology.basis_to_poset(topology.sierpinski_space())

    @staticmethod
    def test_ultrafilter_space_of_a_powerset() -> None:
        """Test ``B(2)`` is dual to the two point discrete space."""
        X, witness = topology.ultrafilter_space(fixtures.powerset_poset(2))

        assert X.points == ("U_{1}", "U_{2}")
        assert topology.is_discrete(X)
        assert witness.set_map["{1,2}"] == ("U_{1}", "U_{2}")
        assert witness.set_map["{}"] == ()

    @staticmethod
    def test_ultrafilter_space_needs_basic_poset() -> None:
        """Test the three element chain is refused."""
        with pytest.raises(errors.NotBasic):
            topology.ultrafilter_space(fixtures.chain(3))

    @staticmethod
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_round_trips(n: int) -> None:
        """Test both round trips on powersets and discrete spaces."""
        assert topology.round_trip_poset(fixtures.powerset_poset(n))
        assert topology.round_trip_space(topology.discrete_space([str(i) for i in range(n)]))

    @staticmethod
    def test_round_trip_poset_needs_smile_basic() -> None:
        """Test the chain is refused."""
        with pytest.raises(errors.NotBasic):
            topology.round_trip_poset(fixtures.chain(3))


class TestAbcWitness:
    """Test separating ultrafilters."""

    @staticmethod
    def test_point_outside_the_cover() -> None:
        """Test ``U_{1}`` lies in ``O_{1}`` but not in ``O_{2}``."""
        P = fixtures.powerset_poset(2)

        U = topology.abc_witness(P, "{1}", "{1,2}", ["{2}"])

        assert isinstance(U, FilterSet)
        assert U.label == "U_{1}"

    @staticmethod
    def test_no_witness_needed_when_covered() -> None:
        """Test covering ``{1}`` by the top needs no witness."""
        P = fixtures.powerset_poset(2)

        assert topology.abc_witness(P, "{1}", "{1}", ["{1,2}"]) is topology.NoWitnessNeeded.TOKEN

    @staticmethod
    def test_precondition() -> None:
        """Test ``a ≺ b`` is required."""
        with pytest.raises(errors.PreconditionError):
            topology.abc_witness(fixtures.powerset_poset(2), "{1,2}", "{1}", [])
