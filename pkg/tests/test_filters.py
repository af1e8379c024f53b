"""Tests for ``filters`` module."""
import pytest

from stonework import errors, filters, fixtures


class TestFilterChecks:
    """Test filter membership and the filter clauses."""

    @staticmethod
    def test_principal_up_set_is_a_filter() -> None:
        """Test ``{1} <= {1,2}`` forms a ``<=``-filter."""
        P = fixtures.powerset_poset(2)

        assert filters.is_filter(P, "leq", ["{1}", "{1,2}"]) == (True, None)

    @staticmethod
    def test_set_that_is_not_up_closed() -> None:
        """Test a lone atom is not a filter."""
        ok, witness = filters.is_filter(fixtures.powerset_poset(2), "leq", ["{1}"])

        assert not ok
        assert witness is not None

    @staticmethod
    def test_two_atoms_are_not_directed() -> None:
        """Test both atoms and the top have no common lower member."""
        ok, _ = filters.is_filter(fixtures.powerset_poset(2), "leq", ["{1}", "{2}", "{1,2}"])

        assert not ok

    @staticmethod
    def test_principal_filter_and_label() -> None:
        """Test the principal filter of an atom."""
        U = filters.principal_filter(fixtures.powerset_poset(2), "{1}", "leq")

        assert U.ids() == ("{1}", "{1,2}")
        assert U.label == "U_{1}"
        assert "{1,2}" in U
        assert "{2}" not in U
        assert len(U) == 2
        assert filters.is_proper(U)

    @staticmethod
    def test_initial_segment_and_upward_closure() -> None:
        """Test a filter is recovered from an initial segment."""
        P = fixtures.powerset_poset(2)
        U = filters.principal_filter(P, "{1}", "leq")

        segment = filters.initial_segment(U, "{1,2}")

        assert segment == ("{1}", "{1,2}")
        assert filters.upward_closure(P, segment, "leq") == U.ids()

    @staticmethod
    def test_initial_segment_of_non_member() -> None:
        """Test segments are only taken at members."""
        U = filters.principal_filter(fixtures.powerset_poset(2), "{1}", "leq")

        with pytest.raises(errors.ElementNotInFilter):
            filters.initial_segment(U, "{2}")


class TestSubsetOracle:
    """Test exhaustive filter enumeration."""

    @staticmethod
    def test_leq_filters_of_a_powerset() -> None:
        """Test the four principal filters and the empty one."""
        found = filters.all_filters(fixtures.powerset_poset(2), "leq")

        assert len(found) == 5
        assert found[0].members == ()

    @staticmethod
    def test_cap() -> None:
        """Test the oracle refuses carriers above its cap."""
        with pytest.raises(errors.CarrierTooLarge, match="subset oracle"):
            filters.all_filters(fixtures.powerset_poset(2), "leq", cap=3)


class TestUltrafilters:
    """Test ultrafilter enumeration and characterizations."""

    @staticmethod
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_powerset_has_one_ultrafilter_per_atom(n: int) -> None:
        """Test ``B(n)`` has ``n`` ultrafilters."""
        found = filters.enumerate_prec_ultrafilters(fixtures.powerset_poset(n))

        assert len(found) == n
        assert all(U.label.startswith("U_{") for U in found)

    @staticmethod
    def test_chain_has_only_its_top() -> None:
        """Test the only proper ``≺``-filter of ``0 < 1 < 2`` generated by ``2``."""
        found = filters.enumerate_prec_ultrafilters(fixtures.chain(3))

        assert [U.ids() for U in found] == [("2",)]
        assert found[0].label == "U_2"

    @staticmethod
    def test_oracle_can_be_skipped() -> None:
        """Test a zero oracle cap gives the same ultrafilters."""
        P = fixtures.powerset_poset(2)

        fast = filters.enumerate_prec_ultrafilters(P, oracle_cap=0)

        assert [U.members for U in fast] == [
            U.members for U in filters.enumerate_prec_ultrafilters(P)
        ]

    @staticmethod
    def test_characterizations_agree_on_a_powerset() -> None:
        """Test maximal, complementary and prime coincide on ``B(2)``."""
        P = fixtures.powerset_poset(2)

        for U in filters.enumerate_prec_ultrafilters(P):
            assert filters.ultrafilter_characterizations(P, U) == {
                "maximal": True,
                "complementary": True,
                "prime": True,
            }

    @staticmethod
    def test_characterizations_need_a_proper_filter() -> None:
        """Test the whole carrier is refused."""
        P = fixtures.powerset_poset(2)
        U = filters.principal_filter(P, "{}", "prec")

        with pytest.raises(errors.NotAProperFilter):
            filters.ultrafilter_characterizations(P, U)
