"""Tests for ``order`` module."""
import numpy as np
import pytest

from stonework import errors, fixtures, order


DIAMOND = ["0", "x", "y", "1"]
DIAMOND_LEQ = [
    ("0", "0"),
    ("0", "x"),
    ("0", "y"),
    ("0", "1"),
    ("x", "x"),
    ("x", "1"),
    ("y", "y"),
    ("y", "1"),
    ("1", "1"),
]


class TestValidatePoset:
    """Test ``validate_poset`` and the order checks behind it."""

    @staticmethod
    def test_diamond_is_accepted() -> None:
        """Test a valid four element lattice."""
        result = order.validate_poset(DIAMOND, DIAMOND_LEQ, "0")

        assert result.size == 4
        assert result.zero_id == "0"
        assert result.maximum == result.index("1")

    @staticmethod
    def test_missing_reflexive_pair() -> None:
        """Test the first element without ``a <= a`` is reported."""
        pairs = [p for p in DIAMOND_LEQ if p != ("y", "y")]

        with pytest.raises(errors.NotReflexive) as exc_info:
            order.validate_poset(DIAMOND, pairs, "0")

        assert exc_info.value.witness == ("y", "y")

    @staticmethod
    def test_antisymmetry_violation() -> None:
        """Test two distinct elements below each other are reported."""
        pairs = [*DIAMOND_LEQ, ("1", "x")]

        with pytest.raises(errors.NotAntisymmetric):
            order.validate_poset(DIAMOND, pairs, "0")

    @staticmethod
    def test_transitivity_violation_names_middle_element() -> None:
        """Test a missing composite pair is reported with the element in between."""
        pairs = [("0", "0"), ("a", "a"), ("b", "b"), ("0", "a"), ("a", "b")]

        with pytest.raises(errors.NotTransitive) as exc_info:
            order.validate_poset(["0", "a", "b"], pairs, "0")

        assert exc_info.value.witness == ("0", "a", "b")

    @staticmethod
    def test_zero_must_be_minimum() -> None:
        """Test a zero that is not below everything."""
        with pytest.raises(errors.NoMinimum):
            order.validate_poset(DIAMOND, DIAMOND_LEQ, "x")

    @staticmethod
    def test_unknown_ids() -> None:
        """Test pairs and zeros naming unknown elements."""
        with pytest.raises(errors.UnknownElement):
            order.validate_poset(DIAMOND, [*DIAMOND_LEQ, ("0", "z")], "0")
        with pytest.raises(errors.UnknownElement):
            order.validate_poset(DIAMOND, DIAMOND_LEQ, "z")

    @staticmethod
    @pytest.mark.parametrize("elements", [[], ["0", "0"]])
    def test_bad_carriers(elements: list) -> None:
        """Test empty carriers and duplicate ids."""
        with pytest.raises(errors.SchemaError):
            order.validate_poset(elements, [], "0")

    @staticmethod
    def test_cap_is_enforced() -> None:
        """Test carriers above the cap are rejected."""
        with pytest.raises(errors.CarrierTooLarge, match="carrier has 4 elements, cap is 3"):
            order.validate_poset(DIAMOND, DIAMOND_LEQ, "0", cap=3)

    @staticmethod
    def test_matrix_shape_is_checked() -> None:
        """Test a non square matrix."""
        with pytest.raises(errors.SchemaError):
            order.poset_from_matrix(["0", "1"], np.ones((2, 3), dtype=bool), "0")

    @staticmethod
    def test_matrices_are_read_only() -> None:
        """Test the stored order matrix cannot be written to."""
        P = fixtures.chain(3)

        with pytest.raises(ValueError, match="read-only"):
            P.leq[0, 0] = False


class TestLatticeOperations:
    """Test partial meets and joins."""

    @staticmethod
    def test_powerset_joins_are_unions() -> None:
        """Test joins and meets in the subsets of ``{1,2}``."""
        P = fixtures.powerset_poset(2)

        assert order.partial_join(P, "{1}", "{2}") == "{1,2}"
        assert order.partial_meet(P, "{1}", "{2}") == "{}"
        assert order.is_join_semilattice(P)

    @staticmethod
    def test_missing_join_of_two_maximal_elements() -> None:
        """Test a V shape has no join of its two tops but is a conditional ∨-semilattice."""
        P = order.validate_poset(
            ["0", "x", "y"], [("0", "0"), ("0", "x"), ("0", "y"), ("x", "x"), ("y", "y")], "0"
        )

        assert order.partial_join(P, "x", "y") is None
        assert order.is_conditional_join_semilattice(P) == (True, None)
        assert not order.is_join_semilattice(P)
        assert P.maximum is None

    @staticmethod
    def test_bounded_pair_without_join() -> None:
        """Test two upper bounds without a least one."""
        elements = ["0", "a", "b", "c", "d"]
        pairs = [(e, e) for e in elements] + [("0", e) for e in elements[1:]]
        pairs += [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
        P = order.validate_poset(elements, pairs, "0")

        verdict, witness = order.is_conditional_join_semilattice(P)

        assert not verdict
        assert witness == ("a", "b")

    @staticmethod
    def test_lattice_ops_are_keyed_by_ids() -> None:
        """Test the collected maps of a chain."""
        ops = order.lattice_ops(fixtures.chain(3))

        assert ops.join[("0", "2")] == "2"
        assert ops.meet[("1", "2")] == "1"

    @staticmethod
    def test_opposite_flips_the_order() -> None:
        """Test the opposite of a chain."""
        P = fixtures.chain(3)

        Q = order.opposite(P)

        assert bool(Q.leq[2, 0])
        assert not bool(Q.leq[0, 2])

    @staticmethod
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_join_meet_duality_on_powersets(n: int) -> None:
        """Test joins in ``P`` are meets in the opposite order."""
        P = fixtures.powerset_poset(n)

        assert order.join_meet_duality(P) is None
        assert order.join_is_least_bound(P) is None


class TestBounds:
    """Test up-sets, down-sets, bounds and joins of subsets."""

    @staticmethod
    def test_up_and_down_sets_of_a_chain() -> None:
        """Test the middle of ``0 < 1 < 2``."""
        P = fixtures.chain(3)

        assert order.up_set(P, 1).tolist() == [False, True, True]
        assert order.down_set(P, 1).tolist() == [True, True, False]

    @staticmethod
    def test_bounds_of_two_maximal_elements() -> None:
        """Test the tops of a V shape have a common lower bound only."""
        P = order.validate_poset(
            ["0", "x", "y"], [("0", "0"), ("0", "x"), ("0", "y"), ("x", "x"), ("y", "y")], "0"
        )
        tops = np.array([False, True, True])

        assert not order.upper_bounds(P, tops).any()
        assert order.lower_bounds(P, tops).tolist() == [True, False, False]
        assert order.join_of(P, tops) is None
        assert order.join_of(P, np.array([False, True, False])) == 1

    @staticmethod
    def test_empty_subset_joins_to_zero() -> None:
        """Test every element bounds the empty subset and the minimum is its join."""
        P = fixtures.powerset_poset(2)
        empty = np.zeros(P.size, dtype=bool)

        assert order.upper_bounds(P, empty).all()
        assert order.join_of(P, empty) == P.zero

    @staticmethod
    def test_join_of_all_atoms() -> None:
        """Test the atoms of ``B(2)`` join to the top."""
        P = fixtures.powerset_poset(2)
        atoms = np.array([P.elements[i] in ("{1}", "{2}") for i in range(P.size)])

        assert P.elements[order.join_of(P, atoms)] == "{1,2}"
