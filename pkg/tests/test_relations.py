"""Tests for ``relations`` module."""
import random

import hypothesis
import hypothesis.strategies as st
import pytest

from stonework import errors, fixtures, relations, search


class TestPerp:
    """Test the disjointness relation."""

    @staticmethod
    def test_atoms_of_a_powerset_are_disjoint() -> None:
        """Test ``{1} ⊥ {2}`` but not ``{1} ⊥ {1,2}``."""
        P = fixtures.powerset_poset(2)

        rel = relations.perp(P)

        assert rel.holds("{1}", "{2}")
        assert not rel.holds("{1}", "{1,2}")
        assert all(rel.holds("{}", e) for e in P.elements)

    @staticmethod
    def test_chain_elements_above_zero_meet() -> None:
        """Test nonzero elements of a chain are never disjoint."""
        rel = relations.perp(fixtures.chain(3))

        assert not rel.holds("1", "2")
        assert rel.holds("0", "2")


class TestRatherBelow:
    """Test ``≺`` on small posets."""

    @staticmethod
    def test_chain_of_three() -> None:
        """Test ``≺`` on ``0 < 1 < 2``."""
        P = fixtures.chain(3)

        prec = relations.derived(P).prec

        assert sorted(prec.pairs()) == [("0", "0"), ("0", "1"), ("0", "2"), ("1", "2"), ("2", "2")]

    @staticmethod
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_powersets_have_prec_equal_to_leq(n: int) -> None:
        """Test every element of a finite Boolean algebra is rather below itself."""
        P = fixtures.powerset_poset(n)

        assert (relations.derived(P).prec.rel == P.leq).all()

    @staticmethod
    def test_hausdorff_relation_of_a_powerset_is_total() -> None:
        """Test all meets exist, so every pair is Hausdorff."""
        P = fixtures.powerset_poset(2)

        assert relations.derived(P).smile.rel.all()

    @staticmethod
    @hypothesis.given(seed=st.integers(min_value=0, max_value=10_000), size=st.integers(2, 6))
    @hypothesis.settings(max_examples=30, deadline=None)
    def test_rather_below_is_auxiliary(seed: int, size: int) -> None:
        """Test ``a <= b ≺ c <= d`` implies ``a ≺ d`` and ``≺`` lies inside ``<=``."""
        P = search.random_poset(random.Random(seed), size)

        rels = relations.derived(P)

        assert relations.auxiliarity_failure(P.leq, rels.prec.rel) is None
        assert (P.leq <= rels.smile.rel).all()


class TestCustomAuxiliary:
    """Test user supplied auxiliary relations."""

    @staticmethod
    def test_leq_is_auxiliary() -> None:
        """Test ``<=`` itself is accepted."""
        P = fixtures.chain(3)

        pairs = [(a, b) for a in P.elements for b in P.elements[int(a) :]]

        rel = relations.custom_auxiliary(P, pairs)

        assert (rel.rel == P.leq).all()

    @staticmethod
    def test_pair_outside_leq_is_rejected() -> None:
        """Test ``2 ≺ 1`` on a chain is not auxiliary."""
        with pytest.raises(errors.PreconditionError, match="not auxiliary"):
            relations.custom_auxiliary(fixtures.chain(3), [("2", "1")])

    @staticmethod
    def test_missing_consequence_is_rejected() -> None:
        """Test ``1 ≺ 1`` without ``0 ≺ 1`` is not auxiliary."""
        with pytest.raises(errors.PreconditionError):
            relations.custom_auxiliary(fixtures.chain(3), [("1", "1")])


class TestRelationByKind:
    """Test lookup of relations by CLI name."""

    @staticmethod
    @pytest.mark.parametrize("kind", ["prec", "smile", "perp", "leq"])
    def test_known_kinds(kind: str) -> None:
        """Test every CLI name resolves."""
        P = fixtures.chain(2)

        assert relations.relation_by_kind(P, kind).base is P

    @staticmethod
    def test_unknown_kind() -> None:
        """Test an unknown name is an input error."""
        with pytest.raises(errors.InputError, match="unknown relation kind 'below'"):
            relations.relation_by_kind(fixtures.chain(2), "below")
