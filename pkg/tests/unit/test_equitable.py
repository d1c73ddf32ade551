import math
from dataclasses import replace
from functools import reduce
from itertools import combinations, permutations

import pytest

from snowflake_groups.exceptions import ParameterError
from snowflake_groups.service.equitable_service import (
    EquitableCandidate,
    IntVector,
    StarSums,
    Verdict,
    canonical_vectors,
    decide_equitable,
    edge_vectors,
    exhaustive_search,
    intersection_number,
    lattice_index,
    star_condition,
    validate_certificate,
)


class TestLatticeIndex:
    """Tests for sublattice index computation."""

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "pairs,expected",
        [
            ([(1, 0), (0, 1)], 1),
            ([(2, 0), (0, 3)], 6),
            ([(2, 1), (1, 2)], 3),
            ([(4, 0), (6, 0), (0, 1)], 2),
            ([(3, 1), (3, -1)], 6),
            ([(-5, 2), (3, -1)], 1),
        ],
    )
    def test_finite_index(self, pairs, expected):
        """Index equals |det| for bases and the gcd structure otherwise."""
        assert lattice_index(EquitableCandidate.of(pairs)) == expected

    @pytest.mark.unit
    @pytest.mark.parametrize("pairs", [[(1, 1)], [(1, 1), (2, 2)], [(0, 3), (0, -1)]])
    def test_rank_deficient(self, pairs):
        """Collinear vectors generate an infinite-index lattice."""
        assert lattice_index(EquitableCandidate.of(pairs)) == math.inf

    @pytest.mark.unit
    def test_invariant_under_sign_and_order(self):
        """Negating or permuting vectors leaves the index unchanged."""
        base = lattice_index(EquitableCandidate.of([(2, 1), (1, 3), (0, 2)]))
        assert lattice_index(EquitableCandidate.of([(0, -2), (-2, -1), (1, 3)])) == base

    @pytest.mark.unit
    def test_matches_gcd_of_minors(self):
        """The index is the gcd of the 2 x 2 minors over every small multiset."""
        vectors = canonical_vectors(2)
        for size in (1, 2, 3):
            for chosen in combinations(vectors, size):
                minors = [intersection_number(x, y) for x, y in combinations(chosen, 2)]
                expected = reduce(math.gcd, minors, 0) or math.inf
                assert lattice_index(EquitableCandidate(chosen)) == expected


class TestStarCondition:
    """Tests for the balance sums."""

    @pytest.mark.unit
    def test_edge_vectors(self):
        """Edge classes (q, 0), (p, 1), (p, -1)."""
        assert edge_vectors(3, 2) == (IntVector(2, 0), IntVector(3, 1), IntVector(3, -1))

    @pytest.mark.unit
    def test_intersection_number(self):
        """|det| of the two vectors."""
        assert intersection_number(IntVector(2, 0), IntVector(1, 3)) == 6
        assert intersection_number(IntVector(1, 1), IntVector(2, 2)) == 0

    @pytest.mark.unit
    @pytest.mark.parametrize("k", [-3, -1, 0, 2, 5])
    def test_intersection_scales(self, k):
        """#[kx, y] = |k| #[x, y]."""
        x, y = IntVector(2, -1), IntVector(3, 4)
        assert intersection_number(IntVector(k * x.u, k * x.v), y) == abs(k) * intersection_number(x, y)

    @pytest.mark.unit
    def test_sums(self):
        """S = {(q, 1), (q, -1)} balances at 2q when p <= q."""
        sums = star_condition(2, 3, EquitableCandidate.of([(3, 1), (3, -1)]))
        assert sums == StarSums(6, 6, 6)
        assert sums.holds

    @pytest.mark.unit
    def test_sign_invariance(self):
        """Negating members leaves every sum unchanged."""
        first = star_condition(4, 3, EquitableCandidate.of([(1, 2), (3, -1)]))
        second = star_condition(4, 3, EquitableCandidate.of([(-1, -2), (3, -1)]))
        assert first == second

    @pytest.mark.unit
    def test_order_invariance(self):
        """Permuting S leaves every sum unchanged."""
        pairs = [(1, 2), (3, -1), (0, 1)]
        expected = star_condition(2, 5, EquitableCandidate.of(pairs))
        for ordering in permutations(pairs):
            assert star_condition(2, 5, EquitableCandidate.of(ordering)) == expected


class TestDecideEquitable:
    """Tests for the equitable-set decision procedure."""

    @pytest.mark.unit
    @pytest.mark.parametrize("p,q", [(1, 1), (2, 3), (5, 5), (1, 7)])
    def test_feasible(self, p, q):
        """p <= q gives {(q, 1), (q, -1)} with sums 2q and index 2q."""
        cert = decide_equitable(p, q)
        assert cert.verdict is Verdict.FEASIBLE
        assert cert.candidate.as_tuples() == [(q, 1), (q, -1)]
        assert cert.sums == StarSums(2 * q, 2 * q, 2 * q)
        assert cert.lattice_index == 2 * q
        assert validate_certificate(cert)

    @pytest.mark.unit
    @pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (7, 4)])
    def test_infeasible(self, p, q):
        """p > q carries an inequality trace and no candidate."""
        cert = decide_equitable(p, q)
        assert not cert.feasible
        assert cert.candidate is None
        assert len(cert.trace) > 0
        assert validate_certificate(cert)

    @pytest.mark.unit
    def test_tampered_certificate(self):
        """Wrong recorded sums or index fail validation."""
        cert = decide_equitable(1, 2)
        assert not validate_certificate(replace(cert, sums=StarSums(4, 4, 5)))
        assert not validate_certificate(replace(cert, lattice_index=3))
        assert not validate_certificate(replace(decide_equitable(3, 1), trace=()))

    @pytest.mark.unit
    def test_to_dict(self):
        """Machine-readable certificate."""
        assert decide_equitable(1, 1).to_dict() == {
            "p": 1,
            "q": 1,
            "verdict": "Feasible",
            "set": [(1, 1), (1, -1)],
            "sums": [2, 2, 2],
            "index": 2,
            "trace": [],
        }

    @pytest.mark.unit
    def test_invalid_parameters(self):
        """p, q >= 1."""
        with pytest.raises(ParameterError):
            decide_equitable(0, 1)

    @pytest.mark.unit
    def test_candidate_rejects_zero_vector(self):
        """Zero vectors and empty sets are not candidates."""
        with pytest.raises(ParameterError):
            EquitableCandidate.of([(0, 0), (1, 0)])
        with pytest.raises(ParameterError):
            EquitableCandidate.of([])


class TestExhaustiveSearch:
    """Tests for the bounded multiset search."""

    @pytest.mark.unit
    def test_canonical_vectors(self):
        """84 sign-normalized vectors with coordinates bounded by 6, shortest first."""
        vectors = canonical_vectors(6)
        assert len(vectors) == 84
        assert vectors[:4] == [IntVector(0, 1), IntVector(1, -1), IntVector(1, 0), IntVector(1, 1)]

    @pytest.mark.unit
    def test_first_hit(self):
        """For p = q = 1 the first equitable multiset is {(1, -1), (1, 1)}."""
        found = exhaustive_search(1, 1, 2, 2)
        assert found.as_tuples() == [(1, -1), (1, 1)]

    @pytest.mark.unit
    @pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (3, 2)])
    def test_agrees_with_decision(self, p, q):
        """No equitable set turns up when p > q."""
        assert exhaustive_search(p, q, 3, 3) is None

    @pytest.mark.unit
    def test_found_sets_validate(self):
        """Search hits satisfy the balance condition with finite index."""
        found = exhaustive_search(2, 3, 3, 2)
        assert found is not None
        assert star_condition(2, 3, found).holds
        assert lattice_index(found) != math.inf

    @pytest.mark.unit
    def test_invalid_bounds(self):
        """Bounds below one are rejected."""
        with pytest.raises(ParameterError):
            exhaustive_search(1, 1, 0, 2)
