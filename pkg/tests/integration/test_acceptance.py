import math
import time
from itertools import combinations

import numpy as np
import pytest

from snowflake_groups.algebra.coset import (
    kernel_subgroup,
    reidemeister_schreier,
    todd_coxeter,
)
from snowflake_groups.algebra.hnn import (
    HnnFamily,
    Strategy,
    britton_reduce,
    is_trivial,
    make_hnn,
    random_consequence,
    random_word,
    snowflake_witness,
)
from snowflake_groups.algebra.presentations import (
    SNOWFLAKE_ALPHABET,
    CharacterMap,
    make_klein_form,
    make_snowflake_G,
    tietze_simplify,
)
from snowflake_groups.algebra.words import Word, cyclic_reduce, free_reduce
from snowflake_groups.config.limits_config import Limits
from snowflake_groups.service.dehn_service import (
    alpha_exponent,
    area_profile,
    exponent_for,
    find_pq_for_exponent,
    min_area,
)
from snowflake_groups.service.equitable_service import (
    decide_equitable,
    exhaustive_search,
    validate_certificate,
)
from snowflake_groups.service.family_service import free_abelian_presentation, make_family
from snowflake_groups.service.verification_service import verify_cover_iso
from tests.fixtures.fillings import insertion_area
from tests.fixtures.sample_data import DENSITY_TARGETS, WITNESS_GRID, WITNESS_MAX_LEVEL


def concat(words):
    return Word(tuple(letter for w in words for letter in w))


def conjugate_products(relators, alphabet, rng, count, wanted, attempts=2000):
    """
    Products of ``count`` relator conjugates u r u^-1 (|u| <= 1) in which every
    in-order sub-product of two or more factors is cyclically reduced, so each
    factor can be peeled off without lengthening the word.
    """
    samples = []
    for _ in range(attempts):
        factors = [
            random_consequence(relators, alphabet, rng, count=1, conjugator_length=1)
            for _ in range(count)
        ]
        subproducts = (
            [factors[i] for i in chosen]
            for size in range(2, count + 1)
            for chosen in combinations(range(count), size)
        )
        if all(cyclic_reduce(concat(sub))[0] == concat(sub) for sub in subproducts):
            samples.append(concat(factors))
            if len(samples) == wanted:
                break
    return samples


class TestEquitableDichotomy:
    """Equitable sets exist exactly when p <= q."""

    @pytest.mark.integration
    @pytest.mark.slow
    def test_decision_and_search_agree(self):
        """All 16 pairs in {1..4}^2: verdict, self-validation and bounded search."""
        start = time.perf_counter()
        for p in range(1, 5):
            for q in range(1, 5):
                cert = decide_equitable(p, q)
                assert cert.feasible == (p <= q)
                assert validate_certificate(cert)
                found = exhaustive_search(p, q, 6, 3)
                assert (found is not None) == cert.feasible
        assert time.perf_counter() - start < 60


class TestCoverPipeline:
    """R_{p,q} has an index-2 subgroup isomorphic to G_{p,q}."""

    @pytest.mark.integration
    @pytest.mark.parametrize("p,q", [(3, 1), (2, 1), (5, 2), (4, 3)])
    def test_cover(self, p, q):
        """Enumeration closes at index 2 quickly and the cover is G_{p,q}."""
        P = make_klein_form(p, q)
        H = kernel_subgroup(P, CharacterMap.from_values(2, (1, 0, 0)))
        start = time.perf_counter()
        table = todd_coxeter(P, H)
        assert time.perf_counter() - start < 1
        assert table.index == 2
        simplified = tietze_simplify(reidemeister_schreier(P, table)).presentation
        assert (len(simplified.alphabet), len(simplified.relators)) == (4, 3)
        assert verify_cover_iso(p, q).passed


class TestWitnessSlopes:
    """Distortion of <a> through the witness family."""

    @pytest.mark.integration
    @pytest.mark.parametrize("p", [2, 3])
    def test_slope_sample(self, p):
        """s_8 is within 0.02 of log2(2p) for q = 1."""
        report = alpha_exponent(p, 1, levels=10)
        assert abs(report.slope_samples[8] - math.log2(2 * p)) < 0.02

    @pytest.mark.integration
    @pytest.mark.slow
    def test_witness_identity_grid(self):
        """w_k = a^((2p)^k) for k <= 6 over (p, q) in {1, 2, 3}^2."""
        a = SNOWFLAKE_ALPHABET.letter("a")
        start = time.perf_counter()
        for p, q in WITNESS_GRID:
            H = make_hnn(HnnFamily.G_SNOWFLAKE, p, q)
            for k in range(WITNESS_MAX_LEVEL + 1):
                witness = snowflake_witness(p, q, k)
                assert is_trivial(H, witness.word * a ** (-witness.N))
        assert time.perf_counter() - start < 10


class TestAreaOracle:
    """Sanity checks of the bounded area search."""

    @pytest.mark.integration
    def test_free_abelian_rectangles(self):
        """[a^m, b^n] has area m * n for m, n <= 3."""
        P = free_abelian_presentation()
        a, b = P.alphabet.letter("a"), P.alphabet.letter("b")
        for m in range(1, 4):
            for n in range(1, 4):
                w = (a ** m).inverse() * (b ** n).inverse() * a ** m * b ** n
                assert min_area(P, w, Limits(length_slack=0)) == m * n

    @pytest.mark.integration
    @pytest.mark.slow
    @pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(1, 4)])
    def test_rectangles_match_insertion_search(self, m, n):
        """The cyclic cell search and a linear insertion search agree on [a^m, b^n]."""
        P = free_abelian_presentation()
        a, b = P.alphabet.letter("a"), P.alphabet.letter("b")
        w = (a ** m).inverse() * (b ** n).inverse() * a ** m * b ** n
        relators = [r.to_signed() for r in P.relators]
        assert insertion_area(relators, w.to_signed()) == m * n == min_area(P, w, Limits(length_slack=0))

    @pytest.mark.integration
    @pytest.mark.slow
    @pytest.mark.parametrize("name,p,q,L", [("klein", 1, 1, 8), ("G", 1, 1, 6)])
    def test_trivial_words_have_finite_area(self, name, p, q, L):
        """Every word the word-problem oracle calls trivial gets a filling."""
        family = make_family(name, p, q)
        profile = area_profile(family.presentation, L, family.require_oracle(), Limits(length_slack=2))
        frame = profile.to_frame()
        assert (frame["unknown_areas"] == 0).all()
        assert frame["max_area"].is_monotonic_increasing
        assert profile.max_area(4) >= 1
        assert profile.max_area(L) >= 2

    @pytest.mark.integration
    def test_snowflake_relators(self):
        """Every relator of G_{p,q} has area 1."""
        for p, q in [(3, 1), (2, 3)]:
            P = make_snowflake_G(p, q)
            for relator in P.relators:
                assert min_area(P, relator) == 1
                assert min_area(P, relator.inverse()) == 1

    @pytest.mark.integration
    @pytest.mark.slow
    @pytest.mark.parametrize("count", [1, 2, 3, 4])
    def test_relator_conjugate_products(self, count):
        """A product of c relator conjugates has area at most c."""
        P = make_snowflake_G(3, 1)
        rng = np.random.default_rng(1000 + count)
        samples = conjugate_products(P.relators, P.alphabet, rng, count, wanted=3)
        assert samples
        for w in samples:
            area = min_area(P, w, Limits(length_slack=0))
            assert area is not None
            assert area <= count

    @pytest.mark.integration
    def test_random_consequences_trivial(self):
        """200 random consequence words are trivial."""
        rng = np.random.default_rng(200)
        for family, P in ((HnnFamily.G_SNOWFLAKE, make_snowflake_G(3, 1)), (HnnFamily.R_KLEIN, make_klein_form(3, 1))):
            H = make_hnn(family, 3, 1)
            for _ in range(100):
                assert is_trivial(H, random_consequence(P.relators, P.alphabet, rng))


class TestDensity:
    """Exponents are dense in [2, infinity)."""

    @pytest.mark.integration
    @pytest.mark.parametrize("rho", DENSITY_TARGETS)
    def test_targets(self, rho):
        """Each target is hit within 0.01 for q <= 1000."""
        p, q = find_pq_for_exponent(rho, 0.01, 1000)
        assert p >= q >= 1
        assert abs(exponent_for(p, q) - rho) < 0.01


class TestBrittonConfluence:
    """Independent pinch-elimination orders agree."""

    @pytest.mark.integration
    @pytest.mark.slow
    @pytest.mark.parametrize("family", [HnnFamily.R_KLEIN, HnnFamily.G_SNOWFLAKE])
    def test_strategies_agree(self, family):
        """1000 random words of length <= 40."""
        H = make_hnn(family, 3, 1)
        rng = np.random.default_rng(6)
        for _ in range(1000):
            w = random_word(H.alphabet, int(rng.integers(41)), rng)
            stack = britton_reduce(H, w, Strategy.STACK)
            shuffled = britton_reduce(H, w, Strategy.RANDOM, rng)
            assert stack.is_identity == shuffled.is_identity
            assert stack.syllable_count == shuffled.syllable_count
            assert stack.is_identity == is_trivial(H, free_reduce(w))
