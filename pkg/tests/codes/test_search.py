"""Tests for the quasi-collision search: chains, reduction, bottleneck pairing,
bucketing, codeword assembly, the search driver and the exhaustive oracle.
"""

import math
import random
from dataclasses import replace

import pytest

from ldpcForge.codes import bounds
from ldpcForge.codes.code_model import from_m_columns, sample_code, syndrome
from ldpcForge.codes.encoder import code_dimension
from ldpcForge.codes.errors import (
    CertificationFailed,
    DegenerateZero,
    HypothesisViolated,
    InvalidChain,
    SizeMismatch,
    TooLarge,
)
from ldpcForge.codes.models import CodeParams, SearchConfig
from ldpcForge.codes.search import (
    BucketIndex,
    Pairing,
    ReducedVector,
    assemble_codeword,
    bottleneck_pairing,
    brute_force_width,
    build_chain,
    check_chain,
    exact_min_distance,
    find_collision,
    reduce,
    resolve_t,
    search_min_weight,
)


class TestChains:
    @pytest.mark.slow
    @pytest.mark.parametrize("r", [3, 4, 5])
    @pytest.mark.parametrize("k", [0, 1, 2, 4])
    def test_chains_pass_validator(self, r, k):
        """Over ten thousand chains across (r, k, t) all pass the independent validator."""
        code = sample_code(CodeParams(n=400, m=200, r=r), seed=r)
        rng = random.Random(k)
        for t in (2 * k + 1, 2 * k + 7, 60):
            for _ in range(300):
                chain = build_chain(code, k, t, rng)
                check_chain(code, chain, t)
                assert len(chain.entries) == (k + 1) * r
                assert int(chain.int_sum.sum()) == (k + 1) * r

    def test_requires_t_above_2k(self, sampled_code):
        """Chains need t above 2k."""
        with pytest.raises(HypothesisViolated):
            build_chain(sampled_code, 2, 4, random.Random(0))

    def test_fallback_when_column_already_in_chain(self):
        """The fallback branch fires when the column holding row i is already in the chain."""
        # few columns over few rows, so the column holding row i is often already in the chain
        code = from_m_columns(6, [{0, 1, 2}, {3, 4, 5}, {0, 2, 4}, {1, 3, 5}])
        fallbacks = 0
        for seed in range(300):
            chain = build_chain(code, 1, 3, random.Random(seed))
            check_chain(code, chain, 3)
            fallbacks += chain.fallbacks
        assert fallbacks > 0

    def test_fallback_with_duplicated_columns(self):
        """Duplicated columns of M send the builder through the fallback branch."""
        code = from_m_columns(6, [{0, 1, 2}, {0, 1, 2}, {3, 4, 5}, {3, 4, 5}])
        fallbacks = 0
        for seed in range(200):
            chain = build_chain(code, 1, 3, random.Random(seed))
            check_chain(code, chain, 3)
            assert len(chain.built_in_slots) == 1
            fallbacks += chain.fallbacks
        assert fallbacks > 0

    def test_k_zero_is_one_column(self, sampled_code):
        """A chain with k=0 is one column and reduces to its own support."""
        chain = build_chain(sampled_code, 0, 5, random.Random(0))
        assert len(chain.column_indices) == 1
        assert chain.built_in_slots == ()
        assert reduce(chain).multisupport == tuple(sorted(chain.entries))

    def test_validator_catches_broken_chain(self, sampled_code):
        """Repeated columns and reused slots are both caught by the validator."""
        chain = build_chain(sampled_code, 2, 30, random.Random(1))
        doubled = replace(chain, column_indices=(chain.column_indices[0],) * 3)
        with pytest.raises(InvalidChain):
            check_chain(sampled_code, doubled, 30)
        reused = replace(chain, built_in_slots=(chain.built_in_slots[0], chain.built_in_slots[0]))
        with pytest.raises(InvalidChain):
            check_chain(sampled_code, reused, 30)

    def test_reduce_size(self, sampled_code):
        """Reduction leaves k(r-2)+r sorted coordinates."""
        rng = random.Random(3)
        for k in range(4):
            reduced = reduce(build_chain(sampled_code, k, 40, rng))
            assert len(reduced) == bounds.c_of(3, k)
            assert list(reduced.multisupport) == sorted(reduced.multisupport)


class TestBottleneck:
    def test_example(self):
        """Width and pairs of a two-coordinate example."""
        pairing = bottleneck_pairing([0, 5], [2, 8], 10)
        assert pairing.width == 3
        assert sorted(x for x, _ in pairing.pairs) == [0, 5]
        assert sorted(y for _, y in pairing.pairs) == [2, 8]

    def test_identical(self):
        """Equal multisets pair at width zero."""
        assert bottleneck_pairing([1, 1, 7], [7, 1, 1], 20).width == 0

    def test_empty(self):
        """Empty multisets pair at width zero."""
        assert bottleneck_pairing([], [], 10).width == 0

    def test_wrap_around(self):
        """Distance wraps around the end of the row range."""
        assert bottleneck_pairing([0], [9], 10).width == 1

    def test_symmetric(self):
        """Pairing width does not depend on argument order."""
        rng = random.Random(7)
        for _ in range(100):
            a = [rng.randrange(50) for _ in range(4)]
            b = [rng.randrange(50) for _ in range(4)]
            assert bottleneck_pairing(a, b, 50).width == bottleneck_pairing(b, a, 50).width

    def test_size_mismatch(self):
        """Multisets of different sizes are rejected."""
        with pytest.raises(SizeMismatch):
            bottleneck_pairing([1, 2], [1], 10)

    def test_matches_brute_force(self):
        """Binary-search matching agrees with the factorial oracle on random pairs."""
        rng = random.Random(2024)
        for _ in range(1000):
            m = rng.randint(10, 200)
            c = rng.randint(1, 6)
            a = [rng.randrange(m) for _ in range(c)]
            b = [rng.randrange(m) for _ in range(c)]
            assert bottleneck_pairing(a, b, m).width == brute_force_width(a, b, m)


class TestBuckets:
    def test_finds_close_vectors(self):
        """Close vectors collide and far ones are ignored."""
        a = ReducedVector(multisupport=(10, 50, 90))
        b = ReducedVector(multisupport=(11, 52, 89))
        far = ReducedVector(multisupport=(30, 70, 110))
        hit = find_collision([a, far, b], t=10, m=128)
        assert hit is not None
        first, second, pairing = hit
        assert (first, second) == (a, b)
        assert pairing.width == 2

    def test_every_hit_is_verified(self):
        """Every candidate returned by the index is within width t."""
        rng = random.Random(5)
        index = BucketIndex(t=8, m=100, bucket_offsets=3)
        for _ in range(300):
            v = ReducedVector(multisupport=tuple(sorted(rng.randrange(100) for _ in range(3))))
            for other, pairing in index.probe(v):
                assert pairing.width < 8
                assert bottleneck_pairing(other, v, 100).width == pairing.width
            index.insert(v)
        assert index.size == 300

    def test_identical_vectors_collide(self):
        """Identical reduced vectors from different chains collide at width zero."""
        a = ReducedVector(multisupport=(3, 3, 40))
        b = ReducedVector(multisupport=(3, 3, 40))
        hit = find_collision([a, b], t=5, m=64)
        assert hit is not None
        assert hit[2].width == 0

    def test_single_entry(self):
        """One vector cannot collide with itself."""
        assert find_collision([ReducedVector(multisupport=(1, 2, 3))], t=5, m=64) is None

    def test_width_equal_to_t_is_rejected(self):
        """A pairing of width exactly t is not a collision."""
        pool = [ReducedVector(multisupport=(0, 5)), ReducedVector(multisupport=(2, 8))]
        assert find_collision(pool, t=3, m=10) is None
        assert find_collision(pool, t=4, m=10) is not None

    def test_no_collision(self):
        """Vectors farther apart than t never collide."""
        pool = [ReducedVector(multisupport=(0, 40)), ReducedVector(multisupport=(20, 60))]
        assert find_collision(pool, t=4, m=80) is None


class TestAssembly:
    def test_same_chain_cancels(self, sampled_code):
        """A chain paired with itself cancels to the zero word."""
        rng = random.Random(9)
        chain = build_chain(sampled_code, 1, 40, rng)
        reduced = reduce(chain)
        pairing = bottleneck_pairing(reduced, reduced, sampled_code.m)
        with pytest.raises(DegenerateZero):
            assemble_codeword(sampled_code, chain, chain, pairing, 40)

    def test_wide_pairing_rejected(self, sampled_code):
        """A pairing wider than t fails certification."""
        rng = random.Random(9)
        u = build_chain(sampled_code, 0, 40, rng)
        v = build_chain(sampled_code, 0, 40, rng)
        with pytest.raises(CertificationFailed):
            assemble_codeword(sampled_code, u, v, Pairing(pairs=(), width=40), 40)


class TestSearch:
    def test_certified_result(self, sampled_code):
        """A serial search returns a certified codeword within its bound."""
        config = SearchConfig(k=0, max_chains=2000, seed=1)
        result = search_min_weight(sampled_code, config)
        assert result is not None
        assert syndrome(sampled_code, result.codeword).is_zero()
        assert not result.codeword.is_zero()
        assert result.weight == result.codeword.weight()
        assert result.weight <= bounds.weight_bound(result.t, 0, 3)
        assert result.t == resolve_t(sampled_code, config)
        assert result.chains_used == 2000

    def test_deterministic(self, sampled_code):
        """Same seed, same result."""
        config = SearchConfig(k=1, max_chains=3000, seed=4)
        a = search_min_weight(sampled_code, config)
        b = search_min_weight(sampled_code, config)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.codeword == b.codeword
            assert a.c_runs == b.c_runs

    def test_single_chain_has_no_result(self, sampled_code):
        """A single chain cannot collide with anything."""
        assert search_min_weight(sampled_code, SearchConfig(k=0, max_chains=1)) is None

    def test_parallel(self, sampled_code):
        """The threaded search also returns a certified codeword."""
        result = search_min_weight(sampled_code, SearchConfig(k=0, max_chains=4000, seed=2, threads=3))
        assert result is not None
        assert syndrome(sampled_code, result.codeword).is_zero()
        assert result.chains_used == 4000

    @pytest.mark.slow
    @pytest.mark.parametrize("r", [3, 4, 5])
    def test_soundness_over_codes(self, r):
        """34 codes per column weight with n from 2^9 to 2^13: every result is a certified codeword."""
        hits = 0
        for seed in range(34):
            n = 2 ** (9 + seed % 5)
            code = sample_code(CodeParams(n=n, m=math.ceil(n / 2), r=r), seed=seed)
            for k in (0, 1):
                result = search_min_weight(code, SearchConfig(k=k, max_chains=800, seed=seed))
                if result is None:
                    continue
                hits += 1
                assert syndrome(code, result.codeword).is_zero()
                assert not result.codeword.is_zero()
                assert 0 < result.weight <= 2 * (k + 1) + result.t * (k + 1) * r
        assert hits > 0

    def test_explicit_t_must_exceed_2k(self):
        """An explicit t must exceed 2k."""
        with pytest.raises(ValueError):
            SearchConfig(k=3, t=6)


class TestExactMinDistance:
    def test_small_code(self, small_code):
        """Exact distance of the (7, 4, 3) code."""
        assert exact_min_distance(small_code) == 3

    def test_too_large(self, sampled_code):
        """Codes beyond the oracle's dimension limit are refused."""
        with pytest.raises(TooLarge):
            exact_min_distance(sampled_code)

    def test_search_never_beats_oracle(self, tiny_codes):
        """Twenty codes of dimension at most 20: no search result is lighter than the exact distance."""
        assert len(tiny_codes) >= 20
        for seed, code in enumerate(tiny_codes):
            assert code_dimension(code) <= 20
            d = exact_min_distance(code)
            for k in (0, 1):
                result = search_min_weight(code, SearchConfig(k=k, max_chains=400, seed=seed))
                if result is not None:
                    assert d <= result.weight
