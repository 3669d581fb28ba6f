import pytest

from nilpairs.fields import GF2, GF3, GF
from nilpairs.matrix import ExactMatrix, jordan_matrix
from nilpairs.partitions import Partition, enumerate_partitions, parse_partition, split_core
from nilpairs.structure import (
    BudgetExceeded,
    candidate_at,
    candidate_count,
    enumerate_candidates,
    free_coordinates,
    is_annihilating_form,
    is_commuting_form,
    matches_annihilating_pattern,
    matches_commuting_pattern,
    sample_candidate,
    sample_nilpotent_candidate,
)


def test_commuting_form_examples():
    mu = Partition([3, 2])
    j = jordan_matrix(mu, GF3)
    assert is_commuting_form(j, mu)
    poly = j.add(j.mul(j)).add(ExactMatrix.identity(GF3, 5))
    assert is_commuting_form(poly, mu)
    bad = ExactMatrix.zeros(GF3, 3, 3).tolists()
    bad[1][0] = 1
    assert not is_commuting_form(ExactMatrix(GF3, bad), Partition([2, 1]))


def test_annihilating_form_examples():
    mu = Partition([3])
    assert is_annihilating_form(ExactMatrix.zeros(GF2, 3, 3), mu)
    assert not is_annihilating_form(jordan_matrix(mu, GF2), mu)  # J^2 != 0
    # the fixture pattern with arbitrary values in the free slots stays annihilating
    mu8 = parse_partition("3,3,2,1^8")
    for seed in range(10):
        assert is_annihilating_form(sample_candidate(mu8, GF3, seed), mu8)


def test_pattern_and_product_predicates_agree():
    for n in range(1, 7):
        for mu in enumerate_partitions(n):
            for seed in range(200):
                a = sample_candidate(mu, GF3, seed)
                assert is_annihilating_form(a, mu)
                assert matches_annihilating_pattern(a, mu)
                if seed < 20:
                    assert is_commuting_form(a, mu)
                    assert matches_commuting_pattern(a, mu)
                if seed >= 20:
                    continue
                # corrupt one off-pattern entry and both predicates must flip
                allowed = set(free_coordinates(mu).positions)
                spot = next(
                    ((i, j) for i in range(n) for j in range(n) if (i, j) not in allowed),
                    None,
                )
                if spot is not None:
                    rows = a.tolists()
                    rows[spot[0]][spot[1]] = 1
                    b = ExactMatrix(GF3, rows)
                    assert not is_annihilating_form(b, mu)
                    assert not matches_annihilating_pattern(b, mu)


def test_annihilating_implies_commuting():
    for n in range(1, 7):
        for mu in enumerate_partitions(n):
            for seed in range(10):
                a = sample_candidate(mu, GF2, seed)
                assert is_annihilating_form(a, mu)
                assert is_commuting_form(a, mu)


def test_free_coordinate_counts():
    assert len(free_coordinates(Partition([2, 1, 1]))) == 9
    assert len(free_coordinates(Partition([1, 1, 1]))) == 9
    assert len(free_coordinates(Partition([3, 2]))) == 4
    for n in range(1, 13):
        for mu in enumerate_partitions(n):
            s = split_core(mu)
            assert len(free_coordinates(mu)) == (len(s.core) + s.ones) ** 2


def test_corner_positions_are_annihilating():
    mu = Partition([3, 2])
    n = mu.n
    for r, c in free_coordinates(mu).positions:
        rows = [[0] * n for _ in range(n)]
        rows[r][c] = 1
        assert is_annihilating_form(ExactMatrix(GF2, rows), mu)


def test_enumerate_counts_and_uniqueness():
    assert candidate_count(Partition([2, 1]), GF2) == 16
    seen = set(enumerate_candidates(Partition([2, 1]), GF2))
    assert len(seen) == 16
    assert candidate_count(Partition([1, 1]), GF2) == 16
    mats = list(enumerate_candidates(Partition([2, 2, 1]), GF3))
    assert len(mats) == 3**9 and len(set(mats)) == 3**9
    for m in mats[:50]:
        assert is_annihilating_form(m, Partition([2, 2, 1]))
    big = set(enumerate_candidates(Partition([2, 1, 1, 1]), GF2))
    assert len(big) == 2**16


def test_enumerate_matches_candidate_at():
    mu = Partition([2, 1])
    for idx, m in enumerate(enumerate_candidates(mu, GF3)):
        assert m == candidate_at(mu, GF3, idx)
        if idx > 200:
            break


def test_no_ones_mu_shapes_via_enumeration():
    # mu with no 1-parts: shapes are exactly (2^i, 1^(n-2i)) for i = 0..k
    mu = Partition([3, 2])
    observed = set()
    for cand in enumerate_candidates(mu, GF2):
        if cand.is_nilpotent():
            observed.add(cand.nilpotent_shape())
    assert observed == {
        Partition([1, 1, 1, 1, 1]),
        Partition([2, 1, 1, 1]),
        Partition([2, 2, 1]),
    }


def test_budget_guard():
    with pytest.raises(BudgetExceeded) as err:
        list(enumerate_candidates(Partition([1] * 5), GF2, budget=1000))
    assert err.value.required == 2**25


def test_sample_determinism():
    mu = Partition([2, 1, 1])
    for seed in (0, 1, 99):
        a = sample_candidate(mu, GF3, seed)
        b = sample_candidate(mu, GF3, seed)
        assert a == b
        assert sample_candidate(mu, GF3, seed, index=4) == sample_candidate(mu, GF3, seed, index=4)
    assert sample_candidate(mu, GF3, 0) != sample_candidate(mu, GF3, 1)


def test_sample_nilpotent_candidates():
    for n in range(1, 9):
        for mu in enumerate_partitions(n):
            for seed in range(5):
                a = sample_nilpotent_candidate(mu, GF(5), seed)
                assert is_annihilating_form(a, mu)
                assert a.is_nilpotent()
                assert sample_nilpotent_candidate(mu, GF(5), seed) == a


def test_nilpotency_iff_a22_nilpotent():
    # structural fact used by the sampler: an S-form matrix is nilpotent
    # exactly when its ones-times-ones block is
    for mu_text in ("2,1,1", "3,2,1,1", "2,2,1,1,1"):
        mu = parse_partition(mu_text)
        m = split_core(mu).ones
        n = mu.n
        for seed in range(60):
            a = sample_candidate(mu, GF2, seed)
            a22 = a.submatrix(n - m, n, n - m, n)
            assert a.is_nilpotent() == a22.is_nilpotent()


def test_sampled_shapes_lie_in_predicted_set():
    # 10^4 seeded GF(3) samples for mu = (2,1,1): nilpotent shapes stay inside
    # the predicted set (cross-module property)
    from nilpairs.census import sampled_shape_census
    from nilpairs.characterize import enumerate_shapes

    mu = Partition([2, 1, 1])
    counts, nilp = sampled_shape_census(mu, GF3, 10000, seed=123)
    assert nilp > 0
    assert set(counts) <= set(enumerate_shapes(mu))
