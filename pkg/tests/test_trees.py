"""Enumeration checks for alternating trees and index-pair classes."""

import cmath
import math

import pytest

from trimat.errors import BudgetError, InputError
from trimat.limitlaws import stieltjes_S
from trimat.trees import (
    DELTA,
    DELTA_HAT,
    NOT_CONTRIBUTING,
    IndexPair,
    PlaneTree,
    classify_index_pair,
    count_alternating_trees,
    count_delta_hat,
    egf_partial_sum,
    is_alternating,
    iter_index_pairs,
    walk_profile,
)


def test_plane_tree_validation():
    PlaneTree(children=((1,), ()), labels=(2, 1))
    with pytest.raises(InputError):
        PlaneTree(children=((1,), ()), labels=(1, 1))
    with pytest.raises(InputError):
        PlaneTree(children=((1,), (0,)), labels=(1, 2))
    with pytest.raises(InputError):
        PlaneTree(children=((), ()), labels=(1, 2))
    with pytest.raises(InputError):
        PlaneTree(children=((1,), ()), labels=(2, 1), root=5)


def test_is_alternating_examples():
    assert is_alternating(PlaneTree(children=((1,), ()), labels=(2, 1)))
    assert is_alternating(PlaneTree(children=((1,), ()), labels=(1, 2)))
    # monotone path 1-2-3 fails, label 2 has neighbors on both sides
    assert not is_alternating(PlaneTree(children=((1,), (2,), ()), labels=(1, 2, 3)))
    assert is_alternating(PlaneTree(children=((1, 2, 3), (), (), ()), labels=(4, 1, 2, 3)))
    assert is_alternating(PlaneTree(children=((1,), (2,), ()), labels=(2, 1, 3)))


def test_count_alternating_trees_power_law():
    for k in range(1, 7):
        assert count_alternating_trees(k) == k**k


def test_count_alternating_trees_k7():
    assert count_alternating_trees(7) == 7**7


def test_count_alternating_trees_bounds():
    with pytest.raises(BudgetError):
        count_alternating_trees(8)
    with pytest.raises(InputError):
        count_alternating_trees(0)


def test_classify_length_six_star_like_pair():
    assert classify_index_pair(((5, 5, 3, 7, 5, 6), (4, 2, 2, 2, 1, 1)), 7) == DELTA_HAT


def test_classify_k1_pairs():
    # j = i ties give delta only; strict dominance with fresh values gives delta-hat
    assert classify_index_pair(((1,), (1,)), 3) == DELTA
    assert classify_index_pair(((2,), (1,)), 3) == DELTA_HAT
    assert classify_index_pair(((1,), (2,)), 3) == NOT_CONTRIBUTING


def test_classify_shared_values_stay_delta():
    # pairwise strict j < i everywhere, yet i and j value sets overlap: the
    # walk tree only carries k values, so the pair must not count as hat
    assert classify_index_pair(((2, 3, 3), (1, 2, 1)), 5) == DELTA
    assert walk_profile(IndexPair((2, 3, 3), (1, 2, 1))) == (4, 3, True)


def test_classify_non_tree_walk():
    # distinct i's and distinct j's make a 4-cycle, every edge hit only once
    assert classify_index_pair(((2, 3), (1, 2)), 3) == NOT_CONTRIBUTING
    assert walk_profile(IndexPair((2, 3), (1, 2))) == (4, 4, False)
    # same walk shape but repeated j collapses it to a path, hence a tree
    assert classify_index_pair(((2, 3), (1, 1)), 3) == DELTA_HAT


def test_classify_validation():
    with pytest.raises(InputError):
        classify_index_pair(((1, 2), (1,)), 3)
    with pytest.raises(InputError):
        classify_index_pair(((4,), (1,)), 3)
    with pytest.raises(InputError):
        classify_index_pair(((0,), (1,)), 3)


def test_count_delta_hat_closed_form():
    for n, k in [(3, 1), (4, 2), (5, 2), (5, 3)]:
        enumerated, closed = count_delta_hat(n, k)
        assert enumerated == closed == math.comb(n, k + 1) * k**k


def test_count_delta_hat_budget():
    with pytest.raises(BudgetError):
        count_delta_hat(100, 5)


def test_delta_pairs_double_traversal():
    # classifier-independent recheck: every delta walk visits k+1 vertices
    # and k edges, each edge exactly twice
    n, k = 4, 2
    for pair in iter_index_pairs(n, k):
        if classify_index_pair(pair, n) in (DELTA, DELTA_HAT):
            vertices, edges, twice = walk_profile(pair)
            assert vertices == k + 1
            assert edges == k
            assert twice


def test_delta_hat_bijection_with_trees():
    # hat pairs using the full value set {1..k+1} biject with alternating trees
    for k in (1, 2, 3):
        n = k + 1
        full = set(range(1, k + 2))
        count = sum(
            1
            for pair in iter_index_pairs(n, k)
            if classify_index_pair(pair, n) == DELTA_HAT and set(pair.i) | set(pair.j) == full
        )
        assert count == count_alternating_trees(k) == k**k


def test_egf_zero():
    assert egf_partial_sum(0.0, 10) == 0j


def test_egf_functional_equation():
    L = egf_partial_sum(0.2, 40)
    assert abs((L - 1) + cmath.exp(0.2 / (L - 1))) <= 1e-8


def test_egf_matches_stieltjes():
    assert abs(-egf_partial_sum(0.1, 60).real - stieltjes_S(10.0)) <= 1e-10


def test_egf_validation():
    with pytest.raises(InputError):
        egf_partial_sum(0.5, 10)
    with pytest.raises(InputError):
        egf_partial_sum(0.1, 0)
