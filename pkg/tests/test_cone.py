import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mobopc.cone import (
    PreferenceTuple,
    build_basis,
    canonical_vectors,
    in_s_perp,
    parse_preference,
    satisfies_preference,
)
from mobopc.errors import ContractError
from oracles import cone_feasible, order_polytope_grid


def all_tuples(m):
    for k in range(2, m + 1):
        yield from itertools.permutations(range(m), k)


def test_parse_forms():
    assert parse_preference("0>1>2", 3).indices == (0, 1, 2)
    assert parse_preference("2, 0", 3).indices == (2, 0)
    assert parse_preference([1, 0], 2).indices == (1, 0)
    assert str(parse_preference("0 > 2", 3)) == "0>2"


@pytest.mark.parametrize("bad", ["0>0", "0", "0>3", "a>b", [-1, 0]])
def test_parse_rejects(bad):
    with pytest.raises(ContractError):
        parse_preference(bad, 3)


def test_order_puts_unconstrained_last():
    assert PreferenceTuple((2, 0), 4).order == (2, 0, 1, 3)


@pytest.mark.parametrize("m", range(2, 7))
def test_vectors_unit_norm(m):
    for q in range(1, m):
        normals, gens = canonical_vectors(m, q)
        np.testing.assert_allclose(np.linalg.norm(normals, axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(np.linalg.norm(gens, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("m", range(2, 6))
def test_generators_lie_in_cone_and_are_dual(m):
    for q in range(1, m):
        normals, gens = canonical_vectors(m, q)
        prod = normals @ gens.T
        assert np.all(prod >= -1e-12)
        off = prod - np.diag(np.diag(prod))
        assert np.max(np.abs(off)) < 1e-12
        assert np.all(np.diag(prod) > 0)


def test_schaffer_like_vectors():
    basis = build_basis(parse_preference("0>1", 2))
    # |d f0| < |d f1| with opposite signs: some ordered weights cancel it
    assert in_s_perp(basis, np.array([1.0, -3.0]))
    # |d f0| > |d f1|: cancelling needs s1 > s0
    assert not in_s_perp(basis, np.array([3.0, -1.0]))
    # equal magnitudes: s0 = s1 works exactly
    assert in_s_perp(basis, np.array([2.0, -2.0]))
    # same sign: never cancels
    assert not in_s_perp(basis, np.array([1.0, 2.0]))
    assert in_s_perp(basis, np.zeros(2))


def test_reversed_tuple_flips_answer():
    fwd = build_basis(parse_preference("0>1", 2))
    rev = build_basis(parse_preference("1>0", 2))
    v = np.array([3.0, -1.0])
    assert not in_s_perp(fwd, v)
    assert in_s_perp(rev, v)


def test_user_permutation_matches_reordered_canonical():
    rng = np.random.default_rng(0)
    pref = parse_preference("2>0", 3)
    basis = build_basis(pref)
    canon = build_basis(parse_preference("0>1", 3))
    perm = list(pref.order)
    for _ in range(200):
        v = rng.normal(size=3)
        assert in_s_perp(basis, v) == in_s_perp(canon, v[perm])


@pytest.mark.parametrize("m", [2, 3, 4])
def test_agrees_with_polytope_grid_for_every_tuple(m):
    rng = np.random.default_rng(m)
    vs = rng.normal(size=(300, m))
    for idx in all_tuples(m):
        grid = order_polytope_grid(m, idx, 2)
        basis = build_basis(PreferenceTuple(idx, m))
        for v in vs:
            assert in_s_perp(basis, v) == cone_feasible(grid, v, 1e-9 * np.linalg.norm(v))


def test_exactly_orthogonal_to_extreme_direction_counts():
    basis = build_basis(parse_preference("0>1>2", 3))
    for g in basis.generators:
        v = np.cross(g, np.array([0.3, 0.5, 0.7]))
        assert in_s_perp(basis, v)


def test_satisfies_preference_requires_every_axis():
    basis = build_basis(parse_preference("0>1", 2))
    assert satisfies_preference(np.array([[1.0, -2.0], [0.5, -0.6]]), basis)
    assert not satisfies_preference(np.array([[1.0, -2.0], [0.5, 0.6]]), basis)
    with pytest.raises(ContractError):
        satisfies_preference(np.ones((2, 3)), basis)


@settings(max_examples=200, deadline=None)
@given(
    v=st.lists(st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False), min_size=3, max_size=3),
    scale=st.floats(1e-3, 1e3),
)
def test_scale_invariant(v, scale):
    basis = build_basis(parse_preference("1>2", 3))
    v = np.array(v)
    # underflow would change the direction, not just the length
    assume(np.all((v == 0) | (np.abs(scale * v) >= np.finfo(float).tiny)))
    assert in_s_perp(basis, v) == in_s_perp(basis, scale * v)
    assert in_s_perp(basis, v) == in_s_perp(basis, -v)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_weaker_preference_is_implied(seed):
    # (0,1,2) implies the cone is smaller than for (0,1), so S-perp shrinks
    rng = np.random.default_rng(seed)
    v = rng.normal(size=3)
    strong = build_basis(parse_preference("0>1>2", 3))
    weak = build_basis(parse_preference("0>1", 3))
    if in_s_perp(strong, v):
        assert in_s_perp(weak, v)
