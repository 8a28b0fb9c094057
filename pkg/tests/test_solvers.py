"""Exact solvers vs brute-force oracles, witnesses, feasibility refusals."""

import random

import pytest

from oracles import lforest_bf, nu_bf, path_bf
from tightforest.errors import DomainError, InfeasibleError, ValidationError
from tightforest.hypergraph import (
    complete,
    empty,
    join,
    make,
    perfect_matching,
    random_hypergraph,
)
from tightforest.limits import Limits
from tightforest.solvers import (
    TightPath,
    is_forest_free,
    lforest,
    max_tight_path,
    nu,
    nu_value_at_least,
)


def test_complete_6_3_values():
    h = complete(6, 3)
    assert nu(h)[0] == 2
    assert max_tight_path(h)[0] == 4  # Hamilton tight path
    assert lforest(h)[0] == 4


def test_perfect_matching_values():
    h = perfect_matching(6, 3)
    assert nu(h)[0] == 2
    assert max_tight_path(h)[0] == 1
    assert lforest(h)[0] == 2


def test_two_overlapping_triples():
    # {0,1,2}, {0,1,3} carry a tight path 2,0,1,3
    h = make(4, 3, [(0, 1, 2), (0, 1, 3)])
    assert nu(h)[0] == 1
    assert max_tight_path(h)[0] == 2
    assert lforest(h)[0] == 2


def test_star_graph_r2():
    h = make(5, 2, [(0, 1), (0, 2), (0, 3), (0, 4)])
    assert nu(h)[0] == 1
    assert max_tight_path(h)[0] == 2
    assert lforest(h)[0] == 2


def test_empty_and_single_edge():
    e = empty(5, 3)
    v, w = nu(e)
    assert v == 0 and w.edges == ()
    pv, pw = max_tight_path(e)
    assert pv == 0 and pw is None
    fv, fw = lforest(e)
    assert fv == 0 and fw.paths == ()

    h = make(5, 3, [(1, 2, 4)])
    assert nu(h)[0] == 1
    assert max_tight_path(h)[0] == 1
    assert lforest(h)[0] == 1
    assert lforest(h)[1].paths[0].vertices == (1, 2, 4)


def test_join_star_forest_value():
    # all triples through vertex 0 on 6 vertices: l = 3 (one path reuses 0)
    h = join(complete(1, 3), empty(5, 3))
    assert all(0 in e for e in h.edges)
    assert lforest(h)[0] == lforest_bf(h)
    assert nu(h)[0] == 1


def test_witnesses_validate_on_random_battery():
    rng = random.Random(77)
    for i in range(60):
        r = rng.choice([2, 3, 4])
        n = rng.randint(r, 7)
        p = rng.choice([0.25, 0.5, 0.8])
        h = random_hypergraph(n, r, p, seed=4000 + i)
        mv, mw = nu(h)
        mw.validate(h)
        assert len(mw.edges) == mv
        pv, pw = max_tight_path(h)
        if pw is not None:
            pw.validate(h)
            assert pw.edge_count == pv
        else:
            assert pv == 0
        fv, fw = lforest(h)
        fw.validate(h)
        assert fw.edge_count == fv


def test_values_match_oracles_on_random_battery():
    rng = random.Random(123)
    for i in range(150):
        r = rng.choice([2, 3, 4])
        n = rng.randint(r, 7)
        p = rng.choice([0.2, 0.4, 0.6, 0.85])
        h = random_hypergraph(n, r, p, seed=6000 + i)
        assert nu(h)[0] == nu_bf(h)
        assert lforest(h)[0] == lforest_bf(h)
        assert max_tight_path(h)[0] == path_bf(h)


def test_sandwich_and_span_random():
    rng = random.Random(9)
    for i in range(80):
        r = rng.choice([2, 3])
        n = rng.randint(r, 8)
        h = random_hypergraph(n, r, rng.choice([0.3, 0.6, 0.9]), seed=1700 + i)
        m = nu(h)[0]
        f = lforest(h)[0]
        assert m <= f <= r * m
        if h.num_edges >= 1:
            assert 1 <= f <= h.n - h.r + 1


def test_nu_value_at_least_consistency():
    rng = random.Random(31)
    for i in range(40):
        n = rng.randint(3, 7)
        h = random_hypergraph(n, 3, 0.5, seed=2500 + i)
        m = nu(h)[0]
        for k in range(0, m + 2):
            assert nu_value_at_least(h, k) == (k <= m)


def test_is_forest_free():
    h = complete(6, 3)
    f = lforest(h)[0]
    assert f == 4
    assert is_forest_free(h, 5)
    assert not is_forest_free(h, 4)
    assert not is_forest_free(h, 1)
    with pytest.raises(DomainError):
        is_forest_free(h, 0)


def test_witness_is_lex_least_and_deterministic():
    h = complete(6, 3)
    v1, w1 = lforest(h)
    v2, w2 = lforest(h)
    assert (v1, w1) == (v2, w2)
    mv, mw = nu(h)
    assert mw.edges == ((0, 1, 2), (3, 4, 5))


def test_tight_path_validate_rejects_bad():
    h = make(5, 3, [(0, 1, 2)])
    with pytest.raises(ValidationError):
        TightPath(3, (0, 1)).validate(h)  # shorter than r
    with pytest.raises(ValidationError):
        TightPath(3, (0, 1, 1)).validate(h)  # repeated vertex
    with pytest.raises(ValidationError):
        TightPath(3, (0, 1, 3)).validate(h)  # window not an edge


def test_state_cap_refusal():
    h = empty(25, 3)
    with pytest.raises(InfeasibleError):
        lforest(h)
    with pytest.raises(InfeasibleError):
        max_tight_path(h)
    # the cap is configuration, not policy
    big = Limits(solver_state_cap=1 << 40)
    assert lforest(h, limits=big)[0] == 0


def test_r1_matching():
    # r=1: every vertex an edge, matching picks them all
    h = make(4, 1, [(0,), (1,), (2,), (3,)])
    assert nu(h)[0] == 4
