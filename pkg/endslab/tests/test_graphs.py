#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

from unittest.mock import patch
import pytest

from endslab import graphs
from endslab import groups
from endslab.common import ArgumentError, BallOverflowError, GroupValidationError
from endslab.common import generator_name, generator_names, worker_count
from endslab.words import inverse_word, parse_word, symbols_for, word_key


@pytest.mark.parametrize(
    "oracle,R,sizes",
    [
        (groups.FreeGroup(2), 3, [1, 4, 12, 36]),
        (groups.FreeAbelianGroup(1), 3, [1, 2, 2, 2]),
        (groups.FreeAbelianGroup(2), 3, [1, 4, 8, 12]),
        (groups.cyclic(3), 4, [1, 2, 0, 0, 0]),
    ],
)
def test_build_ball_sphere_sizes(oracle, R, sizes):
    ball = graphs.build_ball(oracle, R)
    assert ball.sphere_sizes() == sizes
    assert len(ball) == sum(sizes)


def test_build_ball_geodesics():
    F = groups.FreeGroup(2)
    ball = graphs.build_ball(F, 3)
    for i, v in enumerate(ball.vertices):
        word = ball.geodesic_word(i)
        assert len(word) == ball.radius[i]
        assert F.read(word) == v
        assert ball.norm(v) == ball.radius[i]
    assert ball.norm(F.canonical(parse_word("aaaa", 2))) is None


def test_build_ball_spheres_are_sorted():
    ball = graphs.build_ball(groups.FreeAbelianGroup(2), 4)
    for r in range(5):
        sphere = [ball.vertices[i] for i in ball.sphere(r)]
        assert sphere == sorted(sphere)


def test_build_ball_adjacency_is_symmetric():
    ball = graphs.build_ball(groups.FreeGroup(2), 3)
    for i in range(len(ball)):
        for j in ball.neighbor_indices(i):
            assert i in ball.neighbor_indices(j)
            assert abs(ball.radius[i] - ball.radius[j]) <= 1


def test_build_ball_overflow():
    with pytest.raises(BallOverflowError) as e:
        graphs.build_ball(groups.FreeGroup(2), 5, budget=100)
    assert e.value.radius == 4
    assert e.value.budget == 100


def test_build_ball_negative_radius():
    with pytest.raises(ArgumentError):
        graphs.build_ball(groups.FreeGroup(2), -1)


@patch("endslab.graphs.PARALLEL_THRESHOLD", 1)
def test_build_ball_does_not_depend_on_workers():
    oracle = groups.ProductGroup(groups.FreeGroup(2), groups.FreeAbelianGroup(1))
    single = graphs.build_ball(oracle, 4, workers=1)
    parallel = graphs.build_ball(oracle, 4, workers=4)
    assert single.vertices == parallel.vertices
    assert single.adjacency == parallel.adjacency


@patch.dict("os.environ", {"ENDS_LAB_THREADS": "3"})
@patch("endslab.graphs.ThreadPoolExecutor")
def test_build_ball_worker_count_from_env(mock_executor):
    graphs.build_ball(groups.FreeAbelianGroup(1), 2)
    mock_executor.assert_called_once_with(max_workers=3)


def test_subgroup_automaton_membership():
    aut = graphs.subgroup_automaton([parse_word("a", 2), parse_word("baB", 2)], 2)
    assert aut.states == 2
    assert graphs.membership(aut, parse_word("aaA", 2))
    assert graphs.membership(aut, parse_word("baaBa", 2))
    assert graphs.membership(aut, parse_word("", 2))
    assert not graphs.membership(aut, parse_word("b", 2))
    assert not graphs.membership(aut, parse_word("ba", 2))


def test_fold_is_idempotent():
    aut = graphs.subgroup_automaton([parse_word("ab", 2), parse_word("ba", 2), parse_word("aab", 2)], 2)
    assert graphs.fold(graphs.automaton_edges(aut), aut.base, 2) == aut


def test_fold_is_inverse_closed():
    aut = graphs.subgroup_automaton([parse_word("aBA", 2), parse_word("bb", 2)], 2)
    for (q, s), t in aut.transitions.items():
        assert aut.target(t, s.inverse()) == q


def test_free_coset_oracle():
    aut = graphs.subgroup_automaton([parse_word("a", 2)], 2)
    K = graphs.free_coset_oracle(aut)
    assert K.coset_id(parse_word("aaa", 2)) == K.root
    assert K.coset_id(parse_word("b", 2)) != K.root
    assert K.coset_id(parse_word("ab", 2)) == K.coset_id(parse_word("b", 2))
    assert K.coset_id(parse_word("abA", 2)) != K.coset_id(parse_word("b", 2))
    assert K.format_vertex(K.coset_id(parse_word("ab", 2))) == "K0.b"
    assert graphs.build_ball(K, 3).sphere_sizes() == [1, 2, 6, 18]


def test_free_coset_oracle_finite_index():
    # <a^2, b, aba^-1> has index 2
    aut = graphs.subgroup_automaton([parse_word("aa", 2), parse_word("b", 2), parse_word("abA", 2)], 2)
    ball = graphs.build_ball(graphs.free_coset_oracle(aut), 4)
    assert ball.sphere_sizes() == [1, 1, 0, 0, 0]


@pytest.mark.parametrize(
    "basis,index",
    [
        ([(1, 0)], None),
        ([(2, 1), (0, 3)], 6),
        ([(1, 1), (1, -1)], 2),
        ([(2, 0), (4, 0), (0, 1)], 2),
    ],
)
def test_lattice_coset_index(basis, index):
    assert graphs.lattice_coset_oracle(2, basis).index() == index


def test_lattice_coset_oracle():
    K = graphs.lattice_coset_oracle(2, [(1, 0)])
    assert K.coset_id(parse_word("aab", 2)) == K.coset_id(parse_word("b", 2))
    assert graphs.build_ball(K, 3).sphere_sizes() == [1, 2, 2, 2]
    finite = graphs.build_ball(graphs.lattice_coset_oracle(2, [(2, 1), (0, 3)]), 6)
    assert len(finite) == 6


def test_lattice_coset_oracle_bad_basis():
    with pytest.raises(GroupValidationError):
        graphs.lattice_coset_oracle(2, [(1, 0, 0)])


def test_ball_to_dot():
    Z = groups.FreeAbelianGroup(1)
    dot = graphs.ball_to_dot(graphs.build_ball(Z, 2), Z)
    assert dot.startswith('digraph "Z" {')
    assert dot.count("->") == 4
    assert '[label="a"]' in dot


def test_ball_adjacency():
    Z2 = groups.FreeAbelianGroup(2)
    data = graphs.ball_adjacency(graphs.build_ball(Z2, 1), Z2)
    assert data["generators"] == ["a", "b"]
    assert len(data["vertices"]) == 5
    # (-1,0)->(0,0), (0,-1)->(0,0), (0,0)->(1,0), (0,0)->(0,1)
    assert len(data["edges"]) == 4
    assert data["vertices"][0]["label"] == "1"


@pytest.mark.parametrize(
    "env,count",
    [
        ({"ENDS_LAB_THREADS": "2"}, 2),
        ({"ENDS_LAB_THREADS": "zero"}, 1),
        ({"ENDS_LAB_THREADS": "-3"}, 1),
    ],
)
def test_worker_count(env, count):
    assert worker_count(env) == count


def test_worker_count_defaults_to_cpus():
    assert worker_count({}) >= 1


def test_generator_names():
    assert generator_names(3) == ("a", "b", "c")
    assert generator_name(26) == "g26"


def _reduced_words(generator_count, max_length):
    words = {()}
    frontier = [()]
    for _ in range(max_length):
        frontier = [w + (s,) for w in frontier for s in symbols_for(generator_count) if not w or w[-1] != s.inverse()]
        words.update(frontier)
    return sorted(words, key=word_key)


@pytest.mark.parametrize("subgroup", [["a"], ["aa", "b"], ["a", "baB"]])
def test_free_coset_oracle_matches_membership(subgroup):
    """
    Kw1 = Kw2 exactly when w1 w2^-1 lies in K
    """
    aut = graphs.subgroup_automaton([parse_word(w, 2) for w in subgroup], 2)
    K = graphs.free_coset_oracle(aut)
    words = _reduced_words(2, 4)
    ids = [K.coset_id(w) for w in words]
    for w1, id1 in zip(words, ids):
        for w2, id2 in zip(words, ids):
            assert (id1 == id2) == graphs.membership(aut, w1 + inverse_word(w2))
