import itertools
import random

import networkx as nx
import numpy as np
import pytest

import corpus
from medianforge import (
    Graph,
    HalfspaceError,
    InputError,
    InternalError,
    canonical_embedding,
    convex_hull,
    facing_triple,
    gate,
    generate,
    hyperplanes,
    is_convex,
    is_geodesic,
    separating,
    transverse,
)


def path_abc():
    return Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])


def test_tree_has_singleton_classes():
    g = generate("random_tree", [12], seed=0)
    hps = hyperplanes(g)
    assert len(hps) == g.num_edges
    assert all(len(h.edges) == 1 for h in hps)


def test_hypercube_three_classes_of_four():
    hps = hyperplanes(generate("hypercube", [3]))
    assert len(hps) == 3
    assert [len(h.edges) for h in hps] == [4, 4, 4]


def test_grid_3x3_has_four_hyperplanes():
    assert len(hyperplanes(generate("grid", [3, 3]))) == 4


def test_classes_partition_edges_and_halfspaces_partition_vertices():
    g = generate("grid", [4, 3])
    hps = hyperplanes(g)
    seen = [e for h in hps for e in h.edges]
    assert sorted(seen) == sorted(g.edges)
    for h in hps:
        assert h.side_a | h.side_b == frozenset(g.vertices)
        assert not h.side_a & h.side_b
        assert h.side_a and h.side_b
        assert h.id[0] in h.side_a and h.id[1] in h.side_b


def test_non_median_inputs_raise_halfspace_error():
    with pytest.raises(HalfspaceError):
        hyperplanes(generate("cycle", [6]))
    with pytest.raises(HalfspaceError):
        hyperplanes(generate("complete_bipartite", [2, 3]))


def test_separating_degenerate_pair_is_empty():
    g = generate("hypercube", [3])
    assert separating(g, "010", "010") == []


def test_separating_antipodal_hypercube():
    g = generate("hypercube", [3])
    assert len(separating(g, "000", "111")) == 3


def test_separating_grid_pair_matches_distance():
    g = generate("grid", [3, 3])
    G = nx.Graph(list(g.edges))
    assert nx.shortest_path_length(G, "0,0", "2,1") == 3
    assert len(separating(g, "0,0", "2,1")) == 3


def separation_count_matrix(g):
    hps = hyperplanes(g)
    H = np.array(
        [[1 if v in h.side_a else 0 for v in g.vertices] for h in hps],
        dtype=np.int32,
    )
    return H.T @ (1 - H) + (1 - H).T @ H


@pytest.mark.parametrize(
    "maker",
    [
        lambda: generate("hypercube", [4]),
        lambda: generate("grid", [4, 3, 2]),
        lambda: generate("random_tree", [60], seed=9),
    ],
)
def test_separation_count_equals_distance_everywhere(maker):
    g = maker()
    assert np.array_equal(separation_count_matrix(g), g.distance_matrix())


def test_is_geodesic_single_edge_and_backtrack():
    g = path_abc()
    assert is_geodesic(g, ["a", "b"]) is True
    assert is_geodesic(g, ["a", "b", "a"]) is False


def test_is_geodesic_monotone_staircase():
    g = generate("grid", [3, 3])
    assert is_geodesic(g, ["0,0", "0,1", "1,1", "1,2", "2,2"]) is True


def test_is_geodesic_rejects_non_path():
    g = path_abc()
    with pytest.raises(InputError):
        is_geodesic(g, ["a", "c"])
    with pytest.raises(InputError):
        is_geodesic(g, [])


@pytest.mark.parametrize("seed", range(4))
def test_geodesic_iff_length_equals_distance(seed):
    rng = random.Random(seed)
    g = generate("grid", [4, 4])
    for _ in range(30):
        walk = [rng.choice(g.vertices)]
        for _ in range(rng.randint(1, 7)):
            walk.append(rng.choice(g.neighbors(walk[-1])))
        expected = g.distance(walk[0], walk[-1]) == len(walk) - 1
        assert is_geodesic(g, walk) == expected


def test_convex_hull_examples():
    g = generate("hypercube", [3])
    assert convex_hull(g, ["010"]) == {"010"}
    assert convex_hull(g, ["000", "001"]) == {"000", "001"}
    assert convex_hull(g, ["000", "111"]) == frozenset(g.vertices)


def test_convex_hull_contains_input_and_is_convex():
    g = generate("grid", [3, 3, 2])
    rng = random.Random(3)
    for _ in range(10):
        s = {rng.choice(g.vertices) for _ in range(3)}
        hull = convex_hull(g, s)
        assert s <= hull
        assert is_convex(g, hull)


def test_convex_hull_empty_input():
    with pytest.raises(InputError):
        convex_hull(path_abc(), [])


def test_halfspaces_are_convex():
    for g in (generate("hypercube", [4]), generate("grid", [4, 3])):
        for h in hyperplanes(g):
            assert convex_hull(g, h.side_a) == h.side_a
            assert convex_hull(g, h.side_b) == h.side_b


def test_gate_unique_nearest_point():
    g = generate("grid", [4, 4])
    hull = convex_hull(g, ["1,1", "2,2"])
    for v in g.vertices:
        p = gate(g, hull, v)
        dmin = min(g.distance(v, u) for u in hull)
        assert g.distance(v, p) == dmin


def test_gate_tie_raises_internal_error():
    g = generate("cycle", [4])
    with pytest.raises(InternalError):
        gate(g, ["v1", "v3"], "v0")


def test_transversality_symmetric_and_correct():
    g = generate("grid", [3, 3])
    hps = hyperplanes(g)
    for h1, h2 in itertools.combinations(hps, 2):
        assert transverse(h1, h2) == transverse(h2, h1)
    q3 = generate("hypercube", [3])
    for h1, h2 in itertools.combinations(hyperplanes(q3), 2):
        assert transverse(h1, h2)


def test_facing_triple_star():
    ft = facing_triple(generate("star", [3]))
    assert ft is not None
    assert [sorted(s) for s in ft.sides] == [["l0"], ["l1"], ["l2"]]
    for s1, s2 in itertools.combinations(ft.sides, 2):
        assert s1.isdisjoint(s2)


def test_facing_triple_none_on_hypercube_and_path():
    assert facing_triple(generate("hypercube", [3])) is None
    assert facing_triple(generate("grid", [4])) is None


def test_facing_triple_certificate_sides_belong_to_hyperplanes():
    g = generate("random_tree", [15], seed=4)
    ft = facing_triple(g)
    if ft is not None:
        for h, side, label in zip(ft.hyperplanes, ft.sides, ft.labels):
            assert side == (h.side_a if label == "a" else h.side_b)


def test_canonical_embedding_path():
    g = path_abc()
    table = canonical_embedding(g, "a")
    assert {v: table.bits(v) for v in g.vertices} == {
        "a": "00",
        "b": "10",
        "c": "11",
    }


def test_canonical_embedding_basepoint_is_zero():
    g = generate("grid", [3, 2])
    table = canonical_embedding(g, "1,1")
    assert set(table.bits("1,1")) == {"0"}


def test_canonical_embedding_hypercube_is_relabelling():
    g = generate("hypercube", [3])
    table = canonical_embedding(g, "000")
    coords = {v: table.coordinates[v] for v in g.vertices}
    assert len(set(coords.values())) == 8
    # bits realise the hypercube labels up to column order
    for perm in itertools.permutations(range(3)):
        if all(
            "".join(str(coords[v][j]) for j in perm) == v for v in g.vertices
        ):
            break
    else:
        pytest.fail("no column order matches the hypercube labels")


def test_canonical_embedding_hamming_distance_is_graph_distance():
    g = generate("grid", [3, 3, 2])
    table = canonical_embedding(g, g.vertices[0])
    G = nx.Graph(list(g.edges))
    for x, y in itertools.combinations(g.vertices, 2):
        ham = sum(
            a != b for a, b in zip(table.coordinates[x], table.coordinates[y])
        )
        assert ham == nx.shortest_path_length(G, x, y)


def test_canonical_embedding_unknown_basepoint():
    with pytest.raises(InputError):
        canonical_embedding(path_abc(), "zz")
