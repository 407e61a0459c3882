import itertools

import networkx as nx
import pytest

import corpus
from medianforge import (
    CubeComplex,
    Graph,
    ResourceLimitError,
    enumerate_cubes,
    generate,
    hyperplanes,
    is_flag,
    is_hypercube_set,
    maximal_cubes,
    maximal_transverse_families,
    medianness_oracle,
    vertex_link,
    verylocal_check,
)


def product_f_vector(dims):
    """Independent oracle: the cube complex of a grid is a product of paths,
    so its f-vector is the product of the path f-vectors (n, n-1)."""
    import numpy as np

    poly = np.array([1])
    for n in dims:
        poly = np.convolve(poly, np.array([0]))  # placeholder, replaced below
    # f-polynomial of a path with n vertices: n + (n-1) t
    poly = np.array([1])
    for n in dims:
        poly = np.convolve(poly, np.array([n, n - 1]))
    return tuple(int(c) for c in poly)


def test_enumerate_hypercube_f_vector():
    c = enumerate_cubes(generate("hypercube", [3]))
    assert c.f_vector == (8, 12, 6, 1)
    assert c.euler_characteristic() == 1


def test_enumerate_tree_has_no_squares():
    c = enumerate_cubes(generate("random_tree", [15], seed=1))
    assert len(c.f_vector) == 2
    assert c.f_vector == (15, 14)


def test_enumerate_grid_3x3():
    assert enumerate_cubes(generate("grid", [3, 3])).f_vector == (9, 12, 4)


@pytest.mark.parametrize("dims", [[2, 3], [3, 3, 2], [5, 5, 3], [4, 2, 2]])
def test_enumerate_grid_matches_product_formula(dims):
    c = enumerate_cubes(generate("grid", dims))
    assert c.f_vector == product_f_vector(dims)


def test_enumerate_cells_unique_and_sorted():
    c = enumerate_cubes(generate("hypercube", [4]))
    for d, cells in c.cells.items():
        keys = [cell.vertices for cell in cells]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)
        for cell in cells:
            assert cell.dimension == d
            assert len(cell.vertices) == 2**d


def test_enumerate_cell_ceiling():
    with pytest.raises(ResourceLimitError):
        enumerate_cubes(generate("hypercube", [4]), cell_ceiling=10)


def test_cell_ceiling_env_override(monkeypatch):
    monkeypatch.setenv("MEDIANFORGE_CELL_CEILING", "10")
    with pytest.raises(ResourceLimitError):
        enumerate_cubes(generate("hypercube", [4]))


def test_complex_json_shape():
    obj = enumerate_cubes(generate("grid", [3, 3])).to_json_obj()
    assert obj["f_vector"] == [9, 12, 4]
    assert list(obj["cells"]) == ["2"]
    assert obj["cells"]["2"][0] == ["0,0", "0,1", "1,0", "1,1"]


def test_maximal_cubes_hypercube():
    c = enumerate_cubes(generate("hypercube", [3]))
    maximal = maximal_cubes(c)
    assert len(maximal) == 1
    cube, crossing = maximal[0]
    assert cube.dimension == 3
    assert [h.id for h in crossing] == [
        ("000", "001"),
        ("000", "010"),
        ("000", "100"),
    ]


def test_maximal_cubes_tree_are_edges():
    g = generate("random_tree", [12], seed=3)
    maximal = maximal_cubes(enumerate_cubes(g))
    assert sorted(c.vertices for c, _ in maximal) == sorted(g.edges)


def test_maximal_cubes_grid_are_unit_squares():
    c = enumerate_cubes(generate("grid", [3, 3]))
    maximal = maximal_cubes(c)
    assert len(maximal) == 4
    assert all(cube.dimension == 2 for cube, _ in maximal)


def test_maximal_cube_bijection_with_transverse_families():
    for g in (
        generate("hypercube", [4]),
        generate("grid", [4, 3, 2]),
        generate("random_tree", [25], seed=5),
        generate("star", [6]),
    ):
        maximal = maximal_cubes(enumerate_cubes(g))
        families = {frozenset(h.id for h in hs) for _, hs in maximal}
        assert len(families) == len(maximal)  # injective
        expected = {
            frozenset(f) for f in maximal_transverse_families(g)
        }
        assert families == expected
        for cube, hs in maximal:
            assert cube.dimension == len(hs)


def test_is_hypercube_set():
    g = generate("hypercube", [4])
    c = enumerate_cubes(g)
    for d, cells in c.cells.items():
        for cell in cells[:5]:
            assert is_hypercube_set(g, cell.vertices)
    assert not is_hypercube_set(g, g.vertices[:7])
    c6 = generate("cycle", [6])
    assert not is_hypercube_set(c6, c6.vertices)
    k23 = generate("complete_bipartite", [2, 3])
    assert not is_hypercube_set(k23, k23.vertices[:4])
    assert is_hypercube_set(g, ["0000"])


def test_vertex_link_tree_is_isolated_points():
    g = generate("star", [4])
    link = vertex_link(enumerate_cubes(g), "c")
    assert link.vertices == ("l0", "l1", "l2", "l3")
    assert all(len(s) == 1 for s in link.simplices)


def test_vertex_link_hypercube_is_full_simplex():
    c = enumerate_cubes(generate("hypercube", [3]))
    for v in c.base.vertices:
        link = vertex_link(c, v)
        assert frozenset(link.vertices) in link.simplices
        ok, witness = is_flag(link)
        assert ok and witness is None


def test_vertex_link_downward_closed():
    c = enumerate_cubes(generate("grid", [3, 3, 2]))
    link = vertex_link(c, "1,1,0")
    for s in link.simplices:
        for r in range(1, len(s)):
            for sub in itertools.combinations(sorted(s), r):
                assert frozenset(sub) in link.simplices


def boundary_of_cube_complex():
    q3 = generate("hypercube", [3])
    full = enumerate_cubes(q3)
    cells = {d: cs for d, cs in full.cells.items() if d <= 2}
    return CubeComplex(q3, cells, full.f_vector[:3])


def test_boundary_of_three_cube_fails_flag_everywhere():
    bdry = boundary_of_cube_complex()
    for v in bdry.base.vertices:
        ok, witness = is_flag(vertex_link(bdry, v))
        assert not ok
        assert witness == tuple(sorted(bdry.base.neighbors(v)))


def test_is_flag_isolated_points():
    from medianforge import SimplicialLink

    link = SimplicialLink(
        ("x", "y", "z"),
        frozenset({frozenset(["x"]), frozenset(["y"]), frozenset(["z"])}),
    )
    ok, witness = is_flag(link)
    assert ok and witness is None


def test_is_flag_empty_triangle_witness():
    from medianforge import SimplicialLink

    simplices = {frozenset(s) for s in (["x"], ["y"], ["z"])}
    simplices |= {frozenset(p) for p in (["x", "y"], ["y", "z"], ["x", "z"])}
    link = SimplicialLink(("x", "y", "z"), frozenset(simplices))
    ok, witness = is_flag(link)
    assert not ok
    assert witness == ("x", "y", "z")


# -- radius-3 criterion --------------------------------------------------------


def test_verylocal_k23_condition2_fails():
    rep = verylocal_check(generate("complete_bipartite", [2, 3]))
    assert not rep.condition2
    v, a, b, squares = rep.condition2_witness
    assert len(squares) >= 2


def test_verylocal_q3_minus_vertex_condition3_fails_at_antipode():
    rep = verylocal_check(corpus.q3_minus_vertex())
    assert rep.condition2
    assert not rep.condition3
    assert rep.condition3_witness == ("000", ("001", "010", "100"))


def test_verylocal_six_cycle_condition1_no():
    rep = verylocal_check(generate("cycle", [6]))
    assert rep.condition2 and rep.condition3
    assert rep.condition1 == "no"
    assert rep.condition1_witness is not None
    assert sorted(rep.condition1_witness) == sorted(f"v{i}" for i in range(6))


def test_verylocal_tree_all_yes():
    rep = verylocal_check(generate("random_tree", [20], seed=6))
    assert rep.all_yes
    assert rep.condition1_witness is None
    assert rep.condition2_witness is None


def test_verylocal_zero_budget_reports_unknown():
    rep = verylocal_check(generate("hypercube", [2]), contraction_budget=0)
    assert rep.condition1 == "unknown"
    assert not rep.all_yes


def test_verylocal_consistent_with_oracle_on_sample():
    sample = (
        corpus.hypercubes(4)
        + corpus.negative_controls()
        + corpus.random_trees(3)
    )
    for name, g in sample:
        rep = verylocal_check(g)
        verdict = medianness_oracle(g).verdict
        if rep.all_yes:
            assert verdict, name
        if verdict:
            assert rep.condition2 and rep.condition3, name
            assert rep.condition1 != "no", name


def test_euler_characteristic_one_on_median_sample():
    for name, g in corpus.hypercubes(5) + [
        ("g", generate("grid", [4, 3, 2])),
        ("t", generate("random_tree", [30], seed=2)),
    ]:
        assert enumerate_cubes(g).euler_characteristic() == 1, name


def test_cubical_dimension_equals_max_transverse_family():
    for g in (
        generate("hypercube", [4]),
        generate("grid", [3, 3, 3]),
        generate("random_tree", [20], seed=8),
    ):
        c = enumerate_cubes(g)
        families = maximal_transverse_families(g)
        assert c.dimension() == max(len(f) for f in families)
