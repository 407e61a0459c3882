"""Hyperplanes of a median graph: edge classes, halfspaces, separation.

An edge class is the transitive closure of the relation "opposite sides of
a 4-cycle".  In a median graph, removing a class leaves exactly two convex
components (the halfspaces); anything else raises :class:`HalfspaceError`,
which doubles as a cheap non-medianness signal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Graph, interval
from .errors import HalfspaceError, InputError, InternalError


@dataclass(frozen=True)
class Hyperplane:
    """An edge class together with its two halfspaces.

    ``id`` is the lexicographically least member edge.  ``side_a`` is the
    halfspace containing ``id[0]``, ``side_b`` the one containing ``id[1]``.
    """

    id: tuple
    edges: frozenset
    side_a: frozenset
    side_b: frozenset

    def side_of(self, v):
        if v in self.side_a:
            return self.side_a
        if v in self.side_b:
            return self.side_b
        raise InputError(f"unknown vertex {v!r}")

    def separates(self, x, y):
        return self.side_of(x) is not self.side_of(y)

    def __repr__(self):
        return f"Hyperplane(id={self.id}, {len(self.edges)} edges)"


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def _edge_key(u, v):
    return (u, v) if u < v else (v, u)


def hyperplanes(g: Graph):
    """All hyperplanes of ``g``, sorted by id.  Cached on the graph."""
    if g._hyperplanes is not None:
        return g._hyperplanes

    edge_index = {e: i for i, e in enumerate(g.edges)}
    uf = _UnionFind(len(g.edges))
    # squares u-a-w-b: opposite edge pairs {ua, wb} and {aw, bu}
    for u, w in itertools.combinations(g.vertices, 2):
        common = sorted(set(g.neighbors(u)) & set(g.neighbors(w)))
        for a, b in itertools.combinations(common, 2):
            uf.union(edge_index[_edge_key(u, a)], edge_index[_edge_key(w, b)])
            uf.union(edge_index[_edge_key(a, w)], edge_index[_edge_key(b, u)])

    classes = {}
    for e, i in edge_index.items():
        classes.setdefault(uf.find(i), []).append(e)

    result = []
    for members in classes.values():
        member_set = set(members)
        comp = _two_components(g, member_set)
        cls_id = min(members)
        for u, v in members:
            if comp[u] == comp[v]:
                raise HalfspaceError(
                    f"edge class {cls_id} has a member inside one halfspace; "
                    "graph is not median"
                )
        side_a = frozenset(v for v in g.vertices if comp[v] == comp[cls_id[0]])
        side_b = frozenset(v for v in g.vertices if comp[v] != comp[cls_id[0]])
        result.append(
            Hyperplane(cls_id, frozenset(member_set), side_a, side_b)
        )
    result.sort(key=lambda h: h.id)
    g._hyperplanes = tuple(result)
    g._edge_class = {e: h for h in result for e in h.edges}
    return g._hyperplanes


def _two_components(g, removed):
    """Component labels of g minus ``removed`` edges; exactly two or error."""
    comp = {}
    label = 0
    for start in g.vertices:
        if start in comp:
            continue
        if label == 2:
            raise HalfspaceError(
                f"removing an edge class leaves more than two components; "
                "graph is not median"
            )
        comp[start] = label
        stack = [start]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if v in comp or _edge_key(u, v) in removed:
                    continue
                comp[v] = label
                stack.append(v)
        label += 1
    if label != 2:
        raise HalfspaceError(
            "removing an edge class leaves one component; graph is not median"
        )
    return comp


def edge_class_map(g: Graph):
    """Map from each edge to its hyperplane."""
    hyperplanes(g)
    return g._edge_class


def separating(g: Graph, x, y):
    """Hyperplanes with ``x`` and ``y`` in different halfspaces, by id."""
    g.require_vertex(x)
    g.require_vertex(y)
    return [h for h in hyperplanes(g) if h.separates(x, y)]


def is_geodesic(g: Graph, path) -> bool:
    """True iff ``path`` crosses no hyperplane twice.

    For a median graph this is equivalent to the path having length
    d(first, last).  Consecutive entries must be adjacent.
    """
    path = list(path)
    if not path:
        raise InputError("empty path")
    for v in path:
        g.require_vertex(v)
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            raise InputError(f"({u}, {v}) is not an edge; input is not a path")
    cls = edge_class_map(g)
    seen = set()
    for u, v in zip(path, path[1:]):
        h = cls[_edge_key(u, v)]
        if h.id in seen:
            return False
        seen.add(h.id)
    return True


def convex_hull(g: Graph, s):
    """Intersection of all halfspaces containing ``s``."""
    s = set(s)
    if not s:
        raise InputError("convex hull of an empty set")
    for v in s:
        g.require_vertex(v)
    hull = set(g.vertices)
    for h in hyperplanes(g):
        if s <= h.side_a:
            hull &= h.side_a
        elif s <= h.side_b:
            hull &= h.side_b
    return frozenset(hull)


def is_convex(g: Graph, s) -> bool:
    """Closed under intervals (the defining property of convexity)."""
    s = set(s)
    for x, y in itertools.combinations(sorted(s), 2):
        if not interval(g, x, y) <= s:
            return False
    return True


def gate(g: Graph, s, v):
    """Nearest-point projection of ``v`` to the convex set ``s``.

    Defined by exhaustive minimisation; in a median graph the minimiser over
    a convex set is unique, and non-uniqueness raises :class:`InternalError`.
    """
    s = sorted(set(s))
    if not s:
        raise InputError("gate to an empty set")
    D = g.distance_matrix()
    iv = g.index(v)
    dists = [(int(D[iv, g.index(u)]), u) for u in s]
    best = min(d for d, _ in dists)
    winners = [u for d, u in dists if d == best]
    if len(winners) != 1:
        raise InternalError(
            f"gate of {v!r} is not unique ({winners}); set is not convex "
            "or graph is not median"
        )
    return winners[0]


def transverse(h1: Hyperplane, h2: Hyperplane) -> bool:
    """All four pairwise halfspace intersections are nonempty."""
    return not (
        h1.side_a.isdisjoint(h2.side_a)
        or h1.side_a.isdisjoint(h2.side_b)
        or h1.side_b.isdisjoint(h2.side_a)
        or h1.side_b.isdisjoint(h2.side_b)
    )


@dataclass(frozen=True)
class FacingTriple:
    """Three hyperplanes with pairwise-disjoint halfspace choices.

    ``sides`` holds the chosen halfspace of each hyperplane (the
    certificate), ``labels`` the matching 'a'/'b' tags.
    """

    hyperplanes: tuple
    sides: tuple
    labels: tuple


def facing_triple(g: Graph):
    """First facing triple in lexicographic order, or None.

    The certificate is the lexicographically least valid side assignment
    ('a' before 'b' per hyperplane, hyperplanes ordered by id).
    """
    hps = hyperplanes(g)
    sides = {(i, "a"): h.side_a for i, h in enumerate(hps)}
    sides.update({(i, "b"): h.side_b for i, h in enumerate(hps)})

    def pair_ok(i, si, j, sj):
        return sides[i, si].isdisjoint(sides[j, sj])

    # pairs admitting at least one disjoint assignment
    good_pairs = {}
    for i, j in itertools.combinations(range(len(hps)), 2):
        opts = [
            (si, sj)
            for si in "ab"
            for sj in "ab"
            if pair_ok(i, si, j, sj)
        ]
        if opts:
            good_pairs[i, j] = set(opts)

    for i, j, k in itertools.combinations(range(len(hps)), 3):
        if (i, j) not in good_pairs or (i, k) not in good_pairs:
            continue
        if (j, k) not in good_pairs:
            continue
        for si, sj, sk in itertools.product("ab", repeat=3):
            if (
                (si, sj) in good_pairs[i, j]
                and (si, sk) in good_pairs[i, k]
                and (sj, sk) in good_pairs[j, k]
            ):
                return FacingTriple(
                    (hps[i], hps[j], hps[k]),
                    (sides[i, si], sides[j, sj], sides[k, sk]),
                    (si, sj, sk),
                )
    return None


@dataclass(frozen=True)
class EmbeddingTable:
    """Isometric 0/1 coordinates of a median graph in the Hamming cube.

    Bit j of a vertex is 1 iff the vertex lies in the halfspace of
    hyperplane j not containing the basepoint, so the basepoint maps to the
    zero vector and Hamming distance equals graph distance.
    """

    basepoint: str
    hyperplanes: tuple
    coordinates: dict

    def bits(self, v):
        return "".join(str(b) for b in self.coordinates[v])


def canonical_embedding(g: Graph, o) -> EmbeddingTable:
    """Embed ``g`` into the Hamming cube over its hyperplanes, based at ``o``."""
    g.require_vertex(o)
    hps = hyperplanes(g)
    coords = {}
    zero_sides = [h.side_of(o) for h in hps]
    for v in g.vertices:
        coords[v] = tuple(
            0 if v in zero_sides[j] else 1 for j in range(len(hps))
        )
    table = EmbeddingTable(o, hps, coords)
    _check_isometry(g, table)
    return table


def _check_isometry(g, table):
    n = len(g.vertices)
    k = len(table.hyperplanes)
    C = np.array([table.coordinates[v] for v in g.vertices], dtype=np.int32)
    if k == 0:
        ham = np.zeros((n, n), dtype=np.int32)
    else:
        ham = C @ (1 - C).T + (1 - C) @ C.T
    if not np.array_equal(ham, g.distance_matrix()):
        raise HalfspaceError(
            "canonical embedding is not isometric; graph is not median"
        )
