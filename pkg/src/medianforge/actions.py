"""Finite group actions on median graphs.

Groups are handled through generating sets of validated automorphisms; the
group itself is never enumerated.  The central operation is
:func:`invariant_cube`: restrict to the convex hull of one orbit, intersect
the larger halfspaces of all unbalanced hyperplanes, and return the
resulting cube, which is setwise fixed by every generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import Graph
from .cubes import Cube, is_hypercube_set
from .errors import (
    InputError,
    InternalError,
    NotAdjacencyPreservingError,
    NotBijectiveError,
)
from .hyperplanes import convex_hull, hyperplanes


class Automorphism:
    """A validated adjacency-preserving bijection of a graph's vertices."""

    def __init__(self, graph, mapping):
        self.graph = graph
        self.mapping = dict(mapping)
        self._key = tuple(self.mapping[v] for v in graph.vertices)

    def __call__(self, v):
        return self.mapping[v]

    def apply_set(self, vs):
        return frozenset(self.mapping[v] for v in vs)

    def inverse(self):
        return Automorphism(self.graph, {w: v for v, w in self.mapping.items()})

    def compose(self, other):
        """self after other."""
        return Automorphism(
            self.graph, {v: self.mapping[other.mapping[v]] for v in self.graph.vertices}
        )

    def is_identity(self):
        return all(v == w for v, w in self.mapping.items())

    @classmethod
    def identity(cls, graph):
        return cls(graph, {v: v for v in graph.vertices})

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.graph == other.graph and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Automorphism({self.mapping})"


def check_automorphism(g: Graph, perm) -> Automorphism:
    """Validate a vertex map as an automorphism.

    Raises :class:`NotBijectiveError` if ``perm`` is not a bijection of the
    vertex set, or :class:`NotAdjacencyPreservingError` with a witness edge
    that is mapped to a non-edge.
    """
    perm = dict(perm)
    if set(perm) != set(g.vertices):
        raise NotBijectiveError("map is not defined on exactly the vertex set")
    if set(perm.values()) != set(g.vertices):
        raise NotBijectiveError("map is not onto the vertex set")
    # a bijection sending edges to edges sends non-edges to non-edges
    for u, v in g.edges:
        if not g.has_edge(perm[u], perm[v]):
            raise NotAdjacencyPreservingError((u, v))
    return Automorphism(g, perm)


def parse_action(g: Graph, obj):
    """Action JSON: {"generators": [{vertex: image, ...}, ...]}."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "generators" not in obj:
        raise InputError('action JSON needs a "generators" list')
    gens = obj["generators"]
    if not isinstance(gens, list):
        raise InputError('"generators" must be a list of vertex maps')
    return [check_automorphism(g, m) for m in gens]


def orbit(g: Graph, gens, v):
    """Closure of {v} under the generators and their inverses."""
    g.require_vertex(v)
    return _orbit_closure(gens, v)[0]


def _orbit_closure(gens, v):
    moves = list(gens) + [h.inverse() for h in gens]
    seen = {v}
    frontier = [v]
    depth = 0
    while frontier:
        nxt = []
        for u in frontier:
            for h in moves:
                w = h(u)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if frontier:
            depth += 1
    return frozenset(seen), depth


def orbit_diameter(g: Graph, gens) -> int:
    """Maximum closure depth of a vertex orbit; word-length default for
    flippability search."""
    return max((_orbit_closure(gens, v)[1] for v in g.vertices), default=0)


@dataclass(frozen=True)
class BalanceEntry:
    label: str
    larger: frozenset | None


@dataclass(frozen=True)
class BalanceTable:
    """Per-hyperplane balance classification of an induced median subgraph.

    ``entries`` maps hyperplane id to ``BalanceEntry``; unbalanced entries
    carry the strictly larger halfspace.
    """

    entries: dict

    def balanced_ids(self):
        return [i for i, e in self.entries.items() if e.label == "balanced"]

    def unbalanced(self):
        return [
            (i, e.larger) for i, e in self.entries.items() if e.label == "unbalanced"
        ]


def classify_hyperplanes(g: Graph, sub) -> BalanceTable:
    """Balance classification of the hyperplanes of the subgraph induced on
    the convex set ``sub``."""
    sub = frozenset(sub)
    if not sub:
        raise InputError("empty vertex set")
    if convex_hull(g, sub) != sub:
        raise InputError("vertex set is not convex")
    induced = g.induced_subgraph(sub)
    entries = {}
    for h in hyperplanes(induced):
        if len(h.side_a) == len(h.side_b):
            entries[h.id] = BalanceEntry("balanced", None)
        else:
            larger = h.side_a if len(h.side_a) > len(h.side_b) else h.side_b
            entries[h.id] = BalanceEntry("unbalanced", larger)
    return BalanceTable(entries)


def invariant_cube(g: Graph, gens) -> Cube:
    """A cube fixed setwise by every generator.

    Restricts to the convex hull of the orbit of the least vertex, then
    intersects the larger halfspaces of all unbalanced hyperplanes.  The
    Helly property makes the intersection nonempty; the balanced
    hyperplanes are pairwise transverse, so it induces a cube.  All three
    postconditions are asserted.
    """
    seed = g.vertices[0]
    hull = convex_hull(g, orbit(g, gens, seed))
    table = classify_hyperplanes(g, hull)
    cube_vertices = set(hull)
    for _, larger in table.unbalanced():
        cube_vertices &= larger
    if not cube_vertices:
        raise InternalError("halfspace intersection is empty")
    if not is_hypercube_set(g, cube_vertices):
        raise InternalError("halfspace intersection is not a cube")
    for h in gens:
        if h.apply_set(cube_vertices) != cube_vertices:
            raise InternalError("computed cube is not generator-invariant")
    dim = len(cube_vertices).bit_length() - 1
    return Cube(dim, tuple(sorted(cube_vertices)))


def is_flippable(g: Graph, j, gens, bound: int | None = None) -> bool:
    """Can a generator word map one halfspace of ``j`` into its complement?

    Containment is inclusive (the image may equal the complement).  The
    search walks images of each halfspace under generator words of length
    at most ``bound`` (default: the orbit diameter of the action); larger
    bounds explore longer words, so this is a semi-decision at the default.
    """
    if bound is None:
        bound = max(orbit_diameter(g, gens), 1)
    moves = list(gens) + [h.inverse() for h in gens]
    for side in (j.side_a, j.side_b):
        complement = j.side_b if side is j.side_a else j.side_a
        seen = {side}
        frontier = [side]
        for _ in range(bound):
            nxt = []
            for S in frontier:
                for h in moves:
                    img = h.apply_set(S)
                    if img <= complement:
                        return True
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            if not nxt:
                break
            frontier = nxt
    return False
