"""Dualizing finite wallspaces into median graphs.

A wall is a bipartition of the point set; an orientation chooses one block
per wall and is consistent when every two chosen blocks intersect.  The
dual graph has the consistent orientations as vertices, with edges between
orientations differing on exactly one wall.  Points map to their principal
orientations, and graph distance between principal vertices equals the
number of separating walls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import Graph
from .errors import InputError, InternalError, ResourceLimitError

ORIENTATION_CEILING = 2**18


class Wallspace:
    """A finite point set with a duplicate-free list of walls.

    Points are sorted at construction; each wall is stored as
    ``(block_a, block_b)`` with ``block_a`` the block containing the least
    point, and walls are sorted so serialization is canonical.
    """

    def __init__(self, points, walls):
        pts = list(points)
        if not pts:
            raise InputError("wallspace needs at least one point")
        if len(set(pts)) != len(pts):
            raise InputError("duplicate point names")
        for p in pts:
            if not isinstance(p, str):
                raise InputError(f"point names must be strings, got {p!r}")
        self.points = tuple(sorted(pts))
        pset = set(self.points)

        norm = []
        for wall in walls:
            try:
                one, two = wall
            except (TypeError, ValueError):
                raise InputError(f"wall {wall!r} is not a pair of blocks") from None
            a, b = frozenset(one), frozenset(two)
            if not a or not b:
                raise InputError("wall blocks must be nonempty")
            if a & b:
                raise InputError(f"wall blocks overlap: {sorted(a & b)}")
            if (a | b) != pset:
                raise InputError("wall blocks must cover the point set")
            if self.points[0] not in a:
                a, b = b, a
            norm.append((a, b))
        if len(set(norm)) != len(norm):
            raise InputError("duplicate walls")
        self.walls = tuple(
            sorted(norm, key=lambda w: (sorted(w[0]), sorted(w[1])))
        )

    @property
    def num_walls(self):
        return len(self.walls)

    def separating_walls(self, p, q):
        """Indices of walls with p and q in different blocks."""
        self.require_point(p)
        self.require_point(q)
        return [
            i
            for i, (a, b) in enumerate(self.walls)
            if (p in a) != (q in a)
        ]

    def require_point(self, p):
        if p not in self.points:
            raise InputError(f"unknown point {p!r}")

    def __eq__(self, other):
        if not isinstance(other, Wallspace):
            return NotImplemented
        return self.points == other.points and self.walls == other.walls

    def __hash__(self):
        return hash((self.points, self.walls))

    def __repr__(self):
        return f"Wallspace({len(self.points)} points, {len(self.walls)} walls)"

    def to_json_obj(self):
        return {
            "points": list(self.points),
            "walls": [[sorted(a), sorted(b)] for a, b in self.walls],
        }

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict):
            raise InputError("wallspace JSON must be an object")
        try:
            points = obj["points"]
            walls = obj["walls"]
        except (KeyError, TypeError):
            raise InputError('wallspace JSON needs "points" and "walls"') from None
        return cls(points, walls)

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


@dataclass(frozen=True)
class Orientation:
    """A choice of one block per wall; bit i = 1 picks block_b of wall i."""

    wallspace: Wallspace
    choices: tuple

    def block(self, i):
        a, b = self.wallspace.walls[i]
        return b if self.choices[i] else a

    def is_consistent(self):
        blocks = [self.block(i) for i in range(len(self.choices))]
        return all(
            not blocks[i].isdisjoint(blocks[j])
            for i in range(len(blocks))
            for j in range(i + 1, len(blocks))
        )

    def name(self):
        return "".join(str(c) for c in self.choices)


def principal_orientation(ws: Wallspace, p) -> Orientation:
    """Orient every wall toward the block containing ``p``; always consistent."""
    ws.require_point(p)
    return Orientation(
        ws, tuple(0 if p in a else 1 for a, _ in ws.walls)
    )


def _consistent_orientations(ws, ceiling):
    """Depth-first enumeration with pairwise-intersection pruning."""
    walls = ws.walls
    out = []
    choice = []
    chosen_blocks = []

    def extend(i):
        if i == len(walls):
            out.append(tuple(choice))
            if len(out) > ceiling:
                raise ResourceLimitError(
                    f"more than {ceiling} consistent orientations"
                )
            return
        for bit, block in enumerate(walls[i]):
            if all(not block.isdisjoint(prev) for prev in chosen_blocks):
                choice.append(bit)
                chosen_blocks.append(block)
                extend(i + 1)
                choice.pop()
                chosen_blocks.pop()

    extend(0)
    return out


def dualize(ws: Wallspace, orientation_ceiling: int = ORIENTATION_CEILING):
    """The dual median graph of a wallspace.

    Returns ``(graph, point_map)`` where vertices are the consistent
    orientations (named by their choice bitstrings) and ``point_map`` sends
    each point to its principal orientation's vertex.
    """
    orientations = _consistent_orientations(ws, orientation_ceiling)
    names = {o: "".join(str(c) for c in o) for o in orientations}
    oset = set(orientations)
    edges = []
    for o in orientations:
        for i in range(len(ws.walls)):
            flipped = o[:i] + (1 - o[i],) + o[i + 1:]
            if o < flipped and flipped in oset:
                edges.append((names[o], names[flipped]))
    try:
        graph = Graph(list(names.values()), edges)
    except InputError as exc:
        raise InternalError(f"dual graph is invalid: {exc}") from None
    point_map = {
        p: names[principal_orientation(ws, p).choices] for p in ws.points
    }
    return graph, point_map


@dataclass(frozen=True)
class WallDistanceReport:
    """Per-pair comparison of dual graph distance with separating-wall count."""

    ok: bool
    pairs_checked: int
    violations: tuple


def wall_distance_check(ws: Wallspace, dual: Graph, point_map) -> WallDistanceReport:
    """Verify d(dual)(p, q) = #separating walls for every point pair."""
    violations = []
    pairs = 0
    for i, p in enumerate(ws.points):
        for q in ws.points[i:]:
            pairs += 1
            d = dual.distance(point_map[p], point_map[q])
            sep = len(ws.separating_walls(p, q))
            if d != sep:
                violations.append((p, q, d, sep))
    return WallDistanceReport(not violations, pairs, tuple(violations))
