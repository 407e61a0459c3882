"""Finite simple connected graphs: distances, intervals, medians, generators.

The :class:`Graph` is the universe for every other module.  Vertices are
strings; all derived output is ordered lexicographically so that repeated
runs are byte-identical.  Graphs are immutable after construction and cache
their all-pairs distance table (BFS from every source) on first use.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NoMedianError, NotUniqueError

_POPCOUNT_TABLE = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)


def _popcount(a):
    # np.bitwise_count landed in numpy 2.0; keep a table fallback.
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a)
    return _POPCOUNT_TABLE[a]


class Graph:
    """A finite simple connected graph with string-named vertices.

    >>> g = Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    >>> g.distance("a", "c")
    2
    >>> sorted(g.neighbors("b"))
    ['a', 'c']

    Loops, parallel edges, unknown endpoints and disconnected input are all
    rejected at construction time.
    """

    def __init__(self, vertices, edges):
        verts = list(vertices)
        if not verts:
            raise InputError("graph needs at least one vertex")
        for v in verts:
            if not isinstance(v, str):
                raise InputError(f"vertex names must be strings, got {v!r}")
        if len(set(verts)) != len(verts):
            raise InputError("duplicate vertex names")
        self.vertices = tuple(sorted(verts))
        self._index = {v: i for i, v in enumerate(self.vertices)}

        seen = set()
        norm = []
        for e in edges:
            try:
                u, v = e
            except (TypeError, ValueError):
                raise InputError(f"edge {e!r} is not a vertex pair") from None
            if u not in self._index or v not in self._index:
                raise InputError(f"edge ({u!r}, {v!r}) has an unknown endpoint")
            if u == v:
                raise InputError(f"loop at {u!r} not allowed")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        self.edges = tuple(sorted(norm))

        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self._adj = adj
        self._nbrs = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._iadj = [
            [self._index[w] for w in self._nbrs[v]] for v in self.vertices
        ]

        self._check_connected()
        self._dist = None
        self._hyperplanes = None
        self._edge_class = None

    # -- basic accessors -------------------------------------------------

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_edges(self):
        return len(self.edges)

    def has_vertex(self, v):
        return v in self._index

    def has_edge(self, u, v):
        return v in self._adj.get(u, ())

    def neighbors(self, v):
        self.require_vertex(v)
        return self._nbrs[v]

    def degree(self, v):
        return len(self.neighbors(v))

    def require_vertex(self, v):
        if v not in self._index:
            raise InputError(f"unknown vertex {v!r}")

    def index(self, v):
        self.require_vertex(v)
        return self._index[v]

    def _check_connected(self):
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in self._iadj[i]:
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        if len(seen) != len(self.vertices):
            raise InputError("graph is not connected")

    # -- metric ----------------------------------------------------------

    def distance_matrix(self):
        """All-pairs distance table as an int32 array, cached."""
        if self._dist is None:
            n = len(self.vertices)
            D = np.full((n, n), -1, dtype=np.int32)
            for s in range(n):
                row = D[s]
                row[s] = 0
                queue = deque([s])
                while queue:
                    i = queue.popleft()
                    di = row[i] + 1
                    for j in self._iadj[i]:
                        if row[j] < 0:
                            row[j] = di
                            queue.append(j)
            self._dist = D
        return self._dist

    def distance(self, x, y):
        return int(self.distance_matrix()[self.index(x), self.index(y)])

    # -- derived graphs ---------------------------------------------------

    def induced_subgraph(self, subset):
        sub = set(subset)
        for v in sub:
            self.require_vertex(v)
        edges = [(u, v) for u, v in self.edges if u in sub and v in sub]
        return Graph(sorted(sub), edges)

    def induced_edges(self, subset):
        sub = sorted(set(subset))
        if len(sub) * len(sub) < len(self.edges):
            return [
                (u, v)
                for u, v in itertools.combinations(sub, 2)
                if self.has_edge(u, v)
            ]
        subset = set(sub)
        return [(u, v) for u, v in self.edges if u in subset and v in subset]

    def is_bipartite(self):
        color = {0: 0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in self._iadj[i]:
                if j not in color:
                    color[j] = 1 - color[i]
                    queue.append(j)
                elif color[j] == color[i]:
                    return False
        return True

    # -- equality / serialization ----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def to_json_obj(self):
        return {
            "vertices": list(self.vertices),
            "edges": [[u, v] for u, v in self.edges],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict):
            raise InputError("graph JSON must be an object")
        try:
            vertices = obj["vertices"]
            edges = obj["edges"]
        except (KeyError, TypeError):
            raise InputError('graph JSON needs "vertices" and "edges"') from None
        if not isinstance(vertices, list) or not isinstance(edges, list):
            raise InputError('"vertices" and "edges" must be lists')
        return cls(vertices, [tuple(e) for e in edges])

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


@dataclass(frozen=True)
class MedianReport:
    """Outcome of the exhaustive medianness check.

    ``witness`` is a vertex triple whose candidate-median set does not have
    exactly one element; it is present exactly when ``verdict`` is False.
    """

    verdict: bool
    witness: tuple | None = None
    candidates: frozenset | None = None

    def __post_init__(self):
        if self.verdict != (self.witness is None):
            raise InputError("witness must be present exactly when verdict is False")


def interval(g: Graph, x, y):
    """Vertices lying on some geodesic from ``x`` to ``y``.

    >>> g = Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    >>> sorted(interval(g, "a", "c"))
    ['a', 'b', 'c']
    """
    ix, iy = g.index(x), g.index(y)
    D = g.distance_matrix()
    mask = D[ix] + D[iy] == D[ix, iy]
    return frozenset(g.vertices[i] for i in np.flatnonzero(mask))


def _median_mask(g, ix, iy, iz):
    D = g.distance_matrix()
    return (
        (D[ix] + D[iy] == D[ix, iy])
        & (D[iy] + D[iz] == D[iy, iz])
        & (D[iz] + D[ix] == D[iz, ix])
    )


def median(g: Graph, x, y, z):
    """The unique vertex on pairwise geodesics of the triple.

    Raises :class:`NoMedianError` or :class:`NotUniqueError` when the triple
    interval intersection is empty or has more than one element.
    """
    ix, iy, iz = g.index(x), g.index(y), g.index(z)
    hits = np.flatnonzero(_median_mask(g, ix, iy, iz))
    if len(hits) == 1:
        return g.vertices[hits[0]]
    if len(hits) == 0:
        raise NoMedianError((x, y, z))
    raise NotUniqueError((x, y, z), frozenset(g.vertices[i] for i in hits))


def _interval_bitsets(g):
    """Packed interval indicators: PB[x, y] = bitset over v of I(x, y)."""
    D = g.distance_matrix()
    n = len(g.vertices)
    words = (n + 7) // 8
    PB = np.empty((n, n, words), dtype=np.uint8)
    for x in range(n):
        member = (D[x][:, None] + D) == D[x][None, :]  # (v, y)
        PB[x] = np.packbits(member, axis=0).T
    return PB


def medianness_oracle(g: Graph, jobs: int = 1) -> MedianReport:
    """Exhaustively verify that every vertex triple has a unique median.

    This is the ground truth that all faster checks are validated against.
    The triple loop runs over packed interval bitsets; memory is O(n^3/8)
    bits and time O(n^4/8) byte operations, which is fine up to roughly 600
    vertices on desk hardware.  ``jobs`` > 1 splits the outer loop across
    threads (the bit-level kernels release the GIL).
    """
    n = len(g.vertices)
    if n <= 2:
        return MedianReport(True)
    PB = _interval_bitsets(g)

    def scan(x):
        T = PB[x][:, None, :] & PB[x][None, :, :] & PB
        counts = _popcount(T).sum(axis=2)
        bad = np.argwhere(counts != 1)
        if len(bad):
            y, z = bad[0]
            return (x, int(y), int(z))
        return None

    first = None
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for hit in pool.map(scan, range(n)):
                if hit is not None:
                    first = hit
                    break
        # thread map preserves x order, so the first hit has minimal x
    else:
        for x in range(n):
            first = scan(x)
            if first is not None:
                break
    if first is None:
        return MedianReport(True)
    x, y, z = first
    triple = (g.vertices[x], g.vertices[y], g.vertices[z])
    cands = frozenset(
        g.vertices[i] for i in np.flatnonzero(_median_mask(g, x, y, z))
    )
    return MedianReport(False, triple, cands)


# -- corpus generators ----------------------------------------------------

FAMILIES = ("hypercube", "grid", "random_tree", "cycle", "complete_bipartite", "star")


def _gen_hypercube(n):
    if n < 1 or n > 20:
        raise InputError("hypercube dimension must be in 1..20")
    names = [format(i, f"0{n}b") for i in range(2**n)]
    edges = []
    for i in range(2**n):
        for b in range(n):
            j = i ^ (1 << b)
            if i < j:
                edges.append((names[i], names[j]))
    return Graph(names, edges)


def _gen_grid(dims):
    if not dims or any(d < 1 for d in dims):
        raise InputError("grid dimensions must all be >= 1")
    coords = list(itertools.product(*[range(d) for d in dims]))
    name = {c: ",".join(str(x) for x in c) for c in coords}
    edges = []
    for c in coords:
        for axis in range(len(dims)):
            if c[axis] + 1 < dims[axis]:
                d = list(c)
                d[axis] += 1
                edges.append((name[c], name[tuple(d)]))
    return Graph(list(name.values()), edges)


def _gen_random_tree(n, seed):
    if n < 1:
        raise InputError("tree size must be >= 1")
    if seed is None:
        raise InputError("random_tree requires a seed")
    rng = random.Random(seed)
    names = [f"t{i}" for i in range(n)]
    edges = [(names[rng.randrange(i)], names[i]) for i in range(1, n)]
    return Graph(names, edges)


def _gen_cycle(n):
    if n < 3:
        raise InputError("cycle length must be >= 3")
    names = [f"v{i}" for i in range(n)]
    edges = [(names[i], names[(i + 1) % n]) for i in range(n)]
    return Graph(names, edges)


def _gen_complete_bipartite(m, n):
    if m < 1 or n < 1:
        raise InputError("complete_bipartite sides must be >= 1")
    left = [f"a{i}" for i in range(m)]
    right = [f"b{i}" for i in range(n)]
    return Graph(left + right, [(a, b) for a in left for b in right])


def _gen_star(k):
    if k < 1:
        raise InputError("star needs at least one leaf")
    leaves = [f"l{i}" for i in range(k)]
    return Graph(["c"] + leaves, [("c", leaf) for leaf in leaves])


def generate(family: str, params, seed=None) -> Graph:
    """Deterministic corpus graphs.

    Vertex naming: hypercube [n] uses binary strings of length n; grid
    [d1,...,dk] uses comma-joined coordinates like "2,0,1"; random_tree [n]
    uses "t0".."t{n-1}" with vertex t_i attached to a seeded-random earlier
    vertex; cycle [n] uses "v0".."v{n-1}"; complete_bipartite [m,n] uses
    "a*"/"b*" sides; star [k] uses centre "c" and leaves "l0".."l{k-1}".
    """
    params = list(params)
    if not all(isinstance(p, int) for p in params):
        raise InputError("family parameters must be integers")
    if family == "hypercube":
        if len(params) != 1:
            raise InputError("hypercube takes one parameter")
        return _gen_hypercube(params[0])
    if family == "grid":
        return _gen_grid(params)
    if family == "random_tree":
        if len(params) != 1:
            raise InputError("random_tree takes one parameter")
        return _gen_random_tree(params[0], seed)
    if family == "cycle":
        if len(params) != 1:
            raise InputError("cycle takes one parameter")
        return _gen_cycle(params[0])
    if family == "complete_bipartite":
        if len(params) != 2:
            raise InputError("complete_bipartite takes two parameters")
        return _gen_complete_bipartite(*params)
    if family == "star":
        if len(params) != 1:
            raise InputError("star takes one parameter")
        return _gen_star(params[0])
    raise InputError(f"unsupported family {family!r}; choose from {FAMILIES}")
