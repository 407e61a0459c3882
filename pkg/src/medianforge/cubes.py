"""Cube completion of a graph, vertex links, and the radius-3 criterion.

Cells are vertex sets inducing hypercube one-skeletons, built level by
level: squares from edge pairs, k-cubes from pairs of (k-1)-cubes glued
along a perfect matching that is an isomorphism.  A configurable ceiling
(``MEDIANFORGE_CELL_CEILING``, default 10^6 cells) guards against
exponential inputs.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .core import Graph
from .errors import InputError, InternalError, ResourceLimitError
from .hyperplanes import edge_class_map, hyperplanes, transverse

DEFAULT_CELL_CEILING = 10**6


def _cell_ceiling(explicit):
    if explicit is not None:
        return explicit
    env = os.environ.get("MEDIANFORGE_CELL_CEILING")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(
                f"MEDIANFORGE_CELL_CEILING={env!r} is not an integer"
            ) from None
    return DEFAULT_CELL_CEILING


@dataclass(frozen=True)
class Cube:
    """A vertex set inducing the one-skeleton of a hypercube."""

    dimension: int
    vertices: tuple

    @property
    def vertex_set(self):
        return frozenset(self.vertices)

    def __repr__(self):
        return f"Cube(dim={self.dimension}, {list(self.vertices)})"


@dataclass(frozen=True)
class CubeComplex:
    """Cells of every dimension over a base graph, plus the f-vector."""

    base: Graph
    cells: dict
    f_vector: tuple

    def dimension(self):
        return len(self.f_vector) - 1

    def euler_characteristic(self):
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector))

    def cells_containing(self, v):
        return [c for cs in self.cells.values() for c in cs if v in c.vertex_set]

    def to_json_obj(self):
        return {
            "f_vector": list(self.f_vector),
            "cells": {
                str(d): [list(c.vertices) for c in self.cells[d]]
                for d in sorted(self.cells)
                if d >= 2
            },
        }


def _match_partner(g, A, B):
    """Perfect matching A->B by unique neighbours, or None."""
    phi = {}
    for a in A:
        nb = [b for b in g.neighbors(a) if b in B]
        if len(nb) != 1:
            return None
        phi[a] = nb[0]
    if len(set(phi.values())) != len(B):
        return None
    return phi


def enumerate_cubes(g: Graph, cell_ceiling=None) -> CubeComplex:
    """All induced hypercube subgraphs of ``g``, each listed once.

    Cells are emitted in (dimension, lexicographic vertex list) order.
    Raises :class:`ResourceLimitError` above the cell ceiling.
    """
    ceiling = _cell_ceiling(cell_ceiling)
    levels = {0: [frozenset([v]) for v in g.vertices]}
    levels[1] = [frozenset(e) for e in g.edges]
    total = len(levels[0]) + len(levels[1])
    if total > ceiling:
        raise ResourceLimitError(f"cell count exceeds ceiling {ceiling}")

    k = 1
    while levels[k]:
        prev = levels[k]
        by_vertex = {}
        for idx, cell in enumerate(prev):
            for v in cell:
                by_vertex.setdefault(v, []).append(idx)
        found = set()
        for A in prev:
            a0 = min(A)
            for nb in g.neighbors(a0):
                if nb in A:
                    continue
                for idx in by_vertex.get(nb, ()):
                    B = prev[idx]
                    if min(B) < a0 or not A.isdisjoint(B):
                        continue
                    U = A | B
                    if U in found:
                        continue
                    phi = _match_partner(g, A, B)
                    if phi is None:
                        continue
                    # the matching must transport induced edges of A to B
                    if all(
                        g.has_edge(phi[u], phi[v])
                        for u, v in g.induced_edges(A)
                    ):
                        found.add(U)
                        total += 1
                        if total > ceiling:
                            raise ResourceLimitError(
                                f"cell count exceeds ceiling {ceiling}"
                            )
        levels[k + 1] = sorted(found, key=sorted)
        k += 1
    del levels[k]  # trailing empty level

    cells = {
        d: tuple(
            Cube(d, tuple(sorted(cell)))
            for cell in sorted(levels[d], key=sorted)
        )
        for d in levels
    }
    f_vector = tuple(len(cells[d]) for d in sorted(cells))
    return CubeComplex(g, cells, f_vector)


def is_hypercube_set(g: Graph, vertices) -> bool:
    """Does ``vertices`` induce the one-skeleton of a hypercube?

    Greedy BFS bit-labelling from the minimum vertex; accepts exactly when
    labels are a bijection onto {0,1}^k respecting adjacency.
    """
    vs = sorted(set(vertices))
    m = len(vs)
    if m == 0:
        return False
    if m == 1:
        return True
    k = m.bit_length() - 1
    if 2**k != m:
        return False
    inside = set(vs)
    v0 = vs[0]
    nbr0 = [u for u in g.neighbors(v0) if u in inside]
    if len(nbr0) != k:
        return False
    label = {v0: 0}
    for i, u in enumerate(nbr0):
        label[u] = 1 << i
    level = {1: list(nbr0)}
    depth = 1
    while sum(len(l) for l in level.values()) + 1 < m:
        nxt = {}
        for u in level[depth]:
            for w in g.neighbors(u):
                if w not in inside or w in label:
                    continue
                down = [x for x in g.neighbors(w) if x in label and
                        bin(label[x]).count("1") == depth]
                if len(down) != depth + 1:
                    return False
                lw = 0
                for x in down:
                    lw |= label[x]
                if bin(lw).count("1") != depth + 1:
                    return False
                label[w] = lw
                nxt[w] = True
        if not nxt:
            return False
        level[depth + 1] = list(nxt)
        depth += 1
    if len(label) != m or len(set(label.values())) != m:
        return False
    induced = g.induced_edges(inside)
    if len(induced) != k * 2 ** (k - 1):
        return False
    return all(bin(label[u] ^ label[v]).count("1") == 1 for u, v in induced)


def maximal_cubes(c: CubeComplex):
    """Maximal cells, each paired with the hyperplanes crossing it.

    On a median base graph this pairing is a bijection onto the maximal
    families of pairwise transverse hyperplanes.
    """
    cls = edge_class_map(c.base)
    out = []
    dims = sorted(c.cells)
    for d in dims:
        higher = c.cells.get(d + 1, ())
        by_vertex = {}
        for cell in higher:
            for v in cell.vertices:
                by_vertex.setdefault(v, []).append(cell)
        for cell in c.cells[d]:
            cset = cell.vertex_set
            if any(
                cset <= big.vertex_set
                for big in by_vertex.get(cell.vertices[0], ())
            ):
                continue
            crossing = {
                cls[e].id: cls[e] for e in c.base.induced_edges(cset)
            }
            out.append(
                (cell, tuple(crossing[i] for i in sorted(crossing)))
            )
    return out


def maximal_transverse_families(g: Graph):
    """Maximal cliques of the transversality relation on hyperplanes."""
    hps = hyperplanes(g)
    if not hps:
        return [frozenset()]
    T = nx.Graph()
    T.add_nodes_from(h.id for h in hps)
    for h1, h2 in itertools.combinations(hps, 2):
        if transverse(h1, h2):
            T.add_edge(h1.id, h2.id)
    return sorted(
        (frozenset(c) for c in nx.find_cliques(T)),
        key=lambda f: sorted(f),
    )


@dataclass(frozen=True)
class SimplicialLink:
    """Link of a vertex: one link vertex per incident edge, simplices from
    higher cubes at the vertex.  Downward closed by construction."""

    vertices: tuple
    simplices: frozenset


def vertex_link(c: CubeComplex, v) -> SimplicialLink:
    """Link vertices are the neighbours of ``v``; a set of k+1 of them spans
    a k-simplex iff the corresponding edges lie in a common (k+1)-cube."""
    c.base.require_vertex(v)
    simplices = set()
    for d, cells in c.cells.items():
        if d < 1:
            continue
        for cell in cells:
            if v not in cell.vertex_set:
                continue
            corner = frozenset(
                u for u in c.base.neighbors(v) if u in cell.vertex_set
            )
            if len(corner) != d:
                raise InternalError("cell corner degree differs from dimension")
            for r in range(1, len(corner) + 1):
                for sub in itertools.combinations(sorted(corner), r):
                    simplices.add(frozenset(sub))
    return SimplicialLink(tuple(c.base.neighbors(v)), frozenset(simplices))


def is_flag(link: SimplicialLink):
    """Check that every clique of the link's 1-skeleton spans a simplex.

    Returns ``(True, None)`` or ``(False, witness_clique)`` with the
    lexicographically least witness among those of minimal size.
    """
    skel = nx.Graph()
    skel.add_nodes_from(link.vertices)
    for s in link.simplices:
        if len(s) == 2:
            skel.add_edge(*s)
    failures = []
    size = None
    for clique in nx.enumerate_all_cliques(skel):
        if len(clique) < 3:
            continue
        if size is not None and len(clique) > size:
            break
        if frozenset(clique) not in link.simplices:
            size = len(clique)
            failures.append(tuple(sorted(clique)))
    if failures:
        return False, min(failures)
    return True, None


# -- radius-3 medianness criterion -----------------------------------------


@dataclass(frozen=True)
class LocalReport:
    """Outcome of the three local conditions.

    ``condition1`` is "yes"/"no"/"unknown" (simple connectivity of the
    square completion; see module notes), the boolean conditions are decided
    exactly.  Witnesses are present exactly when a condition fails.
    """

    condition1: str
    condition1_note: str
    condition1_witness: tuple | None
    condition2: bool
    condition2_witness: tuple | None
    condition3: bool
    condition3_witness: tuple | None

    @property
    def all_yes(self):
        return self.condition1 == "yes" and self.condition2 and self.condition3


def _four_cycles(g):
    """All 4-cycles as vertex tuples (u, a, w, b) with {u,w} a diagonal.

    Deduplicated by edge set, so distinct cycles on the same four vertices
    (possible with chords) are all kept.
    """
    seen = set()
    out = []
    for u, w in itertools.combinations(g.vertices, 2):
        common = sorted(set(g.neighbors(u)) & set(g.neighbors(w)))
        for a, b in itertools.combinations(common, 2):
            key = frozenset(
                _edge_key(x, y) for x, y in ((u, a), (a, w), (w, b), (b, u))
            )
            if key not in seen:
                seen.add(key)
                out.append((u, a, w, b))
    return out


def _gf2_rank_and_residue(rows, probes):
    """Rank of bitmask rows over GF(2); residues of probe masks."""
    basis = {}
    for row in rows:
        row = _reduce(row, basis)
        if row:
            basis[row.bit_length() - 1] = row
    residues = [_reduce(p, basis) for p in probes]
    return len(basis), residues


def _reduce(row, basis):
    while row:
        piv = row.bit_length() - 1
        if piv not in basis:
            return row
        row ^= basis[piv]
    return 0


def _gf3_rank_and_residues(vectors, probes, m):
    """Row-reduce square vectors mod 3; return rank and reduced probes."""
    if not vectors:
        return 0, [list(p) for p in probes]
    M = np.array(vectors, dtype=np.int64) % 3
    pivots = []
    rank = 0
    col = 0
    rows = M.shape[0]
    while rank < rows and col < m:
        piv = None
        for r in range(rank, rows):
            if M[r, col] % 3:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        M[[rank, piv]] = M[[piv, rank]]
        inv = 1 if M[rank, col] % 3 == 1 else 2
        M[rank] = (M[rank] * inv) % 3
        for r in range(rows):
            if r != rank and M[r, col]:
                M[r] = (M[r] - M[r, col] * M[rank]) % 3
        pivots.append((rank, col))
        rank += 1
        col += 1
    residues = []
    for p in probes:
        vec = np.array(p, dtype=np.int64) % 3
        for r, c in pivots:
            if vec[c]:
                vec = (vec - vec[c] * M[r]) % 3
        residues.append(vec)
    return rank, residues


def _fundamental_cycles(g):
    """Cycles of non-tree edges over a BFS spanning tree from min vertex."""
    parent = {g.vertices[0]: None}
    order = deque([g.vertices[0]])
    tree = set()
    while order:
        u = order.popleft()
        for v in g.neighbors(u):
            if v not in parent:
                parent[v] = u
                tree.add(_edge_key(u, v))
                order.append(v)
    cycles = []
    for e in g.edges:
        if e in tree:
            continue
        u, v = e
        pu, pv = _root_path(parent, u), _root_path(parent, v)
        while len(pu) > 1 and len(pv) > 1 and pu[-2] == pv[-2]:
            pu.pop()
            pv.pop()
        # walk u -> lca -> v, then close with edge vu
        cyc = pu[:-1] + list(reversed(pv))
        cycles.append((e, tuple(cyc)))
    return cycles


def _root_path(parent, v):
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def _edge_key(u, v):
    return (u, v) if u < v else (v, u)


def _cycle_mask(cyc, edge_index):
    mask = 0
    for u, v in zip(cyc, cyc[1:] + cyc[:1]):
        mask ^= 1 << edge_index[_edge_key(u, v)]
    return mask


def _canon_cycle(word):
    if not word:
        return ()
    best = None
    for w in (tuple(word), tuple(reversed(word))):
        for i in range(len(w)):
            rot = w[i:] + w[:i]
            if best is None or rot < best:
                best = rot
    return best


def _reduce_word(word):
    """Remove all cyclic backtracks; never changes the homotopy class."""
    w = list(word)
    changed = True
    while changed and len(w) > 2:
        changed = False
        for i in range(len(w)):
            if w[i - 1] == w[(i + 1) % len(w)]:
                drop = sorted((i, (i + 1) % len(w)), reverse=True)
                for j in drop:
                    del w[j]
                changed = True
                break
    if len(w) == 2:
        w = []
    return tuple(w)


def _contract_cycle(g, start, budget):
    """Try to contract a closed walk to a point by backtrack removals and
    square moves, best-first by word length then by total distance to the
    least vertex.  Returns True on success within the state budget.

    A fully reduced closed walk of length 4 is an actual 4-cycle of the
    graph, hence filled by a square and contractible, so reaching length 4
    (or 0) is success.
    """
    import heapq

    D0 = g.distance_matrix()[0]

    def weight(w):
        return int(sum(D0[g.index(v)] for v in w))

    start = _canon_cycle(_reduce_word(start))
    if len(start) in (0, 4):
        return True
    counter = itertools.count()
    heap = [(len(start), weight(start), next(counter), start)]
    seen = {start}
    pops = 0
    while heap and pops < budget:
        _, _, _, w = heapq.heappop(heap)
        pops += 1
        L = len(w)
        for i in range(L):
            prev, cur, nxt = w[i - 1], w[i], w[(i + 1) % L]
            for x in set(g.neighbors(prev)) & set(g.neighbors(nxt)):
                if x == cur:
                    continue
                w2 = _canon_cycle(_reduce_word(w[:i] + (x,) + w[i + 1:]))
                if len(w2) in (0, 4):
                    return True
                if w2 not in seen:
                    seen.add(w2)
                    heapq.heappush(heap, (len(w2), weight(w2), next(counter), w2))
    return False


def verylocal_check(g: Graph, contraction_budget: int = 20000) -> LocalReport:
    """The three radius-3 conditions; all-yes implies the graph is median.

    Conditions 2 and 3 are decided exactly by local enumeration.  Condition
    1 (simple connectivity of the square completion) is tri-state: "no" when
    mod-2 or mod-3 homology of the square completion is nonzero (sound),
    "yes" when a budgeted square-move search contracts every fundamental
    cycle (sound), "unknown" otherwise.
    """
    cond2 = True
    w2 = None
    for v in g.vertices:
        nb = g.neighbors(v)
        for a, b in itertools.combinations(nb, 2):
            mates = sorted(
                (set(g.neighbors(a)) & set(g.neighbors(b))) - {v}
            )
            if len(mates) >= 2:
                cond2 = False
                w2 = (v, a, b, tuple(mates))
                break
        if not cond2:
            break

    cond3 = True
    w3 = None
    for v in g.vertices:
        nb = g.neighbors(v)
        if len(nb) < 3:
            continue
        mates = {}
        for a, b in itertools.combinations(nb, 2):
            mates[a, b] = sorted(
                (set(g.neighbors(a)) & set(g.neighbors(b))) - {v}
            )
        for a, b, c in itertools.combinations(nb, 3):
            if not (mates[a, b] and mates[a, c] and mates[b, c]):
                continue
            if not _spans_three_cube(g, v, a, b, c, mates):
                cond3 = False
                w3 = (v, (a, b, c))
                break
        if not cond3:
            break

    cond1, note, w1 = _condition1(g, contraction_budget)
    return LocalReport(cond1, note, w1, cond2, w2, cond3, w3)


def _spans_three_cube(g, v, a, b, c, mates):
    corner = {v, a, b, c}
    for x in mates[a, b]:
        for y in mates[a, c]:
            if y == x:
                continue
            for z in mates[b, c]:
                if z in (x, y):
                    continue
                if corner & {x, y, z}:
                    continue
                for w in set(g.neighbors(x)) & set(g.neighbors(y)):
                    if w in corner or w in (x, y, z):
                        continue
                    if g.has_edge(w, z):
                        return True
    return False


def _condition1(g, budget):
    m = len(g.edges)
    n = len(g.vertices)
    cyclerank = m - n + 1
    if cyclerank == 0:
        return "yes", "no cycles (tree)", None

    edge_index = {e: i for i, e in enumerate(g.edges)}
    squares = _four_cycles(g)
    square_masks = [_cycle_mask(sq, edge_index) for sq in squares]
    fundamental = _fundamental_cycles(g)
    probes = [_cycle_mask(cyc, edge_index) for _, cyc in fundamental]

    rank2, residues = _gf2_rank_and_residue(square_masks, probes)
    if cyclerank - rank2 > 0:
        for (edge, cyc), res in zip(fundamental, residues):
            if res:
                return (
                    "no",
                    f"mod-2 homology of the square completion has rank "
                    f"{cyclerank - rank2}",
                    cyc,
                )
        raise InternalError("nonzero mod-2 homology without a witness cycle")

    signed = [_signed_square_vector(sq, edge_index, m) for sq in squares]
    signed_probes = [
        _signed_cycle_vector(cyc, edge_index, m) for _, cyc in fundamental
    ]
    rank3, residues3 = _gf3_rank_and_residues(signed, signed_probes, m)
    if cyclerank - rank3 > 0:
        witness = None
        for (edge, cyc), res in zip(fundamental, residues3):
            if np.any(np.asarray(res) % 3):
                witness = cyc
                break
        if witness is None:
            raise InternalError("nonzero mod-3 homology without a witness cycle")
        return (
            "no",
            f"mod-3 homology of the square completion has rank "
            f"{cyclerank - rank3}",
            witness,
        )

    for edge, cyc in fundamental:
        if not _contract_cycle(g, cyc, budget):
            return (
                "unknown",
                f"homology trivial but cycle at non-tree edge {edge} did not "
                f"contract within budget {budget}",
                None,
            )
    return (
        "yes",
        f"homology trivial; all {len(fundamental)} fundamental cycles "
        f"contracted by square moves",
        None,
    )


def _signed_square_vector(sq, edge_index, m):
    u, a, w, b = sq
    return _signed_cycle_vector((u, a, w, b), edge_index, m)


def _signed_cycle_vector(cyc, edge_index, m):
    vec = [0] * m
    cyc = list(cyc)
    for x, y in zip(cyc, cyc[1:] + cyc[:1]):
        sign = 1 if x < y else -1
        vec[edge_index[_edge_key(x, y)]] += sign
    return vec
