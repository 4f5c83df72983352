"""Graph coverings, deck transformation groups, and covering towers.

Graphs here are plain directed multigraphs standing in for 1-manifolds and
roses; coverings are graph maps that are bijections on every vertex star.
Deck transformations are computed by path lifting: a candidate image of a
fiber basepoint propagates across the total graph, with every edge checked
for consistency.  Towers stack coverings over a fixed base, carry a
coherent thread of base points, and expose the composite coverings whose
deck groups feed the profinite layer.

The cell data lives in numpy index arrays so that the cyclic towers used
for metric experiments stay fast at six-digit sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

Step = tuple  # (edge_id, +1 | -1)


class Graph:
    """Directed multigraph with indexed cells.

    ``vertex_ids`` and ``edge_ids`` are indexable sequences (tuples for
    hand-built graphs, ranges for generated ones); ``esrc``/``edst`` give
    the endpoint vertex indices per edge index.
    """

    def __init__(self, vertex_ids: Sequence, edge_ids: Sequence,
                 esrc: np.ndarray, edst: np.ndarray):
        self.vertex_ids = vertex_ids
        self.edge_ids = edge_ids
        self.esrc = np.asarray(esrc, dtype=np.int64)
        self.edst = np.asarray(edst, dtype=np.int64)
        if len(self.esrc) != len(edge_ids) or len(self.edst) != len(edge_ids):
            raise ValueError("endpoint arrays must match the edge count")
        if len(edge_ids) and (self.esrc.max(initial=-1) >= len(vertex_ids)
                              or self.edst.max(initial=-1) >= len(vertex_ids)):
            raise ValueError("endpoint index out of range")
        self._vindex: Optional[dict] = None
        self._eindex: Optional[dict] = None

    @classmethod
    def from_edges(cls, vertices: Sequence, edges: Mapping) -> "Graph":
        vertex_ids = tuple(sorted(vertices, key=repr))
        vidx = {v: i for i, v in enumerate(vertex_ids)}
        edge_ids = tuple(sorted(edges, key=repr))
        esrc = np.array([vidx[edges[e][0]] for e in edge_ids] or [], dtype=np.int64)
        edst = np.array([vidx[edges[e][1]] for e in edge_ids] or [], dtype=np.int64)
        return cls(vertex_ids, edge_ids, esrc, edst)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        """Cycle graph C_n: vertex i, edge i running i -> i+1 (mod n)."""
        idx = np.arange(n, dtype=np.int64)
        return cls(range(n), range(n), idx, (idx + 1) % n)

    @property
    def nv(self) -> int:
        return len(self.vertex_ids)

    @property
    def ne(self) -> int:
        return len(self.edge_ids)

    def vertex_index(self, v) -> int:
        if self._vindex is None:
            self._vindex = {w: i for i, w in enumerate(self.vertex_ids)}
        return self._vindex[v]

    def edge_index(self, e) -> int:
        if self._eindex is None:
            self._eindex = {d: i for i, d in enumerate(self.edge_ids)}
        return self._eindex[e]

    def half_edges_at(self, vi: int) -> list[tuple[int, int]]:
        """(edge index, +1 outgoing / -1 incoming) pairs at vertex index vi."""
        out = [(int(e), 1) for e in np.flatnonzero(self.esrc == vi)]
        inc = [(int(e), -1) for e in np.flatnonzero(self.edst == vi)]
        return out + inc

    def is_connected(self) -> bool:
        if self.nv <= 1:
            return True
        seen = np.zeros(self.nv, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        while frontier.size:
            hit = np.concatenate([
                self.edst[np.isin(self.esrc, frontier)],
                self.esrc[np.isin(self.edst, frontier)],
            ])
            hit = np.unique(hit)
            frontier = hit[~seen[hit]]
            seen[frontier] = True
        return bool(seen.all())

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and tuple(self.vertex_ids) == tuple(other.vertex_ids)
            and tuple(self.edge_ids) == tuple(other.edge_ids)
            and np.array_equal(self.esrc, other.esrc)
            and np.array_equal(self.edst, other.edst)
        )

    def __repr__(self):
        return f"Graph({self.nv} vertices, {self.ne} edges)"


class GraphMap:
    """Graph morphism with single-edge, orientation-preserving images."""

    def __init__(self, domain: Graph, codomain: Graph,
                 vmap: np.ndarray, emap: np.ndarray):
        self.domain = domain
        self.codomain = codomain
        self.vmap = np.asarray(vmap, dtype=np.int64)
        self.emap = np.asarray(emap, dtype=np.int64)
        if len(self.vmap) != domain.nv or len(self.emap) != domain.ne:
            raise ValueError("map arrays must cover the domain cells")
        if not (np.array_equal(codomain.esrc[self.emap], self.vmap[domain.esrc])
                and np.array_equal(codomain.edst[self.emap], self.vmap[domain.edst])):
            raise ValueError("edge images do not respect endpoints")

    @classmethod
    def from_dicts(cls, domain: Graph, codomain: Graph,
                   vertex_map: Mapping, edge_map: Mapping) -> "GraphMap":
        vmap = np.array(
            [codomain.vertex_index(vertex_map[v]) for v in domain.vertex_ids],
            dtype=np.int64,
        )
        emap = np.array(
            [codomain.edge_index(edge_map[e]) for e in domain.edge_ids],
            dtype=np.int64,
        )
        return cls(domain, codomain, vmap, emap)

    def compose(self, inner: "GraphMap") -> "GraphMap":
        """self after inner."""
        if inner.codomain is not self.domain and inner.codomain != self.domain:
            raise ValueError("maps are not composable")
        return GraphMap(inner.domain, self.codomain,
                        self.vmap[inner.vmap], self.emap[inner.emap])


@dataclass(frozen=True)
class DeckElement:
    """Automorphism of the total graph commuting with the covering map."""

    vperm: np.ndarray
    eperm: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vperm", np.asarray(self.vperm, dtype=np.int64))
        object.__setattr__(self, "eperm", np.asarray(self.eperm, dtype=np.int64))

    def compose(self, other: "DeckElement") -> "DeckElement":
        """self after other."""
        return DeckElement(self.vperm[other.vperm], self.eperm[other.eperm])

    def inverse(self) -> "DeckElement":
        return DeckElement(np.argsort(self.vperm), np.argsort(self.eperm))

    def is_identity(self) -> bool:
        return bool(
            np.array_equal(self.vperm, np.arange(len(self.vperm)))
            and np.array_equal(self.eperm, np.arange(len(self.eperm)))
        )

    def __eq__(self, other):
        return isinstance(other, DeckElement) and np.array_equal(
            self.vperm, other.vperm
        ) and np.array_equal(self.eperm, other.eperm)

    def __hash__(self):
        return hash(self.vperm.tobytes())


class GraphCovering:
    """A graph map asserted (and checkable) to be a covering."""

    def __init__(self, graph_map: GraphMap):
        self.map = graph_map

    @property
    def total(self) -> Graph:
        return self.map.domain

    @property
    def base(self) -> Graph:
        return self.map.codomain

    def fiber(self, base_vi: int) -> np.ndarray:
        """Sorted total-vertex indices over the base vertex index."""
        return np.flatnonzero(self.map.vmap == base_vi)

    def degree(self) -> int:
        sizes = np.bincount(self.map.vmap, minlength=self.base.nv)
        return int(sizes[0]) if self.base.nv else 0

    def validate(self, allow_degree_one: bool = False) -> list[str]:
        """Covering-axiom violations, as strings; [] means a covering."""
        problems = []
        total, base, m = self.total, self.base, self.map
        if not total.is_connected():
            problems.append("total graph is not connected")
        if not base.is_connected():
            problems.append("base graph is not connected")
        vsizes = np.bincount(m.vmap, minlength=base.nv)
        if base.nv and (vsizes == 0).any():
            problems.append("not surjective on vertices")
        if base.ne and (np.bincount(m.emap, minlength=base.ne) == 0).any():
            problems.append("not surjective on edges")
        if base.nv and not (vsizes == vsizes[0]).all():
            problems.append("fiber sizes are not constant")
        # star bijectivity: out- and in-edges at u inject into those at vmap[u]
        # with matching counts
        for direction, ends in (("out", total.esrc), ("in", total.edst)):
            key = ends * max(base.ne, 1) + m.emap
            if len(np.unique(key)) != total.ne:
                problems.append(f"two {direction}-edges at one vertex share a base edge")
        base_out = np.bincount(base.esrc, minlength=base.nv)
        base_in = np.bincount(base.edst, minlength=base.nv)
        tot_out = np.bincount(total.esrc, minlength=total.nv)
        tot_in = np.bincount(total.edst, minlength=total.nv)
        if not (np.array_equal(tot_out, base_out[m.vmap])
                and np.array_equal(tot_in, base_in[m.vmap])):
            problems.append("some vertex star does not match its image star")
        if not allow_degree_one and not problems and self.degree() < 2:
            problems.append("degree 1 covering (homeomorphism) not allowed here")
        return problems

    # -- lifting ----------------------------------------------------------

    def _lift_tables(self):
        """Per (total vertex, base edge): the unique outgoing/incoming lift."""
        if not hasattr(self, "_lifts"):
            out: dict = {}
            inc: dict = {}
            for e in range(self.total.ne):
                out[(int(self.total.esrc[e]), int(self.map.emap[e]))] = e
                inc[(int(self.total.edst[e]), int(self.map.emap[e]))] = e
            self._lifts = (out, inc)
        return self._lifts

    def lift_path(self, start_vi: int, loop: Sequence[Step]) -> int:
        """End vertex index of the lift of a base edge path from start_vi."""
        out, inc = self._lift_tables()
        cur = start_vi
        for edge_id, sign in loop:
            be = self.base.edge_index(edge_id)
            if sign == 1:
                e = out.get((cur, be))
                if e is None:
                    raise ValueError("path does not continue at the current vertex")
                cur = int(self.total.edst[e])
            else:
                e = inc.get((cur, be))
                if e is None:
                    raise ValueError("path does not continue at the current vertex")
                cur = int(self.total.esrc[e])
        return cur

    def _step_transport(self, base_ei: int, sign: int) -> np.ndarray:
        """Per total vertex, where the unique lift of one base step lands."""
        cache = getattr(self, "_transport", None)
        if cache is None:
            cache = self._transport = {}
        if (base_ei, sign) not in cache:
            sel = np.flatnonzero(self.map.emap == base_ei)
            nxt = -np.ones(self.total.nv, dtype=np.int64)
            if sign == 1:
                nxt[self.total.esrc[sel]] = self.total.edst[sel]
            else:
                nxt[self.total.edst[sel]] = self.total.esrc[sel]
            cache[(base_ei, sign)] = nxt
        return cache[(base_ei, sign)]

    def check_loop(self, loop: Sequence[Step], base_vi: int = 0):
        cur = base_vi
        for edge_id, sign in loop:
            ei = self.base.edge_index(edge_id)
            s, t = int(self.base.esrc[ei]), int(self.base.edst[ei])
            start, end = (s, t) if sign == 1 else (t, s)
            if start != cur:
                raise ValueError("loop is not a path at the base point")
            cur = end
        if cur != base_vi:
            raise ValueError("loop does not close up at the base point")

    def monodromy(self, loop: Sequence[Step], base_vi: int = 0) -> np.ndarray:
        """Endpoint-of-lift permutation of fiber positions over base_vi.

        The loop must be a closed edge path at the base vertex; lifting a
        step and its reverse cancels automatically, so homotopic words act
        identically.
        """
        self.check_loop(loop, base_vi)
        fiber = self.fiber(base_vi)
        pos = -np.ones(self.total.nv, dtype=np.int64)
        pos[fiber] = np.arange(len(fiber))
        cur = fiber.copy()
        for edge_id, sign in loop:
            cur = self._step_transport(self.base.edge_index(edge_id), sign)[cur]
            if (cur < 0).any():
                raise ValueError("lift breaks: the map is not a covering here")
        return pos[cur]

    # -- deck group --------------------------------------------------------

    def deck_transformation_from(self, t0: int, image: int) -> Optional[DeckElement]:
        """Propagate the candidate t0 -> image; None when inconsistent."""
        total = self.total
        out, inc = self._lift_tables()
        vperm = -np.ones(total.nv, dtype=np.int64)
        eperm = -np.ones(total.ne, dtype=np.int64)
        vperm[t0] = image
        stack = [t0]
        adjacency = getattr(self, "_adj", None)
        if adjacency is None:
            adjacency = [[] for _ in range(total.nv)]
            for e in range(total.ne):
                adjacency[int(total.esrc[e])].append((e, 1))
                adjacency[int(total.edst[e])].append((e, -1))
            self._adj = adjacency
        emap = self.map.emap
        while stack:
            u = stack.pop()
            iu = int(vperm[u])
            for e, sign in adjacency[u]:
                table = out if sign == 1 else inc
                e2 = table.get((iu, int(emap[e])))
                if e2 is None:
                    return None
                if eperm[e] == -1:
                    eperm[e] = e2
                elif eperm[e] != e2:
                    return None
                w = int(total.edst[e]) if sign == 1 else int(total.esrc[e])
                w2 = int(total.edst[e2]) if sign == 1 else int(total.esrc[e2])
                if vperm[w] == -1:
                    vperm[w] = w2
                    stack.append(w)
                elif vperm[w] != w2:
                    return None
        if (vperm == -1).any() or (eperm == -1).any():
            return None  # disconnected total graph
        if (len(np.unique(vperm)) != total.nv
                or len(np.unique(eperm)) != total.ne):
            return None
        return DeckElement(vperm, eperm)

    def deck_group(self, base_vi: int = 0) -> "DeckGroup":
        """All deck transformations, by candidate propagation over one fiber."""
        fiber = self.fiber(base_vi)
        if not len(fiber):
            raise ValueError("empty fiber; the map is not onto this vertex")
        t0 = int(fiber[0])
        elements = []
        orbit = []
        for candidate in fiber:
            deck = self.deck_transformation_from(t0, int(candidate))
            if deck is not None:
                elements.append(deck)
                orbit.append(int(candidate))
        return DeckGroup(self, tuple(elements), fiber, t0, tuple(orbit))

    def is_regular(self, base_vi: int = 0) -> "RegularityReport":
        group = self.deck_group(base_vi)
        return RegularityReport(
            regular=len(group.elements) == len(group.fiber),
            degree=len(group.fiber),
            deck_order=len(group.elements),
            orbit=group.orbit,
        )


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    degree: int
    deck_order: int
    orbit: tuple


@dataclass(frozen=True)
class DeckGroup:
    """Deck transformations of one covering, with the inspected fiber."""

    covering: GraphCovering
    elements: tuple[DeckElement, ...]
    fiber: np.ndarray
    basepoint: int
    orbit: tuple

    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> DeckElement:
        return DeckElement(
            np.arange(self.covering.total.nv), np.arange(self.covering.total.ne)
        )

    def element_sending_basepoint_to(self, target_vi: int) -> DeckElement:
        for deck in self.elements:
            if deck.vperm[self.basepoint] == target_vi:
                return deck
        raise ValueError("no deck element reaches that fiber point (irregular cover?)")

    def is_free_and_transitive(self) -> bool:
        images = sorted(int(d.vperm[self.basepoint]) for d in self.elements)
        return images == sorted(int(u) for u in self.fiber)


def compose_coverings(coverings: Sequence[GraphCovering], k: int, k0: int) -> GraphCovering:
    """Composite covering from level k down to level k0 (1-based levels).

    ``coverings[i]`` joins level i+2 to level i+1; the composite of regular
    coverings is wrapped unverified -- callers re-verify regularity where
    they rely on it.
    """
    if not 1 <= k0 <= k <= len(coverings) + 1:
        raise ValueError("levels out of range")
    if k == k0:
        g = coverings[k0 - 2].total if k0 >= 2 else coverings[0].base
        ident = GraphMap(g, g, np.arange(g.nv), np.arange(g.ne))
        return GraphCovering(ident)
    m = coverings[k0 - 1].map
    for i in range(k0, k - 1):
        m = m.compose(coverings[i].map)
    return GraphCovering(m)


class CoveringTower:
    """Levels S_1 <- S_2 <- ... with a coherent thread of base points.

    The thread is chosen deterministically (least-index lifts) unless a
    ``base_thread`` of vertex ids is supplied; every fiber, deck group and
    identification is relative to it.
    """

    def __init__(self, coverings: Sequence[GraphCovering], *,
                 base_vertex=None, base_thread: Optional[Sequence] = None,
                 deck_witnesses: Optional[Sequence[DeckElement]] = None):
        if not coverings:
            raise ValueError("a tower needs at least one covering")
        self.coverings = list(coverings)
        for lower, upper in zip(self.coverings, self.coverings[1:]):
            if upper.base != lower.total:
                raise ValueError("consecutive coverings do not stack")
        self.base = self.coverings[0].base
        if base_thread is not None:
            self._thread = [self.graph(k).vertex_index(base_thread[k - 1])
                            for k in range(1, len(base_thread) + 1)]
        else:
            x1 = 0 if base_vertex is None else self.base.vertex_index(base_vertex)
            self._thread = [x1]
        self._deck_witnesses = list(deck_witnesses) if deck_witnesses else None
        self._composites: dict[tuple[int, int], GraphMap] = {}
        self._composite_covers: dict[tuple[int, int], GraphCovering] = {}

    @property
    def depth(self) -> int:
        """Largest level index (levels are 1-based)."""
        return len(self.coverings) + 1

    def graph(self, k: int) -> Graph:
        if k == 1:
            return self.base
        return self.coverings[k - 2].total

    def covering(self, k: int) -> GraphCovering:
        """The bonding covering f_k : S_k -> S_{k-1}, for k >= 2."""
        return self.coverings[k - 2]

    def composite_map(self, k: int, k0: int) -> GraphMap:
        if (k, k0) not in self._composites:
            if k == k0:
                g = self.graph(k)
                self._composites[(k, k0)] = GraphMap(
                    g, g, np.arange(g.nv), np.arange(g.ne)
                )
            else:
                m = self.coverings[k0 - 1].map
                for i in range(k0, k - 1):
                    m = m.compose(self.coverings[i].map)
                self._composites[(k, k0)] = m
        return self._composites[(k, k0)]

    def composite_covering(self, k: int, k0: int = 1) -> GraphCovering:
        if (k, k0) not in self._composite_covers:
            self._composite_covers[(k, k0)] = GraphCovering(self.composite_map(k, k0))
        return self._composite_covers[(k, k0)]

    def base_point(self, k: int) -> int:
        """Vertex index of the thread point x_k, lifting x_{k-1}."""
        while len(self._thread) < k:
            j = len(self._thread) + 1
            below = self._thread[-1]
            lifts = np.flatnonzero(self.covering(j).map.vmap == below)
            if not len(lifts):
                raise ValueError(f"bonding covering {j} misses the base thread")
            self._thread.append(int(lifts[0]))
        return self._thread[k - 1]

    def fiber(self, k: int) -> np.ndarray:
        """Total-vertex indices of level k over x_1, sorted."""
        return np.flatnonzero(self.composite_map(k, 1).vmap == self.base_point(1))

    def fiber_position(self, k: int) -> np.ndarray:
        pos = -np.ones(self.graph(k).nv, dtype=np.int64)
        pos[self.fiber(k)] = np.arange(len(self.fiber(k)))
        return pos

    def deck_fiber_perm_from_point(self, k: int, target_vi: int) -> np.ndarray:
        """Fiber action of the deck element of f_{k,1} sending x_k there.

        Regularity makes the element unique; the permutation is returned
        over fiber positions.
        """
        if k == 1:
            return np.zeros(1, dtype=np.int64)
        cov = self.composite_covering(k, 1)
        deck = cov.deck_transformation_from(self.base_point(k), target_vi)
        if deck is None:
            raise ValueError("no deck element reaches that fiber point")
        fiber = self.fiber(k)
        return self.fiber_position(k)[deck.vperm[fiber]]

    def generator_monodromies(self, k: int) -> dict:
        """Monodromy fiber permutation of each base edge at level k."""
        out = {}
        cov = self.composite_covering(k, 1)
        for e in self.base.edge_ids:
            out[e] = cov.monodromy(((e, 1),), self.base_point(1))
        return out

    def verify_regular(self, k: int) -> RegularityReport:
        """Regularity of f_{k,1}, by enumeration (meant for desk sizes)."""
        return self.composite_covering(k, 1).is_regular(self.base_point(1))


def cyclic_tower(degrees: Sequence[int], **kw) -> "CyclicTower":
    return CyclicTower(degrees, **kw)


class CyclicTower(CoveringTower):
    """Tower of cycle graphs C_1 <- C_{d_1} <- C_{d_1 d_2} <- ...

    Deck groups are rotation groups; the structural shortcuts below are
    verified, not assumed (see :meth:`verify_rotation_witness`).
    """

    def __init__(self, degrees: Sequence[int], **kw):
        degrees = list(degrees)
        if any(d < 1 for d in degrees):
            raise ValueError("covering degrees must be positive")
        self.degrees = degrees
        sizes = [1]
        for d in degrees:
            sizes.append(sizes[-1] * d)
        self.sizes = sizes  # sizes[k-1] = order of level k
        coverings = []
        for below, above in zip(sizes, sizes[1:]):
            upper, lower = Graph.cycle(above), Graph.cycle(below)
            idx = np.arange(above, dtype=np.int64)
            coverings.append(GraphCovering(GraphMap(upper, lower, idx % below, idx % below)))
        super().__init__(coverings, **kw)

    def deck_fiber_perm_from_point(self, k: int, target_vi: int) -> np.ndarray:
        n = self.sizes[k - 1]
        r = (target_vi - self.base_point(k)) % n
        return (np.arange(n, dtype=np.int64) + r) % n

    def verify_rotation_witness(self, k: int) -> bool:
        """Check that rotation by 1 is deck and acts transitively at level k.

        This certifies regularity of f_{k,1} without enumerating the group:
        the rotation commutes with the projection, is an automorphism, and
        its orbit exhausts the fiber, so the deck group has full size.
        """
        g = self.graph(k)
        n = g.nv
        rot = (np.arange(n, dtype=np.int64) + 1) % n
        m = self.composite_map(k, 1)
        automorphic = (np.array_equal(g.esrc[rot], rot[g.esrc])
                       and np.array_equal(g.edst[rot], rot[g.edst]))
        commutes = (np.array_equal(m.vmap[rot], m.vmap)
                    and np.array_equal(m.emap[rot], m.emap))
        transitive = len(self.fiber(k)) == n
        return bool(automorphic and commutes and transitive)
