"""Open books from square bridge fronts.

A front with only slope +-1 segments lies on ``p`` lines ``z = u + b_i`` and
``q`` lines ``z = -u + d_j``.  Thickening each line to a strip and joining the
strips ``S+_i`` and ``S-_j`` by a quarter-twisted band ``B_ij`` at every
intersection point gives a surface whose boundary is the ``(p, q)`` torus
link.  Here that surface is a ribbon graph: strips are vertices, bands are
edges, and the cyclic order at each strip is the order of its bands along the
line (increasing ``u``).

The link sits on the page: each segment runs along its strip and each front
vertex, where the slope flips, is crossed through its band.  Homology classes
are edge vectors restricted to the edges outside a fixed spanning tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg, mcg
from .diagram import ClassicalInvariants, FrontDiagram, InvalidFront, classical_invariants
from .surgery import SurgeryPresentation, Verdict

Dart = tuple[int, int]  # (edge index, 0 = tail end / 1 = head end)
Step = tuple[int, int]  # (edge index, +1 along the edge / -1 against it)


class NotNormalized(ValueError):
    pass


class EmbeddingFailure(RuntimeError):
    pass


class NotAllowable(RuntimeError):
    pass


class PageInconsistent(AssertionError):
    pass


# ---------------------------------------------------------------------------
# ribbon graphs


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    label: tuple


@dataclass(frozen=True)
class RibbonGraph:
    vertex_labels: tuple
    edges: tuple[Edge, ...]
    rotation: tuple[tuple[Dart, ...], ...]

    def __post_init__(self):
        darts = sorted(d for rot in self.rotation for d in rot)
        if darts != [(e, end) for e in range(len(self.edges)) for end in (0, 1)]:
            raise PageInconsistent("rotation system does not list every dart exactly once")
        for v, rot in enumerate(self.rotation):
            for e, end in rot:
                edge = self.edges[e]
                if (edge.head if end else edge.tail) != v:
                    raise PageInconsistent(f"dart {(e, end)} listed at the wrong vertex")

    @cached_property
    def _position(self) -> dict[Dart, tuple[int, int]]:
        return {d: (v, k) for v, rot in enumerate(self.rotation) for k, d in enumerate(rot)}

    def vertex_of(self, d: Dart) -> int:
        return self._position[d][0]

    def next_dart(self, d: Dart) -> Dart:
        v, k = self._position[d]
        rot = self.rotation[v]
        return rot[(k + 1) % len(rot)]

    @cached_property
    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        """Boundary components: the cycles of ``next_dart`` after switching ends."""
        seen: set[Dart] = set()
        out = []
        for d in self._position:
            if d in seen:
                continue
            cyc = []
            x = d
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.next_dart((x[0], 1 - x[1]))
            out.append(tuple(cyc))
        return tuple(out)

    @property
    def euler_char(self) -> int:
        return len(self.vertex_labels) - len(self.edges)

    @property
    def boundary_components(self) -> int:
        return len(self.faces)

    @property
    def genus(self) -> int:
        two_g = 2 - self.euler_char - self.boundary_components
        if two_g % 2 or two_g < 0:
            raise PageInconsistent("Euler characteristic and boundary count are incompatible")
        return two_g // 2

    def face_of(self, d: Dart) -> int:
        for i, f in enumerate(self.faces):
            if d in f:
                return i
        raise KeyError(d)


def _insert(rotation: list[list[Dart]], v: int, before: Dart | None, darts: Sequence[Dart]) -> None:
    rot = rotation[v]
    k = len(rot) if before is None else rot.index(before)
    rot[k:k] = list(darts)


# ---------------------------------------------------------------------------
# pages


@dataclass(frozen=True)
class PageSurface:
    graph: RibbonGraph
    p: int
    q: int
    history: tuple[str, ...] = ()

    @property
    def euler_char(self) -> int:
        return self.graph.euler_char

    @property
    def boundary_components(self) -> int:
        return self.graph.boundary_components

    @property
    def genus(self) -> int:
        return self.graph.genus

    @cached_property
    def _tree(self) -> tuple[frozenset[int], dict[int, tuple[int, int]]]:
        # breadth-first from vertex 0 in rotation order; parent[v] = (edge, parent vertex)
        g = self.graph
        parent: dict[int, tuple[int, int]] = {}
        seen = {0}
        queue = [0]
        tree = set()
        while queue:
            v = queue.pop(0)
            for e, end in g.rotation[v]:
                edge = g.edges[e]
                w = edge.tail if end else edge.head
                if w not in seen:
                    seen.add(w)
                    parent[w] = (e, v)
                    tree.add(e)
                    queue.append(w)
        if len(seen) != len(g.vertex_labels):
            raise PageInconsistent("page graph is disconnected")
        return frozenset(tree), parent

    @property
    def tree_edges(self) -> frozenset[int]:
        return self._tree[0]

    @cached_property
    def basis_edges(self) -> tuple[int, ...]:
        return tuple(e for e in range(len(self.graph.edges)) if e not in self.tree_edges)

    @property
    def rank_h1(self) -> int:
        return len(self.basis_edges)

    def _root_path(self, v: int) -> list[Step]:
        # steps leading from v up to the root
        parent = self._tree[1]
        out = []
        while v in parent:
            e, w = parent[v]
            out.append((e, 1 if self.graph.edges[e].tail == v else -1))
            v = w
        return out

    def tree_path(self, a: int, b: int) -> list[Step]:
        """Steps from ``a`` to ``b`` inside the spanning tree."""
        up_a, up_b = self._root_path(a), self._root_path(b)
        while up_a and up_b and up_a[-1] == up_b[-1]:
            up_a.pop()
            up_b.pop()
        return up_a + [(e, -s) for e, s in reversed(up_b)]

    def fundamental_cycle(self, e: int) -> tuple[Step, ...]:
        edge = self.graph.edges[e]
        return ((e, 1),) + tuple(self.tree_path(edge.head, edge.tail))

    def homology_class(self, walk: Sequence[Step]) -> tuple[int, ...]:
        check_closed(self.graph, walk)
        idx = {e: k for k, e in enumerate(self.basis_edges)}
        v = [0] * len(idx)
        for e, s in walk:
            if e in idx:
                v[idx[e]] += s
        return tuple(v)

    def pairing(self, w1: Sequence[Step], w2: Sequence[Step]) -> int:
        return intersection_number(self.graph, w1, w2)

    @cached_property
    def form(self) -> tuple[tuple[int, ...], ...]:
        """Oriented intersection numbers of the fundamental cycles.

        The page is oriented by the normal ``(-Y, 0, 1)`` along its core, for
        which the cyclic orders above are counterclockwise.
        """
        cycles = [self.fundamental_cycle(e) for e in self.basis_edges]
        n = len(cycles)
        by_vertex: dict[int, list[tuple[int, Dart, Dart]]] = {}
        for idx, w in enumerate(cycles):
            for v, a, b in _passages(self.graph, w):
                by_vertex.setdefault(v, []).append((idx, a, b))
        out = [[0] * n for _ in range(n)]
        for v, items in by_vertex.items():
            pos = {d: k for k, d in enumerate(self.graph.rotation[v])}
            m = 3 * len(pos)
            for i, a, b in items:
                for j, c, d in items:
                    if i != j:
                        out[i][j] += _chord_sign(3 * pos[a] - 1, 3 * pos[b] + 1, 3 * pos[c], 3 * pos[d], m)
        return tuple(map(tuple, out))

    @cached_property
    def twist_form(self) -> tuple[tuple[int, ...], ...]:
        """The pairing under which a right-handed twist is ``x -> x + <x, c> c``.

        A right-handed twist sends ``x`` to ``x + (c . x) c``, so this is the
        negated intersection form.  It equals ``V - V^T`` for the Seifert form
        ``V(a, b) = lk(a, b+)``.
        """
        return tuple(tuple(-x for x in row) for row in self.form)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "p": self.p,
            "q": self.q,
            "euler_char": self.euler_char,
            "boundary_components": self.boundary_components,
            "genus": self.genus,
            "vertices": [
                {"label": list(lab), "rotation": [[e, end] for e, end in g.rotation[v]]}
                for v, lab in enumerate(g.vertex_labels)
            ],
            "edges": [{"tail": x.tail, "head": x.head, "label": list(x.label)} for x in g.edges],
            "history": list(self.history),
        }


def check_closed(g: RibbonGraph, walk: Sequence[Step]) -> None:
    for k, (e, s) in enumerate(walk):
        edge = g.edges[e]
        end = edge.head if s > 0 else edge.tail
        e2, s2 = walk[(k + 1) % len(walk)]
        start = g.edges[e2].tail if s2 > 0 else g.edges[e2].head
        if end != start:
            raise EmbeddingFailure(f"walk breaks between steps {k} and {k + 1}")


def _passages(g: RibbonGraph, walk: Sequence[Step]) -> list[tuple[int, Dart, Dart]]:
    # (vertex, entering dart, leaving dart) for each transit through a strip
    out = []
    n = len(walk)
    for k in range(n):
        e, s = walk[k]
        e2, s2 = walk[(k + 1) % n]
        enter = (e, 1 if s > 0 else 0)
        leave = (e2, 0 if s2 > 0 else 1)
        out.append((g.vertex_of(enter), enter, leave))
    return out


def _in_arc(x: int, a: int, b: int, m: int) -> bool:
    # x strictly inside the counterclockwise arc from a to b
    return 0 < (x - a) % m < (b - a) % m


def _chord_sign(r: int, s: int, p: int, q: int, m: int) -> int:
    """Signed crossing of chord ``r -> s`` (pushed curve) with chord ``p -> q``.

    Endpoints are positions on the boundary circle, counterclockwise mod ``m``.
    The sign is that of ``(tangent of first, tangent of second)``.
    """
    r_in, s_in = _in_arc(r, p, q, m), _in_arc(s, p, q, m)
    if r_in == s_in:
        return 0
    return -1 if r_in else 1


def intersection_number(g: RibbonGraph, w1: Sequence[Step], w2: Sequence[Step]) -> int:
    """Algebraic intersection of two closed walks.

    ``w1`` is pushed to its left inside each band (towards the counterclockwise
    side where it leaves a strip, the clockwise side where it enters), so all
    crossings happen inside strips as crossings of chords.
    """
    p2 = {}
    for v, c, d in _passages(g, w2):
        p2.setdefault(v, []).append((c, d))
    total = 0
    for v, a, b in _passages(g, w1):
        if v not in p2:
            continue
        pos = {d: k for k, d in enumerate(g.rotation[v])}
        m = 3 * len(pos)
        for c, d in p2[v]:
            total += _chord_sign(3 * pos[a] - 1, 3 * pos[b] + 1, 3 * pos[c], 3 * pos[d], m)
    return total


def torus_page(p: int, q: int) -> PageSurface:
    """Strips ``S+_0..S+_{p-1}``, ``S-_0..S-_{q-1}`` and bands ``B_ij`` (edge ``i*q + j``)."""
    if p < 1 or q < 1:
        raise ValueError("need at least one line in each family")
    labels = tuple(("+", i) for i in range(p)) + tuple(("-", j) for j in range(q))
    edges = tuple(Edge(i, p + j, ("B", i, j)) for i in range(p) for j in range(q))
    rotation = tuple(
        [tuple((i * q + j, 0) for j in range(q)) for i in range(p)]
        + [tuple((i * q + j, 1) for i in range(p)) for j in range(q)]
    )
    return PageSurface(RibbonGraph(labels, edges, rotation), p, q)


def band(page: PageSurface, i: int, j: int) -> int:
    if not (0 <= i < page.p and 0 <= j < page.q):
        raise EmbeddingFailure(f"band B_{i},{j} is not on a {page.p}x{page.q} page")
    return i * page.q + j


# ---------------------------------------------------------------------------
# square bridge position


def coprime_padding(p: int, q: int) -> tuple[int, int]:
    """Fewest extra lines making ``gcd(p, q) = 1``.

    Ties go to adding lines to the smaller family, and to the slope +1 family
    when both families have the same size.
    """
    if p < 0 or q < 0:
        raise ValueError("line counts must be non-negative")
    plus_first = p <= q
    for t in range(0, p + q + 3):
        splits = range(t, -1, -1) if plus_first else range(0, t + 1)
        for x in splits:
            a, b = p + x, q + t - x
            if a >= 1 and b >= 1 and math.gcd(a, b) == 1:
                return x, t - x
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class SquareBridgePosition:
    plus_intercepts: tuple[int, ...]
    minus_intercepts: tuple[int, ...]
    segment_lines: tuple[tuple[int, ...], ...]  # per component: line index of each segment
    corners: tuple[tuple[tuple[int, int], ...], ...]  # per component: band (i, j) at each vertex
    padding: tuple[int, int]
    front: FrontDiagram | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for fam in (self.plus_intercepts, self.minus_intercepts):
            if any(a >= b for a, b in zip(fam, fam[1:])):
                raise ValueError("intercepts must be strictly increasing")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"(p, q) = ({self.p}, {self.q}) is not coprime")

    @property
    def p(self) -> int:
        return len(self.plus_intercepts)

    @property
    def q(self) -> int:
        return len(self.minus_intercepts)

    @property
    def occupied_bands(self) -> frozenset[tuple[int, int]]:
        return frozenset(c for comp in self.corners for c in comp)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "plus_intercepts": list(self.plus_intercepts),
            "minus_intercepts": list(self.minus_intercepts),
            "padding": list(self.padding),
            "corners": [[list(c) for c in comp] for comp in self.corners],
        }


def to_square_bridge(f: FrontDiagram | Sequence[Sequence[tuple[int, int]]]) -> SquareBridgePosition:
    if not isinstance(f, FrontDiagram):
        for ci, comp in enumerate(f):
            for k in range(len(comp)):
                (u0, z0), (u1, z1) = comp[k], comp[(k + 1) % len(comp)]
                if u1 == u0 or abs(z1 - z0) != abs(u1 - u0):
                    raise NotNormalized(f"component {ci} segment {k} is not of slope +-1")
        try:
            f = FrontDiagram(tuple(tuple(c) for c in f))
        except InvalidFront as exc:
            raise NotNormalized(str(exc)) from exc
    plus, minus = f.lines()
    dp, dq = coprime_padding(len(plus), len(minus))
    top_p = plus[-1] if plus else 0
    top_m = minus[-1] if minus else 0
    plus = plus + [top_p + k + 1 for k in range(dp)]
    minus = minus + [top_m + k + 1 for k in range(dq)]
    pi = {b: i for i, b in enumerate(plus)}
    mi = {d: j for j, d in enumerate(minus)}
    seg_lines, corners = [], []
    for ci in range(f.num_components):
        segs = f.component_segments(ci)
        lines = []
        for s in segs:
            u, z = s.start
            lines.append(pi[z - u] if s.slope > 0 else mi[z + u])
        cs = []
        for k, s in enumerate(segs):
            prev = segs[k - 1]
            pl, mn = (prev, s) if prev.slope > 0 else (s, prev)
            cs.append((lines[pl.index], lines[mn.index]))
        seg_lines.append(tuple(lines))
        corners.append(tuple(cs))
    return SquareBridgePosition(tuple(plus), tuple(minus), tuple(seg_lines), tuple(corners), (dp, dq), f)


def build_page(s: SquareBridgePosition) -> PageSurface:
    page = torus_page(s.p, s.q)
    if page.boundary_components != 1:
        raise PageInconsistent(f"coprime ({s.p}, {s.q}) page has {page.boundary_components} boundary components")
    if page.euler_char != s.p + s.q - s.p * s.q:
        raise PageInconsistent("page Euler characteristic disagrees with p + q - pq")
    return page


# ---------------------------------------------------------------------------
# curves on the page


@dataclass(frozen=True)
class EmbeddedCurve:
    walk: tuple[Step, ...]
    homology: tuple[int, ...]
    label: str
    component: int | None = None
    front_vertices: tuple[tuple[int, int], ...] = ()

    @property
    def non_separating(self) -> bool:
        return any(self.homology)

    def to_json(self) -> dict:
        return {"label": self.label, "walk": [list(x) for x in self.walk], "homology": list(self.homology)}


def embed_link(page: PageSurface, s: SquareBridgePosition, components: Sequence[int] | None = None) -> list[EmbeddedCurve]:
    """One closed walk per link component: strip, band, strip, band, ...

    At a vertex where the front passes from a slope +1 segment to a slope -1
    one the walk crosses ``B_ij`` from ``S+_i`` to ``S-_j``, and backwards in
    the other case.
    """
    if s.front is None:
        return []
    comps = range(s.front.num_components) if components is None else components
    used: set[int] = set()
    out = []
    for ci in comps:
        segs = s.front.component_segments(ci)
        walk = []
        for k, (i, j) in enumerate(s.corners[ci]):
            e = band(page, i, j)
            if e in used:
                raise EmbeddingFailure(f"band B_{i},{j} traversed twice")
            used.add(e)
            walk.append((e, 1 if segs[k - 1].slope > 0 else -1))
        walk_t = tuple(walk)
        check_closed(page.graph, walk_t)
        cls = page.homology_class(walk_t)
        if not any(cls):
            raise EmbeddingFailure(f"component {ci} is separating on the page")
        out.append(EmbeddedCurve(walk_t, cls, f"L{ci}", ci, s.front.components[ci]))
    return out


def hopf_cores(page: PageSurface) -> list[EmbeddedCurve]:
    """Cores of the ``(p-1)(q-1)`` Hopf bands, one per grid square.

    Ordered column by column (``j`` major, ``i`` minor).  The product of the
    twists in this order has the Alexander polynomial of ``T(p, q)`` as its
    characteristic polynomial; row-major order does not once ``p > 2``.
    """
    if page.boundary_components != 1:
        raise PageInconsistent("Hopf cores need a page with connected boundary")
    out = []
    for j in range(page.q - 1):
        for i in range(page.p - 1):
            walk = ((band(page, i, j), 1), (band(page, i + 1, j), -1),
                    (band(page, i + 1, j + 1), 1), (band(page, i, j + 1), -1))
            out.append(EmbeddedCurve(walk, page.homology_class(walk), f"H{i}_{j}"))
    if len(out) != 1 - page.euler_char:
        raise PageInconsistent("Hopf core count differs from 1 - euler_char")
    return out


def extend_class(c: EmbeddedCurve, page: PageSurface) -> EmbeddedCurve:
    """Re-express a curve's class on an enlarged page (new edges are never tree edges)."""
    return EmbeddedCurve(c.walk, page.homology_class(c.walk), c.label, c.component, c.front_vertices)


def _scoop_and_plumb(page: PageSurface, count: int, tag: str) -> tuple[PageSurface, list[Step], list[Step]]:
    # count loop edges in one corner of strip 0, then count loops joining each new hole to another face
    g = page.graph
    edges = list(g.edges)
    rotation = [list(r) for r in g.rotation]
    history = list(page.history)
    loops = []
    for k in range(count):
        e = len(edges)
        edges.append(Edge(0, 0, (f"{tag}scoop", k)))
        _insert(rotation, 0, None, [(e, 0), (e, 1)])
        loops.append(e)
        history.append(f"{tag}scoop {k}")
    scooped = PageSurface(RibbonGraph(g.vertex_labels, tuple(edges), tuple(map(tuple, rotation))), page.p, page.q,
                          tuple(history))
    if scooped.euler_char != page.euler_char - count or \
            scooped.boundary_components != page.boundary_components + count:
        raise PageInconsistent("scooping changed the page unexpectedly")
    plumbs = []
    current = scooped
    for k, loop in enumerate(loops):
        cg = current.graph
        inner = (loop, 1)
        f_inner = cg.face_of(inner)
        target = next(d for d in cg.rotation[0] if cg.face_of(d) != f_inner)
        e = len(cg.edges)
        edges = list(cg.edges) + [Edge(0, 0, (f"{tag}plumb", k))]
        rotation = [list(r) for r in cg.rotation]
        # tail end into the new hole's corner, head end into the target corner
        _insert(rotation, 0, inner, [(e, 0)])
        _insert(rotation, 0, target, [(e, 1)])
        history = list(current.history) + [f"{tag}plumb {k}"]
        nxt = PageSurface(RibbonGraph(cg.vertex_labels, tuple(edges), tuple(map(tuple, rotation))), page.p, page.q,
                          tuple(history))
        if nxt.boundary_components != current.boundary_components - 1:
            raise PageInconsistent("plumbing did not merge two boundary components")
        current = nxt
        plumbs.append((e, 1))
    return current, [(e, 1) for e in loops], plumbs


def one_handle_adjust(page: PageSurface, dotted_count: int) -> tuple[PageSurface, list[EmbeddedCurve]]:
    """Scoop one disk per dotted circle, then plumb a Hopf band across each new hole.

    A scoop is a loop edge inserted into a single corner of strip 0: it keeps
    the genus and adds a boundary component.  A plumbing edge joins a corner of
    that new boundary to a corner of another one.  Returns the new page and the
    core of every plumbed band.
    """
    if dotted_count < 0:
        raise ValueError("dotted_count must be non-negative")
    if dotted_count == 0:
        return page, []
    current, _, plumbs = _scoop_and_plumb(page, dotted_count, "")
    out = [EmbeddedCurve((w,), current.homology_class((w,)), f"P{k}") for k, w in enumerate(plumbs)]
    return current, out


def stabilize_genus(page: PageSurface, steps: int) -> tuple[PageSurface, list[EmbeddedCurve]]:
    """Raise the genus by ``steps`` with two positive Hopf bands per step.

    Both bands of a step are plumbed exactly as in :func:`one_handle_adjust`,
    but the scoop band now carries a twist along its core too, so neither band
    changes the 3-manifold.  The scoop band keeps the genus and splits off a
    boundary circle; the second band rejoins it, adding one to the genus.
    The returned cores are in the order the bands were plumbed.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps == 0:
        return page, []
    if page.boundary_components != 1:
        raise PageInconsistent("genus stabilization needs a page with connected boundary")
    current, scoops, plumbs = _scoop_and_plumb(page, steps, "stab-")
    out = [EmbeddedCurve((w,), current.homology_class((w,)), f"S{k}") for k, w in enumerate(scoops)]
    out += [EmbeddedCurve((w,), current.homology_class((w,)), f"T{k}") for k, w in enumerate(plumbs)]
    if current.genus != page.genus + steps:
        raise PageInconsistent("stabilization did not raise the genus by one per step")
    return current, out


# ---------------------------------------------------------------------------
# framing


Point3 = tuple[Fraction, Fraction, Fraction]

_DIRECTIONS = [(Fraction(1, 7), Fraction(2, 11)), (Fraction(-3, 13), Fraction(1, 17)),
               (Fraction(5, 23), Fraction(-4, 19)), (Fraction(2, 29), Fraction(7, 31))]


def legendrian_polygon(vertices: Sequence[tuple[int, int]]) -> list[Point3]:
    """The square bridge curve in ``(X, Y, Z)`` with ``Y`` the front slope.

    Each segment sits at height ``Y = slope``; at each vertex the curve runs
    along the band in the ``Y`` direction from the old slope to the new one.
    """
    m = len(vertices)
    slopes = []
    for k in range(m):
        (u0, z0), (u1, z1) = vertices[k], vertices[(k + 1) % m]
        slopes.append(1 if (z1 - z0) * (u1 - u0) > 0 else -1)
    pts = []
    for k in range(m):
        u, z = vertices[k]
        pts.append((Fraction(u), Fraction(slopes[k - 1]), Fraction(z)))
        pts.append((Fraction(u), Fraction(slopes[k]), Fraction(z)))
    return pts


def page_normal_pushoff(poly: Sequence[Point3], eps: Fraction) -> list[Point3]:
    """Push along ``(-Y, 0, 1)``, normal to the page along the curve.

    The page contains ``d/dY`` and ``d/dX + Y d/dZ`` along the curve; the
    normal pairs to ``1 + Y^2 > 0`` with ``dZ - Y dX``, so it is also
    transverse to the contact planes.
    """
    return [(x - eps * y, y, z + eps) for x, y, z in poly]


def _project(pt: Point3, d: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    x, y, z = pt
    return x - y * d[0], z - y * d[1]


class _Degenerate(Exception):
    pass


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _polygon_linking(k1: Sequence[Point3], k2: Sequence[Point3], d) -> int:
    # project along (d0, 1, d1); viewer at Y -> -infinity, so smaller Y is over
    total_over = 0
    total = 0
    n1, n2 = len(k1), len(k2)
    for a in range(n1):
        p0, p1 = k1[a], k1[(a + 1) % n1]
        P0, P1 = _project(p0, d), _project(p1, d)
        r = (P1[0] - P0[0], P1[1] - P0[1])
        for b in range(n2):
            q0, q1 = k2[b], k2[(b + 1) % n2]
            Q0, Q1 = _project(q0, d), _project(q1, d)
            s = (Q1[0] - Q0[0], Q1[1] - Q0[1])
            den = _cross(r, s)
            w = (Q0[0] - P0[0], Q0[1] - P0[1])
            if den == 0:
                if _cross(w, r) == 0 and (r != (0, 0) or s != (0, 0)):
                    raise _Degenerate
                continue
            t = _cross(w, s) / den
            u = _cross(w, r) / den
            if not (0 <= t <= 1 and 0 <= u <= 1):
                continue
            if t in (0, 1) or u in (0, 1):
                raise _Degenerate
            y1 = p0[1] + t * (p1[1] - p0[1])
            y2 = q0[1] + u * (q1[1] - q0[1])
            if y1 == y2:
                raise _Degenerate
            sign = (1 if den > 0 else -1) * (1 if y1 < y2 else -1)
            total += sign
            if y1 < y2:
                total_over += sign
    if total % 2 or total // 2 != total_over:
        raise _Degenerate
    return total_over


def polygon_linking_number(k1: Sequence[Point3], k2: Sequence[Point3]) -> int:
    """Linking number of two disjoint closed polygons by a generic projection."""
    for d in _DIRECTIONS:
        try:
            return _polygon_linking(k1, k2, d)
        except _Degenerate:
            continue
    raise RuntimeError("no generic projection direction found")


def page_framing(c: EmbeddedCurve, eps: Fraction = Fraction(1, 64)) -> int:
    """Linking number of the curve with its push-off along the page normal."""
    if not c.front_vertices:
        raise ValueError("curve carries no front geometry")
    poly = legendrian_polygon(c.front_vertices)
    return polygon_linking_number(poly, page_normal_pushoff(poly, eps))


def page_framing_check(c: EmbeddedCurve, inv: ClassicalInvariants) -> Verdict:
    tb = inv.tb[c.component]
    pf = page_framing(c)
    if pf == tb:
        return Verdict("FramingMatch", "page framing equals the contact framing",
                       {"component": c.component, "page_framing": pf, "tb": tb})
    return Verdict("FramingMismatch", "page framing differs from tb",
                   {"component": c.component, "page_framing": pf, "tb": tb})


# ---------------------------------------------------------------------------
# Lefschetz fibrations


@dataclass(frozen=True)
class OpenBook:
    """Open book with connected or disconnected binding and positive monodromy.

    ``cycles`` are the twist curves on ``page`` in monodromy order;
    ``binding`` records how the page was built, e.g. the torus-link type of
    the unadjusted page and every scoop, plumbing or stabilization step.
    """

    page: PageSurface
    cycles: tuple[EmbeddedCurve, ...]
    binding: dict = field(compare=False)

    @cached_property
    def coordinates(self) -> mcg.SymplecticCoordinates:
        coords = mcg.SymplecticCoordinates.from_form(self.page.twist_form)
        if self.page.boundary_components == 1 and coords.genus != self.page.genus:
            raise PageInconsistent("capped page genus disagrees with the ribbon graph")
        return coords

    @property
    def binding_components(self) -> int:
        return self.page.boundary_components

    @property
    def page_genus(self) -> int:
        return self.page.genus

    @cached_property
    def curves(self) -> tuple[mcg.Curve, ...]:
        return tuple(mcg.Curve(c.label.lower(), self.coordinates(c.homology)) for c in self.cycles)

    @property
    def monodromy(self) -> mcg.TwistWord:
        return mcg.TwistWord(tuple((c, 1) for c in self.curves), self.coordinates.genus)

    def boundary_homology(self) -> tuple[int, list[int]]:
        """``H_1`` of the 3-manifold, as ``coker(rho(monodromy) - I)`` on the capped page.

        Only meaningful for connected binding.
        """
        if self.binding_components != 1:
            raise PageInconsistent("boundary homology is computed for connected binding only")
        g = self.coordinates.genus
        if g == 0:
            return 0, []
        m = mcg.rho(self.monodromy).matrix
        a = [[m[i][j] - (i == j) for j in range(2 * g)] for i in range(2 * g)]
        return linalg.cokernel(a, 2 * g)

    def to_json(self) -> dict:
        return {
            "page": self.page.to_json(),
            "binding": self.binding,
            "monodromy": [dict(c.to_json(), curve=k.name, symplectic_class=list(k.cls))
                          for c, k in zip(self.cycles, self.curves)],
        }


@dataclass(frozen=True)
class LefschetzFibration:
    """Positive allowable Lefschetz fibration over the disk.

    ``vanishing_cycles`` are curves on the page after one-handle adjustment,
    in monodromy order: Hopf cores, then plumbing cores, then the link.
    ``coordinates`` identifies the capped page with the standard symplectic
    lattice, where the monodromy word lives.
    """

    page: PageSurface
    square_bridge: SquareBridgePosition | None
    vanishing_cycles: tuple[EmbeddedCurve, ...]
    coordinates: mcg.SymplecticCoordinates
    framing_verdicts: tuple[Verdict, ...] = ()
    handles: tuple[int, int] | None = None  # (1-handles, 2-handles) of the source presentation

    @property
    def fiber_genus(self) -> int:
        return self.page.genus

    @property
    def node_count(self) -> int:
        return len(self.vanishing_cycles)

    @property
    def euler_char(self) -> int:
        return self.page.euler_char + self.node_count

    @cached_property
    def curves(self) -> tuple[mcg.Curve, ...]:
        out = []
        for c in self.vanishing_cycles:
            cls = self.coordinates(c.homology)
            out.append(mcg.Curve(c.label.lower(), cls))
        return tuple(out)

    @property
    def monodromy(self) -> mcg.TwistWord:
        return mcg.TwistWord(tuple((c, 1) for c in self.curves), self.fiber_genus)

    @property
    def open_book(self) -> OpenBook:
        """The boundary open book: same page, monodromy the product of the vanishing twists."""
        binding = {"torus_link": [self.page.p, self.page.q], "steps": list(self.page.history)}
        ob = OpenBook(self.page, self.vanishing_cycles, binding)
        # share the coordinates already computed for the fibration
        ob.__dict__["coordinates"] = self.coordinates
        return ob

    def boundary_homology(self) -> tuple[int, list[int]]:
        """``H_1`` of the boundary, as ``coker(rho(monodromy) - I)``."""
        g = self.fiber_genus
        if g == 0:
            return 0, []
        m = mcg.rho(self.monodromy).matrix
        a = [[m[i][j] - (i == j) for j in range(2 * g)] for i in range(2 * g)]
        return linalg.cokernel(a, 2 * g)

    def to_json(self) -> dict:
        return {
            "square_bridge": self.square_bridge.to_json() if self.square_bridge else None,
            "page": self.page.to_json(),
            "fiber_genus": self.fiber_genus,
            "vanishing_cycles": [
                dict(c.to_json(), symplectic_class=list(k.cls), curve=k.name)
                for c, k in zip(self.vanishing_cycles, self.curves)
            ],
            "monodromy": mcg.dumps(self.monodromy),
            "framing_verdicts": [v.to_json() for v in self.framing_verdicts],
        }


def stein_to_palf(p: SurgeryPresentation) -> LefschetzFibration:
    if not p.stein:
        raise ValueError("presentation is not Stein (framings must be tb - 1)")
    for i in p.two_handles:
        if p.framing(i) != p.classical.tb[i] - 1:
            raise ValueError(f"component {i} is not Stein-framed")
    s = to_square_bridge(p.front)
    page = build_page(s)
    link = embed_link(page, s, p.two_handles)
    verdicts = tuple(page_framing_check(c, p.classical) for c in link)
    cores = hopf_cores(page)
    final, plumbs = one_handle_adjust(page, p.one_handle_count)
    cycles = [extend_class(c, final) for c in cores] + plumbs + [extend_class(c, final) for c in link]
    for c in cycles:
        if not c.non_separating:
            raise NotAllowable(f"vanishing cycle {c.label} is separating")
    if final.boundary_components != 1:
        raise PageInconsistent("binding is disconnected after adjustment")
    coords = mcg.SymplecticCoordinates.from_form(final.twist_form)
    if coords.genus != final.genus:
        raise PageInconsistent("capped page genus disagrees with the ribbon graph")
    fib = LefschetzFibration(final, s, tuple(cycles), coords, verdicts,
                             (p.one_handle_count, len(p.two_handles)))
    for c, k in zip(cycles, fib.curves):
        if not k.is_nonzero:
            raise NotAllowable(f"vanishing cycle {c.label} is null-homologous on the capped page")
    return fib
