"""Grid and front presentations of Legendrian links.

A grid diagram is a pair of permutations: row ``r`` carries an X in column
``x_positions[r]`` and an O in column ``o_positions[r]``.  Rows are traversed
from X to O and columns from O to X, which fixes an orientation of every
component.  Rows are numbered top to bottom, as in a printed matrix.

Fronts live in the ``(u, z)`` plane, where ``u`` is the horizontal front
coordinate.  The front of a grid is obtained by the change of coordinates
``(u, z) = (col + row, col - row)``: horizontal grid segments become slope +1
segments, vertical ones become slope -1 segments, north-west and south-east
corners become cusps and the remaining corners become smooth junctions.
Vertical strands cross over horizontal ones in a grid, so in the front the
slope -1 strand is always the over-strand.

Grid file grammar (one ``key=value`` statement per line or separated by
``;``, ``#`` starts a comment)::

    n=<int>                       required, grid size
    X=<c0>,<c1>,...               required, X column of each row
    O=<c0>,<c1>,...               required, O column of each row
    orient=<+|->,...              optional, one sign per component
    frame=<tb-1|int|.>,...        optional, one entry per component
                                  ("." for dotted components)
    dotted=<id>,...               optional, components that are 1-handles

Components are numbered in order of their lowest row.  Any other key, a
repeated key, or stray text is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Point = tuple[int, int]


class GridParseError(ValueError):
    """A grid file could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MalformedPermutation(GridParseError):
    pass


class SizeMismatch(GridParseError):
    pass


class CellCollision(GridParseError):
    pass


class InvalidFront(ValueError):
    pass


@dataclass(frozen=True)
class GridDiagram:
    size: int
    x_positions: tuple[int, ...]
    o_positions: tuple[int, ...]
    orientations: tuple[int, ...] = ()
    framings: tuple[int | None, ...] = ()
    dotted: frozenset[int] = frozenset()
    component_labels: tuple[int, ...] = field(init=False, repr=False)
    _rows: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.size
        if n < 0 or n == 1:
            raise SizeMismatch("grid size must be 0 (empty link) or at least 2")
        for name, perm in (("X", self.x_positions), ("O", self.o_positions)):
            if len(perm) != n:
                raise SizeMismatch(f"{name} has {len(perm)} entries, expected {n}")
            if sorted(perm) != list(range(n)):
                raise MalformedPermutation(f"{name} is not a permutation of 0..{n - 1}")
        for r in range(n):
            if self.x_positions[r] == self.o_positions[r]:
                raise CellCollision(f"row {r} has X and O in column {self.x_positions[r]}")
        x_inv = {c: r for r, c in enumerate(self.x_positions)}
        labels = [-1] * n
        rows = []
        for start in range(n):
            if labels[start] != -1:
                continue
            orbit, r = [], start
            while labels[r] == -1:
                labels[r] = len(rows)
                orbit.append(r)
                r = x_inv[self.o_positions[r]]
            rows.append(tuple(orbit))
        object.__setattr__(self, "component_labels", tuple(labels))
        object.__setattr__(self, "_rows", tuple(rows))
        k = len(rows)
        if self.orientations and len(self.orientations) != k:
            raise SizeMismatch(f"orient lists {len(self.orientations)} signs for {k} components")
        if self.framings and len(self.framings) != k:
            raise SizeMismatch(f"frame lists {len(self.framings)} entries for {k} components")
        if any(not 0 <= d < k for d in self.dotted):
            raise SizeMismatch("dotted component id out of range")

    @property
    def num_components(self) -> int:
        return len(self._rows)

    def component_rows(self, i: int) -> tuple[int, ...]:
        """Rows visited by component ``i`` in traversal order."""
        return self._rows[i]

    def component_vertices(self, i: int) -> list[Point]:
        """Corners ``(col, row)`` of component ``i`` in traversal order."""
        pts: list[Point] = []
        for r in self._rows[i]:
            pts.append((self.x_positions[r], r))
            pts.append((self.o_positions[r], r))
        if self.orientations and self.orientations[i] < 0:
            pts.reverse()
        return pts


def _split_statements(text: str) -> Iterable[tuple[int, str]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if stmt:
                yield lineno, stmt


def _int_list(value: str, key: str, lineno: int) -> tuple[int, ...]:
    if not value.strip():
        return ()
    try:
        return tuple(int(tok) for tok in value.split(","))
    except ValueError:
        raise MalformedPermutation(f"{key} must be a comma-separated list of integers", lineno)


def parse_grid(text: str) -> GridDiagram:
    """Parse grid file contents into a validated :class:`GridDiagram`."""
    seen: dict[str, tuple[int, str]] = {}
    for lineno, stmt in _split_statements(text):
        if "=" not in stmt:
            raise GridParseError(f"expected key=value, got {stmt!r}", lineno)
        key, value = (s.strip() for s in stmt.split("=", 1))
        if key not in ("n", "X", "O", "orient", "frame", "dotted"):
            raise GridParseError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise GridParseError(f"duplicate key {key!r}", lineno)
        seen[key] = (lineno, value)
    for key in ("n", "X", "O"):
        if key not in seen:
            raise GridParseError(f"missing required key {key!r}")

    line_n, v = seen["n"]
    try:
        n = int(v)
    except ValueError:
        raise SizeMismatch(f"n must be an integer, got {v!r}", line_n)
    if n < 0 or n == 1:
        raise SizeMismatch("grid size must be 0 (empty link) or at least 2", line_n)
    perms = {}
    for key in ("X", "O"):
        lineno, value = seen[key]
        perm = _int_list(value, key, lineno)
        if len(perm) != n:
            raise SizeMismatch(f"{key} has {len(perm)} entries, expected {n}", lineno)
        if sorted(perm) != list(range(n)):
            raise MalformedPermutation(f"{key} is not a permutation of 0..{n - 1}", lineno)
        perms[key] = perm
    for r in range(n):
        if perms["X"][r] == perms["O"][r]:
            raise CellCollision(f"row {r} has X and O in column {perms['X'][r]}", seen["O"][0])
    bare = GridDiagram(n, perms["X"], perms["O"])
    k = bare.num_components

    dotted: frozenset[int] = frozenset()
    if "dotted" in seen:
        lineno, value = seen["dotted"]
        ids = _int_list(value, "dotted", lineno) if value else ()
        if any(not 0 <= d < k for d in ids):
            raise SizeMismatch(f"dotted component id out of range 0..{k - 1}", lineno)
        dotted = frozenset(ids)

    orientations: tuple[int, ...] = ()
    if "orient" in seen:
        lineno, value = seen["orient"]
        toks = [t.strip() for t in value.split(",")]
        if any(t not in "+-" or not t for t in toks):
            raise GridParseError("orient entries must be + or -", lineno)
        if len(toks) != k:
            raise SizeMismatch(f"orient lists {len(toks)} signs for {k} components", lineno)
        orientations = tuple(1 if t == "+" else -1 for t in toks)

    framings: tuple[int | None, ...] = ()
    if "frame" in seen:
        lineno, value = seen["frame"]
        toks = [t.strip() for t in value.split(",")]
        if len(toks) != k:
            raise SizeMismatch(f"frame lists {len(toks)} entries for {k} components", lineno)
        out: list[int | None] = []
        for i, t in enumerate(toks):
            if i in dotted:
                if t != ".":
                    raise GridParseError(f"dotted component {i} takes '.' as framing", lineno)
                out.append(None)
            elif t == "tb-1":
                out.append(None)
            else:
                try:
                    out.append(int(t))
                except ValueError:
                    raise GridParseError(f"bad framing {t!r}", lineno)
        framings = tuple(out)

    return GridDiagram(n, perms["X"], perms["O"], orientations, framings, dotted)


def format_grid(g: GridDiagram) -> str:
    lines = [
        f"n={g.size}",
        "X=" + ",".join(map(str, g.x_positions)),
        "O=" + ",".join(map(str, g.o_positions)),
    ]
    if g.orientations:
        lines.append("orient=" + ",".join("+" if s > 0 else "-" for s in g.orientations))
    if g.framings:
        lines.append("frame=" + ",".join(
            "." if i in g.dotted else ("tb-1" if f is None else str(f))
            for i, f in enumerate(g.framings)))
    if g.dotted:
        lines.append("dotted=" + ",".join(map(str, sorted(g.dotted))))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fronts


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point
    slope: int
    component: int
    index: int

    @property
    def du(self) -> int:
        return 1 if self.end[0] > self.start[0] else -1

    @property
    def dz(self) -> int:
        return self.du * self.slope


@dataclass(frozen=True)
class Cusp:
    position: Point
    side: str  # "left" or "right": the direction the cusp points
    direction: str  # "up" or "down": z-direction of traversal through the cusp
    component: int
    index: int  # vertex index in the component


@dataclass(frozen=True)
class Crossing:
    position: tuple[Fraction, Fraction]
    sign: int
    over: Segment
    under: Segment
    over_slope: int = -1


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class FrontDiagram:
    """A front made of slope +-1 segments.

    ``components`` holds one closed polygon per link component, as a tuple of
    ``(u, z)`` integer vertices in traversal order.  Every vertex is either a
    cusp or a smooth junction between a slope +1 and a slope -1 segment.
    """

    components: tuple[tuple[Point, ...], ...]
    segments: tuple[Segment, ...] = field(init=False, repr=False, compare=False)
    cusps: tuple[Cusp, ...] = field(init=False, repr=False, compare=False)
    crossings: tuple[Crossing, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        comps = tuple(tuple((int(u), int(z)) for u, z in comp) for comp in self.components)
        object.__setattr__(self, "components", comps)
        segs: list[Segment] = []
        cusps: list[Cusp] = []
        for ci, comp in enumerate(comps):
            m = len(comp)
            if m < 2:
                raise InvalidFront(f"component {ci} has fewer than two vertices")
            comp_segs = []
            for k in range(m):
                a, b = comp[k], comp[(k + 1) % m]
                du, dz = b[0] - a[0], b[1] - a[1]
                if du == 0 or abs(du) != abs(dz):
                    raise InvalidFront(f"component {ci} segment {k} has slope other than +-1")
                comp_segs.append(Segment(a, b, _sgn(dz) * _sgn(du), ci, k))
            for k in range(m):
                prev, nxt = comp_segs[k - 1], comp_segs[k]
                if prev.slope == nxt.slope:
                    raise InvalidFront(f"component {ci} vertex {k} joins two segments of equal slope")
                if prev.du != nxt.du:
                    cusps.append(Cusp(
                        comp[k],
                        "right" if prev.du > 0 else "left",
                        "up" if prev.dz > 0 else "down",
                        ci, k,
                    ))
            segs.extend(comp_segs)
        object.__setattr__(self, "segments", tuple(segs))
        object.__setattr__(self, "cusps", tuple(cusps))
        object.__setattr__(self, "crossings", tuple(self._find_crossings(segs)))

    @staticmethod
    def _find_crossings(segs: Sequence[Segment]) -> list[Crossing]:
        out = []
        for i, s in enumerate(segs):
            for t in segs[i + 1:]:
                adjacent = s.component == t.component and (
                    s.end == t.start or t.end == s.start)
                su = sorted((s.start[0], s.end[0]))
                tu = sorted((t.start[0], t.end[0]))
                if s.slope == t.slope:
                    cs = s.start[1] - s.slope * s.start[0]
                    ct = t.start[1] - t.slope * t.start[0]
                    if cs == ct and su[0] <= tu[1] and tu[0] <= su[1] and not adjacent:
                        raise InvalidFront("two segments overlap on a common line")
                    continue
                pos, neg = (s, t) if s.slope > 0 else (t, s)
                b = pos.start[1] - pos.start[0]
                d = neg.start[1] + neg.start[0]
                u = Fraction(d - b, 2)
                z = Fraction(d + b, 2)
                in_s = su[0] <= u <= su[1]
                in_t = tu[0] <= u <= tu[1]
                if not (in_s and in_t):
                    continue
                if adjacent:
                    continue
                if u in su or u in tu:
                    raise InvalidFront(f"non-generic front: vertex on another strand at u={u}")
                over, under = neg, pos
                sign = _sgn(over.du * under.dz - over.dz * under.du)
                out.append(Crossing((u, z), sign, over, under))
        return out

    @property
    def num_components(self) -> int:
        return len(self.components)

    def component_segments(self, i: int) -> list[Segment]:
        return [s for s in self.segments if s.component == i]

    def component_cusps(self, i: int) -> list[Cusp]:
        return [c for c in self.cusps if c.component == i]

    def self_writhe(self, i: int) -> int:
        return sum(c.sign for c in self.crossings
                   if c.over.component == i and c.under.component == i)

    def linking_number(self, i: int, j: int) -> int:
        s = sum(c.sign for c in self.crossings
                if {c.over.component, c.under.component} == {i, j})
        if i == j:
            raise ValueError("linking number needs two distinct components")
        if s % 2:
            raise InvalidFront("odd crossing count between two closed components")
        return s // 2

    @property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    def lines(self) -> tuple[list[int], list[int]]:
        """Sorted intercepts ``b`` of lines ``z = u + b`` and ``d`` of lines ``z = -u + d``."""
        plus = sorted({s.start[1] - s.start[0] for s in self.segments if s.slope > 0})
        minus = sorted({s.start[1] + s.start[0] for s in self.segments if s.slope < 0})
        return plus, minus


def grid_to_front(g: GridDiagram) -> FrontDiagram:
    comps = []
    for i in range(g.num_components):
        comps.append(tuple((c + r, c - r) for c, r in g.component_vertices(i)))
    return FrontDiagram(tuple(comps))


def front_to_grid(f: FrontDiagram) -> GridDiagram:
    """Grid whose front is ``f`` up to rescaling each family of lines.

    Needs every line ``z = +-u + c`` to carry exactly one segment.  Slope +1
    segments become rows (ordered by decreasing intercept, so rows run top to
    bottom) and slope -1 segments become columns.
    """
    if not f.components:
        return GridDiagram(0, (), ())
    plus, minus = f.lines()
    n = len(plus)
    if len(minus) != n or n != len(f.segments) // 2:
        raise InvalidFront("some line carries more than one segment; no grid has this front")
    row = {b: i for i, b in enumerate(reversed(plus))}
    col = {d: j for j, d in enumerate(minus)}
    xs, os_ = [None] * n, [None] * n
    for comp in f.components:
        m = len(comp)
        start = 0 if comp[1][1] - comp[0][1] == comp[1][0] - comp[0][0] else 1
        for k in range(start, start + m, 2):
            (u0, z0), (u1, z1) = comp[k % m], comp[(k + 1) % m]
            r = row[z0 - u0]
            xs[r], os_[r] = col[u0 + z0], col[u1 + z1]
    g = GridDiagram(n, tuple(xs), tuple(os_))
    if g.num_components != f.num_components:
        raise InvalidFront("grid traversal does not reproduce the components")
    return g


@dataclass(frozen=True)
class ClassicalInvariants:
    tb: tuple[int, ...]
    rot: tuple[int, ...]
    writhe: int
    self_writhe: tuple[int, ...]
    up: int
    down: int
    left: int
    right: int


def classical_invariants(f: FrontDiagram) -> ClassicalInvariants:
    tb, rot, sw = [], [], []
    for i in range(f.num_components):
        cusps = f.component_cusps(i)
        w = f.self_writhe(i)
        down = sum(1 for c in cusps if c.direction == "down")
        up = len(cusps) - down
        sw.append(w)
        tb.append(w - len(cusps) // 2)
        rot.append((down - up) // 2)
    return ClassicalInvariants(
        tb=tuple(tb),
        rot=tuple(rot),
        writhe=f.writhe,
        self_writhe=tuple(sw),
        up=sum(1 for c in f.cusps if c.direction == "up"),
        down=sum(1 for c in f.cusps if c.direction == "down"),
        left=sum(1 for c in f.cusps if c.side == "left"),
        right=sum(1 for c in f.cusps if c.side == "right"),
    )


def _scaled(f: FrontDiagram, k: int) -> list[list[Point]]:
    return [[(k * u, k * z) for u, z in comp] for comp in f.components]


def stabilize(f: FrontDiagram, component: int, sign: int) -> FrontDiagram:
    """Add one zig-zag to ``component``.

    ``sign=+1`` adds two down cusps (rot goes up by one), ``sign=-1`` two up
    cusps.  The coordinates are first scaled by 4, then a slope -1 segment
    traversed in the matching z-direction gets a jog of width one next to its
    end point, so no crossing is created or destroyed.
    """
    if not 0 <= component < f.num_components:
        raise IndexError(f"no component {component}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    comps = _scaled(f, 4)
    verts = comps[component]
    m = len(verts)
    want_dz = -1 if sign > 0 else 1
    before = len(f.component_cusps(component))
    for k in range(m):
        p, q = verts[k], verts[(k + 1) % m]
        du, dz = q[0] - p[0], q[1] - p[1]
        if du * dz >= 0 or _sgn(dz) != want_dz:
            continue
        step = (_sgn(du), _sgn(dz))
        mid = (q[0] - step[0], q[1] - step[1])
        for side in (1, -1):
            delta = (side, side)
            new = verts[: k + 1] + [mid, (mid[0] + delta[0], mid[1] + delta[1]),
                                    (q[0] + delta[0], q[1] + delta[1])] + verts[k + 2:]
            if k + 1 == m:
                # q is vertex 0
                new = [(q[0] + delta[0], q[1] + delta[1])] + verts[1:] + [
                    mid, (mid[0] + delta[0], mid[1] + delta[1])]
            trial = comps[:component] + [new] + comps[component + 1:]
            out = FrontDiagram(tuple(tuple(c) for c in trial))
            if len(out.component_cusps(component)) == before + 2:
                return out
    raise InvalidFront(f"component {component} has no slope -1 segment to stabilize")


def mirror(f: FrontDiagram) -> FrontDiagram:
    """Reflect the front across the horizontal axis ``z -> -z``."""
    return FrontDiagram(tuple(tuple((u, -z) for u, z in comp) for comp in f.components))


def reverse(f: FrontDiagram, component: int) -> FrontDiagram:
    comps = list(f.components)
    comps[component] = tuple(reversed(comps[component]))
    return FrontDiagram(tuple(comps))
