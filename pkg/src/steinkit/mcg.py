"""Dehn twist words and their action on first homology.

Homology classes are integer vectors in a symplectic basis
``(alpha_1, beta_1, ..., alpha_g, beta_g)`` with ``<alpha_i, beta_i> = 1``.
The positive (right-handed) twist along ``c`` acts by the transvection
``x -> x + <x, c> c``.  This sign is fixed everywhere; the braid-relation
check in :func:`braid_check` pins it down.

The standard chain ``a1, b1, ..., ag, bg`` used by :func:`g_block` has classes
``a1 = alpha_1``, ``ai = alpha_i - alpha_{i-1}`` for ``i > 1`` and
``bi = beta_i``, so consecutive chain curves meet once and the others are
disjoint.

Every check here is homology-level only.  ``rho(w) == I`` is necessary for a
word to be trivial in the mapping class group, not sufficient.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg

Vector = tuple[int, ...]

HOMOLOGY_LEVEL = "homology-level"


class NoConjugatorFound(RuntimeError):
    pass


def symplectic_form(g: int) -> list[list[int]]:
    j = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    """``<x, y>`` for the standard symplectic form."""
    return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(len(x) // 2))


def _j_times(c: Sequence[int]) -> list[int]:
    # J c, so that <x, c> = x . (J c)
    out = [0] * len(c)
    for i in range(len(c) // 2):
        out[2 * i] = c[2 * i + 1]
        out[2 * i + 1] = -c[2 * i]
    return out


_NAME = re.compile(r"^[a-z][a-z0-9_]*$")


@dataclass(frozen=True)
class Curve:
    name: str
    cls: Vector

    def __post_init__(self):
        if not _NAME.match(self.name):
            raise ValueError(f"bad curve name {self.name!r}")
        if len(self.cls) % 2:
            raise ValueError("homology class must have even length")
        object.__setattr__(self, "cls", tuple(int(x) for x in self.cls))

    @property
    def genus(self) -> int:
        return len(self.cls) // 2

    @property
    def is_nonzero(self) -> bool:
        return any(self.cls)


def class_curve(cls: Sequence[int]) -> Curve:
    """A curve named after its class (sign-normalized, twists ignore the sign)."""
    v = tuple(cls)
    lead = next((x for x in v if x), 1)
    if lead < 0:
        v = tuple(-x for x in v)
    return Curve("x" + "_".join(str(x) if x >= 0 else f"m{-x}" for x in v), v)


@lru_cache(maxsize=None)
def standard_curves(g: int) -> tuple[Curve, ...]:
    """The chain ``a1, b1, ..., ag, bg`` in chain order."""
    out = []
    for i in range(g):
        a = [0] * (2 * g)
        a[2 * i] = 1
        if i:
            a[2 * i - 2] = -1
        b = [0] * (2 * g)
        b[2 * i + 1] = 1
        out.append(Curve(f"a{i + 1}", tuple(a)))
        out.append(Curve(f"b{i + 1}", tuple(b)))
    return tuple(out)


@lru_cache(maxsize=None)
def conjugator_alphabet(g: int) -> tuple[Curve, ...]:
    """Chain curves plus ``alpha_2, ..., alpha_g``.

    Chain twists alone only reach part of ``Sp(2g, Z)`` (mod 2 they act through
    a symmetric group), so classes such as ``alpha_2`` would be unreachable.
    """
    extra = []
    for i in range(1, g):
        v = [0] * (2 * g)
        v[2 * i] = 1
        extra.append(Curve(f"alpha{i + 1}", tuple(v)))
    return standard_curves(g) + tuple(extra)


def standard_curve(name: str, g: int) -> Curve:
    for c in standard_curves(g):
        if c.name == name:
            return c
    raise KeyError(name)


@dataclass(frozen=True)
class SymplecticAction:
    matrix: tuple[tuple[int, ...], ...]
    genus: int

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != 2 * self.genus or any(len(row) != 2 * self.genus for row in m):
            raise ValueError("matrix size does not match genus")
        if not is_symplectic(m):
            raise ValueError("matrix is not symplectic")

    def __matmul__(self, other: "SymplecticAction") -> "SymplecticAction":
        return SymplecticAction(tuple(map(tuple, linalg.matmul(self.matrix, other.matrix))), self.genus)

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(linalg.matvec(self.matrix, v))

    @property
    def is_identity(self) -> bool:
        return all(x == (i == j) for i, row in enumerate(self.matrix) for j, x in enumerate(row))

    @classmethod
    def identity(cls, g: int) -> "SymplecticAction":
        return cls(tuple(map(tuple, linalg.identity(2 * g))), g)


def is_symplectic(m: Sequence[Sequence[int]]) -> bool:
    n = len(m)
    j = symplectic_form(n // 2)
    mt = linalg.transpose(m)
    return linalg.matmul(linalg.matmul(mt, j), m) == j


def symplectic_inverse(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """``M^{-1} = -J M^T J`` for symplectic ``M``."""
    j = symplectic_form(len(m) // 2)
    return [[-x for x in row] for row in linalg.matmul(linalg.matmul(j, linalg.transpose(m)), j)]


def transvection_matrix(c: Sequence[int], exponent: int = 1) -> list[list[int]]:
    n = len(c)
    jc = _j_times(c)
    return [[int(i == k) + exponent * c[i] * jc[k] for k in range(n)] for i in range(n)]


def transvection(c: Curve | Sequence[int], g: int | None = None, exponent: int = 1) -> SymplecticAction:
    cls = c.cls if isinstance(c, Curve) else tuple(c)
    g = len(cls) // 2 if g is None else g
    if len(cls) != 2 * g:
        raise ValueError("class length does not match genus")
    return SymplecticAction(tuple(map(tuple, transvection_matrix(cls, exponent))), g)


def _right_multiply(m: list[list[int]], c: Sequence[int], exponent: int) -> None:
    # m <- m @ T_c^exponent, as a rank-one update
    mc = [sum(a * b for a, b in zip(row, c)) for row in m]
    jc = _j_times(c)
    nz = [k for k, x in enumerate(jc) if x]
    for i, row in enumerate(m):
        s = exponent * mc[i]
        if s:
            for k in nz:
                row[k] += s * jc[k]


def _apply(c: Sequence[int], exponent: int, v: Sequence[int]) -> Vector:
    # T_c^exponent (v)
    t = exponent * pairing(v, c)
    return tuple(x + t * y for x, y in zip(v, c)) if t else tuple(v)


Letter = tuple[Curve, int]


@dataclass(frozen=True)
class TwistWord:
    letters: tuple[Letter, ...]
    genus: int

    def __post_init__(self):
        letters = tuple((c, int(e)) for c, e in self.letters)
        for c, e in letters:
            if e not in (1, -1):
                raise ValueError("exponents must be +1 or -1")
            if c.genus != self.genus:
                raise ValueError(f"curve {c.name} has genus {c.genus}, word has genus {self.genus}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "TwistWord") -> "TwistWord":
        if other.genus != self.genus:
            raise ValueError("genus mismatch")
        return TwistWord(self.letters + other.letters, self.genus)

    @property
    def is_positive(self) -> bool:
        return all(e == 1 for _, e in self.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -e) for c, e in reversed(self.letters)), self.genus)

    def curves(self) -> list[Curve]:
        seen: dict[str, Curve] = {}
        for c, _ in self.letters:
            if seen.setdefault(c.name, c) != c:
                raise ValueError(f"curve name {c.name} used for two classes")
        return list(seen.values())

    @classmethod
    def from_curves(cls, curves: Iterable[Curve], g: int, exponent: int = 1) -> "TwistWord":
        return cls(tuple((c, exponent) for c in curves), g)


def word(text: str, g: int) -> TwistWord:
    """Shorthand for words over the standard chain, e.g. ``word("a1 b1 A1", 1)``."""
    return loads(f"genus {g}\n{text}\n")


def rho(w: TwistWord, g: int | None = None) -> SymplecticAction:
    """Homology action of ``w``: the ordered product of its transvections."""
    g = w.genus if g is None else g
    m = linalg.identity(2 * g)
    for c, e in w.letters:
        _right_multiply(m, c.cls, e)
    return SymplecticAction(tuple(map(tuple, m)), g)


@dataclass(frozen=True)
class RelatorVerdict:
    name: str
    qualifier: str = HOMOLOGY_LEVEL
    residual: tuple | None = field(default=None, compare=False)


def verify_relator(w: TwistWord, g: int | None = None) -> RelatorVerdict:
    m = rho(w, g)
    if m.is_identity:
        return RelatorVerdict("HomologyIdentity")
    return RelatorVerdict("NotHomologyIdentity", residual=m.matrix)


@lru_cache(maxsize=None)
def g_block(g: int) -> TwistWord:
    """``(a1 b1 ... ag bg)^(4g+2)`` as a positive word."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    chain = standard_curves(g)
    return TwistWord(tuple((c, 1) for _ in range(4 * g + 2) for c in chain), g)


def braid_check(g: int = 1, sign: int = 1) -> bool:
    """Pin the twist sign: ``t_a t_b t_a`` sends ``a -> b`` and ``b -> -a``.

    ``sign=-1`` evaluates the letters with the opposite twist convention, which
    must fail; it exists to exercise the check itself.
    """
    a, b = standard_curves(g)[:2]
    aba = rho(TwistWord(((a, sign), (b, sign), (a, sign)), g))
    bab = rho(TwistWord(((b, sign), (a, sign), (b, sign)), g))
    return aba == bab and aba.apply(a.cls) == b.cls and aba.apply(b.cls) == tuple(-x for x in a.cls)


# ---------------------------------------------------------------------------
# positive inverses


def _extended_gcd_vector(w: Sequence[int]) -> tuple[int, list[int]]:
    """``(d, t)`` with ``sum t_i w_i == d == gcd(w)``."""
    d, t = 0, [0] * len(w)
    for i, x in enumerate(w):
        if x == 0:
            continue
        # solve d*s + x*r = gcd(d, x)
        a, b = d, x
        s0, s1, r0, r1 = 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            s0, s1 = s1, s0 - q * s1
            r0, r1 = r1, r0 - q * r1
        if a < 0:
            a, s0, r0 = -a, -s0, -r0
        t = [s0 * y for y in t]
        t[i] += r0
        d = a
    return d, t


class DegenerateForm(ValueError):
    pass


class _Overflow(Exception):
    pass


def _congruence_reduce(a: np.ndarray, p: np.ndarray, limit: int | None) -> None:
    n = a.shape[0]

    def swap(i, j):
        a[[i, j], :] = a[[j, i], :]
        a[:, [i, j]] = a[:, [j, i]]
        p[:, [i, j]] = p[:, [j, i]]

    for k in range(0, n, 2):
        if k + 1 >= n:
            raise DegenerateForm("odd rank")
        # prefer a unit pivot with little fill-in; Euclid below handles the rest
        sub = a[k:, k:]
        cand = np.argwhere(np.abs(sub) == 1)
        if cand.size:
            nnz = np.count_nonzero(sub, axis=1)
            i, j = (int(x) + k for x in cand[np.argmin(nnz[cand[:, 0]] * nnz[cand[:, 1]])])
            if i != k:
                swap(i, k)
                j = i if j == k else j
            if j != k + 1:
                swap(j, k + 1)
        while True:
            row = a[k, k + 1:]
            nz = np.nonzero(row)[0]
            if len(nz) == 0:
                raise DegenerateForm(f"basis vector {k} pairs trivially with the rest")
            j = k + 1 + int(nz[np.argmin(np.abs(row[nz]))])
            if j != k + 1:
                swap(j, k + 1)
            if not a[k, k + 2:].any():
                break
            q = a[k, k + 2:] // a[k, k + 1]
            a[:, k + 2:] -= np.outer(a[:, k + 1], q)
            a[k + 2:, :] -= np.outer(q, a[k + 1, :])
            p[:, k + 2:] -= np.outer(p[:, k + 1], q)
        piv = a[k, k + 1]
        if piv == -1:
            a[:, k + 1] *= -1
            a[k + 1, :] *= -1
            p[:, k + 1] *= -1
        elif piv != 1:
            raise ValueError(f"form is not unimodular (pivot {piv})")
        t = a[k + 1, k + 2:].copy()
        if t.any():
            a[:, k + 2:] += np.outer(a[:, k], t)
            a[k + 2:, :] += np.outer(t, a[k, :])
            p[:, k + 2:] += np.outer(p[:, k], t)
        if limit is not None and (np.abs(a).max() > limit or np.abs(p).max() > limit):
            raise _Overflow


def symplectic_basis(form: Sequence[Sequence[int]]) -> list[list[int]]:
    """Columns ``e1, f1, e2, f2, ...`` with ``P^T form P = J`` for a unimodular alternating form.

    Integral congruence moves: Euclid on one row at a time, then clearing the
    partner row.  Runs in int64 while entries stay small, else exactly.
    """
    n = len(form)
    if n == 0:
        return []
    for dtype, limit in ((np.int64, 2**40), (object, None)):
        a = np.array(form, dtype=dtype)
        p = np.array(linalg.identity(n), dtype=dtype)
        try:
            _congruence_reduce(a, p, limit)
        except _Overflow:
            continue
        return [[int(x) for x in row] for row in p]
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class SymplecticCoordinates:
    """Identification of ``H_1`` of a capped surface with ``Z^{2g}``.

    Built from the (possibly degenerate) intersection form of a surface with
    boundary; the radical of the form, spanned by boundary classes, is
    quotiented out.  ``matrix`` sends ambient coordinates to symplectic ones.
    """

    genus: int
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, v: Sequence[int]) -> Vector:
        return tuple(linalg.matvec(self.matrix, v))

    @classmethod
    def from_form(cls, form: Sequence[Sequence[int]]) -> "SymplecticCoordinates":
        n = len(form)
        if n == 0:
            return cls(0, ())
        try:
            p = symplectic_basis(form)
            return cls(n // 2, tuple(map(tuple, _basis_inverse(p, form))))
        except DegenerateForm:
            pass
        _, u, piv = linalg.column_echelon(form)
        r = len(piv)
        uh = [row[:r] for row in u]
        reduced = linalg.matmul(linalg.matmul(linalg.transpose(uh), form), uh)
        p = symplectic_basis(reduced)
        # first r rows of U^{-1}: coordinates modulo the radical
        u_inv = linalg.transpose([[int(x) for x in linalg.solve_rational(u, [int(i == j) for i in range(n)])]
                                  for j in range(n)])[:r]
        return cls(r // 2, tuple(map(tuple, linalg.matmul(_basis_inverse(p, reduced), u_inv))))

    def check(self, form: Sequence[Sequence[int]]) -> bool:
        """``<C x, C y>_J == form(x, y)`` on all basis pairs."""
        c = self.matrix
        lhs = linalg.matmul(linalg.matmul(linalg.transpose(c), symplectic_form(self.genus)), c) if c else []
        return lhs == [list(r) for r in form] or (not c and not any(any(r) for r in form))


def _basis_inverse(p: Sequence[Sequence[int]], form: Sequence[Sequence[int]]) -> list[list[int]]:
    # P^T F P = J  =>  P^{-1} = -J P^T F
    j = symplectic_form(len(p) // 2)
    return [[-x for x in row] for row in linalg.matmul(linalg.matmul(j, linalg.transpose(p)), form)]


def cap_classes(form: Sequence[Sequence[int]], classes: Sequence[Sequence[int]]) -> tuple[int, list[Vector]]:
    coords = SymplecticCoordinates.from_form(form)
    return coords.genus, [coords(v) for v in classes]


def _negate(v: Sequence[int]) -> Vector:
    return tuple(-x for x in v)


def find_conjugator(cls: Sequence[int], g: int, depth: int = 6, budget: int = 200_000) -> tuple[Curve, list[Letter]]:
    """Breadth-first search for a word ``f`` with ``rho(f) s = +-cls`` for a chain curve ``s``.

    Letters of ``f`` are twists of either sign along :func:`conjugator_alphabet`; words are explored in
    length-then-lexicographic order, so the first hit is deterministic.  ``budget`` caps the number of
    distinct classes visited, and ``16 * budget`` caps the moves tried.
    Returns ``(s, f)``.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    target = tuple(cls)
    if not any(target):
        raise ValueError("zero class has no conjugator")
    chain = standard_curves(g)
    moves: list[Letter] = [(c, e) for c in conjugator_alphabet(g) for e in (1, -1)]
    seen: set[Vector] = set()
    frontier: deque = deque()
    for s in chain:
        key = max(s.cls, _negate(s.cls))
        if key not in seen:
            seen.add(key)
            frontier.append((s.cls, s, []))
    tried = 0
    for level in range(depth + 1):
        nxt: deque = deque()
        for v, s, f in frontier:
            if v == target or v == _negate(target):
                return s, f
            if level == depth:
                continue
            for c, e in moves:
                tried += 1
                if tried > 16 * budget:
                    raise NoConjugatorFound(f"search budget {budget} exhausted at depth {level + 1}")
                w = _apply(c.cls, e, v)
                key = max(w, _negate(w))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((w, s, [(c, e)] + f))
                if len(seen) > budget:
                    raise NoConjugatorFound(f"search budget {budget} exhausted at depth {level + 1}")
        frontier = nxt
    raise NoConjugatorFound(f"no conjugator of length <= {depth} for class {target}")


def completing_conjugator(cls: Sequence[int], g: int) -> list[list[int]]:
    """A symplectic matrix sending ``alpha_1`` to a primitive class ``cls``.

    Built from three transvections: a power of ``t_{beta_1}`` that makes the
    coordinates other than ``alpha_1`` coprime, then ``alpha_1 -> x -> cls``
    through an intermediate ``x`` pairing to 1 with both ends.
    """
    c = [int(v) for v in cls]
    if len(c) != 2 * g:
        raise ValueError("class length does not match genus")
    if math.gcd(*c) != 1:
        raise ValueError(f"class {tuple(c)} is not primitive")
    r = math.gcd(*c[2:]) if g > 1 else 0
    k = next(k for k in range(abs(r) + 2) if math.gcd(c[1] + k * c[0], r) == 1)
    c1 = list(c)
    c1[1] += k * c[0]
    free = [0] + [i for i in range(2, 2 * g)]
    coeffs = [c1[1]] + [c1[i + 1] if i % 2 == 0 else -c1[i - 1] for i in range(2, 2 * g)]
    d, t = _extended_gcd_vector(coeffs)
    if d != 1:
        raise AssertionError("completion step failed to find a coprime pairing")
    x = [0] * (2 * g)
    for i, ti in zip(free, t):
        x[i] = ti * (1 + c1[0])
    x[1] += 1
    v1 = [x[i] - (i == 0) for i in range(2 * g)]
    v2 = [c1[i] - x[i] for i in range(2 * g)]
    beta1 = [int(i == 1) for i in range(2 * g)]
    m = linalg.identity(2 * g)
    if k:
        _right_multiply(m, beta1, -k)
    _right_multiply(m, v2, 1)
    _right_multiply(m, v1, 1)
    return m


@dataclass(frozen=True)
class InverseBlock:
    """``t_c^{-1}`` written as a rotated relator conjugated by ``conjugator``.

    The block's letters are the chain curves at relator positions
    ``position+1, ..., L-1, 0, ..., position-1`` pushed forward by the
    conjugator (``None`` means the identity).
    """

    curve: Curve
    position: int
    conjugator: tuple[tuple[int, ...], ...] | None
    genus: int

    @property
    def length(self) -> int:
        return len(g_block(self.genus)) - 1

    def letters(self) -> list[Letter]:
        rel = g_block(self.genus).letters
        rot = rel[self.position + 1:] + rel[: self.position]
        if self.conjugator is None:
            return list(rot)
        cache: dict[str, Curve] = {}
        out = []
        for c, e in rot:
            if c.name not in cache:
                cache[c.name] = class_curve(linalg.matvec(self.conjugator, c.cls))
            out.append((cache[c.name], e))
        return out


@lru_cache(maxsize=None)
def _chain_prefix(g: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # P_m = T_{c_1} ... T_{c_m} for m = 0..2g
    m = linalg.identity(2 * g)
    out = [tuple(map(tuple, m))]
    for c in standard_curves(g):
        _right_multiply(m, c.cls, 1)
        out.append(tuple(map(tuple, m)))
    return tuple(out)


@lru_cache(maxsize=None)
def relator_action(g: int) -> tuple[tuple[int, ...], ...]:
    """``rho`` of the whole relator, by repeated squaring of the chain product."""
    base = [list(r) for r in _chain_prefix(g)[-1]]
    k = 4 * g + 2
    acc = linalg.identity(2 * g)
    while k:
        if k & 1:
            acc = linalg.matmul(acc, base)
        base = linalg.matmul(base, base)
        k >>= 1
    return tuple(map(tuple, acc))


def block_action(b: InverseBlock) -> list[list[int]]:
    """``rho`` of an inverse block without expanding it.

    With ``P_m`` the chain prefix products and ``R`` the relator action, the
    rotated relator ``v u`` has action ``P_{m+1}^{-1} R P_m``.
    """
    g = b.genus
    pre = _chain_prefix(g)
    m = b.position
    core = linalg.matmul(linalg.matmul(symplectic_inverse(pre[m + 1]), relator_action(g)), pre[m])
    if b.conjugator is None:
        return core
    a = [list(r) for r in b.conjugator]
    return linalg.matmul(linalg.matmul(a, core), symplectic_inverse(a))


def inverse_block(c: Curve, g: int, depth: int = 6, fallback: bool = True, budget: int = 200_000) -> InverseBlock:
    """Express ``t_c^{-1}`` as a positive word (see :class:`InverseBlock`)."""
    if not c.is_nonzero:
        raise ValueError(f"curve {c.name} has zero class")
    chain = standard_curves(g)
    for pos, s in enumerate(chain):
        if s.cls == c.cls or s.cls == _negate(c.cls):
            return InverseBlock(c, pos, None, g)
    try:
        s, f = find_conjugator(c.cls, g, depth, budget)
        a = [list(r) for r in rho(TwistWord(tuple(f), g)).matrix]
        pos = chain.index(s)
    except NoConjugatorFound:
        if not fallback:
            raise
        a = completing_conjugator(c.cls, g)
        pos = 0
    return InverseBlock(c, pos, tuple(map(tuple, a)), g)


def invert_positively(w: TwistWord, g: int | None = None, depth: int = 6, fallback: bool = False,
                      budget: int = 200_000) -> TwistWord:
    """A positive word ``w'`` with ``rho(w') rho(w) = I``.

    Each letter ``t_c`` (taken in reverse order) is replaced by the relator
    ``g_block(g)`` conjugated so that one of its letters is ``t_c``, then
    rotated to start right after that letter.  ``fallback`` allows a direct
    symplectic completion when the breadth-first search fails.
    """
    g = w.genus if g is None else g
    if not w.is_positive:
        raise ValueError("input word must be positive")
    out: list[Letter] = []
    for c, _ in reversed(w.letters):
        out.extend(inverse_block(c, g, depth, fallback, budget).letters())
    return TwistWord(tuple(out), g)


# ---------------------------------------------------------------------------
# serialization


def dumps(w: TwistWord) -> str:
    """Text form: a genus header, definitions of non-standard curves, then the letters."""
    std = {c.name: c for c in standard_curves(w.genus)} if w.genus else {}
    lines = [f"genus {w.genus}"]
    for c in w.curves():
        if c.name in std:
            if std[c.name] != c:
                raise ValueError(f"{c.name} is a standard name with a non-standard class")
            continue
        lines.append(f"curve {c.name} = " + " ".join(map(str, c.cls)))
    body = " ".join(c.name if e > 0 else c.name[0].upper() + c.name[1:] for c, e in w.letters)
    lines.append(body)
    return "\n".join(lines) + "\n"


def loads(text: str) -> TwistWord:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("genus "):
        raise ValueError("missing genus header")
    g = int(lines[0].split()[1])
    curves = {c.name: c for c in standard_curves(g)} if g else {}
    letters: list[Letter] = []
    for line in lines[1:]:
        if line.startswith("curve "):
            name, _, rest = line[len("curve "):].partition("=")
            name = name.strip()
            if name in curves:
                raise ValueError(f"curve {name} defined twice")
            curves[name] = Curve(name, tuple(int(x) for x in rest.split()))
            continue
        for tok in line.split():
            name = tok[0].lower() + tok[1:]
            if name not in curves:
                raise ValueError(f"unknown curve {tok!r}")
            letters.append((curves[name], 1 if tok[0].islower() else -1))
    return TwistWord(tuple(letters), g)
