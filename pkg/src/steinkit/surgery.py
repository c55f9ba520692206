"""Four-manifold data of a Legendrian surgery presentation.

A presentation is a front whose components are either 2-handles (framed
Legendrian knots) or dotted circles (1-handles).  ``H_2`` of the handlebody is
the integer kernel of the 2-handle/1-handle linking map; the intersection form
is the linking matrix restricted to it.

A Spin^c structure coming from a Stein structure is recorded by its rotation
vector, the values of ``c_1`` on the 2-handle classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .diagram import ClassicalInvariants, FrontDiagram, GridDiagram, classical_invariants, grid_to_front


@dataclass(frozen=True)
class Undefined:
    """Stand-in for a rational quantity that does not exist (e.g. non-torsion ``c_1``)."""

    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class SurgeryPresentation:
    front: FrontDiagram
    dotted: frozenset[int] = frozenset()
    framings: tuple[int | None, ...] = ()
    stein: bool = True
    classical: ClassicalInvariants = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = self.front.num_components
        if self.framings and len(self.framings) != k:
            raise ValueError(f"{len(self.framings)} framings for {k} components")
        if any(not 0 <= d < k for d in self.dotted):
            raise ValueError("dotted component out of range")
        ci = classical_invariants(self.front)
        object.__setattr__(self, "classical", ci)
        for i in self.two_handles:
            f = self.framings[i] if self.framings else None
            if self.stein and f is not None and f != ci.tb[i] - 1:
                raise ValueError(
                    f"component {i}: Stein framing must be tb-1 = {ci.tb[i] - 1}, got {f}")

    @classmethod
    def from_grid(cls, g: GridDiagram, stein: bool = True) -> "SurgeryPresentation":
        return cls(grid_to_front(g), g.dotted, g.framings, stein)

    @property
    def two_handles(self) -> list[int]:
        return [i for i in range(self.front.num_components) if i not in self.dotted]

    @property
    def one_handle_count(self) -> int:
        return len(self.dotted)

    def framing(self, i: int) -> int:
        f = self.framings[i] if self.framings else None
        return self.classical.tb[i] - 1 if f is None else f

    def rotation_vector(self) -> tuple[int, ...]:
        return tuple(self.classical.rot[i] for i in self.two_handles)


@dataclass(frozen=True)
class ManifoldInvariants:
    linking_matrix: tuple[tuple[int, ...], ...]
    intersection_form: tuple[tuple[int, ...], ...]
    h2_basis: tuple[tuple[int, ...], ...]  # columns in 2-handle coordinates
    euler_char: int
    signature: int
    b2_plus: int
    b2_minus: int
    b2_zero: int
    determinant: int
    one_handles: int
    two_handles: int

    @property
    def boundary_is_homology_sphere(self) -> bool:
        # only decided for presentations without 1-handles
        return self.one_handles == 0 and abs(self.determinant) == 1

    @property
    def rank_h2(self) -> int:
        return len(self.h2_basis)


def _pairwise_linking(front: FrontDiagram, comps: Sequence[int], others: Sequence[int]) -> list[list[int]]:
    return [[front.linking_number(i, j) for j in others] for i in comps]


def linking_matrix(p: SurgeryPresentation) -> ManifoldInvariants:
    hs = p.two_handles
    q = [[p.framing(i) if i == j else p.front.linking_number(i, j) for j in hs] for i in hs]
    dotted = sorted(p.dotted)
    if dotted and hs:
        # rows: dotted circles, cols: 2-handles
        b = _pairwise_linking(p.front, dotted, hs)
        basis = linalg.integer_kernel(b, len(hs))
    else:
        basis = [[int(i == j) for i in range(len(hs))] for j in range(len(hs))]
    form = [[sum(x * q[i][j] * y for i, x in enumerate(u) for j, y in enumerate(v))
             for v in basis] for u in basis]
    bp, bm, b0 = linalg.inertia(form)
    return ManifoldInvariants(
        linking_matrix=tuple(map(tuple, q)),
        intersection_form=tuple(map(tuple, form)),
        h2_basis=tuple(map(tuple, basis)),
        euler_char=1 - len(dotted) + len(hs),
        signature=bp - bm,
        b2_plus=bp,
        b2_minus=bm,
        b2_zero=b0,
        determinant=linalg.determinant(form),
        one_handles=len(dotted),
        two_handles=len(hs),
    )


def c1_squared(q: Sequence[Sequence[int]], r: Sequence[int]) -> Fraction | Undefined:
    """``r^T x`` for a rational solution of ``Q x = r``."""
    if len(r) != len(q):
        raise ValueError("rotation vector length does not match the form")
    if not q:
        return Fraction(0)
    x = linalg.solve_rational(q, r)
    if x is None:
        return Undefined("c1 is not torsion on the boundary: r is not in the image of Q")
    return sum((Fraction(a) * b for a, b in zip(r, x)), Fraction(0))


@dataclass(frozen=True)
class SpincOnW:
    rotation_vector: tuple[int, ...]
    form: tuple[tuple[int, ...], ...]
    c1_squared: Fraction | Undefined

    @classmethod
    def from_presentation(cls, p: SurgeryPresentation, inv: ManifoldInvariants | None = None) -> "SpincOnW":
        inv = inv or linking_matrix(p)
        r = p.rotation_vector()
        # evaluate c1 on the H_2 basis
        vals = tuple(sum(a * b for a, b in zip(col, r)) for col in inv.h2_basis)
        return cls(vals, inv.intersection_form, c1_squared(inv.intersection_form, vals))


@dataclass(frozen=True)
class ContactHomotopyData:
    hopf_invariant: Fraction
    grading: Fraction


def hopf_and_grading(inv: ManifoldInvariants, s: SpincOnW) -> ContactHomotopyData | Undefined:
    if isinstance(s.c1_squared, Undefined):
        return s.c1_squared
    h = s.c1_squared - 2 * inv.euler_char - 3 * inv.signature
    return ContactHomotopyData(Fraction(h), -Fraction(h) / 4 - Fraction(1, 2))


def dimension_shift(c1_sq, chi: int, sigma: int) -> Fraction:
    return (Fraction(c1_sq) - 2 * chi - 3 * sigma) / 4


def restrictions_agree(s1: SpincOnW, s2: SpincOnW) -> bool:
    """Whether the two structures restrict to the same Spin^c structure on the boundary.

    The difference of the two Spin^c structures is ``(c1 - c1') / 2``; it dies
    on the boundary exactly when it lies in the integer image of the form.
    """
    if s1.form != s2.form:
        raise ValueError("Spin^c structures live on different presentations")
    diff = [a - b for a, b in zip(s1.rotation_vector, s2.rotation_vector)]
    if any(d % 2 for d in diff):
        raise ValueError("rotation vectors differ by an odd vector; not Spin^c structures on one form")
    half = [d // 2 for d in diff]
    if not s1.form:
        return True
    return linalg.solve_integer(s1.form, half) is not None


@dataclass(frozen=True)
class Verdict:
    name: str
    detail: str = ""
    data: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {"verdict": self.name}
        if self.detail:
            out["detail"] = self.detail
        out.update(self.data)
        return out


def theorem_main_verdict(s1: SpincOnW, s2: SpincOnW) -> Verdict:
    """Distinctness of contact invariants from non-isomorphic Stein Spin^c structures.

    Only ever concludes distinctness; equal rotation vectors give no information.
    """
    agree = restrictions_agree(s1, s2)
    if s1.rotation_vector != s2.rotation_vector:
        return Verdict(
            "DistinctContactInvariants",
            "Spin^c structures of the Stein structures are not isomorphic, so the "
            "contact invariants are distinct elements of HF-hat(-Y)",
            {"boundary_restrictions_agree": agree},
        )
    return Verdict("SameSpinc", "isomorphic Spin^c structures; no conclusion",
                   {"boundary_restrictions_agree": agree})


def _q(x) -> str | None:
    return None if isinstance(x, Undefined) else str(x)


def invariants_report(p: SurgeryPresentation) -> dict:
    """JSON-ready summary of one presentation; rationals are written as strings."""
    inv = linking_matrix(p)
    s = SpincOnW.from_presentation(p, inv)
    hg = hopf_and_grading(inv, s)
    verdicts = []
    if isinstance(hg, Undefined):
        verdicts.append(Verdict("Undefined", hg.reason).to_json())
    if p.stein:
        verdicts.append(Verdict("SteinFramings", "every 2-handle is attached with framing tb - 1").to_json())
    return {
        "chi": inv.euler_char,
        "sigma": inv.signature,
        "b2plus": inv.b2_plus,
        "b2minus": inv.b2_minus,
        "linking_matrix": [list(r) for r in inv.linking_matrix],
        "rotation_vector": list(s.rotation_vector),
        "c1_squared": _q(s.c1_squared),
        "hopf": None if isinstance(hg, Undefined) else str(hg.hopf_invariant),
        "grading": None if isinstance(hg, Undefined) else str(hg.grading),
        "verdicts": verdicts,
    }
