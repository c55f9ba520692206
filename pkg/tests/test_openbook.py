import math
from fractions import Fraction as Fr

import pytest
import sympy

from steinkit import linalg, mcg, nucleus, openbook as ob
from steinkit.diagram import FrontDiagram, parse_grid, stabilize
from steinkit.surgery import SurgeryPresentation, linking_matrix
from conftest import PUSHOFF_PAIR, UNKNOT


def _seifert(pg):
    """Seifert form of the fundamental cycles, by exact polygon linking in the torus-link model."""
    b, d = list(range(pg.p)), list(range(pg.q))

    def poly(walk):
        pts = []
        for e, s in walk:
            i, j = e // pg.q, e % pg.q
            x, z = Fr(d[j] - b[i], 2), Fr(d[j] + b[i], 2)
            y0, y1 = (Fr(1), Fr(-1)) if s > 0 else (Fr(-1), Fr(1))
            pts += [(x, y0, z), (x, y1, z)]
        return pts

    polys = [poly(pg.fundamental_cycle(e)) for e in pg.basis_edges]
    eps = Fr(1, 64)
    return [[ob.polygon_linking_number(pa, ob.page_normal_pushoff(pb, eps)) for pb in polys] for pa in polys]


@pytest.mark.parametrize("p,q,chi,b,genus", [(2, 3, -1, 1, 1), (3, 4, -5, 1, 3), (2, 2, 0, 2, 0), (3, 3, -3, 3, 1)])
def test_torus_page_examples(p, q, chi, b, genus):
    pg = ob.torus_page(p, q)
    assert (pg.euler_char, pg.boundary_components, pg.genus) == (chi, b, genus)


def test_torus_page_gcd_sweep():
    for p in range(1, 9):
        for q in range(1, 9):
            pg = ob.torus_page(p, q)
            assert pg.boundary_components == math.gcd(p, q)
            assert pg.euler_char == p + q - p * q
            assert pg.rank_h1 == 1 - pg.euler_char


@pytest.mark.parametrize("p,q", [(2, 3), (3, 4), (3, 5), (2, 5)])
def test_twist_form_matches_seifert_oracle(p, q):
    pg = ob.torus_page(p, q)
    v = sympy.Matrix(_seifert(pg))
    assert sympy.Matrix(pg.twist_form) == v - v.T
    # the Hopf-core product is the monodromy of T(p, q): (V^T)^{-1} V
    t = sympy.Matrix(pg.twist_form)
    m = sympy.eye(len(pg.basis_edges))
    for c in ob.hopf_cores(pg):
        h = sympy.Matrix(c.homology)
        m = m * (sympy.eye(len(h)) + h * (t * h).T)
    assert m == v.T.inv() * v


@pytest.mark.parametrize("pq,pad", [((2, 4), (1, 0)), ((0, 0), (1, 1)), ((2, 3), (0, 0)), ((2, 2), (1, 0)),
                                    ((4, 2), (0, 1)), ((3, 3), (1, 0))])
def test_coprime_padding(pq, pad):
    assert ob.coprime_padding(*pq) == pad
    assert math.gcd(pq[0] + pad[0], pq[1] + pad[1]) == 1


def test_unknot_square_bridge():
    s = ob.to_square_bridge(UNKNOT)
    assert (s.p, s.q) == (3, 2) and s.padding == (1, 0)
    assert len(s.occupied_bands) == 4


def test_not_normalized():
    with pytest.raises(ob.NotNormalized):
        ob.to_square_bridge([[(0, 0), (1, 2), (2, 0), (1, -1)]])


def test_embed_link_nonseparating():
    s = ob.to_square_bridge(UNKNOT)
    pg = ob.build_page(s)
    (c,) = ob.embed_link(pg, s)
    assert c.non_separating and len(c.walk) == 4
    assert ob.page_framing(c) == -1


def test_pushoff_pair_gets_disjoint_walks():
    s = ob.to_square_bridge(PUSHOFF_PAIR)
    pg = ob.build_page(s)
    c0, c1 = ob.embed_link(pg, s)
    assert not {e for e, _ in c0.walk} & {e for e, _ in c1.walk}
    assert c0.homology != c1.homology
    assert pg.pairing(c0.walk, c1.walk) == 0


@pytest.mark.parametrize("p,q,n", [(1, 1, 0), (2, 3, 2), (3, 4, 6), (2, 5, 4)])
def test_hopf_core_counts(p, q, n):
    cores = ob.hopf_cores(ob.torus_page(p, q))
    assert len(cores) == n == (p - 1) * (q - 1)
    assert all(c.non_separating for c in cores)


def test_hopf_cores_need_connected_boundary():
    with pytest.raises(ob.PageInconsistent):
        ob.hopf_cores(ob.torus_page(2, 2))


def test_one_handle_adjust():
    pg = ob.torus_page(2, 3)
    new, cores = ob.one_handle_adjust(pg, 1)
    assert new.euler_char == -3 and new.boundary_components == 1 and len(cores) == 1
    new2, cores2 = ob.one_handle_adjust(pg, 2)
    assert new2.euler_char == -5 and new2.boundary_components == 1 and len(cores2) == 2
    assert new.history == ("scoop 0", "plumb 0")
    assert ob.one_handle_adjust(pg, 0) == (pg, [])
    with pytest.raises(ValueError):
        ob.one_handle_adjust(pg, -1)


def _trefoil():
    f = nucleus.trefoil_family_front(2, 1)
    return FrontDiagram((f.components[0],))


def _presentations():
    return {
        "unknot": (SurgeryPresentation(UNKNOT), (0, [2])),
        "stabilized": (SurgeryPresentation(stabilize(UNKNOT, 0, 1)), (0, [3])),
        "trefoil": (SurgeryPresentation(_trefoil()), (1, [])),
        "family": (nucleus.trefoil_family_presentation(3, 1), (0, [])),
        "pushoff": (SurgeryPresentation(PUSHOFF_PAIR), (0, [3])),
    }


@pytest.mark.parametrize("name", ["unknot", "stabilized", "trefoil", "family", "pushoff"])
def test_boundary_homology_matches_linking_matrix(name):
    p, expected = _presentations()[name]
    fib = ob.stein_to_palf(p)
    q = linking_matrix(p).linking_matrix
    assert fib.boundary_homology() == expected == linalg.cokernel(q, len(q))
    assert fib.open_book.boundary_homology() == expected
    assert all(v.name == "FramingMatch" for v in fib.framing_verdicts)


def test_trefoil_classical():
    t = SurgeryPresentation(_trefoil()).classical
    assert t.tb == (1,) and t.rot == (0,)


def test_stein_to_palf_empty_disk():
    fib = ob.stein_to_palf(SurgeryPresentation(FrontDiagram(())))
    assert fib.vanishing_cycles == () and fib.page.euler_char == 1 and fib.fiber_genus == 0


@pytest.mark.parametrize("n", [2, 3, 6])
def test_stein_to_palf_family_counts(n):
    fib = ob.stein_to_palf(nucleus.trefoil_family_presentation(n, 1))
    s = fib.square_bridge
    assert fib.node_count == (s.p - 1) * (s.q - 1) + 2
    assert fib.euler_char == linking_matrix(nucleus.trefoil_family_presentation(n, 1)).euler_char
    assert fib.handles == (0, 2)


def test_dotted_circle_boundary():
    g = parse_grid(open("demos/data/dotted.grid").read())
    fib = ob.stein_to_palf(SurgeryPresentation.from_grid(g))
    assert fib.boundary_homology() == (1, [])
    assert fib.euler_char == 0


def test_stein_to_palf_rejects_non_stein():
    with pytest.raises(ValueError):
        ob.stein_to_palf(SurgeryPresentation(UNKNOT, framings=(-1,), stein=False))


@pytest.mark.parametrize("name", ["unknot", "stabilized", "family"])
@pytest.mark.parametrize("steps", [1, 2])
def test_stabilize_genus_preserves_boundary(name, steps):
    p, expected = _presentations()[name]
    fib = ob.stein_to_palf(p)
    page, cores = ob.stabilize_genus(fib.page, steps)
    assert page.genus == fib.page.genus + steps and page.boundary_components == 1
    assert page.euler_char == fib.page.euler_char - 2 * steps and len(cores) == 2 * steps
    cycles = tuple(ob.extend_class(c, page) for c in fib.vanishing_cycles) + tuple(cores)
    assert ob.OpenBook(page, cycles, {}).boundary_homology() == expected


def test_open_book_json():
    fib = ob.stein_to_palf(SurgeryPresentation(UNKNOT))
    j = fib.open_book.to_json()
    assert j["binding"]["torus_link"] == [3, 2]
    assert len(j["monodromy"]) == fib.node_count
    assert fib.open_book.monodromy == fib.monodromy


def test_polygon_linking_hopf_link():
    a = [(Fr(0), Fr(0), Fr(0)), (Fr(2), Fr(0), Fr(0)), (Fr(2), Fr(2), Fr(0)), (Fr(0), Fr(2), Fr(0))]
    b = [(Fr(1), Fr(1), Fr(-1)), (Fr(1), Fr(1), Fr(1)), (Fr(1), Fr(3), Fr(1)), (Fr(1), Fr(3), Fr(-1))]
    assert abs(ob.polygon_linking_number(a, b)) == 1
    far = [(x + 10, y, z) for x, y, z in b]
    assert ob.polygon_linking_number(a, far) == 0
