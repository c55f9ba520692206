import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steinkit import assembly as asm, mcg, nucleus, openbook as ob
from steinkit.diagram import FrontDiagram, stabilize
from steinkit.surgery import SpincOnW, SurgeryPresentation, linking_matrix
from conftest import UNKNOT


def _torus_open_book(p, q):
    page = ob.torus_page(p, q)
    return ob.OpenBook(page, tuple(ob.hopf_cores(page)), {"torus_link": [p, q]})


def _fib(n=None):
    p = SurgeryPresentation(FrontDiagram(())) if n is None else nucleus.trefoil_family_presentation(n, 1)
    return ob.stein_to_palf(p)


def test_cap_binding_genus_two_page():
    v0 = asm.cap_binding(_torus_open_book(2, 5))
    assert v0.fiber_genus == 2 and v0.stabilization_steps == 0 and v0.euler_char == 1


def test_cap_binding_stabilizes_trefoil_page():
    v0 = asm.cap_binding(_torus_open_book(2, 3))
    assert v0.fiber_genus == 2 and v0.stabilization_steps == 1
    assert [c.label for c in v0.extra_cycles] == ["S0", "T0"]
    assert v0.to_json()["stabilization_steps"] == 1
    assert "stab-scoop 0" in v0.open_book.binding["steps"]


def test_cap_binding_disk_page():
    disk = _torus_open_book(1, 1)
    with pytest.raises(ValueError):
        asm.cap_binding(disk, stabilize=False)
    v0 = asm.cap_binding(disk)
    assert v0.fiber_genus == 2 and v0.stabilization_steps == 2


def test_cap_binding_disconnected():
    page = ob.torus_page(2, 2)
    with pytest.raises(asm.BindingNotConnected):
        asm.cap_binding(ob.OpenBook(page, (), {}))


def test_build_V1_lengths():
    v1 = asm.build_V1(mcg.TwistWord((), 2))
    assert len(v1) == 80 and v1.is_positive
    assert (v1.action() == np.eye(4, dtype=np.int64)).all()
    w = mcg.word("a1", 2)
    v1 = asm.build_V1(w)
    assert len(v1) == 119 and v1.is_positive
    assert (mcg.rho(w) @ mcg.rho(v1.to_twist_word())).is_identity
    asm.boundary_consistency(v1, w)


def test_build_V1_rejects_low_genus_and_negative_words():
    with pytest.raises(ValueError):
        asm.build_V1(mcg.word("a1", 1))
    with pytest.raises(ValueError):
        asm.build_V1(mcg.word("A1", 2))


def test_factored_word_matches_expansion():
    c = mcg.class_curve((1, 1, 1, 0))
    w = mcg.TwistWord(((c, 1), (mcg.standard_curve("b2", 2), 1)), 2)
    v1 = asm.build_V1(w)
    flat = v1.to_twist_word()
    assert len(flat) == len(v1) and list(flat) == list(v1)
    assert [list(r) for r in v1.action()] == [list(r) for r in mcg.rho(flat).matrix]


def test_tampered_word_detected():
    fib = _fib(3)
    v0 = asm.cap_binding(fib.open_book)
    v1 = asm.build_V1(v0.monodromy, v0.fiber_genus)
    asm.assemble_X(fib, v0, v1)
    with pytest.raises(asm.AssemblyInconsistent):
        asm.assemble_X(fib, v0, v1.delete_letter(5))
    with pytest.raises(asm.AssemblyInconsistent):
        asm.assemble_X(fib, v0, v1.delete_letter(len(v1) - 1))


def _random_word(rng_data, g):
    chain = mcg.conjugator_alphabet(g)
    return mcg.TwistWord(tuple((chain[i % len(chain)], 1) for i in rng_data), g)


@given(st.sampled_from([2, 3]), st.lists(st.integers(0, 50), max_size=8))
@settings(max_examples=25, deadline=None)
def test_build_V1_random_monodromy(g, data):
    w = _random_word(data, g)
    v1 = asm.build_V1(w, g)
    assert v1.is_positive
    assert len(v1) == 2 * 2 * g * (4 * g + 2) + len(w) * (2 * g * (4 * g + 2) - 1)
    asm.boundary_consistency(v1, w)


def test_assemble_disk_seed():
    fib = _fib()
    rep = asm.close_up(fib)
    assert rep.fiber_genus == 2 and rep.stabilization_steps == 2
    n = rep.node_count
    assert rep.chi_X == 2 * (2 - 4) + n == 236
    assert rep.chi_X == sum(rep.chi_pieces.values())
    names = [v.name for v in rep.verdicts]
    assert {"BoundaryConsistent", "ChiAgrees", "Stabilized", "Assumption"} <= set(names)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_assemble_family(n):
    rep = asm.close_up(_fib(n))
    assert rep.fiber_genus >= 2
    assert rep.chi_X == 2 * (2 - 2 * rep.fiber_genus) + rep.node_count
    assert rep.chi_pieces["W"] == linking_matrix(nucleus.trefoil_family_presentation(n, 1)).euler_char
    assert set(rep.to_json()) == {"fiber_genus", "node_count", "chi_X", "chi_pieces",
                                  "canonical_pairing", "spinc_offsets", "verdicts"}


def test_assemble_rejects_foreign_cap():
    fib2, fib3 = _fib(2), _fib(3)
    v0 = asm.cap_binding(fib3.open_book)
    v1 = asm.build_V1(v0.monodromy, v0.fiber_genus)
    with pytest.raises(asm.AssemblyInconsistent):
        asm.assemble_X(fib2, v0, v1)


def test_spinc_family_examples():
    assert asm.spinc_family(2, [0]) == [(0, 0)]
    assert asm.spinc_family(2, [1]) == [(1, -4)]
    assert [o for _, o in asm.spinc_family(2, range(-2, 3))] == [8, 4, 0, -4, -8]
    with pytest.raises(ValueError):
        asm.spinc_family(1, [1])


@given(st.integers(2, 40))
@settings(max_examples=20, deadline=None)
def test_spinc_family_injective(g):
    offs = [o for _, o in asm.spinc_family(g, range(-100, 101))]
    assert len(set(offs)) == len(offs)


def _spins(n, ks):
    pres = [nucleus.trefoil_family_presentation(n, k) for k in ks]
    inv = linking_matrix(pres[0])
    return [SpincOnW.from_presentation(p, inv) for p in pres], inv


def test_cobor_n3():
    spins, inv = _spins(3, [1, 2])
    rep = asm.theorem_cobor_report(spins, None, inv)
    assert rep.to_json()["matrix"] == [["Generator", "Zero"], ["Zero", "Generator"]]
    assert rep.is_diagonal and rep.rank_bound >= 3
    assert rep.rank_bounds == {"independent_classes": 2, "euler_characteristic": 5}


def test_cobor_hypotheses():
    spins, inv = _spins(3, [1, 1])
    with pytest.raises(asm.HypothesesNotVerified) as e:
        asm.theorem_cobor_report(spins, None, inv)
    assert "equal rotation vectors" in e.value.clause
    with pytest.raises(asm.HypothesesNotVerified):
        asm.theorem_cobor_report([])


def test_cobor_different_restrictions():
    f = stabilize(stabilize(UNKNOT, 0, 1), 0, 1)
    g = stabilize(stabilize(UNKNOT, 0, -1), 0, -1)
    a = SpincOnW.from_presentation(SurgeryPresentation(f))
    b = SpincOnW.from_presentation(SurgeryPresentation(g))
    assert {a.rotation_vector, b.rotation_vector} == {(2,), (-2,)}
    rep = asm.theorem_cobor_report([a, b])
    assert rep.verdict.name == "DifferentSpincOnY" and rep.matrix == ()
