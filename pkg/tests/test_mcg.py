import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steinkit import mcg
from steinkit.mcg import (Curve, NoConjugatorFound, TwistWord, g_block, invert_positively, rho, standard_curves,
                          transvection, verify_relator, word)


def _np_rho(w: TwistWord) -> np.ndarray:
    # independent oracle: dense numpy product of transvection matrices
    n = 2 * w.genus
    j = np.array(mcg.symplectic_form(w.genus), dtype=object)
    m = np.eye(n, dtype=object)
    for c, e in w.letters:
        v = np.array(c.cls, dtype=object)
        t = np.eye(n, dtype=object) + e * np.outer(v, j @ v)
        m = m @ t
    return m


def test_transvection_g1():
    a1, b1 = standard_curves(1)
    t = transvection(a1)
    assert t.apply(a1.cls) == a1.cls
    assert t.apply(b1.cls) == (-1, 1)  # b1 -> b1 - a1, since <b1, a1> = -1
    assert transvection((0, 0, 0, 0)).is_identity


def test_transvection_nonstandard_class_symplectic():
    c = (1, 0, 1, 0)  # a1 + a2 written in alpha coordinates
    assert mcg.is_symplectic(transvection(c).matrix)


def test_symplectic_action_rejects_non_symplectic():
    with pytest.raises(ValueError):
        mcg.SymplecticAction(((2, 0), (0, 1)), 1)


def test_rho_empty_and_inverse():
    assert rho(TwistWord((), 2)).is_identity
    w = word("a1 b1 a2 B2 b1", 2)
    assert (rho(w) @ rho(w.inverse())).is_identity


@pytest.mark.parametrize("g,length", [(1, 12), (2, 40), (3, 84), (4, 144)])
def test_g_block(g, length):
    assert len(g_block(g)) == length
    assert verify_relator(g_block(g)).name == "HomologyIdentity"
    assert (_np_rho(g_block(g)) == np.eye(2 * g, dtype=object)).all()


def test_single_letter_not_relator():
    v = verify_relator(word("a1", 1))
    assert v.name == "NotHomologyIdentity" and v.qualifier == "homology-level"


def test_braid_sign_pinned():
    for g in (1, 2, 3):
        assert mcg.braid_check(g)
        assert not mcg.braid_check(g, sign=-1)


def test_word_serialization_round_trip():
    c = Curve("c", (1, 1, 0, -1))
    w = TwistWord(((c, 1), (standard_curves(2)[0], -1), (c, -1)), 2)
    text = mcg.dumps(w)
    assert text.splitlines()[0] == "genus 2"
    assert mcg.loads(text) == w and mcg.dumps(mcg.loads(text)) == text
    with pytest.raises(ValueError):
        mcg.loads("a1 b1\n")
    with pytest.raises(ValueError):
        mcg.loads("genus 1\nq1\n")


def test_invert_a1_g1():
    w = word("a1", 1)
    inv = invert_positively(w)
    assert len(inv) == 11 and inv.is_positive
    assert (rho(inv) @ rho(w)).is_identity
    assert len(invert_positively(TwistWord((), 1))) == 0


def test_invert_a1b1_g2():
    w = word("a1 b1", 2)
    inv = invert_positively(w)
    assert inv.is_positive and len(inv) == 78
    assert rho(inv).matrix == mcg.SymplecticAction(
        tuple(map(tuple, mcg.symplectic_inverse(rho(w).matrix))), 2).matrix
    assert len(invert_positively(word("a1", 2))) == 39


def test_invert_rejects_negative_word():
    with pytest.raises(ValueError):
        invert_positively(word("A1", 1))


def test_inverse_block_nonstandard_curve():
    g = 2
    c = mcg.class_curve((0, 0, 1, 0))  # alpha_2, not on the chain
    b = mcg.inverse_block(c, g)
    assert b.conjugator is not None
    assert all(x.is_nonzero for x, _ in b.letters())
    assert (rho(TwistWord(tuple(b.letters()), g)) @ transvection(c)).is_identity
    assert mcg.block_action(b) == [list(r) for r in rho(TwistWord(tuple(b.letters()), g)).matrix]


def test_find_conjugator_and_fallback():
    cls = (2, 1, 0, 1)
    s, f = mcg.find_conjugator(cls, 2)
    v = rho(TwistWord(tuple(f), 2)).apply(s.cls)
    assert v in (cls, tuple(-x for x in cls))
    with pytest.raises(NoConjugatorFound):
        mcg.find_conjugator((5, 7, 3, 11), 2, depth=1)
    a = mcg.completing_conjugator((5, 7, 3, 11), 2)
    assert mcg.is_symplectic(a) and [row[0] for row in a] == [5, 7, 3, 11]
    with pytest.raises(ValueError):
        mcg.completing_conjugator((2, 4, 0, 0), 2)


def test_invert_conjugated_needs_search_without_fallback():
    c = mcg.class_curve((5, 7, 3, 11))
    w = TwistWord(((c, 1),), 2)
    with pytest.raises(NoConjugatorFound):
        invert_positively(w, depth=1)
    inv = invert_positively(w, depth=1, fallback=True)
    assert inv.is_positive and (rho(inv) @ rho(w)).is_identity


def test_symplectic_coordinates_degenerate_form():
    # annulus-like radical: classes x, y, x+z with z in the radical
    form = [[0, 1, 0], [-1, 0, -1], [0, 1, 0]]
    co = mcg.SymplecticCoordinates.from_form(form)
    assert co.genus == 1 and co.check(form)


# --- properties ---------------------------------------------------------------

def letters(g, max_len=50, positive=False):
    chain = standard_curves(g)
    ex = st.just(1) if positive else st.sampled_from([1, -1])
    return st.lists(st.tuples(st.sampled_from(chain), ex), max_size=max_len).map(lambda ls: TwistWord(tuple(ls), g))


words = st.integers(1, 4).flatmap(lambda g: st.tuples(letters(g), letters(g)))


@given(words)
@settings(max_examples=60, deadline=None)
def test_rho_is_homomorphism(uv):
    u, v = uv
    assert rho(u + v) == rho(u) @ rho(v)
    assert (np.array(rho(u + v).matrix, dtype=object) == _np_rho(u + v)).all()
    assert mcg.is_symplectic(rho(u).matrix)


classes = st.integers(1, 3).flatmap(lambda g: st.tuples(*[st.integers(-3, 3)] * (2 * g)))


@given(classes, classes)
@settings(max_examples=80, deadline=None)
def test_disjoint_commute_and_once_braid(c, d):
    if len(c) != len(d) or not any(c) or not any(d):
        return
    tc, td = transvection(c), transvection(d)
    p = mcg.pairing(c, d)
    if p == 0:
        assert tc @ td == td @ tc
    elif abs(p) == 1:
        assert tc @ td @ tc == td @ tc @ td


@given(st.integers(1, 3).flatmap(lambda g: letters(g, 6, positive=True)))
@settings(max_examples=30, deadline=None)
def test_invert_positively_chain_words(w):
    inv = invert_positively(w)
    assert inv.is_positive and all(c.is_nonzero for c, _ in inv)
    assert (rho(inv) @ rho(w)).is_identity
