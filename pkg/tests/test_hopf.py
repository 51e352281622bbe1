import pytest
from hypothesis import given, strategies as st

from qcross.catalog import pairing, presentation
from qcross.hopf import antipode, coproduct, counit, pair, verify_hopf_axioms
from qcross.ncalg import NCPoly, multiply
from qcross.scalars import ONE, QScalar, ZERO

S = QScalar.monomial(1, 1)
HOPF_IDS = ["U_q_e2", "U_q_sl2_su11", "U_q_sl2_su2", "U_q_sl2_sl2R", "O_Eq2", "O_SLq2"]


def hopf(aid):
    return presentation(aid).hopf


def test_coproduct_examples():
    h = hopf("U_q_sl2_su11")
    t = h.t2
    assert coproduct(h.base.parse("K K"), h) == t.parse("K#0 K#0 K#1 K#1").nf()
    assert coproduct(h.base.gen("E"), h) == t.parse("E#0 K#1 + Ki#0 E#1").nf()
    e = hopf("O_Eq2")
    assert coproduct(e.base.gen("n"), e) == e.t2.parse("v#0 n#1 + n#0 vs#1").nf()


def test_counit_examples():
    h = hopf("U_q_e2")
    assert counit(h.base.gen("K"), h) == ONE
    assert counit(h.base.one(), h) == ONE
    assert counit(h.base.parse("E F + K"), h) == ONE
    e = hopf("O_Eq2")
    assert counit(e.base.gen("v"), e) == ONE and counit(e.base.gen("n"), e) == ZERO


def test_antipode_examples():
    h = hopf("U_q_e2")
    assert antipode(h.base.gen("K"), h) == h.base.gen("Ki")
    assert antipode(h.base.one(), h) == h.base.one()
    ek = h.base.parse("E K")
    assert antipode(antipode(ek, h), h, inverse=True) == ek.nf()
    su = hopf("U_q_sl2_su11")
    assert antipode(su.base.gen("E"), su) == su.base.parse("-q E").nf()
    assert antipode(su.base.gen("E"), su, inverse=True) == su.base.parse("-q^-1 E").nf()


def test_pairing_examples():
    t = pairing("e2")
    assert pair("K", "v", t) == S
    assert t.pair(t.u.base.one(), t.a.base.one()) == ONE
    assert pair("F", "n v", t) == S


@pytest.mark.parametrize("aid", HOPF_IDS)
def test_hopf_axioms_depth3(aid):
    assert verify_hopf_axioms(hopf(aid), 3) == []


def test_non_hopf_rejected():
    with pytest.raises(TypeError):
        verify_hopf_axioms(presentation("O_Cq").pres, 3)


@pytest.mark.parametrize("aid", HOPF_IDS)
def test_antipode_axiom_on_generators(aid):
    h = hopf(aid)
    for g in h.base.gens:
        total = h.base.zero()
        for c, w1, w2 in h.legs(h.base.index[g]):
            total = total + multiply(antipode(NCPoly(h.base, {w1: ONE}), h), NCPoly(h.base, {w2: c}))
        assert total.nf() == h.base.scalar(h.eps[h.base.index[g]]).nf()
        assert antipode(antipode(h.base.gen(g), h), h, inverse=True) == h.base.gen(g).nf()


def short_words(h, n=3):
    return st.lists(st.sampled_from(h.base.gens), max_size=n).map(lambda w: " ".join(w) or "1")


@pytest.mark.parametrize("name", ["e2", "sl2"])
@given(data=st.data())
def test_pairing_duality(name, data):
    t = pairing(name)
    f = data.draw(short_words(t.u, 2))
    g = data.draw(short_words(t.u, 2))
    x = data.draw(short_words(t.a, 3))
    xp = t.a.base.parse(x).nf()
    lhs = t.pair(t.u.base.parse(f) * t.u.base.parse(g), xp)
    rhs = ZERO
    for w, cw in xp.terms.items():
        for c, x1, x2 in t.a.word_legs(w):
            rhs = rhs + cw * c * t.pair(f, NCPoly(t.a.base, {x1: ONE})) * t.pair(g, NCPoly(t.a.base, {x2: ONE}))
    assert lhs == rhs
