import pytest
from hypothesis import given, strategies as st

from qcross.actions import (ActionTable, act, build_cross_product, coideal_central_element, right_from_left,
                            verify_module_algebra)
from qcross.catalog import ACTION_TABLES, UQ_PHI, action_table, derived, pres, presentation
from qcross.ncalg import NCPoly, verify_identity
from qcross.scalars import ONE


def test_act_examples():
    t = action_table("e2_Eq2_right")
    m, u = t.module, t.hopf.base
    assert act(m.gen("n"), u.gen("F"), t) == m.gen("vs")
    x = m.parse("n ns v + 3 v")
    assert act(x, u.one(), t) == x.nf()
    # (n n) <| F through the coproduct: legs F (x) K and K^-1 (x) F
    expected = act(m.gen("n"), u.gen("F"), t) * act(m.gen("n"), u.gen("K"), t) \
        + act(m.gen("n"), u.gen("Ki"), t) * act(m.gen("n"), u.gen("F"), t)
    d = t.hopf.coproduct(u.gen("F"))
    assert set(t.hopf.t2.word_str(w) for w in d.terms) == {"F#0 K#1", "Ki#0 F#1"}
    assert act(m.parse("n n"), u.gen("F"), t) == expected.nf()


def test_right_from_left_disc():
    t = action_table("su11_Uq_right")
    m, u = t.module, t.hopf.base
    assert act(m.gen("z"), u.gen("E"), t) == m.parse("-s z z").nf()
    assert act(m.gen("zs"), u.gen("F"), t) == m.parse("-s^-1 zs zs").nf()


def test_right_from_left_rejects_bad_phi():
    left = action_table("su11_Uq_left")
    with pytest.raises(ValueError):
        right_from_left(left, {"K": "K", "Ki": "Ki", "E": "E", "F": "F"})
    with pytest.raises(ValueError):
        right_from_left(action_table("su11_Uq_right"), UQ_PHI)


def test_cross_product_rules():
    cq = pres("U_q_e2|xO_Cq")
    ok, _ = verify_identity(cq.parse("z K"), cq.parse("q K z"))
    assert ok
    disc = pres("U_q_su11|xO_Uq")
    ok, _ = verify_identity(disc.parse("z F"), disc.parse("q^-1 F z + s^-1 Ki"))
    assert ok


def test_trivial_action_gives_tensor_product():
    h = presentation("U_q_e2").hopf
    x = pres("O_Cq")
    vals = {(g, f): (x.gen(g) if f in ("K", "Ki") else x.zero()) for g in x.gens for f in h.base.gens}
    t = ActionTable(h, x, "right", vals)
    cp = build_cross_product(h, x, t, name="trivial")
    for g in x.gens:
        for f in h.base.gens:
            ok, _ = verify_identity(cp.parse(f"{g} {f}"), cp.parse(f"{f} {g}"))
            assert ok


def test_coideal_examples():
    t = action_table("su11_SL_right")
    cp = pres("U_q_su11|xO_SLq2_localized")
    Q = derived("Q", cp.name).value
    xi = coideal_central_element("E K", {"E K": "-q^(-3/2) lam^-1 ci a"}, cp, t)
    assert verify_identity(xi, cp.parse("s lam^-1") * Q)[0]
    t = action_table("su11_Uq_right")
    cp = pres("U_q_su11|xO_Uq")
    assert verify_identity(coideal_central_element("1", {}, cp, t), cp.one())[0]
    xi = coideal_central_element("K K", {"K K": "1 - zs z"}, cp, t)
    assert verify_identity(xi, derived("T_disc", cp.name).value)[0]
    for g in ("z", "zs"):
        assert verify_identity(xi * cp.gen(g), cp.gen(g) * xi)[0]


@pytest.mark.parametrize("name", ACTION_TABLES)
def test_module_algebra(name):
    assert verify_module_algebra(action_table(name)) == []


def test_module_algebra_detects_wrong_sign():
    good = action_table("e2_Cq_right")
    vals = {(good.module.gens[x], good.hopf.base.gens[f]): dict(v) for (x, f), v in good.values.items()}
    key = ("z", "E")
    vals[key] = {w: -c for w, c in vals[key].items()}
    vals[("zs", "K")] = {w: -c for w, c in vals[("zs", "K")].items()}
    bad = ActionTable(good.hopf, good.module, "right", vals)
    assert verify_module_algebra(bad)


def words(p, n):
    return st.lists(st.sampled_from(p.gens), max_size=n).map(lambda w: " ".join(w) or "1")


@pytest.mark.parametrize("name", ["e2_Eq2_right", "e2_Cq_right", "su11_Uq_right", "su11_SL_right"])
@given(data=st.data())
def test_action_composes(name, data):
    t = action_table(name)
    m, u = t.module, t.hopf.base
    x = m.parse(data.draw(words(m, 2)))
    f = u.parse(data.draw(words(u, 2)))
    g = u.parse(data.draw(words(u, 2)))
    assert act(act(x, f, t), g, t) == act(x, (f * g).nf(), t)


@pytest.mark.parametrize("cp_id,u_id,x_id", [("U_q_e2|xO_Cq", "U_q_e2", "O_Cq"),
                                            ("U_q_su11|xO_Uq", "U_q_sl2_su11", "O_Uq")])
@given(data=st.data())
def test_cross_product_contains_factors(cp_id, u_id, x_id, data):
    cp = pres(cp_id)
    for fid in (u_id, x_id):
        f = pres(fid)
        w = data.draw(words(f, 4))
        got = cp.parse(w).nf()
        want = f.parse(w).nf()
        assert {" ".join(cp.gens[i] for i in k): c for k, c in got.terms.items()} == \
            {" ".join(f.gens[i] for i in k): c for k, c in want.terms.items()}
