import pytest

from qcross.catalog import (CATALOG_IDS, ISOMORPHISMS, SUITES, derived, parse_presentation, pres, presentation,
                            resolve, verify_isomorphism, verify_suite)
from qcross.ncalg import confluence_smoke_test, verify_identity
from qcross.scalars import GAMMA


def test_presentation_examples():
    cq = pres("O_Cq")
    assert cq.gens == ["z", "zs"] and len(cq.rules) == 1
    assert verify_identity(cq.parse("zs z"), cq.parse("q^2 z zs"))[0]
    e2 = pres("U_q_e2")
    assert verify_identity(e2.parse("E F"), e2.parse("F E"))[0]
    uq = pres("O_Uq")
    assert verify_identity(uq.parse("zs z - q^2 z zs"), uq.parse("1 - q^2"))[0]


def test_unknown_id():
    with pytest.raises(KeyError):
        resolve("O_nothing")


def test_derived_examples():
    n = derived("N", "U0|xO_Cq")
    p = pres("U0|xO_Cq")
    assert verify_identity(n.value, p.parse("z X") - p.scalar(GAMMA))[0]
    assert derived("gamma", "U0|xO_Cq").value == p.scalar(GAMMA).nf()
    r = derived("R", "U_q_su11|xO_SLq2_localized")
    sl = pres("U_q_su11|xO_SLq2_localized")
    assert verify_identity(r.value, sl.parse("s lam F Ki - q d bi Ki Ki"))[0]
    with pytest.raises(KeyError):
        derived("N", "O_Cq")


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suite_passes(suite):
    checks = verify_suite(suite)
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_suite_sizes():
    assert len(verify_suite("relnz")) >= 5
    names = [c.name for c in verify_suite("centrality")]
    assert any(x.startswith("b^-1c^1") for x in names) and any(x.startswith("b^-2c^2") for x in names)


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify_suite("nope")


@pytest.mark.parametrize("name", list(ISOMORPHISMS) + ["identity"])
def test_isomorphisms(name):
    assert all(c.passed for c in verify_isomorphism(name))


@pytest.mark.parametrize("aid", CATALOG_IDS)
def test_involution_order_two(aid):
    p = pres(aid)
    for g in p.gens:
        assert p.gen(g).star().star().nf() == p.gen(g).nf()


@pytest.mark.parametrize("aid", ["O_Cq", "O_Eq2", "O_Uq", "U_q_e2", "U0|xO_Cq", "U_q_e2|xO_Cq"])
def test_confluence_small(aid):
    assert confluence_smoke_test(pres(aid), 4) == []


def test_parse_presentation_errors():
    with pytest.raises(SyntaxError, match="line 3"):
        parse_presentation("name: x\ngens: a b\nb a -> q c\n")
    with pytest.raises(SyntaxError, match="line 2"):
        parse_presentation("gens: a\nnonsense\n")


def test_hopf_entries_present():
    for aid in ("U_q_e2", "U_q_sl2_su11", "O_Eq2", "O_SLq2"):
        assert presentation(aid).hopf is not None
    assert presentation("O_Cq").hopf is None
