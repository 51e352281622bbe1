from fractions import Fraction

import numpy as np
import pytest

from qcross import functionals as fu
from qcross import heisenberg as he
from qcross.functionals import FunctionalSpec, QGridMeasure
from qcross.represent import SERIES, ParamSet, Window, compute_beta

ONE_ATOM = [(0.7, 1.0)]
TWO_ATOMS = [(0.6, 1.0), (0.9, 0.5)]


def atoms_for(case, atoms):
    return [(-a, w) for a, w in atoms] if case == "disc" else atoms


@pytest.mark.parametrize("atoms", [ONE_ATOM, TWO_ATOMS], ids=["one_atom", "two_atoms"])
@pytest.mark.parametrize("case", he.PROPOSITION_CASES)
def test_equivalences_hold(case, atoms):
    results = he.run_proposition(case, atoms_for(case, atoms))
    assert len(results) == (2 if case == "disc" else 1)
    for r in results:
        assert r.passed, r.as_dict()
        assert not r.report.vacuous
        assert r.report.max_residual <= 1e-9
        assert r.gns_dim > 0


def test_eq2_target_parameters():
    r = he.run_proposition("eq2", ONE_ATOM)[0]
    assert r.beta == -1 == compute_beta(0.5)
    assert r.params["B"] == pytest.approx([2 / 3])
    assert r.params["H"] == [1.0]
    assert r.target == "II_ABHe"


def test_cq_target_at_larger_q():
    q = 0.8
    meas = he.default_measure("cq", [(0.9, 1.0)], q=q)
    r = he.check_proposition("cq", meas)
    assert r.beta == -5
    assert r.params["H"] == pytest.approx([q ** 4])
    assert r.passed


def test_suq11_target_parameters():
    r = he.run_proposition("suq11", TWO_ATOMS)[0]
    assert r.params["B"] == pytest.approx([0.5 / 0.6, 0.5 / 0.9])
    assert r.target == "I2_ABHe"


def test_disc_summands():
    hI, mu0 = he.run_proposition("disc", atoms_for("disc", TWO_ATOMS))
    assert hI.target == "I1_H1" and mu0.target == "II2_A1A2H1"
    assert mu0.params["A1"] == pytest.approx([0.6 ** 0.5, 0.9 ** 0.5])


def test_h_i_gram_is_exact_identity():
    labels, G = he.disc_hI_gram(Fraction(1, 4), size=4)
    n = len(labels)
    assert n == 16
    assert all(isinstance(v, Fraction) for row in G for v in row)
    assert G == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def test_zeta_vectors_are_orthonormal_under_mu0():
    meas = he.default_measure("eq2", TWO_ATOMS)
    h = FunctionalSpec("Eq2", meas)
    w = Window.radius(2, SERIES["II_ABHe"].axes)
    span = he.proposition_span("eq2", meas, w)
    gns = he.build_gns(h, span, closure="truncate")
    assert gns.dim == len(span)
    assert not gns.null_labels
    for (j, i), v in gns.gram.items():
        assert j == i
        assert float(abs(v - 1)) <= 1e-60


def test_relabeling_is_injective_on_windows():
    for case in he.CASES:
        spec = he.intertwiner_spec(case)
        w = Window.radius(3, SERIES[spec.target].axes)
        images = [spec.relabel(idx)[1] for idx in he._window_points(w)]
        assert len(images) == len(set(images))


def test_wrong_relabel_detected():
    meas = he.default_measure("eq2", ONE_ATOM)
    good = he.intertwiner_spec("eq2")
    bad = he.IntertwinerSpec("eq2", good.beta, lambda e: (-good.relabel(e)[0], good.relabel(e)[1]) if e[0] % 2
                             else good.relabel(e), good.target)
    w = Window.radius(3, SERIES[good.target].axes)
    gns = he.build_gns(FunctionalSpec("Eq2", meas), he.proposition_span("eq2", meas, w), closure="truncate")
    params = he.target_params("eq2", meas)
    assert he.apply_intertwiner(good, gns, params, w).passed
    assert not he.apply_intertwiner(bad, gns, params, w).passed


def test_wrong_parameters_detected():
    meas = he.default_measure("suq11", ONE_ATOM)
    spec = he.intertwiner_spec("suq11")
    w = Window.radius(3, SERIES[spec.target].axes)
    gns = he.build_gns(FunctionalSpec("SUq11", meas), he.proposition_span("suq11", meas, w), closure="truncate")
    params = ParamSet(A=[0.7], B=[0.9], H=[1.0], epsilon=1)
    assert not he.apply_intertwiner(spec, gns, params, w).passed


def test_window_mismatch():
    meas = he.default_measure("cq", TWO_ATOMS)
    spec = he.intertwiner_spec("cq")
    w = Window.radius(3, SERIES[spec.target].axes)
    gns = he.build_gns(FunctionalSpec("Cq", meas), he.proposition_span("cq", meas, w), closure="truncate")
    with pytest.raises(ValueError, match="window mismatch"):
        he.apply_intertwiner(spec, gns, ParamSet(A=0.7, B=0.6, H=0.8), w)
    bigger = Window.radius(7, SERIES[spec.target].axes)
    with pytest.raises(ValueError, match="window mismatch"):
        he.apply_intertwiner(spec, gns, he.target_params("cq", meas), bigger)
    with pytest.raises(ValueError):
        he.apply_intertwiner(he.intertwiner_spec("eq2"), gns, he.target_params("cq", meas), w)


def test_zero_functional_span_is_null():
    meas = QGridMeasure("disc_hI", None, (-6, 6), 0.5)
    h = FunctionalSpec("disc", meas)
    x = fu.indicator("disc", meas, 0, 0)
    gns = he.build_gns(h, [x], closure="truncate")
    assert gns.dim == 0
    assert gns.null_labels == [0]


def test_extend_closure_cap():
    meas = he.default_measure("cq", ONE_ATOM, krange=(-60, 60))
    h = FunctionalSpec("Cq", meas)
    with pytest.raises(ValueError, match=he.NOT_CLOSED):
        he.build_gns(h, [fu.indicator("Cq", meas, 0, 0)], closure="extend", cap=3)


def test_bad_arguments():
    meas = he.default_measure("cq", ONE_ATOM)
    h = FunctionalSpec("Cq", meas)
    x = fu.indicator("Cq", meas, 0, 0)
    with pytest.raises(ValueError):
        he.build_gns(h, [x], closure="sometimes")
    with pytest.raises(ValueError):
        he.build_gns(h, [x], cross="U_q_su11|xO_Uq")
    with pytest.raises(ValueError):
        he.intertwiner_spec("nope")
    with pytest.raises(ValueError):
        he.run_proposition("nope")
    with pytest.raises(ValueError):
        he.zeta_vector("disc_hI", QGridMeasure("disc_hI", None, (-5, 5), 0.5), (-3, 1))


def test_non_orthogonal_span_uses_eigen_basis():
    meas = he.default_measure("cq", ONE_ATOM)
    h = FunctionalSpec("Cq", meas)
    a = fu.indicator("Cq", meas, 0, 0)
    b = fu.indicator("Cq", meas, 0, 1)
    gns = he.build_gns(h, [a, a + b, b + b], closure="truncate", generators=["K"])
    assert gns.dim == 2
    assert len(gns.null_labels) == 1
    assert gns.orthonormal is not None
    G = np.array([[complex(v) for v in row] for row in gns.gram_matrix()])
    V = gns.orthonormal
    assert np.allclose(V.conj().T @ G @ V, np.eye(2), atol=1e-12)


def test_formulas_and_adjoint_reports():
    meas = he.default_measure("suq11", TWO_ATOMS)
    spec = he.intertwiner_spec("suq11")
    w = Window.radius(3, SERIES[spec.target].axes)
    gns = he.build_gns(FunctionalSpec("SUq11", meas), he.proposition_span("suq11", meas, w), closure="truncate")
    forms = he.verify_heisenberg_formulas("suq11", gns)
    adj = he.adjoint_check(gns)
    assert forms.passed and forms.rows
    assert adj.passed and adj.rows


def test_gns_matrix_export(tmp_path):
    meas = he.default_measure("cq", ONE_ATOM)
    spec = he.intertwiner_spec("cq")
    w = Window.radius(3, SERIES[spec.target].axes)
    gns = he.build_gns(FunctionalSpec("Cq", meas), he.proposition_span("cq", meas, w), closure="truncate")
    m = gns.matrix("K")
    assert m.shape == (gns.dim, gns.dim)
    text = gns.export_coo("z", tmp_path / "z.coo")
    assert len(text.splitlines()) == gns.matrix("z").nnz
    assert (tmp_path / "z.coo").read_text() == text


def test_result_serializes():
    r = he.run_proposition("cq", ONE_ATOM)[0]
    d = r.as_dict()
    assert d["passed"] is True
    assert d["target"] == "II_ABH"
    assert d["intertwiner"]["rows"]
