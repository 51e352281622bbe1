"""Heisenberg (GNS) representations of invariant functionals and their intertwiners."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np
import scipy.sparse as sp

from . import functionals as fu
from .functionals import FAElement, FunctionalSpec, QGridMeasure, highprec
from .represent import (ParamSet, ResidualReport, ResidualRow, Window, build_series, compute_beta)

NOT_CLOSED = "span not closed; increase cap"


@dataclass
class SpanVector:
    """The vector sqrt(scale2) * element of the GNS space, with a label."""
    label: object
    element: FAElement
    scale2: object = 1


# -- representation of the cross product on the function algebra -----------------------

def _point(p):
    return p


def module_images(family, F):
    """Left multiplication operators for the coordinate generators."""
    L, M = fu.lmul_fn, fu.lmul_mono
    sq = lambda p: F.sqrt(1 + p * p)
    if family == "Eq2":
        return {"n": lambda x: M(L(x, _point), (1, 0)), "ns": lambda x: L(M(x, (-1, 0)), _point),
                "v": lambda x: M(x, (0, 1)), "vs": lambda x: M(x, (0, -1))}
    if family == "Cq":
        return {"z": lambda x: M(L(x, _point), (1,)), "zs": lambda x: L(M(x, (-1,)), _point)}
    if family == "SUq11":
        return {"a": lambda x: M(L(x, sq), (0, 1)), "d": lambda x: L(M(x, (0, -1)), sq),
                "b": lambda x: M(L(x, lambda p: F.q * p), (-1, 0)), "c": lambda x: M(L(x, _point), (1, 0)),
                "bi": lambda x: L(M(x, (1, 0)), lambda p: 1 / (F.q * p)),
                "ci": lambda x: L(M(x, (-1, 0)), lambda p: 1 / p)}
    if family == "disc_plus":
        root = lambda y: F.sqrt(1 + y)
        return {"z": lambda x: M(L(x, root), (1,)), "zs": lambda x: L(M(x, (-1,)), root)}
    if family == "disc":
        return {"z": fu._disc_lmul_z, "zs": fu._disc_lmul_zs}
    raise ValueError(f"unknown family {family!r}")


def heisenberg_operators(family, measure: QGridMeasure):
    """generator -> callable on FAElements: pi_h(a) x = a x, pi_h(f) x = x <| S^-1(f)."""
    F = measure.field
    ops = dict(module_images(family, F))
    h = fu.hopf_for(family)
    for g in h.base.gens:
        sinv = h.antipode(g, inverse=True)
        ops[g] = (lambda p: (lambda x: fu.fa_act_poly(x, p)))(sinv)
    return ops


def cross_presentation(family):
    from .catalog import pres
    return pres(fu.ALGEBRA_FAMILIES[family]["cross"])


# -- the GNS space -----------------------------------------------------------------------------

@dataclass
class GNSSpace:
    functional: FunctionalSpec
    labels: list                 # labels of the orthonormal basis
    span: list                   # SpanVector per spanning element
    gram: dict                   # (j, i) -> h(x_j* x_i) scaled, exact where the field is exact
    null_labels: list
    columns: dict                # generator -> list of {row: value} per basis vector
    lost: dict                   # generator -> list of lost norms per basis vector
    basis_map: list = field(default_factory=list)   # basis position -> span position (diagonal case)
    orthonormal: object = None   # span x basis matrix (general case)

    @property
    def dim(self):
        return len(self.labels)

    def index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def gram_matrix(self):
        n = len(self.span)
        G = [[self.functional.measure.field.zero] * n for _ in range(n)]
        for (j, i), v in self.gram.items():
            G[j][i] = v
        return G

    def matrix(self, gen):
        """Action matrix on the orthonormal basis (complex128, CSR)."""
        n = self.dim
        rows, cols, vals = [], [], []
        for c, col in enumerate(self.columns[gen]):
            for r, v in col.items():
                rows.append(r)
                cols.append(c)
                vals.append(complex(v))
        return sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(n, n))

    def export_coo(self, gen, path=None):
        m = self.matrix(gen).tocoo()
        text = "".join(f"{r} {c} {float(v.real)!r} {float(v.imag)!r}\n" for r, c, v in zip(m.row, m.col, m.data))
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _restrict(y: FAElement, keys):
    out = {}
    for m, fn in y.terms.items():
        sub = {p: v for p, v in fn.items() if (m, p) in keys}
        if sub:
            out[m] = sub
    return y._new(out)


def _pair(h, x, y):
    """h(x* y)."""
    return fu.evaluate_h(h, fu.fa_multiply(fu.fa_star(x), y))


def _key_element(x: FAElement, key):
    m, p = key
    return x._new({m: {p: x.F.one}})


def _sqrt_scale(F, a, b):
    if a == b:
        return a
    v = a * b
    if F.exact:
        try:
            return fu._exact_sqrt(Fraction(v))
        except ValueError:
            return gmpy2.sqrt(gmpy2.mpfr(v.numerator) / v.denominator)
    return gmpy2.sqrt(v)


def _sqrt(F, a):
    if F.exact:
        try:
            return fu._exact_sqrt(Fraction(a))
        except ValueError:
            return gmpy2.sqrt(gmpy2.mpfr(a.numerator) / a.denominator)
    return gmpy2.sqrt(a)


@highprec
def build_gns(h: FunctionalSpec, span, cross=None, closure="extend", cap=10, generators=None) -> GNSSpace:
    """GNS space of h over the linear span of ``span``.

    ``closure='extend'`` adds the missing grid points reached by generator
    images (up to ``cap`` times the initial size); ``closure='truncate'``
    compresses the action to the span and records the lost norm per column.
    """
    if closure not in ("extend", "truncate"):
        raise ValueError("closure must be 'extend' or 'truncate'")
    family, meas, F = h.family, h.measure, h.measure.field
    if cross is not None and cross != fu.ALGEBRA_FAMILIES[family]["cross"]:
        raise ValueError(f"{h.family} functionals act on {fu.ALGEBRA_FAMILIES[family]['cross']}, not {cross}")
    span = [s if isinstance(s, SpanVector) else SpanVector(i, s) for i, s in enumerate(span)]
    ops = heisenberg_operators(family, meas)
    gens = list(generators or cross_presentation(family).gens)
    limit = cap * max(len(span), 1)
    key_index = {}

    def register(j):
        for key in span[j].element.keys():
            key_index.setdefault(key, []).append(j)

    for j in range(len(span)):
        register(j)
    images = {}
    j = 0
    while j < len(span):
        x = span[j].element
        for g in gens:
            y = ops[g](x)
            images[(g, j)] = y
            if closure == "extend":
                for key in y.keys():
                    if key in key_index:
                        continue
                    d = _key_element(y, key)
                    n2 = _pair(h, d, d)
                    if n2 == 0:
                        key_index[key] = []
                        continue
                    if len(span) >= limit:
                        raise ValueError(NOT_CLOSED)
                    span.append(SpanVector(("ext", key), d, 1 / n2))
                    register(len(span) - 1)
        j += 1
    # Gram matrix
    gram = {}
    for i, s in enumerate(span):
        for jj in _candidates(key_index, s.element.keys()):
            v = _pair(h, _restrict(span[jj].element, s.element.keys()), s.element)
            if v != 0:
                gram[(jj, i)] = v * _sqrt_scale(F, s.scale2, span[jj].scale2)
    diagonal = all(a == b for a, b in gram)
    labels, null, basis_map, onb = [], [], [], None
    if diagonal:
        for i, s in enumerate(span):
            if gram.get((i, i), 0) != 0:
                labels.append(s.label)
                basis_map.append(i)
            else:
                null.append(s.label)
    else:
        n = len(span)
        G = np.zeros((n, n), dtype=complex)
        for (a, b), v in gram.items():
            G[a, b] = complex(v)
        w, V = np.linalg.eigh((G + G.conj().T) / 2)
        tol = 1e-10 * max(1.0, float(np.abs(w).max(initial=0)))
        keep = w > tol
        onb = V[:, keep] / np.sqrt(w[keep])
        labels = [("mode", a) for a in range(int(keep.sum()))]
        null = [("null", a) for a in range(int((~keep).sum()))]
    gns = GNSSpace(h, labels, span, gram, null, {}, {}, basis_map, onb)
    _actions(gns, gens, images, key_index, diagonal)
    return gns


def _candidates(key_index, keys):
    out = set()
    for key in keys:
        out.update(key_index.get(key, ()))
    return sorted(out)


def _actions(gns: GNSSpace, gens, images, key_index, diagonal):
    h, F = gns.functional, gns.functional.measure.field
    span = gns.span
    pos = {s: b for b, s in enumerate(gns.basis_map)}
    for g in gens:
        cols, lost = [], []
        if diagonal:
            for b, i in enumerate(gns.basis_map):
                y = images[(g, i)]
                si = _sqrt(F, span[i].scale2)
                col = {}
                for j in _candidates(key_index, y.keys()):
                    if j not in pos:
                        continue
                    x = span[j].element
                    v = _pair(h, x, _restrict(y, x.keys()))
                    if v != 0:
                        gjj = gns.gram[(j, j)]
                        # <pi e_i, e_j> with e = sqrt(s) x / ||sqrt(s) x||
                        col[pos[j]] = v * si * _sqrt(F, span[j].scale2) / (_sqrt(F, gns.gram[(i, i)]) * _sqrt(F, gjj))
                cols.append(col)
                rest = _restrict(y, {k for k in y.keys() if k not in key_index})
                lost.append(float(abs(_pair(h, rest, rest))) ** 0.5 * float(abs(si)) /
                            float(abs(_sqrt(F, gns.gram[(i, i)]))) if rest.terms else 0.0)
        else:
            n = len(span)
            B = np.zeros((n, n), dtype=complex)
            for i in range(n):
                y = images[(g, i)]
                for j in _candidates(key_index, y.keys()):
                    B[j, i] = complex(_pair(h, span[j].element, y)) * math.sqrt(
                        float(span[i].scale2) * float(span[j].scale2))
            A = gns.orthonormal.conj().T @ B @ gns.orthonormal
            for a in range(A.shape[1]):
                cols.append({b: A[b, a] for b in np.nonzero(np.abs(A[:, a]) > 0)[0]})
                lost.append(0.0)
        gns.columns[g] = cols
        gns.lost[g] = lost


# -- adjoint property -------------------------------------------------------------------------------

def _apply_word(gns, word, vec, gens):
    """Apply a word (tuple of generator indices, rightmost first) to a column dict."""
    for g in reversed(word):
        name = gens[g]
        out = {}
        for c, v in vec.items():
            if gns.lost[name][c] > 0:
                return None
            for r, w in gns.columns[name][c].items():
                out[r] = out.get(r, 0) + w * v
        vec = out
    return vec


@highprec
def adjoint_check(gns: GNSSpace, tol=1e-10) -> ResidualReport:
    """matrix(g*) against the Hilbert-space adjoint of matrix(g) on complete columns."""
    pres = cross_presentation(gns.functional.family)
    F = gns.functional.measure.field
    rows = []
    for g, img in pres.star_table.items():
        name = pres.gens[g]
        adj = [dict() for _ in range(gns.dim)]
        for c, col in enumerate(gns.columns[name]):
            for r, v in col.items():
                adj[r][c] = v.conjugate()
        worst, checked = 0.0, 0
        for c in range(gns.dim):
            total, ok = {}, True
            for w, coef in img.items():
                vec = _apply_word(gns, w, {c: F.one}, pres.gens)
                if vec is None:
                    ok = False
                    break
                cv = fu.scalar_value(coef, F)
                for r, v in vec.items():
                    total[r] = total.get(r, 0) + cv * v
            if not ok:
                continue
            # the adjoint column is complete only if every column reaching c is exact
            for r, v in adj[c].items():
                total[r] = total.get(r, 0) - v
            checked += 1
            worst = max(worst, math.sqrt(sum(float(abs(v)) ** 2 for v in total.values())))
        rows.append(ResidualRow(f"{name}* on {checked} complete columns", worst, worst <= tol, "involution"))
    return ResidualReport("gns-adjoint", gns.functional.name, {"dim": gns.dim}, tol, rows, [])


# -- the canonical bases and relabelings ---------------------------------------------------------------

CASES = ("eq2", "cq", "suq11", "disc_hI", "disc_mu0")


@dataclass
class IntertwinerSpec:
    case: str
    beta: int | None
    relabel: object        # eta index -> (sign, zeta index)
    target: str            # series label
    note: str = ""


def intertwiner_spec(case, q=0.5) -> IntertwinerSpec:
    if case == "eq2":
        b = compute_beta(float(q))
        c = b + 1
        return IntertwinerSpec(case, b, lambda e: ((-1) ** ((e[1] + e[2]) % 2),
                                                   (-c + e[1] + e[2], c - e[0] + e[1], -c - e[0] + e[1] + e[2])),
                               "II_ABHe")
    if case == "cq":
        b = compute_beta(float(q))
        c = b + 1
        return IntertwinerSpec(case, b, lambda e: ((-1) ** (e[1] % 2), (c + e[1], c - e[0] + e[1])), "II_ABH")
    if case == "suq11":
        return IntertwinerSpec(case, None, lambda e: ((-1) ** (e[1] % 2), (e[0] + e[1] + 2, e[1] + 2,
                                                                           e[2] - e[1] + 2)), "I2_ABHe")
    if case == "disc_hI":
        return IntertwinerSpec(case, None, lambda e: ((-1) ** (e[1] % 2), (e[0] - e[1], e[1] + 1)), "I1_H1")
    if case == "disc_mu0":
        return IntertwinerSpec(case, None, lambda e: ((-1) ** (e[1] % 2), (e[0] - e[1], e[1] + 1)), "II2_A1A2H1")
    raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


CASE_FAMILY = {"eq2": "Eq2", "cq": "Cq", "suq11": "SUq11", "disc_hI": "disc", "disc_mu0": "disc_plus"}


@highprec
def zeta_vector(case, measure: QGridMeasure, idx, i=0) -> SpanVector:
    """The canonical basis vector zeta_idx (times the atom indicator i) as a function-algebra element."""
    F = measure.field
    fam = CASE_FAMILY[case]
    if case == "disc_hI":
        n, k = idx
        if k < 1 or n < -k + 1:
            raise ValueError(f"zeta_{idx} is not a basis vector")
        prod = F.one
        if n >= 0:
            for l in range(n):
                prod = prod * (1 - F.qp(2 * (k + l)))
            x = FAElement(fam, measure, {n: {(0, k): F.one}})
        else:
            for l in range(1, -n + 1):
                prod = prod * (1 - F.qp(2 * (k - l)))
            x = FAElement(fam, measure, {n: {(0, k + n): F.one}})
        return SpanVector((idx, 0), x, F.qp(2 * k) / prod)
    a, w = measure.atoms[i]
    if case == "eq2":
        m, k, l = idx
        x = FAElement(fam, measure, {(k, l): {(i, -m): F.qp(m)}})
        return SpanVector((idx, i), x, 1 / (w * a))
    if case == "cq":
        m, k = idx
        x = FAElement(fam, measure, {(k,): {(i, -m): F.qp(m)}})
        return SpanVector((idx, i), x, 1 / (w * a))
    if case == "suq11":
        n, k, l = idx
        x = FAElement(fam, measure, {(-l, -n): {(i, -k): F.qp(k)}})
        return SpanVector((idx, i), x, 1 / (w * a))
    if case == "disc_mu0":
        n, k = idx
        x = FAElement(fam, measure, {(n,): {(i, k): F.qp(k)}})
        return SpanVector((idx, i), x, a * a / w)
    raise ValueError(f"unknown case {case!r}")


def target_params(case, measure: QGridMeasure) -> ParamSet:
    q = float(measure.field.q)
    atoms = [float(a) for a, _ in measure.atoms]
    lam = q - 1 / q
    if case in ("eq2", "cq"):
        b = compute_beta(q)
        B = -q ** (-b - 1) / lam
        H = 1.0 if case == "eq2" else q ** (-b - 1)
        return ParamSet(q=q, A=atoms, B=[B] * len(atoms), H=[H] * len(atoms), epsilon=1)
    if case == "suq11":
        return ParamSet(q=q, A=atoms, B=[q / a for a in atoms], H=[1.0] * len(atoms), epsilon=1)
    if case == "disc_hI":
        return ParamSet(q=q, H1=1.0)
    if case == "disc_mu0":
        roots = [math.sqrt(a) for a in atoms]
        return ParamSet(q=q, A1=roots, A2=roots, H1=[1.0] * len(atoms))
    raise ValueError(f"unknown case {case!r}")


@highprec
def proposition_span(case, measure: QGridMeasure, window: Window):
    """zeta vectors reached by the relabeling from every target basis vector in the window."""
    spec = intertwiner_spec(case, measure.field.q)
    natoms = 1 if case == "disc_hI" else len(measure.atoms)
    seen, out = set(), []
    for idx in _window_points(window):
        _, z = spec.relabel(idx)
        for i in range(natoms):
            key = (z, i)
            if key in seen:
                continue
            seen.add(key)
            out.append(zeta_vector(case, measure, z, i))
    return out


def _window_points(w: Window):
    import itertools
    return itertools.product(*[range(lo, hi + 1) for lo, hi in w.ranges])


# -- comparison with the classified series ---------------------------------------------------------------

def _series_column(rep, g, idx, comp):
    off = rep._grid_offset()
    pos = tuple(a - o for a, o in zip(idx, off))
    out = {}
    for delta, coef in rep.terms[g]:
        v = coef[pos + (comp,)]
        if v != 0:
            t = tuple(a + b for a, b in zip(idx, delta))
            out[(t, comp)] = out.get((t, comp), 0) + v
    return out


@highprec
def apply_intertwiner(spec: IntertwinerSpec, gns: GNSSpace, params: ParamSet, window: Window,
                      tol=1e-9) -> ResidualReport:
    """Compare the GNS action, relabeled through W and U, with the target series on the interior."""
    rep = build_series(spec.target, params, w=window)
    if gns.functional.family != CASE_FAMILY[spec.case]:
        raise ValueError("GNS space belongs to a different case")
    natoms = 1 if spec.case == "disc_hI" else len(gns.functional.measure.atoms)
    if rep.dim != natoms:
        raise ValueError("window mismatch: parameter dimension differs from the number of atoms")
    index = gns.index()
    back = {}
    for idx in _window_points(rep.window):
        sign, z = spec.relabel(idx)
        for i in range(natoms):
            back[(z, i)] = (sign, idx, i)
    rows, warnings = [], []
    box = rep.interior
    if box is None:
        warnings.append("no interior vectors")
        return ResidualReport("intertwiner", spec.target, {"ranges": [list(r) for r in window.ranges]},
                              tol, rows, warnings)
    interior = list(_window_points(Window(box, rep.window.kinds)))
    for g in rep.pres.gens:
        worst, checked = 0.0, 0
        for idx in interior:
            sign, z = spec.relabel(idx)
            for i in range(natoms):
                lab = (z, i)
                c = index.get(lab)
                if c is None:
                    raise ValueError(f"window mismatch: basis vector {lab} missing from the GNS span")
                col = gns.columns[g][c]
                diff = {k: -v for k, v in _series_column(rep, g, idx, i).items()}
                extra = gns.lost[g][c]
                for r, v in col.items():
                    hit = back.get(gns.labels[r])
                    if hit is None:
                        extra = math.hypot(extra, float(abs(v)))
                        continue
                    s2, idx2, i2 = hit
                    key = (idx2, i2)
                    diff[key] = diff.get(key, 0) + sign * s2 * v
                err = math.sqrt(sum(float(abs(v)) ** 2 for v in diff.values()) + extra ** 2)
                worst = max(worst, err)
                checked += 1
        rows.append(ResidualRow(f"{g}: GNS vs {spec.target} on {checked} interior vectors", worst,
                                worst <= tol, "unitary equivalence"))
    return ResidualReport("intertwiner", spec.target,
                          {"ranges": [list(r) for r in window.ranges], "interior": [list(b) for b in box]},
                          tol, rows, warnings)


# -- closed-form zeta-basis formulas -------------------------------------------------------------------

def _formulas(case, F):
    """generator -> [(delta, coefficient(idx, Q))] on the zeta basis."""
    q, lam, sp_ = F.q, F.lam, F.sp
    sqrt = F.sqrt if not F.exact else (lambda v: gmpy2.sqrt(v))
    al = lambda k, a: sqrt(1 + q ** (2 * k) * a * a)
    be = lambda k, a: sqrt(1 + q ** (-2 * k) / (a * a))
    lamn = lambda n: sqrt(1 - q ** (2 * max(n, 0)))
    if case == "eq2":
        return {
            "v": [((0, 0, 1), lambda m, k, l, Q: F.one)],
            "n": [((0, 1, 0), lambda m, k, l, Q: q ** (-m + l) * Q)],
            "K": [((0, 0, 0), lambda m, k, l, Q: sp_(-(k + l)))],
            "F": [((0, -1, -1), lambda m, k, l, Q: -sp_(2 * m + k - l - 1) / (lam * Q)),
                  ((-1, -1, -1), lambda m, k, l, Q: sp_(2 * m - k - l - 1) / (lam * Q))],
            "E": [((0, 1, 1), lambda m, k, l, Q: -sp_(2 * m + k - l - 1) / (lam * Q)),
                  ((1, 1, 1), lambda m, k, l, Q: sp_(2 * m - k - l - 1) / (lam * Q))],
        }
    if case == "cq":
        return {
            "z": [((0, 1), lambda m, k, Q: q ** (-m + k) * Q)],
            "K": [((0, 0), lambda m, k, Q: q ** (-k))],
            "F": [((0, -1), lambda m, k, Q: -sp_(2 * m - 1) / (lam * Q)),
                  ((-1, -1), lambda m, k, Q: sp_(2 * m - 2 * k - 1) / (lam * Q))],
            "E": [((0, 1), lambda m, k, Q: -sp_(2 * m - 1) / (lam * Q)),
                  ((1, 1), lambda m, k, Q: sp_(2 * m - 2 * k - 1) / (lam * Q))],
        }
    if case == "suq11":
        return {
            "a": [((-1, 0, 0), lambda n, k, l, Q: al(n - k, Q))],
            "b": [((0, 0, 1), lambda n, k, l, Q: q ** (n - k + 1) * Q)],
            "d": [((1, 0, 0), lambda n, k, l, Q: al(n - k + 1, Q))],
            "c": [((0, 0, -1), lambda n, k, l, Q: q ** (n - k) * Q)],
            "F": [((1, 0, -1), lambda n, k, l, Q: sp_(n - l + 1) * be(n - k + 1, Q) / lam),
                  ((1, 1, -1), lambda n, k, l, Q: -sp_(-n + l - 1) * al(k, 1 / Q) / lam)],
            "E": [((-1, -1, 1), lambda n, k, l, Q: sp_(-n + l + 1) * al(k - 1, 1 / Q) / lam),
                  ((-1, 0, 1), lambda n, k, l, Q: -sp_(n - l - 1) * be(n - k, Q) / lam)],
            "K": [((0, 0, 0), lambda n, k, l, Q: sp_(-n + l))],
        }
    if case == "disc_hI":
        return {
            "z": [((1, 0), lambda n, k, Q: lamn(n + k))],
            "zs": [((-1, 0), lambda n, k, Q: lamn(n + k - 1))],
            "K": [((0, 0), lambda n, k, Q: q ** n)],
            "E": [((1, -1), lambda n, k, Q: sp_(2 * n + 1) * lamn(k - 1) / lam),
                  ((1, 0), lambda n, k, Q: -sp_(-2 * n - 1) * lamn(n + k) / lam)],
            "F": [((-1, 1), lambda n, k, Q: -sp_(2 * n - 1) * lamn(k) / lam),
                  ((-1, 0), lambda n, k, Q: sp_(-2 * n + 1) * lamn(n + k - 1) / lam)],
        }
    if case == "disc_mu0":
        r = lambda e, Q: sqrt(1 + q ** (2 * e) * Q)
        return {
            "z": [((1, 0), lambda n, k, Q: r(n + k, Q))],
            "zs": [((-1, 0), lambda n, k, Q: r(n + k - 1, Q))],
            "K": [((0, 0), lambda n, k, Q: q ** n)],
            "E": [((1, -1), lambda n, k, Q: sp_(2 * n + 1) * r(k - 1, Q) / lam),
                  ((1, 0), lambda n, k, Q: -sp_(-2 * n - 1) * r(n + k, Q) / lam)],
            "F": [((-1, 1), lambda n, k, Q: -sp_(2 * n - 1) * r(k, Q) / lam),
                  ((-1, 0), lambda n, k, Q: sp_(-2 * n + 1) * r(n + k - 1, Q) / lam)],
        }
    raise ValueError(f"unknown case {case!r}")


@highprec
def verify_heisenberg_formulas(case, gns: GNSSpace, tol=1e-9) -> ResidualReport:
    """Entry-wise comparison of the GNS action with the closed-form zeta-basis formulas."""
    F = gns.functional.measure.field
    forms = _formulas(case, F)
    index = gns.index()
    rows = []
    for g, terms in forms.items():
        worst, checked = 0.0, 0
        for c, lab in enumerate(gns.labels):
            if gns.lost[g][c] > 0:
                continue
            idx, i = lab
            Q = gns.functional.measure.atoms[i][0]
            want = {}
            for delta, fn in terms:
                v = fn(*idx, Q)
                if v != 0:
                    t = tuple(a + b for a, b in zip(idx, delta))
                    want[(t, i)] = v
            got = {gns.labels[r]: v for r, v in gns.columns[g][c].items()}
            keys = set(want) | set(got)
            if any(k not in index for k in want if abs(want[k]) > 0):
                # the formula leaves the span; only complete columns count
                if not all(k in index or k in _null_set(gns) for k in want):
                    continue
            err = math.sqrt(sum(float(abs(got.get(k, 0) - (want.get(k, 0) if k in index else 0))) ** 2
                                for k in keys))
            worst = max(worst, err)
            checked += 1
        rows.append(ResidualRow(f"{g} zeta-basis formula on {checked} vectors", worst, worst <= tol,
                                "heisenberg formulas"))
    return ResidualReport("heisenberg-formulas", case, {"dim": gns.dim}, tol, rows, [])


def _null_set(gns):
    s = getattr(gns, "_nullset", None)
    if s is None:
        s = set(gns.null_labels)
        gns._nullset = s
    return s


# -- equivalence checks -------------------------------------------------------------------------------------

@dataclass
class PropositionResult:
    case: str
    target: str
    beta: int | None
    params: dict
    report: ResidualReport
    formulas: ResidualReport
    adjoint: ResidualReport
    gns_dim: int

    @property
    def passed(self):
        return self.report.passed and self.formulas.passed and self.adjoint.passed and not self.report.vacuous

    def as_dict(self):
        return {"case": self.case, "target": self.target, "beta": self.beta, "params": self.params,
                "gns_dim": self.gns_dim, "passed": self.passed, "intertwiner": self.report.as_dict(),
                "formulas": self.formulas.as_dict(), "adjoint": self.adjoint.as_dict()}


DEFAULT_RADIUS = {"eq2": 4, "cq": 5, "suq11": 4, "disc_hI": 6, "disc_mu0": 5}


def default_measure(case, atoms=((0.6, 1.0), (0.9, 0.5)), q=0.5, krange=None):
    fam = {"eq2": "radial", "cq": "radial", "suq11": "radial", "disc_hI": "disc_hI",
           "disc_mu0": "disc_positive"}[case]
    if krange is None:
        krange = (-40, 40)
    return QGridMeasure(fam, [] if case == "disc_hI" else list(atoms), krange, q)


@highprec
def check_proposition(case, measure: QGridMeasure | None = None, radius=None, tol=1e-9) -> PropositionResult:
    measure = measure or default_measure(case)
    radius = radius or DEFAULT_RADIUS[case]
    spec = intertwiner_spec(case, measure.field.q)
    params = target_params(case, measure)
    from .represent import SERIES
    window = Window.radius(radius, SERIES[spec.target].axes)
    span = proposition_span(case, measure, window)
    h = FunctionalSpec(CASE_FAMILY[case], measure)
    gns = build_gns(h, span, closure="truncate")
    rep = apply_intertwiner(spec, gns, params, window, tol)
    forms = verify_heisenberg_formulas(case, gns, tol)
    adj = adjoint_check(gns, tol)
    pd = {k: (list(map(float, v)) if v is not None else None) for k, v in params.eig.items()
          if k in _used(spec.target)}
    pd["q"] = params.q
    return PropositionResult(case, spec.target, spec.beta, pd, rep, forms, adj, gns.dim)


PROPOSITION_CASES = ("eq2", "cq", "suq11", "disc")


def run_proposition(case, atoms=None, q=0.5, radius=None, tol=1e-9, krange=(-40, 40)):
    """The equivalence check for one case; the disc case returns its two summands."""
    if case not in PROPOSITION_CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {PROPOSITION_CASES}")
    atoms = list(atoms) if atoms is not None else [(0.6, 1.0), (0.9, 0.5)]
    if case != "disc":
        return [check_proposition(case, default_measure(case, atoms, q, krange), radius, tol)]
    # the mu0 part lives on [-1,-q^2); it is handled in the flipped variable y -> -y
    plus = [(-a if a < 0 else a, w) for a, w in atoms]
    return [check_proposition("disc_hI", default_measure("disc_hI", q=q, krange=krange), radius, tol),
            check_proposition("disc_mu0", default_measure("disc_mu0", plus, q, krange), radius, tol)]


@highprec
def disc_hI_gram(q=Fraction(1, 4), size=4):
    """Gram matrix of h_I on the zeta basis with n + k <= size, in exact arithmetic for rational q."""
    meas = QGridMeasure("disc_hI", [], (-2 * size - 2, 2 * size + 2), q)
    h = FunctionalSpec("disc", meas)
    vecs = [zeta_vector("disc_hI", meas, (n, k)) for k in range(1, size + 1) for n in range(-k + 1, size - k + 1)]
    out = []
    for a in vecs:
        row = []
        for b in vecs:
            v = _pair(h, a.element, b.element)
            row.append(v * _sqrt_scale(meas.field, a.scale2, b.scale2) if v != 0 else meas.field.zero)
        out.append(row)
    return [v.label[0] for v in vecs], out


def _used(label):
    from .represent import SERIES
    return SERIES[label].params
