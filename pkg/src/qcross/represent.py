"""Classified representation series as weighted shifts on truncated lattices.

Every generator acts on a basis vector eta_i (i a lattice point, with a
component index for operator parameters) as a finite sum of weighted shifts
    g eta_i = sum_delta c_delta(i) eta_{i+delta}.
Operator parameters are diagonal, so c_delta(i) is a vector over components.

Relation and adjoint residuals are evaluated by composing weighted shifts on
interior start points in high precision (gmpy2), because entries grow like
q^(-radius) and float64 cannot resolve an absolute 1e-9 at that scale.
Float sparse matrices are produced separately for export and dense checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
import scipy.sparse as sp

from . import catalog
from .ncalg import Presentation, parse_raw, terms_str
from .scalars import ONE, ZERO

PRECISION = 256


# -- windows and parameters ----------------------------------------------------

@dataclass(frozen=True)
class Window:
    """Index ranges per axis; kinds are 'Z' (artificial bounds) or 'N0'."""
    ranges: tuple
    kinds: tuple
    margin: int | None = None

    def __post_init__(self):
        if len(self.ranges) != len(self.kinds):
            raise ValueError("one kind per axis required")
        for (lo, hi), kind in zip(self.ranges, self.kinds):
            if kind not in ("Z", "N0"):
                raise ValueError(f"unknown axis kind {kind!r}")
            if hi < lo:
                raise ValueError("empty axis range")
            if kind == "N0" and lo != 0:
                raise ValueError("N0 axes start at 0")
        if self.margin is not None and self.margin < 0:
            raise ValueError("margin must be non-negative")

    @classmethod
    def radius(cls, r, kinds, margin=None):
        return cls(tuple((-r, r) if k == "Z" else (0, r) for k in kinds), tuple(kinds), margin)

    @property
    def shape(self):
        return tuple(hi - lo + 1 for lo, hi in self.ranges)

    def interior(self, margins):
        """Interior ranges: artificial bounds shrink by the margin, N0 lower bounds stay."""
        out = []
        for (lo, hi), kind, m in zip(self.ranges, self.kinds, margins):
            a = lo if kind == "N0" else lo + m
            b = hi - m
            if b < a:
                return None
            out.append((a, b))
        return tuple(out)


def _eig(x, name):
    if x is None:
        return None
    a = np.asarray(x)
    if a.ndim == 0:
        return a.reshape(1)
    if a.ndim == 1:
        return a
    if a.ndim == 2 and a.shape[0] == a.shape[1]:
        off = a - np.diag(np.diag(a))
        if np.abs(off).max(initial=0) > 1e-12:
            raise ValueError(f"operator parameter {name} must be diagonal")
        return np.diag(a).copy()
    raise ValueError(f"parameter {name} must be a scalar, eigenvalue list or square matrix")


OPERATOR_PARAMS = ("A", "B", "H", "A1", "A2", "H1", "H2", "v", "w", "u")


@dataclass
class ParamSet:
    """Series parameters; operator parameters are stored by their eigenvalues."""
    q: float = 0.5
    A: object = 0.7
    B: object = 0.6
    H: object = 0.8
    A1: object = 0.7
    A2: object = 0.7
    H1: object = 1.0
    H2: object = 0.8
    epsilon: int = 1
    v: object = 1.0
    w: object = 1.0
    u: object = 1.0
    eig: dict = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie strictly inside (0,1), got {self.q}")
        self.eig = {k: _eig(getattr(self, k), k) for k in OPERATOR_PARAMS}
        dims = {len(v) for v in self.eig.values() if v is not None and len(v) > 1}
        if len(dims) > 1:
            raise ValueError("operator parameters have different dimensions")
        self.dim = dims.pop() if dims else 1

    def values(self, name):
        a = self.eig[name]
        if a is None:
            raise ValueError(f"parameter {name} is not set")
        return np.broadcast_to(a, (self.dim,))

    def is_complex(self, names):
        return any(np.iscomplexobj(self.eig[n]) and np.any(np.imag(self.eig[n]) != 0)
                   for n in names if self.eig[n] is not None)


# -- spectral windows ------------------------------------------------------------

def _win(lo, hi, lo_open, hi_open, text):
    return (lo, hi, lo_open, hi_open, text)


def _windows(q):
    s = math.sqrt(q)
    return {
        "A(q,1]": _win(q, 1, True, False, "σ(A)⊑(q,1]"),
        "B(q,1]": _win(q, 1, True, False, "σ(B)⊑(q,1]"),
        "B[q,1)": _win(q, 1, False, True, "σ(B)⊑[q,1)"),
        "H(s,1]": _win(s, 1, True, False, "σ(H)⊑(q^{1/2},1]"),
        "H2(q,1]": _win(q, 1, True, False, "σ(H₂)⊑(q,1]"),
        "A1(q2,1]": _win(q * q, 1, True, False, "σ(A₁)⊑(q²,1]"),
        "A2(q2,1]": _win(q * q, 1, True, False, "σ(A₂)⊑(q²,1]"),
    }


# -- series definitions ------------------------------------------------------------

@dataclass
class SeriesDef:
    label: str
    algebra: str
    axes: tuple          # axis kinds
    params: tuple        # parameter names used
    windows: tuple       # keys of _windows
    gens: dict           # generator -> [(delta, formula)]
    derived: dict = field(default_factory=dict)   # generator -> ("adjoint"|"inverse", source)
    invertible: tuple = ()                         # parameters that must be invertible
    unitary: tuple = ()
    relations: tuple = ()                          # extra relations (text) checked besides the rules
    note: str = ""


SERIES: dict[str, SeriesDef] = {}


def _series(label, algebra, axes, params, windows, gens, derived=None, invertible=(),
            unitary=(), relations=(), note=""):
    SERIES[label] = SeriesDef(label, algebra, tuple(axes), tuple(params), tuple(windows), gens,
                              derived or {}, tuple(invertible), tuple(unitary), tuple(relations), note)


# U0 x| O(C_q)

_series("I_A", "U0|xO_Cq", "Z", ("A",), ("A(q,1]",), {
    "z": [((-1,), lambda c, n: c.q(-n) * c.A)],
    "zs": [((1,), lambda c, n: c.q(-(n + 1)) * c.A)],
    "X": [((1,), lambda c, n: c.gamma * c.q(n + 1) / c.A)],
    "Xs": [((-1,), lambda c, n: c.gamma * c.q(n) / c.A)],
})

_series("II_AB", "U0|xO_Cq", "ZZ", ("A", "B"), ("A(q,1]", "B(q,1]"), {
    "z": [((-1, 0), lambda c, n, k: c.q(-n) * c.A)],
    "zs": [((1, 0), lambda c, n, k: c.q(-(n + 1)) * c.A)],
    "X": [((0, -1), lambda c, n, k: c.q(2 * n - k) * c.B / c.A),
          ((1, 0), lambda c, n, k: c.gamma * c.q(n + 1) / c.A)],
    "Xs": [((0, 1), lambda c, n, k: c.q(2 * n - k - 1) * c.B / c.A),
           ((-1, 0), lambda c, n, k: c.gamma * c.q(n) / c.A)],
})

# U_q(e_2) x| O(C_q)

_series("I_AH", "U_q_e2|xO_Cq", "Z", ("A", "H"), ("A(q,1]",), {
    "z": [((-1,), lambda c, n: c.q(-n) * c.A)],
    "zs": [((1,), lambda c, n: c.q(-(n + 1)) * c.A)],
    "F": [((1,), lambda c, n: c.s(1) * c.gamma / (c.A * c.H) + 0 * n)],
    "E": [((-1,), lambda c, n: c.s(1) * c.gamma / (c.A * c.H) + 0 * n)],
    "K": [((0,), lambda c, n: c.q(n) * c.H)],
}, derived={"Ki": ("inverse", "K")}, invertible=("H",))

_series("II_ABH", "U_q_e2|xO_Cq", "ZZ", ("A", "B", "H"), ("A(q,1]", "B(q,1]"), {
    "z": [((-1, 0), lambda c, n, k: c.q(-n) * c.A)],
    "zs": [((1, 0), lambda c, n, k: c.q(-(n + 1)) * c.A)],
    "F": [((0, -1), lambda c, n, k: c.s(-1) * c.q(n) * c.B / (c.A * c.H)),
          ((1, 0), lambda c, n, k: c.s(1) * c.gamma * c.q(k) / (c.A * c.H))],
    "E": [((0, 1), lambda c, n, k: c.s(-1) * c.q(n) * c.B / (c.A * c.H)),
          ((-1, 0), lambda c, n, k: c.s(1) * c.gamma * c.q(k) / (c.A * c.H))],
    "K": [((0, 0), lambda c, n, k: c.q(n - k) * c.H)],
}, derived={"Ki": ("inverse", "K")}, invertible=("H",))

# U_q(e_2) x| O(E_q(2))

_series("I_AHe", "U_q_e2|xO_Eq2", "ZZ", ("A", "H"), ("A(q,1]", "H(s,1]"), {
    "v": [((-1, -1), lambda c, m, k: c.one + 0 * m)],
    "n": [((0, 1), lambda c, m, k: c.q(-m) * c.A)],
    "F": [((1, 0), lambda c, m, k: c.gamma * c.s(k + 1) * c.eps / (c.A * c.H))],
    "E": [((-1, 0), lambda c, m, k: c.gamma * c.s(k + 1) * c.eps / (c.A * c.H))],
    "K": [((0, 0), lambda c, m, k: c.s(2 * m - k) * c.eps * c.H)],
}, derived={"vs": ("adjoint", "v"), "ns": ("adjoint", "n"), "Ki": ("inverse", "K")})

_series("II_ABHe", "U_q_e2|xO_Eq2", "ZZZ", ("A", "B", "H"), ("A(q,1]", "B(q,1]", "H(s,1]"), {
    "v": [((-1, -1, 1), lambda c, m, k, l: c.one + 0 * m)],
    "n": [((0, 1, -1), lambda c, m, k, l: c.q(-m) * c.A)],
    "F": [((0, -1, 0), lambda c, m, k, l: c.s(2 * m + l - 1) * c.eps * c.B / (c.A * c.H)),
          ((1, 0, 0), lambda c, m, k, l: c.gamma * c.s(2 * k + l + 1) * c.eps / (c.A * c.H))],
    "E": [((0, 1, 0), lambda c, m, k, l: c.s(2 * m + l - 1) * c.eps * c.B / (c.A * c.H)),
          ((-1, 0, 0), lambda c, m, k, l: c.gamma * c.s(2 * k + l + 1) * c.eps / (c.A * c.H))],
    "K": [((0, 0, 0), lambda c, m, k, l: c.s(2 * m - 2 * k - l) * c.eps * c.H)],
}, derived={"vs": ("adjoint", "v"), "ns": ("adjoint", "n"), "Ki": ("inverse", "K")})

# U_q(su_{1,1}) x| O(SU_q(1,1))

_SU_COORD3 = {
    "a": [((-1, 0, 0), lambda c, n, k, l: c.alpha(n, c.A))],
    "d": [((1, 0, 0), lambda c, n, k, l: c.alpha(n + 1, c.A))],
    "b": [((0, 0, 1), lambda c, n, k, l: c.q(n + 1) * c.A)],
    "c": [((0, 0, -1), lambda c, n, k, l: c.q(n) * c.A)],
}
_SU_DERIVED = {"bi": ("inverse", "b"), "ci": ("inverse", "c"), "Ki": ("inverse", "K")}


def _su_ef(kfac, kfac1):
    return {
        "F": [((0, 1, 0), lambda c, n, k, l: c.s(-n - 2 * k + l - 1) * kfac1(c, k) * c.eps * c.H / c.lam),
              ((1, 0, -1), lambda c, n, k, l: c.s(n + 2 * k - l + 1) * c.eps * c.beta(n + 1, c.A) / (c.H * c.lam))],
        "E": [((0, -1, 0), lambda c, n, k, l: -c.s(-n - 2 * k + l + 1) * kfac(c, k) * c.eps * c.H / c.lam),
              ((-1, 0, 1), lambda c, n, k, l: -c.s(n + 2 * k - l - 1) * c.eps * c.beta(n, c.A) / (c.H * c.lam))],
        "K": [((0, 0, 0), lambda c, n, k, l: c.s(-n - 2 * k + l) * c.eps * c.H)],
    }


_series("I1_AHe", "U_q_su11|xO_SLq2_localized", ("Z", "N0", "Z"), ("A", "H"), ("A(q,1]", "H(s,1]"),
        {**_SU_COORD3, **_su_ef(lambda c, k: c.lamn(k), lambda c, k: c.lamn(k + 1))},
        derived=_SU_DERIVED)

_series("I2_ABHe", "U_q_su11|xO_SLq2_localized", "ZZZ", ("A", "B", "H"),
        ("A(q,1]", "B[q,1)", "H(s,1]"),
        {**_SU_COORD3, **_su_ef(lambda c, k: c.alpha(k, c.B), lambda c, k: c.alpha(k + 1, c.B))},
        derived=_SU_DERIVED)

_series("I3_AHve", "U_q_su11|xO_SLq2_localized", "ZZ", ("A", "H", "v"), ("A(q,1]", "H(s,1]"), {
    "a": [((-1, 0), lambda c, n, k: c.alpha(n, c.A))],
    "d": [((1, 0), lambda c, n, k: c.alpha(n + 1, c.A))],
    "b": [((0, 1), lambda c, n, k: c.q(n + 1) * c.A)],
    "c": [((0, -1), lambda c, n, k: c.q(n) * c.A)],
    "F": [((0, -2), lambda c, n, k: c.s(-n + k - 1) * c.eps * c.H * c.v / c.lam),
          ((1, -1), lambda c, n, k: c.s(n - k + 1) * c.eps * c.beta(n + 1, c.A) / (c.H * c.lam))],
    "E": [((0, 2), lambda c, n, k: -c.s(-n + k + 1) * c.eps * c.H * c.vs / c.lam),
          ((-1, 1), lambda c, n, k: -c.s(n - k - 1) * c.eps * c.beta(n, c.A) / (c.H * c.lam))],
    "K": [((0, 0), lambda c, n, k: c.s(-n + k) * c.eps * c.H)],
}, derived=_SU_DERIVED, unitary=("v",))

# U_q(su_{1,1}) x| O(U_q), the quantum disc


def _disc_z(kind):
    if kind == "lam":
        return {"z": [((1, 0), lambda c, n, k: c.lamn(n + 1))],
                "zs": [((-1, 0), lambda c, n, k: c.lamn(n))]}
    if kind == "alpha":
        return {"z": [((1, 0), lambda c, n, k: c.alpha(n + 1, c.A1))],
                "zs": [((-1, 0), lambda c, n, k: c.alpha(n, c.A1))]}
    return {"z": [((1, 0), lambda c, n, k: c.one + 0 * n)],
            "zs": [((-1, 0), lambda c, n, k: c.one + 0 * n)]}


def _disc_efk(hk, nfac, nfac1, kfac, kfac1):
    """Series I and II: K = q^(n-k) h; hk returns (h, h^-1)."""
    return {
        "K": [((0, 0), lambda c, n, k: c.q(n - k) * hk(c)[0])],
        "F": [((0, 1), lambda c, n, k: c.s(2 * (n - k) - 1) * kfac1(c, k) * hk(c)[0] / c.lam),
              ((-1, 0), lambda c, n, k: c.s(-2 * (n - k) + 1) * nfac(c, n) * hk(c)[1] / c.lam)],
        "E": [((0, -1), lambda c, n, k: -c.s(2 * (n - k) + 1) * kfac(c, k) * hk(c)[0] / c.lam),
              ((1, 0), lambda c, n, k: -c.s(-2 * (n - k) - 1) * nfac1(c, n) * hk(c)[1] / c.lam)],
    }


def _disc_efk3(kfac, kfac1):
    """Series III.1, III.2: K = q^n eps H2."""
    return {
        "K": [((0, 0), lambda c, n, k: c.q(n) * c.eps * c.H2)],
        "F": [((-1, 1), lambda c, n, k: c.s(2 * n - 1) * kfac1(c, k) * c.eps * c.H2 / c.lam),
              ((-1, 0), lambda c, n, k: c.s(-2 * n + 1) * c.eps / (c.H2 * c.lam))],
        "E": [((1, -1), lambda c, n, k: -c.s(2 * n + 1) * kfac(c, k) * c.eps * c.H2 / c.lam),
              ((1, 0), lambda c, n, k: -c.s(-2 * n - 1) * c.eps / (c.H2 * c.lam))],
    }


_H1 = lambda c: (c.H1, 1 / c.H1)
_H2e = lambda c: (c.eps * c.H2, c.eps / c.H2)
_one = lambda c, i: c.one + 0 * i
_lamk = lambda c, k: c.lamn(k)
_lamk1 = lambda c, k: c.lamn(k + 1)
_alk = lambda c, k: c.alpha(k, c.A2)
_alk1 = lambda c, k: c.alpha(k + 1, c.A2)
_lamn = lambda c, n: c.lamn(n)
_lamn1 = lambda c, n: c.lamn(n + 1)
_aln = lambda c, n: c.alpha(n, c.A1)
_aln1 = lambda c, n: c.alpha(n + 1, c.A1)
_DISC = "U_q_su11|xO_Uq"
_KI = {"Ki": ("inverse", "K")}

_series("I1_H1", _DISC, ("N0", "N0"), ("H1",), (), {**_disc_z("lam"), **_disc_efk(_H1, _lamn, _lamn1, _lamk, _lamk1)},
        derived=_KI, invertible=("H1",))
_series("I2_A2H1", _DISC, ("N0", "Z"), ("A2", "H1"), ("A2(q2,1]",),
        {**_disc_z("lam"), **_disc_efk(_H1, _lamn, _lamn1, _alk, _alk1)}, derived=_KI, invertible=("H1",))
_series("I3_H2e", _DISC, ("N0", "Z"), ("H2",), ("H2(q,1]",),
        {**_disc_z("lam"), **_disc_efk(_H2e, _lamn, _lamn1, _one, _one)}, derived=_KI)
_series("II1_A1H1", _DISC, ("Z", "N0"), ("A1", "H1"), ("A1(q2,1]",),
        {**_disc_z("alpha"), **_disc_efk(_H1, _aln, _aln1, _lamk, _lamk1)}, derived=_KI, invertible=("H1",))
_series("II2_A1A2H1", _DISC, "ZZ", ("A1", "A2", "H1"), ("A1(q2,1]", "A2(q2,1]"),
        {**_disc_z("alpha"), **_disc_efk(_H1, _aln, _aln1, _alk, _alk1)}, derived=_KI, invertible=("H1",))
_series("II3_A1H2e", _DISC, "ZZ", ("A1", "H2"), ("A1(q2,1]", "H2(q,1]"),
        {**_disc_z("alpha"), **_disc_efk(_H2e, _aln, _aln1, _one, _one)}, derived=_KI)
_series("III1_H2e", _DISC, ("Z", "N0"), ("H2",), ("H2(q,1]",),
        {**_disc_z("one"), **_disc_efk3(_lamk, _lamk1)}, derived=_KI)
_series("III2_A2H2e", _DISC, "ZZ", ("A2", "H2"), ("A2(q2,1]", "H2(q,1]"),
        {**_disc_z("one"), **_disc_efk3(_alk, _alk1)}, derived=_KI)
_series("III3_vH2e", _DISC, "Z", ("v", "H2"), ("H2(q,1]",), {
    "z": [((1,), lambda c, n: c.one + 0 * n)],
    "zs": [((-1,), lambda c, n: c.one + 0 * n)],
    "K": [((0,), lambda c, n: c.q(n) * c.eps * c.H2)],
    "F": [((-1,), lambda c, n: (c.s(2 * n - 1) * c.eps * c.H2 * c.v + c.s(-2 * n + 1) * c.eps / c.H2) / c.lam)],
    "E": [((1,), lambda c, n: -(c.s(2 * n + 1) * c.eps * c.H2 * c.vs + c.s(-2 * n - 1) * c.eps / c.H2) / c.lam)],
}, derived=_KI, unitary=("v",))

# the q-oscillator relation z* z - q^2 z z* = eps (1 - q^2) and the coordinate algebra

_OSC = "zs z - q^2 z zs - ({eps}) (1 - q^2)"

_series("L3_I", "L3", ("N0",), (), (), {
    "z": [((1,), lambda c, n: c.lamn(n + 1))],
    "zs": [((-1,), lambda c, n: c.lamn(n))],
}, relations=(_OSC.format(eps=1),))
_series("L3_II_A", "L3", "Z", ("A",), (), {
    "z": [((1,), lambda c, n: c.alpha(n + 1, c.A))],
    "zs": [((-1,), lambda c, n: c.alpha(n, c.A))],
}, relations=(_OSC.format(eps=1),))
_series("L3_III_u", "L3", (), ("u",), (), {
    "z": [((), lambda c: c.u)],
    "zs": [((), lambda c: c.us)],
}, unitary=("u",), relations=(_OSC.format(eps=1),))
_series("L3_IV", "L3", ("N0",), (), (), {
    "z": [((-1,), lambda c, n: c.sqrt(c.q(-2 * n) - 1))],
    "zs": [((1,), lambda c, n: c.sqrt(c.q(-2 * (n + 1)) - 1))],
}, relations=(_OSC.format(eps=-1),))

_series("O_SUq11_base", "O_SLq2", "Z", ("A", "w"), ("A(q,1]",), {
    "a": [((-1,), lambda c, n: c.alpha(n, c.A))],
    "d": [((1,), lambda c, n: c.alpha(n + 1, c.A))],
    "b": [((0,), lambda c, n: c.q(n + 1) * c.A * c.ws)],
    "c": [((0,), lambda c, n: c.q(n) * c.A * c.w)],
}, unitary=("w",))

CLASSIFIED = ("I_A", "II_AB", "I_AH", "II_ABH", "I_AHe", "II_ABHe", "I1_AHe", "I2_ABHe", "I3_AHve",
              "I1_H1", "I2_A2H1", "I3_H2e", "II1_A1H1", "II2_A1A2H1", "II3_A1H2e",
              "III1_H2e", "III2_A2H2e", "III3_vH2e")
EPSILON_LABELS = ("I_AHe", "II_ABHe", "I1_AHe", "I2_ABHe", "I3_AHve", "I3_H2e", "II3_A1H2e",
                  "III1_H2e", "III2_A2H2e", "III3_vH2e")
L3_KINDS = ("L3_I", "L3_II_A", "L3_III_u", "L3_IV")
ALL_LABELS = CLASSIFIED + L3_KINDS + ("O_SUq11_base",)

_L3_PRES = """
name: L3
gens: z zs
star: z = zs ; zs = z
"""


def presentation_for(label) -> Presentation:
    d = _get(label)
    if d.algebra == "L3":
        return _l3_pres()
    return catalog.pres(d.algebra)


_L3 = []


def _l3_pres():
    if not _L3:
        _L3.append(catalog.parse_presentation(_L3_PRES))
    return _L3[0]


def _get(label) -> SeriesDef:
    try:
        return SERIES[label]
    except KeyError:
        raise KeyError(f"unknown series label {label!r}") from None


def series_labels():
    return list(ALL_LABELS)


# -- validation ----------------------------------------------------------------------

@dataclass
class ValidationReport:
    label: str
    violations: list

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        return {"label": self.label, "ok": self.ok, "violations": list(self.violations)}


def validate_params(label, p: ParamSet) -> ValidationReport:
    d = _get(label)
    out = []
    wins = _windows(p.q)
    for name in d.params:
        if p.eig[name] is None:
            out.append(f"parameter {name} missing")
            continue
        vals = p.eig[name]
        if name not in d.unitary and np.iscomplexobj(vals) and np.any(np.imag(vals) != 0):
            out.append(f"{name} must be self-adjoint (real eigenvalues)")
    for key in d.windows:
        lo, hi, lo_open, hi_open, text = wins[key]
        name = key.split("(")[0].split("[")[0]
        if p.eig[name] is None:
            continue
        for x in np.real(p.eig[name]):
            bad = x < lo or x > hi or (lo_open and x == lo) or (hi_open and x == hi)
            if bad:
                out.append(f"{text} violated by eigenvalue {x:g}")
    for name in d.invertible:
        if p.eig[name] is not None and np.any(p.eig[name] == 0):
            out.append(f"{name} must be invertible")
    for name in d.unitary:
        if p.eig[name] is not None and np.any(np.abs(np.abs(p.eig[name]) - 1) > 1e-12):
            out.append(f"{name} must be unitary")
    if label == "L3_II_A" and p.eig["A"] is not None:
        a = np.real(p.eig["A"])
        if np.any(a < p.q) or np.any(a > 1):
            out.append("σ(A)⊆[q,1] violated")
        if np.any(np.isclose(a, p.q, rtol=0, atol=0)) and np.any(a == 1):
            out.append("q and 1 cannot both be eigenvalues of A")
    if label in EPSILON_LABELS and p.epsilon not in (1, -1):
        out.append("epsilon must be +1 or -1")
    return ValidationReport(label, out)


def compute_beta(q: float) -> int:
    """The integer beta with -q^(-beta-1)/lambda in (q,1]."""
    if not 0 < q < 1:
        raise ValueError("q must lie strictly inside (0,1)")
    c = 1.0 / (1.0 / q - q)          # -1/lambda > 0
    # value(beta) = c * q^(-beta-1) decreases by the factor q as beta decreases by one
    beta = math.floor(math.log(c) / math.log(q)) - 1
    for b in range(beta - 3, beta + 4):
        val = c * q ** (-b - 1)
        if q < val <= 1:
            return b
    raise ArithmeticError("no beta found")  # unreachable for 0 < q < 1


# -- numeric context -----------------------------------------------------------------

class _Ctx:
    """Vectorized high-precision evaluation of series formulas."""

    def __init__(self, p: ParamSet, names, complex_):
        self.p = p
        self.cx = complex_
        self.qv = gmpy2.mpfr(p.q)
        self.sv = gmpy2.sqrt(self.qv)
        self._spow = {}
        self.one = self._num(1)
        self.lam = self.qv - 1 / self.qv
        self.gamma = 1 / (1 - self.qv * self.qv)
        self.eps = self._num(p.epsilon)
        for name in OPERATOR_PARAMS:
            if p.eig[name] is None:
                continue
            arr = np.array([self._num(x) for x in np.broadcast_to(p.eig[name], (p.dim,))], dtype=object)
            if name in ("v", "w", "u"):
                # unitary parameters: renormalize the phases at full precision
                arr = np.array([x / abs(x) for x in arr], dtype=object)
            setattr(self, name, arr)
            setattr(self, name + "s", np.array([x.conjugate() if self.cx else x for x in arr], dtype=object))

    def _num(self, x):
        if self.cx:
            x = complex(x)
            return gmpy2.mpc(gmpy2.mpfr(x.real), gmpy2.mpfr(x.imag))
        return gmpy2.mpfr(float(np.real(x)))

    def s(self, e):
        """s^e = q^(e/2) for integer (arrays of) e."""
        def one(x):
            x = int(x)
            v = self._spow.get(x)
            if v is None:
                v = self.sv ** x
                if self.cx:
                    v = gmpy2.mpc(v)
                self._spow[x] = v
            return v
        if np.ndim(e) == 0:
            return one(e)
        return np.frompyfunc(one, 1, 1)(e)

    def q(self, e):
        return self.s(2 * np.asarray(e))

    def sqrt(self, x):
        return np.frompyfunc(gmpy2.sqrt, 1, 1)(x) if np.ndim(x) else gmpy2.sqrt(x)

    def lamn(self, n):
        n = np.maximum(np.asarray(n), 0)
        return self.sqrt(1 - self.q(2 * n))

    def alpha(self, k, a):
        return self.sqrt(1 + self.q(2 * np.asarray(k)) * a * a)

    def beta(self, k, a):
        return self.sqrt(1 + self.q(-2 * np.asarray(k)) / (a * a))


# -- building --------------------------------------------------------------------------

class SeriesRep:
    """A series instantiated on a window: generator -> [(delta, coefficient grid)]."""

    def __init__(self, label, p: ParamSet, w: Window, pres: Presentation, terms, margins, derived, ctx):
        self.label, self.params, self.window, self.pres = label, p, w, pres
        self.terms = terms
        self.margins = margins
        self.derived = derived
        self._ctx = ctx
        self._sparse = None

    @property
    def dim(self):
        return self.params.dim

    @property
    def interior(self):
        return self.window.interior(self.margins)

    # grid coordinates: window index i lives at i - lo + pad on each axis
    def _grid_offset(self):
        return tuple(lo - m for (lo, _), m in zip(self.window.ranges, self.margins))

    def matrices(self):
        """Float sparse matrices (complex128, CSR) on the window basis."""
        if self._sparse is None:
            self._sparse = {g: self._to_sparse(t) for g, t in self.terms.items()}
        return self._sparse

    def basis_size(self):
        return int(np.prod(self.window.shape, dtype=int)) * self.dim

    def flat_index(self, idx, comp=0):
        shape = self.window.shape
        rel = tuple(i - lo for i, (lo, _) in zip(idx, self.window.ranges))
        return int(np.ravel_multi_index(rel, shape)) * self.dim + comp if shape else comp

    def _to_sparse(self, terms):
        w = self.window
        shape = w.shape
        n = self.basis_size()
        rows, cols, vals = [], [], []
        for delta, coef in terms:
            sl = tuple(slice(m, m + s) for m, s in zip(self.margins, shape))
            block = coef[sl] if shape else coef
            nz = np.argwhere(np.frompyfunc(lambda x: x != 0, 1, 1)(block).astype(bool))
            for pos in nz:
                src = tuple(pos[:-1])
                comp = int(pos[-1])
                tgt = tuple(a + b for a, b in zip(src, delta))
                col = (int(np.ravel_multi_index(src, shape)) if shape else 0) * self.dim + comp
                row = (int(np.ravel_multi_index(tgt, shape)) if shape else 0) * self.dim + comp
                rows.append(row)
                cols.append(col)
                vals.append(complex(block[tuple(pos)]))
        return sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(n, n))

    def export_coo(self, gen, path=None):
        """Coordinate-list text: one 'row col re im' line per non-zero."""
        m = self.matrices()[gen].tocoo()
        lines = [f"{r} {c} {float(v.real)!r} {float(v.imag)!r}" for r, c, v in zip(m.row, m.col, m.data)]
        text = "\n".join(lines) + ("\n" if lines else "")
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _word_shift(terms, word, axis):
    return sum(max((abs(d[axis]) for d, _ in terms[g]), default=0) for g in word)


def build_series(label, p: ParamSet | None = None, w: Window | None = None, radius=12) -> SeriesRep:
    d = _get(label)
    p = p or ParamSet()
    rep = validate_params(label, p)
    if not rep.ok:
        raise ValueError(f"invalid parameters for {label}: " + "; ".join(rep.violations))
    if w is None:
        w = Window.radius(radius, d.axes)
    if tuple(w.kinds) != tuple(d.axes):
        raise ValueError(f"{label} needs axes {d.axes}, got {w.kinds}")
    pres = presentation_for(label)
    missing = [g for g in pres.gens if g not in d.gens and g not in d.derived]
    if missing:
        raise ValueError(f"series {label} does not cover generators {missing}")
    nax = len(d.axes)
    # margins from the longest relation words
    shifts = {g: [delta for delta, _ in t] for g, t in d.gens.items()}
    for g, (kind, src) in d.derived.items():
        shifts[g] = [tuple(-x for x in delta) for delta in shifts[src]]
    shift_terms = {pres.index[g]: [(s, None) for s in v] for g, v in shifts.items()}
    need = [0] * nax
    for words in _relation_words(pres, d):
        for wd in words:
            for a in range(nax):
                need[a] = max(need[a], _word_shift(shift_terms, wd, a))
    margins = tuple(max(x, w.margin or 0) for x in need)
    # coefficient grids over the window padded by the margins
    ext = [(lo - m, hi + m) for (lo, hi), m in zip(w.ranges, margins)]
    axes = [np.arange(lo, hi + 1) for lo, hi in ext]
    grids = [g[..., None] for g in np.meshgrid(*axes, indexing="ij")] if nax else []
    gshape = tuple(hi - lo + 1 for lo, hi in ext)
    inside = np.ones(gshape, dtype=bool)
    for a, ((lo, hi), g) in enumerate(zip(w.ranges, grids)):
        inside &= (g[..., 0] >= lo) & (g[..., 0] <= hi)
    with gmpy2.context(gmpy2.get_context(), precision=PRECISION):
        ctx = _Ctx(p, d.params, p.is_complex(d.params))
        terms = {}
        for g, tl in d.gens.items():
            out = []
            for delta, f in tl:
                val = f(ctx, *grids)
                val = np.array(np.broadcast_to(val, gshape + (p.dim,)), dtype=object)
                mask = inside & _shift_mask(inside, delta)
                val[~mask] = 0
                out.append((tuple(delta), val))
            terms[g] = out
        for g, (kind, src) in d.derived.items():
            terms[g] = [_derive(kind, delta, val, inside) for delta, val in terms[src]] \
                if kind == "adjoint" else [_inverse(terms[src], inside)]
    return SeriesRep(label, p, w, pres, terms, margins, dict(d.derived), ctx)


def _shift_mask(inside, delta):
    """mask[i] = inside[i + delta] (False beyond the grid)."""
    out = np.zeros_like(inside)
    if not inside.shape:
        return inside.copy()
    src, dst = [], []
    for dlt, n in zip(delta, inside.shape):
        if dlt >= 0:
            dst.append(slice(0, n - dlt))
            src.append(slice(dlt, n))
        else:
            dst.append(slice(-dlt, n))
            src.append(slice(0, n + dlt))
    out[tuple(dst)] = inside[tuple(src)]
    return out


def _shifted(val, delta):
    """out[j] = val[j - delta] (zero beyond the grid)."""
    out = np.zeros_like(val)
    if val.ndim == 1:
        return val.copy()
    src, dst = [], []
    for dlt, n in zip(delta, val.shape[:-1]):
        if dlt >= 0:
            dst.append(slice(dlt, n))
            src.append(slice(0, n - dlt))
        else:
            dst.append(slice(0, n + dlt))
            src.append(slice(-dlt, n))
    out[tuple(dst)] = val[tuple(src)]
    return out


def _conj(a):
    return np.frompyfunc(lambda x: x.conjugate() if hasattr(x, "conjugate") else x, 1, 1)(a)


def _derive(kind, delta, val, inside):
    # adjoint of eta_i -> c(i) eta_{i+delta} is eta_j -> conj(c(j-delta)) eta_{j-delta}
    nd = tuple(-x for x in delta)
    return nd, _conj(_shifted(val, delta))


def _inverse(terms, inside):
    if len(terms) != 1:
        raise ValueError("only single weighted shifts are inverted")
    delta, val = terms[0]
    sh = _shifted(val, delta)
    inv = np.frompyfunc(lambda x: 1 / x if x != 0 else 0, 1, 1)(sh)
    nd = tuple(-x for x in delta)
    mask = inside & _shift_mask(inside, nd)
    inv = np.array(inv, dtype=object)
    inv[~mask] = 0
    return nd, inv


def _relation_words(pres, d):
    """Words appearing in the checked relations and star images."""
    out = []
    for lhs, rhs in pres.rules.items():
        out.append([lhs] + list(rhs))
    for text in d.relations:
        out.append(list(parse_raw(text, pres)))
    for g, img in pres.star_table.items():
        out.append([(g,)] + list(img))
    return out


# -- residuals -----------------------------------------------------------------------

@dataclass
class ResidualRow:
    relation: str
    residual: float
    passed: bool
    anchor: str = ""

    def as_dict(self):
        return {"relation": self.relation, "residual": self.residual, "passed": self.passed,
                "anchor": self.anchor}


@dataclass
class ResidualReport:
    kind: str
    label: str
    window: dict
    tol: float
    rows: list
    warnings: list

    @property
    def max_residual(self):
        return max((r.residual for r in self.rows), default=0.0)

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def vacuous(self):
        return "no interior vectors" in self.warnings

    def as_dict(self):
        return {"kind": self.kind, "label": self.label, "window": self.window, "tol": self.tol,
                "passed": self.passed, "max_residual": self.max_residual, "warnings": list(self.warnings),
                "rows": [r.as_dict() for r in self.rows]}


class _Composer:
    """Applies words to all interior basis vectors at once."""

    def __init__(self, rep: SeriesRep, box=None):
        self.rep = rep
        self.box = box if box is not None else rep.interior
        self.cache = {}
        pres = rep.pres
        self.letters = {pres.index[g]: t for g, t in rep.terms.items()}
        off = rep._grid_offset()
        self.start = tuple(a - o for (a, _), o in zip(self.box, off)) if self.box else ()
        self.size = tuple(b - a + 1 for a, b in self.box) if self.box else ()
        zero = gmpy2.mpc(0) if rep._ctx.cx else gmpy2.mpfr(0)
        one = gmpy2.mpc(1) if rep._ctx.cx else gmpy2.mpfr(1)
        self.zero, self.one = zero, one

    def _ones(self):
        a = np.empty(self.size + (self.rep.dim,), dtype=object)
        a.fill(self.one)
        return a

    def _take(self, coef, shift):
        sl = tuple(slice(s + d, s + d + n) for s, d, n in zip(self.start, shift, self.size))
        return coef[sl] if sl else coef

    def word(self, w):
        """{total shift: coefficient array over interior starts} for the operator w."""
        got = self.cache.get(w)
        if got is not None:
            return got
        if not w:
            res = {tuple(0 for _ in self.size): self._ones()}
        else:
            inner = self.word(w[1:])
            res = {}
            for shift, arr in inner.items():
                for delta, coef in self.letters[w[0]]:
                    v = arr * self._take(coef, shift)
                    ns = tuple(a + b for a, b in zip(shift, delta))
                    if ns in res:
                        res[ns] = res[ns] + v
                    else:
                        res[ns] = v
        self.cache[w] = res
        return res

    def combine(self, terms, s):
        """Evaluate a linear combination of words (QScalar coefficients at s)."""
        out = {}
        for w, c in terms.items():
            cv = c.evaluate_at(s)
            for shift, arr in self.word(w).items():
                v = arr * cv
                out[shift] = out[shift] + v if shift in out else v
        return out

    def column_norm_max(self, diff):
        if not diff:
            return 0.0
        acc = None
        for arr in diff.values():
            sq = np.frompyfunc(lambda x: abs(x) ** 2, 1, 1)(arr)
            acc = sq if acc is None else acc + sq
        m = max(acc.ravel(), default=gmpy2.mpfr(0))
        return float(gmpy2.sqrt(m))


def _check_box(rep: SeriesRep, w: Window | None):
    """Interior of rep, optionally cut down to the interior of a smaller window w."""
    box = rep.interior
    if w is None or box is None:
        return box
    if len(w.ranges) != len(rep.window.ranges):
        raise ValueError("window dimension mismatch")
    sub = w.interior(rep.margins)
    if sub is None:
        return None
    out = tuple((max(a, c), min(b, d)) for (a, b), (c, d) in zip(box, sub))
    return None if any(b < a for a, b in out) else out


def _wdict(w: Window, margins):
    return {"ranges": [list(r) for r in w.ranges], "kinds": list(w.kinds), "margins": list(margins)}


def _rel_text(pres, lhs, rhs):
    return f"{pres.word_str(lhs)} = {terms_str(pres, rhs) if rhs else '0'}"


def relation_residuals(rep: SeriesRep, pres: Presentation | None = None, w: Window | None = None,
                       tol=1e-9) -> ResidualReport:
    pres = pres or rep.pres
    missing = [g for g in pres.gens if g not in rep.terms]
    if missing:
        raise ValueError(f"representation misses generators {missing}")
    rows, warnings = [], []
    box = _check_box(rep, w)
    if box is None:
        warnings.append("no interior vectors")
        return ResidualReport("relations", rep.label, _wdict(rep.window, rep.margins), tol, rows, warnings)
    comp = _Composer(rep, box)
    with gmpy2.context(gmpy2.get_context(), precision=PRECISION):
        s = rep._ctx.sv
        anchor = pres.name
        for lhs, rhs in pres.rules.items():
            terms = {k: -v for k, v in rhs.items()}
            terms[lhs] = terms.get(lhs, ZERO) + ONE
            r = comp.column_norm_max(comp.combine(terms, s))
            rows.append(ResidualRow(_rel_text(pres, lhs, rhs), r, r <= tol, anchor))
        for text in _get(rep.label).relations:
            terms = parse_raw(text, pres)
            r = comp.column_norm_max(comp.combine(terms, s))
            rows.append(ResidualRow(text + " = 0", r, r <= tol, "oscillator relation"))
    return ResidualReport("relations", rep.label, _wdict(rep.window, rep.margins), tol, rows, warnings)


def adjoint_residuals(rep: SeriesRep, star_table=None, w: Window | None = None, tol=1e-9) -> ResidualReport:
    """Compare matrix(star(g)) with the adjoint of matrix(g) on interior columns."""
    pres = rep.pres
    star_table = star_table or pres.star_table
    rows, warnings = [], []
    box = _check_box(rep, w)
    if box is None:
        warnings.append("no interior vectors")
        return ResidualReport("adjoint", rep.label, _wdict(rep.window, rep.margins), tol, rows, warnings)
    comp = _Composer(rep, box)
    with gmpy2.context(gmpy2.get_context(), precision=PRECISION):
        s = rep._ctx.sv
        for g, img in star_table.items():
            name = pres.gens[g]
            lhs = comp.combine(img, s)
            adj = {}
            for delta, coef in rep.terms[name]:
                nd = tuple(-x for x in delta)
                v = _conj(comp._take(_shifted(coef, delta), (0,) * len(delta)))
                adj[nd] = adj[nd] + v if nd in adj else v
            diff = dict(lhs)
            for k, v in adj.items():
                diff[k] = diff[k] - v if k in diff else -v
            r = comp.column_norm_max(diff)
            note = " (derived as adjoint)" if rep.derived.get(name, ("",))[0] == "adjoint" else ""
            rows.append(ResidualRow(f"{name}* = {terms_str(pres, img)}{note}", r, r <= tol, "involution"))
    return ResidualReport("adjoint", rep.label, _wdict(rep.window, rep.margins), tol, rows, warnings)


def check_series(label, p: ParamSet | None = None, radius=12, tol=1e-9):
    rep = build_series(label, p, radius=radius)
    return rep, relation_residuals(rep, tol=tol), adjoint_residuals(rep, tol=tol)
