"""Function algebras over q-grids, their U-actions and invariant functionals.

Grid points are stored by lattice coordinates (atom index, k).  The point
itself is ``atom * q**k`` on radial grids and ``atom * q**(2k)`` on the disc
grids, so q-shifts of functions are exact index shifts.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

PRECISION = 256
EXHAUSTED = "grid window exhausted; enlarge k-range"

# measure families: (algebra family, grid step, fundamental domain text)
MEASURE_FAMILIES = {
    "radial": (("Eq2", "Cq", "SUq11"), 1, "(q,1]"),
    "disc_negative": (("disc",), 2, "[-1,-q^2)"),
    "disc_positive": (("disc_plus",), 2, "(q^2,1]"),
    "disc_hI": (("disc",), 2, "{q^(2k): k >= 1}"),
}

# algebra families: monomial degree, commutation shift, Hopf algebra
#   f(r) m = m f(q^(step * <shift, m>) r)
ALGEBRA_FAMILIES = {
    "Eq2": dict(ndeg=2, shift=(0, 1), hopf="U_q_e2", cross="U_q_e2|xO_Eq2"),
    "Cq": dict(ndeg=1, shift=(1,), hopf="U_q_e2", cross="U_q_e2|xO_Cq"),
    "SUq11": dict(ndeg=2, shift=(0, -1), hopf="U_q_su11", cross="U_q_su11|xO_SLq2_localized"),
    "disc_plus": dict(ndeg=1, shift=(1,), hopf="U_q_su11", cross="U_q_su11|xO_Uq"),
    "disc": dict(ndeg=1, shift=None, hopf="U_q_su11", cross="U_q_su11|xO_Uq"),
}


def highprec(fn):
    """Run ``fn`` with gmpy2 at the working precision."""
    @functools.wraps(fn)
    def run(*a, **kw):
        if gmpy2.get_context().precision >= PRECISION:
            return fn(*a, **kw)
        with gmpy2.context(gmpy2.get_context(), precision=PRECISION):
            return fn(*a, **kw)
    return run


class Field:
    """Scalars for a given q: exact rationals for a Fraction q, else gmpy2 numbers."""

    def __init__(self, q):
        self.exact = isinstance(q, (Fraction, int))
        if self.exact:
            self.q = Fraction(q)
            self.s = _exact_sqrt(self.q, strict=False)
        else:
            self.q = gmpy2.mpfr(q)
            self.s = gmpy2.sqrt(self.q)
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie strictly inside (0,1), got {q}")
        self.one = self.num(1)
        self.zero = self.num(0)
        self.lam = self.q - 1 / self.q

    def num(self, x):
        if self.exact:
            if isinstance(x, complex):
                if x.imag:
                    raise ValueError("exact arithmetic is real; use a floating q for complex values")
                x = x.real
            return Fraction(x)
        if isinstance(x, (complex, gmpy2.mpc)) or np.iscomplexobj(x):
            x = complex(x)
            if x.imag:
                return gmpy2.mpc(gmpy2.mpfr(x.real), gmpy2.mpfr(x.imag))
            x = x.real
        if isinstance(x, Fraction):
            return gmpy2.mpfr(x.numerator) / x.denominator
        return gmpy2.mpfr(x)

    def qp(self, e):
        return self.q ** e

    def sp(self, e):
        """q^(e/2)."""
        if self.s is None:
            if e % 2:
                raise ValueError("q has no rational square root; use a floating q")
            return self.q ** (e // 2)
        return self.s ** e

    def sqrt(self, x):
        if self.exact:
            return _exact_sqrt(Fraction(x))
        return gmpy2.sqrt(x)

    def conj(self, x):
        return x.conjugate()


def _exact_sqrt(x: Fraction, strict=True):
    if x >= 0:
        n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
    if strict:
        raise ValueError(f"sqrt({x}) is irrational; use a floating q")
    return None


# -- measures --------------------------------------------------------------------

@dataclass
class QGridMeasure:
    """Finitely atomic measure on a fundamental domain, extended along the q-grid."""
    family: str
    atoms: list
    krange: tuple
    q: object = 0.5
    check: bool = True
    field: Field = field(init=False, repr=False)

    @highprec
    def __post_init__(self):
        if self.family not in MEASURE_FAMILIES:
            raise ValueError(f"unknown measure family {self.family!r}; "
                             f"expected one of {sorted(MEASURE_FAMILIES)}")
        self.field = Field(self.q)
        f = self.field
        if self.family == "disc_hI":
            if self.atoms not in (None, [], [(1, 1)]):
                raise ValueError("disc_hI takes no atoms")
            self.atoms = [(1, 1)]
        lo, hi = self.krange
        if not (isinstance(lo, int) and isinstance(hi, int) and lo <= hi):
            raise ValueError(f"k-range must be two integers min <= max, got {self.krange}")
        self.krange = (lo, hi)
        pts = []
        for a, w in self.atoms:
            a, w = f.num(a), f.num(w)
            if not w > 0:
                raise ValueError(f"atom weight must be positive, got {w}")
            if self.check and not self._in_domain(a):
                raise ValueError(f"atom {a} lies outside the fundamental domain "
                                 f"{MEASURE_FAMILIES[self.family][2]}")
            pts.append((a, w))
        if not pts:
            raise ValueError("measure needs at least one atom")
        self.atoms = pts

    def _in_domain(self, a):
        q = self.field.q
        return {"radial": lambda: q < a <= 1,
                "disc_negative": lambda: -1 <= a < -q * q,
                "disc_positive": lambda: q * q < a <= 1,
                "disc_hI": lambda: a == 1}[self.family]()

    @property
    def step(self):
        return MEASURE_FAMILIES[self.family][1]

    @property
    def algebras(self):
        return MEASURE_FAMILIES[self.family][0]

    def point(self, i, k):
        return self.atoms[i][0] * self.field.qp(self.step * k)

    def lattice(self):
        lo, hi = self.krange
        return [(i, k) for i in range(len(self.atoms)) for k in range(lo, hi + 1)]

    def mass(self, i, k):
        """Extended weight times density at the lattice point."""
        f = self.field
        a, w = self.atoms[i]
        if self.family == "radial":
            return w * f.qp(k) * self.point(i, k)
        if self.family == "disc_hI":
            return f.qp(-2 * k) if k >= 1 else f.zero
        y = self.point(i, k)
        return w * f.qp(2 * k) / (y * y)

    def inside(self, k):
        return self.krange[0] <= k <= self.krange[1]


def parse_measure_file(text, family, q=0.5):
    """Lines ``point weight`` plus one ``krange min max``; '#' starts a comment."""
    atoms, krange = [], None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "krange":
                if len(parts) != 3:
                    raise ValueError("krange needs two integers")
                krange = (int(parts[1]), int(parts[2]))
            elif len(parts) == 2:
                atoms.append((_number(parts[0]), _number(parts[1])))
            else:
                raise ValueError("expected 'point weight' or 'krange min max'")
        except ValueError as e:
            raise ValueError(f"line {no}: {e}") from None
    if krange is None:
        raise ValueError("missing 'krange min max' line")
    return QGridMeasure(family, atoms, krange, q)


def _number(text):
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a number: {text!r}") from None


# -- elements ----------------------------------------------------------------------

class FAElement:
    """Finite sum of monomial * grid function, function on the right.

    Laurent families key terms by exponent tuples.  The disc family keys them
    by n in Z: z^n f(y) for n >= 0 and f(y) z*^|n| for n < 0.
    """

    def __init__(self, family, measure: QGridMeasure, terms=None):
        if family not in ALGEBRA_FAMILIES:
            raise ValueError(f"unknown algebra family {family!r}")
        if family not in measure.algebras:
            raise ValueError(f"measure family {measure.family} does not live on {family}")
        self.family, self.measure = family, measure
        self.terms = {}
        for m, fn in (terms or {}).items():
            fn = {p: v for p, v in fn.items() if v != 0}
            if fn:
                self.terms[m] = fn
        for fn in self.terms.values():
            for (_, k) in fn:
                if not measure.inside(k):
                    raise ValueError(EXHAUSTED)

    @property
    def spec(self):
        return ALGEBRA_FAMILIES[self.family]

    @property
    def F(self) -> Field:
        return self.measure.field

    def _new(self, terms):
        return FAElement(self.family, self.measure, terms)

    def __repr__(self):
        return f"FAElement({self.family}, {len(self.terms)} terms)"

    def keys(self):
        return {(m, p) for m, fn in self.terms.items() for p in fn}

    def is_zero(self):
        return not self.terms

    @highprec
    def __add__(self, other):
        out = {m: dict(fn) for m, fn in self.terms.items()}
        for m, fn in other.terms.items():
            d = out.setdefault(m, {})
            for p, v in fn.items():
                d[p] = d.get(p, 0) + v
        return self._new(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    @highprec
    def scale(self, c):
        return self._new({m: {p: c * v for p, v in fn.items()} for m, fn in self.terms.items()})

    def __mul__(self, other):
        return fa_multiply(self, other)

    def max_abs(self):
        return max((abs(v) for fn in self.terms.values() for v in fn.values()), default=0)


def identity_monomial(family):
    return (0,) * ALGEBRA_FAMILIES[family]["ndeg"] if family != "disc" else 0


def element(family, measure, terms):
    """Build an element from {monomial: {(atom, k): value}} converting values to the field."""
    f = measure.field
    return FAElement(family, measure, {m: {p: f.num(v) for p, v in fn.items()} for m, fn in terms.items()})


def indicator(family, measure, i, k, mono=None, value=1):
    m = identity_monomial(family) if mono is None else mono
    return element(family, measure, {m: {(i, k): value}})


# shifted function: g(i, k) = f(i, k + d)
def _sh(fn, d):
    return {(i, k - d): v for (i, k), v in fn.items()}


def _pt(x, fn, mult):
    """Pointwise product with mult(i, k) (a callable)."""
    out = {}
    for (i, k), v in fn.items():
        c = mult(i, k)
        if c != 0:
            out[(i, k)] = v * c
    return out


def _addfn(*fns):
    out = {}
    for c, fn in fns:
        for p, v in fn.items():
            out[p] = out.get(p, 0) + c * v
    return out


def _madd(out, m, fn):
    d = out.setdefault(m, {})
    for p, v in fn.items():
        d[p] = d.get(p, 0) + v


# -- products and involution -------------------------------------------------------------

@highprec
def fa_multiply(a: FAElement, b: FAElement) -> FAElement:
    _same(a, b)
    if a.family == "disc":
        out = a._new({})
        for n, fn in a.terms.items():
            if n >= 0:
                y = _disc_lmul_fn(b, fn)
                for _ in range(n):
                    y = _disc_lmul_z(y)
            else:
                y = b
                for _ in range(-n):
                    y = _disc_lmul_zs(y)
                y = _disc_lmul_fn(y, fn)
            out = out + y
        return out
    sv = a.spec["shift"]
    out = {}
    for m1, f1 in a.terms.items():
        for m2, f2 in b.terms.items():
            d = sum(x * y for x, y in zip(sv, m2))
            m = tuple(x + y for x, y in zip(m1, m2))
            fn = {}
            for (i, k), v in f2.items():
                u = f1.get((i, k + d))
                if u is not None:
                    fn[(i, k)] = u * v
            _madd(out, m, fn)
    return a._new(out)


@highprec
def fa_star(a: FAElement) -> FAElement:
    F = a.F
    if a.family == "disc":
        return a._new({-n: {p: F.conj(v) for p, v in fn.items()} for n, fn in a.terms.items()})
    sv = a.spec["shift"]
    out = {}
    for m, fn in a.terms.items():
        d = sum(x * y for x, y in zip(sv, m))
        # f* m^-1 = m^-1 f*(shifted by -<shift, m>)
        _madd(out, tuple(-x for x in m), {(i, k + d): F.conj(v) for (i, k), v in fn.items()})
    return a._new(out)


def _same(a, b):
    if a.family != b.family or a.measure is not b.measure:
        raise ValueError("elements live on different function algebras")


def lmul_fn(x: FAElement, g) -> FAElement:
    """g(point) * x for a callable g of the grid point value."""
    meas = x.measure
    gl = lambda i, k: g(meas.point(i, k))
    if x.family == "disc":
        return _disc_lmul_fn(x, gl)
    sv = x.spec["shift"]
    out = {}
    for m, fn in x.terms.items():
        d = sum(a * b for a, b in zip(sv, m))
        out[m] = _pt(x, fn, lambda i, k: gl(i, k + d))
    return x._new(out)


def lmul_mono(x: FAElement, m) -> FAElement:
    """Monomial times x (Laurent families)."""
    return x._new({tuple(a + b for a, b in zip(m, k)): fn for k, fn in x.terms.items()})


def _disc_lmul_fn(x, g):
    """g * x for a finitely supported dict g or a callable g(i, k)."""
    val = g if callable(g) else (lambda i, k: g.get((i, k), 0))
    out = {}
    for n, fn in x.terms.items():
        # g z^n = z^n g(q^(2n) y); g f z*^k = (g f) z*^k
        d = n if n >= 0 else 0
        out[n] = _pt(x, fn, lambda i, k: val(i, k + d))
    return x._new(out)


def _disc_lmul_z(x):
    F, meas = x.F, x.measure
    out = {}
    for n, fn in x.terms.items():
        if n >= 0:
            _madd(out, n + 1, fn)
        else:
            # z f z*^k = f(q^-2 y)(1 - q^-2 y) z*^(k-1)
            g = _sh(fn, -1)
            _madd(out, n + 1, _pt(x, g, lambda i, k: 1 - meas.point(i, k) / (F.q * F.q)))
    return x._new(out)


def _disc_lmul_zs(x):
    F, meas = x.F, x.measure
    out = {}
    for n, fn in x.terms.items():
        if n >= 1:
            # z* z^n f = z^(n-1) (1 - q^(2(n-1)) y) f
            _madd(out, n - 1, _pt(x, fn, lambda i, k: 1 - F.qp(2 * (n - 1)) * meas.point(i, k)))
        else:
            # z* f z*^k = f(q^2 y) z*^(k+1)
            _madd(out, n - 1, _sh(fn, 1))
    return x._new(out)


# -- actions -------------------------------------------------------------------------------

ACTION_GENERATORS = ("E", "F", "K", "Ki")


@highprec
def fa_act(x: FAElement, Z: str) -> FAElement:
    """Right action x <| Z for Z in E, F, K, Ki (K^-1)."""
    if Z not in ACTION_GENERATORS:
        raise ValueError(f"unknown generator {Z!r}; expected one of {ACTION_GENERATORS}")
    return _ACTIONS[x.family](x, Z)


def _act_eq2(x, Z):
    F, meas = x.F, x.measure
    lam = F.lam
    out = {}
    for (j, l), fn in x.terms.items():
        rinv = lambda i, k: 1 / meas.point(i, k)
        if Z == "E":
            c = F.sp(j - l - 3) / lam
            g = _addfn((F.one, fn), (-F.qp(-j), _sh(fn, 1)))
            _madd(out, (j + 1, l + 1), _pt(x, g, lambda i, k: c * rinv(i, k)))
        elif Z == "F":
            c = F.sp(-j - l + 1) / lam
            g = _addfn((F.qp(j), fn), (-F.one, _sh(fn, -1)))
            _madd(out, (j - 1, l - 1), _pt(x, g, lambda i, k: c * rinv(i, k)))
        else:
            e = j + l if Z == "K" else -(j + l)
            _madd(out, (j, l), {p: F.sp(e) * v for p, v in fn.items()})
    return x._new(out)


def _act_cq(x, Z):
    F, meas = x.F, x.measure
    lam = F.lam
    out = {}
    for (a,), fn in x.terms.items():
        rinv = lambda i, k: 1 / meas.point(i, k)
        if Z == "E":
            c = F.sp(-3) / lam
            g = _addfn((F.one, fn), (-F.qp(-a), _sh(fn, 1)))
            _madd(out, (a + 1,), _pt(x, g, lambda i, k: c * rinv(i, k)))
        elif Z == "F":
            c = F.sp(1) / lam
            g = _addfn((F.one, fn), (-F.qp(-a), _sh(fn, -1)))
            _madd(out, (a - 1,), _pt(x, g, lambda i, k: c * rinv(i, k)))
        else:
            e = a if Z == "K" else -a
            _madd(out, (a,), {p: F.qp(e) * v for p, v in fn.items()})
    return x._new(out)


def _act_suq11(x, Z):
    F, meas = x.F, x.measure
    lam = F.lam
    out = {}
    for (a, b), fn in x.terms.items():
        r = meas.point
        if Z == "E":
            c = F.sp(a + b + 1) / lam
            g1 = _pt(x, fn, lambda i, k: F.sqrt(1 + F.qp(-2 * b) * r(i, k) ** 2))
            g2 = _pt(x, _sh(fn, -1), lambda i, k: F.sqrt(1 + r(i, k) ** 2))
            g = _addfn((F.one, g1), (-F.qp(-a), g2))
            _madd(out, (a - 1, b + 1), _pt(x, g, lambda i, k: c / r(i, k)))
        elif Z == "F":
            c = F.sp(b - a - 3) / lam
            g1 = _pt(x, _sh(fn, 1), lambda i, k: F.sqrt(1 + F.q ** 2 * r(i, k) ** 2))
            g2 = _pt(x, fn, lambda i, k: F.sqrt(1 + F.qp(-2 * b + 2) * r(i, k) ** 2))
            g = _addfn((F.one, g1), (-F.qp(a), g2))
            _madd(out, (a + 1, b - 1), _pt(x, g, lambda i, k: c / r(i, k)))
        else:
            e = a - b if Z == "K" else b - a
            _madd(out, (a, b), {p: F.sp(e) * v for p, v in fn.items()})
    return x._new(out)


def _act_disc_plus(x, Z):
    F, meas = x.F, x.measure
    lam = F.lam
    y = meas.point
    out = {}
    for (a,), fn in x.terms.items():
        if Z == "E":
            c = F.sp(1) / lam
            g1 = _pt(x, fn, lambda i, k: F.qp(-a) * F.sqrt(1 + F.qp(2 * a) * y(i, k)))
            g2 = _pt(x, _sh(fn, 1), lambda i, k: F.qp(a) * F.sqrt(1 + y(i, k)))
            _madd(out, (a + 1,), _addfn((c, g1), (-c, g2)))
        elif Z == "F":
            c = F.sp(-1) / lam
            g1 = _pt(x, _sh(fn, -1), lambda i, k: F.qp(a) * F.sqrt(1 + y(i, k) / F.q ** 2))
            g2 = _pt(x, fn, lambda i, k: F.qp(-a) * F.sqrt(1 + F.qp(2 * a - 2) * y(i, k)))
            _madd(out, (a - 1,), _addfn((c, g1), (-c, g2)))
        else:
            e = -a if Z == "K" else a
            _madd(out, (a,), {p: F.qp(e) * v for p, v in fn.items()})
    return x._new(out)


def _act_disc(x, Z):
    F = x.F
    lam = F.lam
    res = x._new({})
    for n, fn in x.terms.items():
        if Z in ("K", "Ki"):
            # z^n f and f z*^k both scale by q^(-n) with n = -k for the z* terms
            e = -n if Z == "K" else n
            res = res + x._new({n: {p: F.qp(e) * v for p, v in fn.items()}})
        elif Z == "E":
            c = F.sp(1) / lam
            if n >= 0:
                g = _addfn((F.qp(-n), fn), (-F.qp(n), _sh(fn, 1)))
                res = res + x._new({n + 1: g}).scale(c)
            else:
                k = -n
                g = _addfn((F.qp(k), fn), (-F.qp(k), _sh(fn, 1)))
                t1 = _disc_lmul_z(x._new({n: g}))
                t2 = x._new({n + 1: fn}).scale(F.qp(k) - F.qp(-k))
                res = res + (t1 + t2).scale(c)
        else:
            c = F.sp(-1) / lam
            if n >= 0:
                g = _addfn((F.qp(n), fn), (-F.qp(n), _sh(fn, 1)))
                t1 = _disc_rmul_zs(x, n, g)
                t2 = x._new({n - 1: fn}).scale(F.qp(n) - F.qp(-n)) if n >= 1 else x._new({})
                res = res + (t1 + t2).scale(c)
            else:
                k = -n
                g = _addfn((F.qp(-k), fn), (-F.qp(k), _sh(fn, 1)))
                res = res + x._new({n - 1: g}).scale(c)
    return res


def _disc_rmul_zs(x, n, g):
    """(z^n g) z* for n >= 0."""
    if n == 0:
        return x._new({-1: g})
    # z^n g z* = z^(n-1) (z z*) g(q^-2 y) = z^(n-1) (1 - q^-2 y) g(q^-2 y)
    F, meas = x.F, x.measure
    return x._new({n - 1: _pt(x, _sh(g, -1), lambda i, k: 1 - meas.point(i, k) / (F.q * F.q))})


_ACTIONS = {"Eq2": _act_eq2, "Cq": _act_cq, "SUq11": _act_suq11,
            "disc_plus": _act_disc_plus, "disc": _act_disc}


def hopf_for(family):
    from .catalog import presentation
    return presentation(_hopf_id(family)).hopf


def _hopf_id(family):
    return {"U_q_e2": "U_q_e2", "U_q_su11": "U_q_sl2_su11"}[ALGEBRA_FAMILIES[family]["hopf"]]


@highprec
def fa_act_poly(x: FAElement, f) -> FAElement:
    """x <| f for an element f of the Hopf algebra (NCPoly or text)."""
    u = hopf_for(x.family).base
    if isinstance(f, str):
        f = u.parse(f)
    out = x._new({})
    for w, c in f.terms.items():
        y = x
        for g in w:
            y = fa_act(y, u.gens[g])
        out = out + y.scale(scalar_value(c, x.F))
    return out


@highprec
def scalar_value(c, F: Field):
    """Value of an exact scalar (Laurent in s = q^(1/2)) in the field F."""
    if F.s is not None:
        return c.evaluate_at(F.s)
    num = sum((F.num(k) * F.sp(e) for e, k in c.num), F.zero)
    den = sum((F.num(k) * F.sp(e) for e, k in c.den), F.zero)
    return num / den


def counit_value(family, Z):
    h = hopf_for(family)
    return h.eps[h.base.index[Z]]


# -- functionals -----------------------------------------------------------------------------

@dataclass
class FunctionalSpec:
    family: str
    measure: QGridMeasure

    def __post_init__(self):
        if self.family not in ALGEBRA_FAMILIES:
            raise ValueError(f"unknown algebra family {self.family!r}")
        if self.family not in self.measure.algebras:
            raise ValueError(f"measure family {self.measure.family} is incompatible with {self.family}")

    @property
    def name(self):
        if self.measure.family == "disc_hI":
            return "h_I"
        return "h_mu0" if self.family in ("Eq2", "SUq11", "disc") else "hat h_mu0"


@highprec
def evaluate_h(h: FunctionalSpec, x: FAElement):
    if x.family != h.family or x.measure is not h.measure:
        raise ValueError(f"functional on {h.family} cannot evaluate an element of {x.family}")
    fn = x.terms.get(identity_monomial(x.family))
    if not fn:
        return h.measure.field.zero
    meas = h.measure
    total = meas.field.zero
    for (i, k), v in fn.items():
        total = total + meas.mass(i, k) * v
    return total


@highprec
def invariance_residual(h: FunctionalSpec, x: FAElement, Z: str) -> float:
    lhs = evaluate_h(h, fa_act(x, Z))
    eps = scalar_value(counit_value(h.family, Z), h.measure.field)
    return float(abs(lhs - eps * evaluate_h(h, x)))


@highprec
def balance_residual(h: FunctionalSpec, fn: dict) -> float:
    """|h(f(q^-2 y)(1 - q^-2 y)) - q^-2 h(f(y)(1 - y))| for a disc grid function f."""
    if h.family != "disc":
        raise ValueError("the balance identity concerns the disc algebra")
    meas, F = h.measure, h.measure.field
    y = meas.point
    lhs_fn = {(i, k): v * (1 - y(i, k) / F.q ** 2) for (i, k), v in _sh(fn, -1).items()}
    rhs_fn = {(i, k): v * (1 - y(i, k)) for (i, k), v in fn.items()}
    lhs = evaluate_h(h, FAElement("disc", meas, {0: lhs_fn}))
    rhs = evaluate_h(h, FAElement("disc", meas, {0: rhs_fn}))
    return float(abs(lhs - rhs / F.q ** 2))


@dataclass
class GramResult:
    matrix: list            # entries in the field of the measure
    min_eigenvalue: float
    hermitian_defect: float

    def as_array(self):
        n = len(self.matrix)
        return np.array([[complex(v) for v in row] for row in self.matrix], dtype=complex).reshape(n, n)


@highprec
def positivity_gram(h: FunctionalSpec, xs) -> GramResult:
    xs = list(xs)
    stars = [fa_star(x) for x in xs]
    G = [[evaluate_h(h, fa_multiply(stars[j], xs[i])) for j in range(len(xs))] for i in range(len(xs))]
    if not xs:
        return GramResult([], 0.0, 0.0)
    arr = np.array([[complex(v) for v in row] for row in G], dtype=complex)
    defect = float(np.abs(arr - arr.conj().T).max())
    mins = float(np.linalg.eigvalsh((arr + arr.conj().T) / 2).min())
    return GramResult(G, mins, defect)


# -- random test elements ------------------------------------------------------------------------

@highprec
def random_element(family, measure: QGridMeasure, rng, n_terms=4, degree=2, support=None, complex_=True):
    """Seeded random element with compact support well inside the k-range."""
    F = measure.field
    lo, hi = measure.krange
    if support is None:
        width = hi - lo
        pad = max(degree + 2, width // 3)
        support = (lo + pad, hi - pad)
    if support[0] > support[1]:
        raise ValueError(EXHAUSTED)
    terms = {}
    ndeg = ALGEBRA_FAMILIES[family]["ndeg"]
    for _ in range(n_terms):
        if family == "disc":
            m = int(rng.integers(-degree, degree + 1))
        else:
            m = tuple(int(v) for v in rng.integers(-degree, degree + 1, size=ndeg))
        fn = terms.setdefault(m, {})
        for _ in range(int(rng.integers(1, 4))):
            i = int(rng.integers(0, len(measure.atoms)))
            k = int(rng.integers(support[0], support[1] + 1))
            if F.exact or not complex_:
                v = F.num(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))) if F.exact \
                    else F.num(float(rng.normal()))
            else:
                v = F.num(complex(rng.normal(), rng.normal()))
            fn[(i, k)] = fn.get((i, k), 0) + v
    return FAElement(family, measure, terms)


# -- the identification of the two disc descriptions ---------------------------------------------

@highprec
def disc_to_plus(x: FAElement, plus_measure: QGridMeasure) -> FAElement:
    """Image of a disc element under z -> u sqrt(1+y), y -> -y.

    ``plus_measure`` must carry the negated atoms of ``x.measure`` in the same order.
    """
    if x.family != "disc":
        raise ValueError("expects a disc element")
    F = plus_measure.field
    root = lambda y: F.sqrt(1 + y)

    def z_times(y):
        return lmul_mono(lmul_fn(y, root), (1,))

    out = FAElement("disc_plus", plus_measure, {})
    for n, fn in x.terms.items():
        y = FAElement("disc_plus", plus_measure, {(0,): dict(fn)})
        if n >= 0:
            for _ in range(n):
                y = z_times(y)
        else:
            # f z*^k = (z^k f*)*
            y = fa_star(y)
            for _ in range(-n):
                y = z_times(y)
            y = fa_star(y)
        out = out + y
    return out
