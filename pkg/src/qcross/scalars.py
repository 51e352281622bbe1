"""Exact arithmetic in Q(s) with s = q^(1/2).

A QScalar is a quotient num/den of Laurent polynomials in s with rational
coefficients, kept in canonical form: no common factor, the denominator is a
monic ordinary polynomial with non-zero constant term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Laurent polynomials are dicts {exponent: Fraction} without zero entries.


def _ladd(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _lmul(a, b):
    if len(a) == 1 and len(b) == 1:
        (e1, c1), = a.items()
        (e2, c2), = b.items()
        return {e1 + e2: c1 * c2}
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _lshift(a, k):
    return {e + k: c for e, c in a.items()}


def _lscale(a, c):
    return {e: v * c for e, v in a.items()} if c else {}


def _to_list(p):
    """Ordinary polynomial dict (min exponent >= 0) -> dense coefficient list."""
    deg = max(p)
    out = [Fraction(0)] * (deg + 1)
    for e, c in p.items():
        out[e] = Fraction(c)
    return out


def _from_list(lst):
    return {i: c for i, c in enumerate(lst) if c}


def _trim(lst):
    while lst and lst[-1] == 0:
        lst.pop()
    return lst


def _divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a.pop()
    return _trim(q), a


def _gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


class PoleError(ZeroDivisionError):
    pass


@dataclass(frozen=True, eq=False)
class QScalar:
    num: tuple  # sorted ((exp, Fraction), ...)
    den: tuple

    # -- construction ---------------------------------------------------

    @staticmethod
    def _make(num, den):
        obj = QScalar.__new__(QScalar)
        object.__setattr__(obj, "num", tuple(sorted(num.items())))
        object.__setattr__(obj, "den", tuple(sorted(den.items())))
        return obj

    @classmethod
    def from_laurent(cls, num):
        return canonicalize(num, {0: Fraction(1)})

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls._make({0: c} if c else {}, {0: Fraction(1)})

    @classmethod
    def monomial(cls, c, e):
        c = Fraction(c)
        return cls._make({e: c} if c else {}, {0: Fraction(1)})

    # -- views ----------------------------------------------------------

    @property
    def numd(self):
        return dict(self.num)

    @property
    def dend(self):
        return dict(self.den)

    def is_zero(self):
        return not self.num

    def is_poly(self):
        return len(self.den) == 1

    def __bool__(self):
        return bool(self.num)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        if self.is_poly() and other.is_poly():
            return QScalar._make(_ladd(self.numd, other.numd), {0: Fraction(1)})
        n = _ladd(_lmul(self.numd, other.dend), _lmul(other.numd, self.dend))
        return canonicalize(n, _lmul(self.dend, other.dend))

    __radd__ = __add__

    def __neg__(self):
        return QScalar._make({e: -c for e, c in self.num}, self.dend)

    def __sub__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if self.is_poly() and other.is_poly():
            return QScalar._make(_lmul(self.numd, other.numd), {0: Fraction(1)})
        return canonicalize(_lmul(self.numd, other.numd), _lmul(self.dend, other.dend))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("division by zero in coefficient field")
        return canonicalize(self.dend, self.numd)

    def __truediv__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return False
        # canonical forms are unique, so cross-multiplication reduces to equality
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def conj_unimodular(self):
        """Complex conjugate when |q| = 1, i.e. s -> 1/s."""
        n = {-e: c for e, c in self.num}
        d = {-e: c for e, c in self.den}
        return canonicalize(n, d)

    # -- evaluation -----------------------------------------------------

    def evaluate_at(self, s):
        """Value at a numeric s (float, complex, gmpy2 number ...)."""
        def ev(terms):
            return sum((_num(c, s) * s ** e for e, c in terms), 0 * s)
        d = ev(self.den)
        if d == 0:
            raise PoleError("pole at chosen q")
        return ev(self.num) / d

    def __call__(self, q):
        return evaluate(self, NumericParams(q))

    def __repr__(self):
        return f"QScalar({self})"

    def __str__(self):
        n = _lstr(self.num)
        if self.is_poly() and self.den[0][1] == 1:
            return n
        return f"({n})/({_lstr(self.den)})"


def _num(c, s):
    # convert a Fraction to the numeric type of s without losing precision
    if isinstance(s, (float, complex, int)):
        return c.numerator / c.denominator
    t = type(s)
    try:
        return t(c.numerator) / t(c.denominator)
    except TypeError:
        return c.numerator / c.denominator


def _lstr(terms):
    if not terms:
        return "0"
    parts = []
    for e, c in sorted(terms, key=lambda t: -t[0]):
        if e == 0:
            mono = str(c)
        else:
            p = "s" if e == 1 else f"s^{e}"
            if c == 1:
                mono = p
            elif c == -1:
                mono = "-" + p
            else:
                mono = f"{c}*{p}"
        parts.append(mono)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def canonicalize(num, den) -> QScalar:
    """Return the canonical QScalar num/den for Laurent polynomial dicts."""
    num = {e: Fraction(c) for e, c in num.items() if c}
    den = {e: Fraction(c) for e, c in den.items() if c}
    if not den:
        raise ZeroDivisionError("division by zero in coefficient field")
    if not num:
        return ZERO
    # move s-powers of the denominator into the numerator
    dmin = min(den)
    if dmin:
        den = _lshift(den, -dmin)
        num = _lshift(num, -dmin)
    if len(den) > 1:
        nmin = min(num)
        g = _gcd(_to_list(_lshift(num, -nmin)), _to_list(den))
        if len(g) > 1:
            qn, rn = _divmod(_to_list(_lshift(num, -nmin)), g)
            qd, rd = _divmod(_to_list(den), g)
            assert not rn and not rd
            num = _lshift(_from_list(qn), nmin)
            den = _from_list(qd)
    lead = den[max(den)]
    if lead != 1:
        num = _lscale(num, 1 / lead)
        den = _lscale(den, 1 / lead)
    return QScalar._make(num, den)


def as_scalar(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return QScalar.const(x)
    return NotImplemented


@dataclass(frozen=True)
class NumericParams:
    q: float = 0.5
    tolerance: float = 1e-9

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie strictly inside (0,1), got {self.q}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    @property
    def s(self):
        return math.sqrt(self.q)


def evaluate(x: QScalar, p: NumericParams) -> float:
    return float(x.evaluate_at(p.s))


ZERO = QScalar._make({}, {0: Fraction(1)})
ONE = QScalar.const(1)
S = QScalar.monomial(1, 1)          # q^(1/2)
Q = QScalar.monomial(1, 2)          # q
LAM = QScalar._make({2: Fraction(1), -2: Fraction(-1)}, {0: Fraction(1)})   # q - 1/q
GAMMA = canonicalize({0: 1}, {0: 1, 4: -1})                                # 1/(1 - q^2)


def qpow(half_exp) -> QScalar:
    """q^(half_exp/2), i.e. s^half_exp."""
    return QScalar.monomial(1, half_exp)


# -- numeric helpers ---------------------------------------------------------

def lambda_n(n: int, q: float):
    if n < 0:
        raise ValueError("lambda_n needs a non-negative index")
    return math.sqrt(1 - q ** (2 * n))


def alpha_k(k: int, a, q: float):
    return math.sqrt(1 + q ** (2 * k) * a * a)


def beta_k(k: int, a, q: float):
    if a == 0:
        raise ValueError("beta_k needs a non-zero argument")
    return math.sqrt(1 + q ** (-2 * k) / (a * a))


def special(name: str, index: int, arg, p: NumericParams):
    if name == "lambda_n":
        return lambda_n(index, p.q)
    if name == "alpha_k":
        return alpha_k(index, arg, p.q)
    if name == "beta_k":
        return beta_k(index, arg, p.q)
    raise ValueError(f"unknown special function {name!r}")
