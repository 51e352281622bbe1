"""Noncommutative *-algebras given by generators and oriented rewrite rules.

Words are tuples of generator indices.  A rule rewrites a word of length
one or two into a linear combination of words.  Normal forms are computed
letter by letter: the normal form of ``w g`` is obtained from the normal
form of ``w`` by appending ``g`` and resolving the single redex this can
create at the end.  Results are cached per presentation.
"""
from __future__ import annotations

import itertools
import re
import sys
from fractions import Fraction

from .scalars import GAMMA, LAM, ONE, ZERO, QScalar, as_scalar

STEP_BUDGET = 10 ** 6
DEPTH_LIMIT = 3000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class RewriteError(RuntimeError):
    pass


class UnknownGenerator(KeyError):
    pass


def _acc(out, w, c):
    v = out.get(w)
    v = c if v is None else v + c
    if v:
        out[w] = v
    else:
        out.pop(w, None)


class Presentation:
    """Ordered generators, rewrite rules, involution.

    ``rules`` maps a word (tuple of indices, length 1 or 2) to a dict
    word -> QScalar.  ``star`` maps a generator index to a dict
    word -> QScalar.  ``conj`` is 'real' (q real, scalars are self-conjugate)
    or 'unimodular' (|q| = 1, conjugation sends s to 1/s).
    """

    def __init__(self, name, gens, rules=None, star=None, inverses=None,
                 weights=None, conj="real", parts=None):
        self.name = name
        self.gens = list(gens)
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("generator names must be distinct")
        self.index = {g: i for i, g in enumerate(self.gens)}
        self.rules = {}
        self.star_table = {}
        self.inverses = dict(inverses or {})
        for g, h in list(self.inverses.items()):
            self.inverses.setdefault(h, g)
        self.weights = dict(weights or {})
        self.conj = conj
        # optional labelling of generators into factors, e.g. {'U': [...], 'X': [...]}
        self.parts = parts or {}
        for lhs, rhs in (rules or {}).items():
            self.add_rule(lhs, rhs)
        for g, img in (star or {}).items():
            gi = self.index[g] if isinstance(g, str) else g
            self.star_table[gi] = self._coerce(img)
        self._cache = {}
        self._steps = 0
        self._depth = 0
        self._budget = STEP_BUDGET

    # -- construction helpers -------------------------------------------

    def _coerce(self, x):
        if isinstance(x, NCPoly):
            return dict(x.terms)
        if isinstance(x, str):
            return parse_raw(x, self)
        if isinstance(x, dict):
            return {tuple(self.index[g] if isinstance(g, str) else g for g in w): as_scalar(c)
                    if not isinstance(c, QScalar) else c for w, c in x.items()}
        raise TypeError(type(x))

    def add_rule(self, lhs, rhs):
        if isinstance(lhs, str):
            lhs = tuple(self.index[g] for g in lhs.split())
        lhs = tuple(self.index[g] if isinstance(g, str) else g for g in lhs)
        if not 1 <= len(lhs) <= 2:
            raise ValueError("rule left-hand sides have length 1 or 2")
        if lhs in self.rules:
            raise ValueError(f"duplicate rule for {self.word_str(lhs)}")
        self.rules[lhs] = self._coerce(rhs)
        self._cache = {}

    def gen(self, name):
        if name not in self.index:
            raise UnknownGenerator(f"unknown generator {name!r} in {self.name}")
        return NCPoly(self, {(self.index[name],): ONE})

    def __getitem__(self, name):
        return self.gen(name)

    def one(self):
        return NCPoly(self, {(): ONE})

    def zero(self):
        return NCPoly(self, {})

    def scalar(self, c):
        c = as_scalar(c)
        return NCPoly(self, {(): c} if c else {})

    def parse(self, text, env=None):
        """Parse an expression and return its normal form.

        ``env`` maps extra symbol names to elements of this algebra.
        """
        return NCPoly(self, parse_raw(text, self, env)).nf()

    def word_str(self, w):
        return " ".join(self.gens[i] for i in w) if w else "1"

    def word_from_names(self, names):
        try:
            return tuple(self.index[g] for g in names)
        except KeyError as e:
            raise UnknownGenerator(f"unknown generator {e.args[0]!r} in {self.name}") from None

    # -- normal forms ----------------------------------------------------

    def nf_word(self, w):
        c = self._cache.get(w)
        if c is not None:
            return c
        self._depth += 1
        try:
            if self._depth > DEPTH_LIMIT:
                raise RewriteError("non-terminating rewrite suspected")
            return self._nf_word(w)
        finally:
            self._depth -= 1

    def _nf_word(self, w):
        if len(w) == 0:
            res = {(): ONE}
        elif len(w) == 1:
            rhs = self.rules.get(w)
            if rhs is None:
                res = {w: ONE}
            else:
                self._tick()
                res = self._nf_terms(rhs)
        else:
            res = {}
            g = w[-1]
            for u, cu in self.nf_word(w[:-1]).items():
                for v, cv in self._append(u, g).items():
                    _acc(res, v, cu * cv)
        self._cache[w] = res
        return res

    def _append(self, u, g):
        """Normal form of u*g for an irreducible word u."""
        single = self.rules.get((g,))
        if single is not None:
            self._tick()
            out = {}
            for r, c in single.items():
                for v, cv in self.nf_word(u + r).items():
                    _acc(out, v, c * cv)
            return out
        if u:
            rhs = self.rules.get((u[-1], g))
            if rhs is not None:
                self._tick()
                out = {}
                head = u[:-1]
                for r, c in rhs.items():
                    for v, cv in self.nf_word(head + r).items():
                        _acc(out, v, c * cv)
                return out
        return {u + (g,): ONE}

    def _tick(self):
        self._steps += 1
        if self._steps > self._budget:
            raise RewriteError("non-terminating rewrite suspected")

    def _nf_terms(self, terms):
        out = {}
        for w, c in terms.items():
            for v, cv in self.nf_word(w).items():
                _acc(out, v, c * cv)
        return out

    def normal_form_terms(self, terms, budget=STEP_BUDGET):
        for w in terms:
            for i in w:
                if not 0 <= i < len(self.gens):
                    raise UnknownGenerator(f"unknown generator index {i} in {self.name}")
        self._steps, self._budget = 0, budget
        try:
            return self._nf_terms(terms)
        except RecursionError:
            raise RewriteError("non-terminating rewrite suspected") from None

    def is_irreducible(self, w):
        if any((g,) in self.rules for g in w):
            return False
        return not any((w[i], w[i + 1]) in self.rules for i in range(len(w) - 1))

    def redexes(self, w):
        out = [(i, 1) for i in range(len(w)) if (w[i],) in self.rules]
        out += [(i, 2) for i in range(len(w) - 1) if (w[i], w[i + 1]) in self.rules]
        return out

    # -- involution ------------------------------------------------------

    def conj_scalar(self, c):
        return c if self.conj == "real" else c.conj_unimodular()

    def star_word(self, w):
        out = {(): ONE}
        for g in reversed(w):
            img = self.star_table.get(g)
            if img is None:
                raise RewriteError(f"no involution given for {self.gens[g]} in {self.name}")
            out = _mul_terms(self, out, img)
        return out

    def __repr__(self):
        return f"Presentation({self.name!r}, {len(self.gens)} generators, {len(self.rules)} rules)"

    def describe(self):
        lines = [f"gens: {' '.join(self.gens)}"]
        for lhs, rhs in self.rules.items():
            lines.append(f"{self.word_str(lhs)} -> {terms_str(self, rhs)}")
        return "\n".join(lines)


def _mul_terms(pres, a, b):
    out = {}
    for u, cu in a.items():
        for v, cv in b.items():
            for w, cw in pres.nf_word(u + v).items():
                _acc(out, w, cu * cv * cw)
    return out


def terms_str(pres, terms):
    if not terms:
        return "0"
    parts = []
    for w in sorted(terms, key=lambda w: (len(w), w)):
        c = terms[w]
        cs = str(c)
        if not w:
            parts.append(cs)
        elif c == ONE:
            parts.append(pres.word_str(w))
        else:
            parts.append(f"({cs})*{pres.word_str(w)}")
    return " + ".join(parts)


class NCPoly:
    """Element of a presented algebra: dict word -> QScalar."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms=None):
        self.pres = pres
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    def nf(self, budget=STEP_BUDGET):
        return NCPoly(self.pres, self.pres.normal_form_terms(self.terms, budget))

    def _other(self, o):
        if isinstance(o, NCPoly):
            if o.pres is not self.pres:
                raise ValueError(f"mixing elements of {self.pres.name} and {o.pres.name}")
            return o
        if isinstance(o, str):
            return self.pres.parse(o)
        return self.pres.scalar(o)

    def __add__(self, o):
        o = self._other(o)
        out = dict(self.terms)
        for w, c in o.terms.items():
            _acc(out, w, c)
        return NCPoly(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        if isinstance(o, (QScalar, int, Fraction)):
            c = as_scalar(o)
            return NCPoly(self.pres, {w: v * c for w, v in self.terms.items()})
        o = self._other(o)
        return NCPoly(self.pres, _mul_terms(self.pres, self.terms, o.terms))

    def __rmul__(self, o):
        if isinstance(o, (QScalar, int, Fraction)):
            return self * o
        return self._other(o) * self

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers need an explicit inverse generator")
        out = self.pres.one()
        for _ in range(k):
            out = out * self
        return out

    def star(self):
        out = {}
        for w, c in self.terms.items():
            cc = self.pres.conj_scalar(c)
            for v, cv in self.pres.star_word(w).items():
                _acc(out, v, cc * cv)
        return NCPoly(self.pres, out)

    def is_zero(self):
        return not self.nf().terms

    def __eq__(self, o):
        if not isinstance(o, (NCPoly, QScalar, int, Fraction, str)):
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash(frozenset(self.nf().terms.items()))

    def words(self):
        return set(self.terms)

    def coeff(self, word_text):
        w = self.pres.word_from_names(word_text.split()) if word_text else ()
        return self.nf().terms.get(w, ZERO)

    def __str__(self):
        return terms_str(self.pres, self.terms)

    def __repr__(self):
        return f"NCPoly[{self.pres.name}]({self})"


# -- operations in the functional style of the module contract ---------------

def normal_form(p: NCPoly, pres: Presentation | None = None) -> NCPoly:
    return p.nf()


def multiply(a: NCPoly, b: NCPoly, pres: Presentation | None = None) -> NCPoly:
    return a * b


def star(p: NCPoly, pres: Presentation | None = None) -> NCPoly:
    return p.star()


def verify_identity(lhs, rhs, pres: Presentation | None = None):
    """Return (holds, residual) where residual = nf(lhs - rhs)."""
    if pres is None:
        pres = lhs.pres if isinstance(lhs, NCPoly) else rhs.pres
    if isinstance(lhs, str):
        lhs = pres.parse(lhs)
    if isinstance(rhs, str):
        rhs = pres.parse(rhs)
    r = (lhs - rhs).nf() if isinstance(lhs, NCPoly) else (pres.scalar(lhs) - rhs).nf()
    return (not r.terms), r


# -- tensor powers -----------------------------------------------------------

def tensor_power(pres: Presentation, k: int = 2) -> Presentation:
    """Presentation of pres^{(x)k}; generator 'g#i' is g in copy i."""
    n = len(pres.gens)
    gens = [f"{g}#{i}" for i in range(k) for g in pres.gens]
    rules = {}
    for i in range(k):
        off = i * n
        for lhs, rhs in pres.rules.items():
            rules[tuple(j + off for j in lhs)] = {tuple(j + off for j in w): c for w, c in rhs.items()}
    for i in range(k):
        for j in range(i + 1, k):
            for a in range(n):
                for b in range(n):
                    rules[(j * n + a, i * n + b)] = {(i * n + b, j * n + a): ONE}
    star = {}
    for i in range(k):
        for g, img in pres.star_table.items():
            star[i * n + g] = {tuple(j + i * n for j in w): c for w, c in img.items()}
    inverses = {f"{g}#{i}": f"{h}#{i}" for i in range(k) for g, h in pres.inverses.items()}
    tp = Presentation(f"{pres.name}^{k}", gens, rules, star, inverses, conj=pres.conj)
    tp.base = pres
    tp.copies = k
    return tp


def tensor_square(pres: Presentation) -> Presentation:
    return tensor_power(pres, 2)


def embed(pres_k: Presentation, copy: int, terms) -> dict:
    n = len(pres_k.base.gens)
    return {tuple(j + copy * n for j in w): c for w, c in terms.items()}


def split_word(pres_k: Presentation, w):
    """Split a normal-form word of a tensor power into its per-copy words."""
    n = len(pres_k.base.gens)
    parts = [[] for _ in range(pres_k.copies)]
    for j in w:
        parts[j // n].append(j % n)
    return tuple(tuple(p) for p in parts)


def tensor(pres_k: Presentation, *factors) -> NCPoly:
    """Elementary tensor of factor polynomials (dicts or NCPolys)."""
    out = {(): ONE}
    for i, f in enumerate(factors):
        terms = f.terms if isinstance(f, NCPoly) else f
        out = {u + v: cu * cv for u, cu in out.items() for v, cv in embed(pres_k, i, terms).items()}
    return NCPoly(pres_k, out).nf()


# -- homomorphisms -----------------------------------------------------------

def apply_map(images, source: Presentation, target: Presentation, terms, anti=False,
              antilinear=False):
    """Extend a generator map to words (as a homomorphism or antihomomorphism)."""
    if isinstance(terms, NCPoly):
        terms = terms.terms
    out = {}
    for w, c in terms.items():
        acc = {(): ONE}
        seq = reversed(w) if anti else w
        for g in seq:
            img = images[g]
            img = img.terms if isinstance(img, NCPoly) else img
            acc = _mul_terms(target, acc, img)
        if antilinear:
            c = target.conj_scalar(c)
        for v, cv in acc.items():
            _acc(out, v, c * cv)
    return NCPoly(target, out)


def rule_relations(pres: Presentation):
    """Defining relations as (name, lhs-terms, rhs-terms)."""
    for lhs, rhs in pres.rules.items():
        yield pres.word_str(lhs), {lhs: ONE}, rhs


# -- confluence smoke test ---------------------------------------------------

def _nf_after_first_step(pres, w, pos, length):
    rhs = pres.rules[w[pos:pos + length]]
    terms = {}
    for r, c in rhs.items():
        _acc(terms, w[:pos] + r + w[pos + length:], c)
    return pres.normal_form_terms(terms)


def confluence_smoke_test(pres: Presentation, depth: int = 4, max_words=None, seed=0):
    """Compare normal forms obtained by different first reduction steps and
    by normalising split products.  Returns a list of divergences."""
    if depth < 3:
        raise ValueError("depth must be at least 3")
    import random

    n = len(pres.gens)
    problems = []
    words = []
    for length in range(2, depth + 1):
        if length == 3:
            # all overlap ambiguities live here; always exhaustive
            words.extend(itertools.product(range(n), repeat=3))
            continue
        if max_words is not None and n ** length > max_words:
            rng = random.Random(seed + length)
            words.extend(tuple(rng.randrange(n) for _ in range(length)) for _ in range(max_words))
        else:
            words.extend(itertools.product(range(n), repeat=length))
    for w in words:
        red = pres.redexes(w)
        if len(red) < 2 and len(w) < 4:
            continue
        ref = pres.normal_form_terms({w: ONE})
        for pos, length in red:
            alt = _nf_after_first_step(pres, w, pos, length)
            if alt != ref:
                problems.append((pres.word_str(w), f"first step at {pos}",
                                 terms_str(pres, ref), terms_str(pres, alt)))
        if len(red) >= 2:
            for i in range(1, len(w)):
                left = pres.normal_form_terms({w[:i]: ONE})
                right = pres.normal_form_terms({w[i:]: ONE})
                alt = _mul_terms(pres, left, right)
                if alt != ref:
                    problems.append((pres.word_str(w), f"split at {i}",
                                     terms_str(pres, ref), terms_str(pres, alt)))
    return problems


# -- expression parser -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_#']*)|(->|[-+*/^()]))")

SCALAR_NAMES = {
    "q": QScalar.monomial(1, 2),
    "s": QScalar.monomial(1, 1),
    "lam": LAM,
    "gamma": GAMMA,
}


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SyntaxError(f"cannot parse {text[pos:]!r}")
        num, name, op = m.groups()
        out.append(("num", int(num)) if num else ("name", name) if name else ("op", op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def _rmul(a, b):
    out = {}
    for u, cu in a.items():
        for v, cv in b.items():
            _acc(out, u + v, cu * cv)
    return out


def _radd(a, b, sign=1):
    out = dict(a)
    for w, c in b.items():
        _acc(out, w, c if sign == 1 else -c)
    return out


class _Parser:
    def __init__(self, text, pres, env=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.pres = pres
        self.env = env or {}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val is not None and t[1] != val):
            raise SyntaxError(f"unexpected token {t[1]!r}, expected {val or kind}")
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.i != len(self.toks):
            raise SyntaxError(f"trailing input at token {self.peek()[1]!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = {w: -c for w, c in v.items()}
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            v = _radd(v, self.term(), 1 if op == "+" else -1)
        return v

    def term(self):
        v = self.power()
        while True:
            t = self.peek()
            if t == ("op", "*"):
                self.take()
                v = _rmul(v, self.power())
            elif t == ("op", "/"):
                self.take()
                d = self.power()
                if set(d) != {()}:
                    raise SyntaxError("can only divide by scalars")
                inv = d[()].inverse()
                v = {w: c * inv for w, c in v.items()}
            elif t[0] in ("num", "name") or t == ("op", "("):
                v = _rmul(v, self.power())
            else:
                return v

    def power(self):
        base, name = self.atom()
        if self.peek() != ("op", "^"):
            return base
        self.take()
        e = self.exponent()
        if e.denominator != 1:
            if name != "q":
                raise SyntaxError("fractional exponents are only allowed on q")
            return {(): QScalar.monomial(1, int(2 * e))}
        e = int(e)
        if set(base) == {()}:
            return {(): base[()] ** e}
        if e < 0:
            if name is None or name not in self.pres.inverses:
                raise SyntaxError(f"negative power of {name} needs an inverse generator")
            base = {(self.pres.index[self.pres.inverses[name]],): ONE}
            e = -e
        out = {(): ONE}
        for _ in range(e):
            out = _rmul(out, base)
        return out

    def exponent(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        if self.peek() == ("op", "("):
            self.take()
            if self.peek() == ("op", "-"):
                self.take()
                sign = -sign
            n = Fraction(self.take("num")[1])
            if self.peek() == ("op", "/"):
                self.take()
                n /= self.take("num")[1]
            self.take("op", ")")
            return sign * n
        return sign * Fraction(self.take("num")[1])

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return {(): QScalar.const(t[1])}, None
        if t[0] == "name":
            name = t[1]
            if name in self.env:
                v = self.env[name]
                return (dict(v.terms) if isinstance(v, NCPoly) else v), None
            if self.pres is not None and name in self.pres.index:
                return {(self.pres.index[name],): ONE}, name
            if name in SCALAR_NAMES:
                return {(): SCALAR_NAMES[name]}, name
            raise UnknownGenerator(f"unknown generator {name!r}" +
                                   (f" in {self.pres.name}" if self.pres else ""))
        if t == ("op", "("):
            v = self.expr()
            self.take("op", ")")
            return v, None
        raise SyntaxError(f"unexpected token {t[1]!r}")


def parse_raw(text, pres=None, env=None):
    """Parse into an unnormalised dict word -> QScalar (free product)."""
    return _Parser(text, pres, env).parse()


def parse_scalar(text) -> QScalar:
    v = parse_raw(text, None)
    if set(v) - {()}:
        raise SyntaxError("not a scalar expression")
    return v.get((), ZERO)
