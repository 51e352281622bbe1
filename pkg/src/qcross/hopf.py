"""Hopf structures on presented algebras and dual pairings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .ncalg import (NCPoly, Presentation, _acc, _mul_terms, apply_map, embed, parse_raw,
                    split_word, tensor_power, terms_str)
from .scalars import ONE, ZERO, QScalar, as_scalar


class HopfStructure:
    """Coproduct, counit, antipode and inverse antipode given on generators.

    Coproduct images are written over the tensor square, with ``g#0`` and
    ``g#1`` denoting g in the left and right leg.
    """

    def __init__(self, base: Presentation, coproduct, counit, antipode, antipode_inv):
        self.base = base
        self.t2 = tensor_power(base, 2)
        self.t3 = tensor_power(base, 3)
        idx = base.index
        self.delta = {idx[g]: self._t2(v) for g, v in coproduct.items()}
        self.eps = {idx[g]: as_scalar(v) if not isinstance(v, str) else _scalar(v) for g, v in counit.items()}
        self.S = {idx[g]: base._coerce(v) for g, v in antipode.items()}
        self.Sinv = {idx[g]: base._coerce(v) for g, v in antipode_inv.items()}
        missing = [g for g in base.gens if idx[g] not in self.delta or idx[g] not in self.eps
                   or idx[g] not in self.S or idx[g] not in self.Sinv]
        if missing:
            raise ValueError(f"Hopf tables of {base.name} miss generators {missing}")
        self._legs = {}

    def _t2(self, v):
        if isinstance(v, str):
            return NCPoly(self.t2, parse_raw(v, self.t2)).nf().terms
        return v

    # -- structure maps --------------------------------------------------

    def coproduct(self, f) -> NCPoly:
        f = self._poly(f)
        return apply_map(self.delta, self.base, self.t2, f.terms)

    def counit(self, f) -> QScalar:
        f = self._poly(f)
        out = ZERO
        for w, c in f.terms.items():
            v = c
            for g in w:
                v = v * self.eps[g]
                if not v:
                    break
            out = out + v
        return out

    def counit_word(self, w):
        v = ONE
        for g in w:
            v = v * self.eps[g]
            if not v:
                return ZERO
        return v

    def antipode(self, f, inverse=False) -> NCPoly:
        f = self._poly(f)
        return apply_map(self.Sinv if inverse else self.S, self.base, self.base, f.terms, anti=True)

    def legs(self, g):
        """Sweedler legs of Delta(g) for a generator index: [(c, w1, w2)]."""
        out = self._legs.get(g)
        if out is None:
            out = [(c,) + split_word(self.t2, w) for w, c in self.delta[g].items()]
            self._legs[g] = out
        return out

    def word_legs(self, w):
        """Sweedler legs of Delta(word)."""
        d = self.coproduct(NCPoly(self.base, {w: ONE}))
        return [(c,) + split_word(self.t2, v) for v, c in d.terms.items()]

    def _poly(self, f):
        if isinstance(f, str):
            return self.base.parse(f)
        if isinstance(f, NCPoly):
            return f
        return self.base.scalar(f)

    # -- axioms ----------------------------------------------------------

    def verify_hopf_axioms(self, depth=3):
        """Check the Hopf axioms on all words of length <= depth.

        Returns a list of failure strings (empty when everything holds).
        """
        if depth < 2:
            raise ValueError("depth must be at least 2")
        base, t2, t3 = self.base, self.t2, self.t3
        n = len(base.gens)
        fails = []
        # Delta (x) id and id (x) Delta as maps t2 -> t3
        left_images, right_images = {}, {}
        for g in range(n):
            left_images[g] = _reindex(t2, t3, self.delta[g], [0, 1])
            left_images[n + g] = _reindex(t2, t3, {(g,): ONE}, [2])
            right_images[g] = _reindex(t2, t3, {(g,): ONE}, [0])
            right_images[n + g] = _reindex(t2, t3, self.delta[g], [1, 2])
        # relations are annihilated
        for lhs, rhs in base.rules.items():
            rel = dict(rhs)
            _acc(rel, lhs, -ONE)
            d = apply_map(self.delta, base, t2, rel).nf()
            if d.terms:
                fails.append(f"coproduct of relation {base.word_str(lhs)}: {d}")
            e = self.counit(NCPoly(base, rel))
            if e:
                fails.append(f"counit of relation {base.word_str(lhs)}: {e}")
            s = apply_map(self.S, base, base, rel, anti=True).nf()
            if s.terms:
                fails.append(f"antipode of relation {base.word_str(lhs)}: {s}")
        for g in range(n):
            back = apply_map(self.Sinv, base, base, self.S[g], anti=True).nf()
            if back.terms != {(g,): ONE}:
                fails.append(f"S^-1 S({base.gens[g]}) = {back}")
        for length in range(0, depth + 1):
            for w in itertools.product(range(n), repeat=length):
                x = NCPoly(base, {w: ONE})
                d = self.coproduct(x)
                a = apply_map(left_images, t2, t3, d.terms).nf()
                b = apply_map(right_images, t2, t3, d.terms).nf()
                if a.terms != b.terms:
                    fails.append(f"coassociativity on {base.word_str(w)}")
                # counit laws
                lc, rc, ls, rs = {}, {}, {}, {}
                for v, c in d.terms.items():
                    w1, w2 = split_word(t2, v)
                    e1, e2 = self.counit_word(w1), self.counit_word(w2)
                    if e1:
                        _acc(lc, w2, c * e1)
                    if e2:
                        _acc(rc, w1, c * e2)
                    for u, cu in _mul_terms(base, apply_map(self.S, base, base, {w1: ONE}, anti=True).terms,
                                            {w2: ONE}).items():
                        _acc(ls, u, c * cu)
                    for u, cu in _mul_terms(base, {w1: ONE},
                                            apply_map(self.S, base, base, {w2: ONE}, anti=True).terms).items():
                        _acc(rs, u, c * cu)
                xn = base.normal_form_terms({w: ONE})
                if base.normal_form_terms(lc) != xn or base.normal_form_terms(rc) != xn:
                    fails.append(f"counit law on {base.word_str(w)}")
                e = self.counit_word(w)
                target = {(): e} if e else {}
                if base.normal_form_terms(ls) != target or base.normal_form_terms(rs) != target:
                    fails.append(f"antipode law on {base.word_str(w)}")
        return fails


def _reindex(src, dst, terms, copies):
    """Move a word of tensor power ``src`` into copies ``copies`` of ``dst``."""
    n = len(src.base.gens)
    out = {}
    for w, c in terms.items():
        nw = tuple(copies[j // n] * n + j % n for j in w)
        out[nw] = c
    return out


def _scalar(text):
    v = parse_raw(text, None)
    return v.get((), ZERO)


class PairingTable:
    """Dual pairing <f, x> between Hopf algebras U and A, given on generators."""

    def __init__(self, u: HopfStructure, a: HopfStructure, values):
        self.u, self.a = u, a
        self.values = {}
        for (f, x), v in values.items():
            self.values[(u.base.index[f], a.base.index[x])] = _scalar(v) if isinstance(v, str) else as_scalar(v)
        self._memo = {}

    def pair_words(self, fw, xw):
        key = (fw, xw)
        m = self._memo.get(key)
        if m is not None:
            return m
        if not fw:
            r = self.a.counit_word(xw)
        elif not xw:
            r = self.u.counit_word(fw)
        elif len(fw) == 1 and len(xw) == 1:
            r = self.values.get((fw[0], xw[0]), ZERO)
        elif len(xw) >= 2:
            r = ZERO
            for c, f1, f2 in (self.u.legs(fw[0]) if len(fw) == 1 else self.u.word_legs(fw)):
                p1 = self.pair_words(f1, xw[:1])
                if p1:
                    r = r + c * p1 * self.pair_words(f2, xw[1:])
        else:
            r = ZERO
            for c, x1, x2 in self.a.legs(xw[0]):
                p1 = self.pair_words(fw[:1], x1)
                if p1:
                    r = r + c * p1 * self.pair_words(fw[1:], x2)
        self._memo[key] = r
        return r

    def pair(self, f, x) -> QScalar:
        f = self.u._poly(f)
        x = self.a._poly(x)
        out = ZERO
        for fw, fc in f.terms.items():
            for xw, xc in x.terms.items():
                out = out + fc * xc * self.pair_words(fw, xw)
        return out

    def right_action_value(self, x, f):
        """x <| f = <f, x_(1)> x_(2) for x in A (a Hopf algebra itself)."""
        out = {}
        for c, x1, x2 in self.a.word_legs(self.a.base.word_from_names(x.split()) if isinstance(x, str) else x):
            p = self.pair_words(self.u.base.word_from_names(f.split()) if isinstance(f, str) else f, x1)
            if p:
                _acc(out, x2, c * p)
        return NCPoly(self.a.base, out).nf()

    def left_action_value(self, f, x):
        """f |> x = x_(1) <f, x_(2)>."""
        out = {}
        for c, x1, x2 in self.a.word_legs(self.a.base.word_from_names(x.split()) if isinstance(x, str) else x):
            p = self.pair_words(self.u.base.word_from_names(f.split()) if isinstance(f, str) else f, x2)
            if p:
                _acc(out, x1, c * p)
        return NCPoly(self.a.base, out).nf()


# functional aliases matching the module contract

def coproduct(f, h: HopfStructure):
    return h.coproduct(f)


def counit(f, h: HopfStructure):
    return h.counit(f)


def antipode(f, h: HopfStructure, inverse=False):
    return h.antipode(f, inverse)


def pair(f, x, t: PairingTable):
    return t.pair(f, x)


def verify_hopf_axioms(h, depth=3):
    if not isinstance(h, HopfStructure):
        raise TypeError(f"{getattr(h, 'name', h)} carries no Hopf structure")
    return h.verify_hopf_axioms(depth)
