"""Module-algebra actions, cross products and coideal central elements."""
from __future__ import annotations

from .hopf import HopfStructure
from .ncalg import (NCPoly, Presentation, _acc, _mul_terms, apply_map, parse_raw,
                    split_word, terms_str)
from .scalars import ONE, ZERO


class ActionTable:
    """Right (x <| f) or left (f |> x) action given on generator pairs."""

    def __init__(self, hopf: HopfStructure, module: Presentation, side: str, values):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.hopf, self.module, self.side = hopf, module, side
        ui, xi = hopf.base.index, module.index
        self.values = {}
        for (x, f), v in values.items():
            if isinstance(v, str):
                v = parse_raw(v, module)
            elif isinstance(v, NCPoly):
                v = v.terms
            self.values[(xi[x], ui[f])] = module.normal_form_terms(v)
        self._memo = {}

    def missing_pairs(self):
        return [(self.module.gens[x], self.hopf.base.gens[f])
                for x in range(len(self.module.gens)) for f in range(len(self.hopf.base.gens))
                if (x, f) not in self.values]

    # x is a module word, f a Hopf word; result is a normal-form dict
    def act_word(self, xw, fw):
        key = (xw, fw)
        m = self._memo.get(key)
        if m is not None:
            return m
        mod = self.module
        if not fw:
            r = mod.normal_form_terms({xw: ONE})
        elif len(fw) > 1:
            r = {}
            if self.side == "right":
                inner, rest = self.act_word(xw, fw[:1]), fw[1:]
            else:
                inner, rest = self.act_word(xw, fw[-1:]), fw[:-1]
            for w, c in inner.items():
                for v, cv in self.act_word(w, rest).items():
                    _acc(r, v, c * cv)
        elif not xw:
            e = self.hopf.eps[fw[0]]
            r = {(): e} if e else {}
        elif len(xw) == 1:
            v = self.values.get((xw[0], fw[0]))
            if v is None:
                raise KeyError(f"action of {self.hopf.base.gens[fw[0]]} on "
                               f"{mod.gens[xw[0]]} not tabulated")
            r = v
        else:
            r = {}
            for c, f1, f2 in self.hopf.legs(fw[0]):
                a = self.act_word(xw[:1], f1)
                if not a:
                    continue
                b = self.act_word(xw[1:], f2)
                if not b:
                    continue
                for w, cw in _mul_terms(mod, a, b).items():
                    _acc(r, w, c * cw)
        self._memo[key] = r
        return r

    def act(self, x, f) -> NCPoly:
        """Right: x <| f.  Left: f |> x.  (Argument order is always x, f.)"""
        if isinstance(x, str):
            x = self.module.parse(x)
        if isinstance(f, str):
            f = self.hopf.base.parse(f)
        out = {}
        for xw, xc in x.terms.items():
            for fw, fc in f.terms.items():
                for w, c in self.act_word(xw, fw).items():
                    _acc(out, w, xc * fc * c)
        return NCPoly(self.module, out)


def act(x, f, t: ActionTable):
    return t.act(x, f)


def verify_module_algebra(t: ActionTable):
    """Failures of the module-algebra law; empty list when it holds."""
    fails = []
    mod, u = t.module, t.hopf.base
    missing = t.missing_pairs()
    if missing:
        return [f"missing action values for {missing}"]
    for lhs, rhs in mod.rules.items():
        rel = dict(rhs)
        _acc(rel, lhs, -ONE)
        for f in range(len(u.gens)):
            out = {}
            for w, c in rel.items():
                for v, cv in t.act_word(w, (f,)).items():
                    _acc(out, v, c * cv)
            out = mod.normal_form_terms(out)
            if out:
                fails.append(f"{u.gens[f]} on relation {mod.word_str(lhs)}: {terms_str(mod, out)}")
    # the action respects the relations of the Hopf algebra
    for lhs, rhs in u.rules.items():
        rel = dict(rhs)
        _acc(rel, lhs, -ONE)
        for x in range(len(mod.gens)):
            out = {}
            for w, c in rel.items():
                for v, cv in t.act_word((x,), w).items():
                    _acc(out, v, c * cv)
            out = mod.normal_form_terms(out)
            if out:
                fails.append(f"relation {u.word_str(lhs)} acting on {mod.gens[x]}: {terms_str(mod, out)}")
    # star compatibility on generators
    h = t.hopf
    for x in range(len(mod.gens)):
        if x not in mod.star_table:
            continue
        for f in range(len(u.gens)):
            lhs = NCPoly(mod, t.act_word((x,), (f,))).star()
            sf = apply_map(h.S, u, u, {(f,): ONE}, anti=True).star().nf()
            rhs = t.act(NCPoly(mod, mod.star_table[x]), sf)
            d = (lhs - rhs).nf()
            if d.terms:
                fails.append(f"star compatibility for {mod.gens[x]}, {u.gens[f]}: {d}")
    return fails


def right_from_left(t: ActionTable, phi) -> ActionTable:
    """Right action x <| f := phi(f) |> x for an antiautomorphism phi."""
    if t.side != "left":
        raise ValueError("right_from_left needs a left action table")
    h, u = t.hopf, t.hopf.base
    images = {}
    for g, v in phi.items():
        images[u.index[g]] = (parse_raw(v, u) if isinstance(v, str) else v.terms)
    fails = check_phi(h, images)
    if fails:
        raise ValueError("phi is not admissible: " + "; ".join(fails))
    values = {}
    for x in t.module.gens:
        for f in u.gens:
            values[(x, f)] = t.act(t.module.gen(x), NCPoly(u, images[u.index[f]]))
    return ActionTable(h, t.module, "right", values)


def check_phi(h: HopfStructure, images):
    u = h.base
    fails = []
    missing = [g for g in range(len(u.gens)) if g not in images]
    if missing:
        return [f"phi undefined on {[u.gens[g] for g in missing]}"]
    for lhs, rhs in u.rules.items():
        rel = dict(rhs)
        _acc(rel, lhs, -ONE)
        d = apply_map(images, u, u, rel, anti=True).nf()
        if d.terms:
            fails.append(f"not an antihomomorphism on {u.word_str(lhs)}: {d}")
    t2 = h.t2
    n = len(u.gens)
    pimg = {}
    for g in range(n):
        pimg[g] = {tuple(j for j in w): c for w, c in images[g].items()}
        pimg[n + g] = {tuple(n + j for j in w): c for w, c in images[g].items()}
    for g in range(n):
        a = h.coproduct(NCPoly(u, images[g])).nf()
        b = apply_map(pimg, t2, t2, h.delta[g]).nf()
        if (a - b).nf().terms:
            fails.append(f"not a coalgebra map on {u.gens[g]}")
        # * o S o phi = phi o * o S
        lhs = h.antipode(NCPoly(u, images[g])).star().nf()
        sg = h.antipode(NCPoly(u, {(g,): ONE})).star()
        rhs = apply_map(images, u, u, sg.terms, anti=True).nf()
        if (lhs - rhs).nf().terms:
            fails.append(f"star/antipode compatibility fails on {u.gens[g]}")
    return fails


def build_cross_product(h: HopfStructure, x: Presentation, t: ActionTable, name=None,
                        conj=None) -> Presentation:
    """Cross product presentation.

    Right actions give U (x) X with enveloping letters first and rules
    x f -> f_(1) (x <| f_(2)).  Left actions give X (x) U with coordinate
    letters first and rules f x -> (f_(1) |> x) f_(2).
    """
    missing = t.missing_pairs()
    if missing:
        raise ValueError(f"action table incomplete; missing {missing}")
    u = h.base
    right = t.side == "right"
    first, second = (u, x) if right else (x, u)
    gens = list(first.gens) + list(second.gens)
    clash = set(first.gens) & set(second.gens)
    if clash:
        raise ValueError(f"generator names clash: {clash}")
    off = len(first.gens)
    ui = (lambda w: w) if right else (lambda w: tuple(j + off for j in w))
    xi = (lambda w: tuple(j + off for j in w)) if right else (lambda w: w)
    rules = {}
    for lhs, rhs in u.rules.items():
        rules[ui(lhs)] = {ui(w): c for w, c in rhs.items()}
    for lhs, rhs in x.rules.items():
        rules[xi(lhs)] = {xi(w): c for w, c in rhs.items()}
    for xg in range(len(x.gens)):
        for fg in range(len(u.gens)):
            out = {}
            for c, f1, f2 in h.legs(fg):
                if right:
                    for w, cw in t.act_word((xg,), f2).items():
                        _acc(out, ui(f1) + xi(w), c * cw)
                else:
                    for w, cw in t.act_word((xg,), f1).items():
                        _acc(out, xi(w) + ui(f2), c * cw)
            lhs = xi((xg,)) + ui((fg,)) if right else ui((fg,)) + xi((xg,))
            rules[lhs] = out
    star = {}
    for g, img in u.star_table.items():
        star[ui((g,))[0]] = {ui(w): c for w, c in img.items()}
    for g, img in x.star_table.items():
        star[xi((g,))[0]] = {xi(w): c for w, c in img.items()}
    inverses = dict(u.inverses)
    inverses.update(x.inverses)
    weights = dict(u.weights)
    weights.update(x.weights)
    if name is None:
        name = f"{u.name}|x{x.name}" if right else f"{x.name}x|{u.name}"
    cp = Presentation(name, gens, rules, star, inverses, weights,
                      conj=conj or u.conj, parts={"U": list(u.gens), "X": list(x.gens)})
    cp.side = t.side
    return cp


def embed_by_name(src: Presentation, dst: Presentation, terms):
    m = [dst.index[g] for g in src.gens]
    return {tuple(m[j] for j in w): c for w, c in terms.items()}


def coideal_central_element(v, rho, cp: Presentation, t: ActionTable):
    """xi(v) = rho(v_(1)) S(v_(2)) for a right coideal element v.

    ``rho`` maps coideal basis words (text) to elements of the module.
    Checks the compatibility condition on every module generator and that
    the result commutes with the module generators inside ``cp``.
    """
    h, u, x = t.hopf, t.hopf.base, t.module
    if isinstance(v, str):
        v = u.parse(v)
    table = {}
    for key, val in rho.items():
        w = u.parse(key).terms if key not in ("1", "") else {(): ONE}
        if len(w) != 1 or next(iter(w.values())) != ONE:
            raise ValueError(f"coideal basis element {key!r} must be a single word")
        table[next(iter(w))] = x.parse(val) if isinstance(val, str) else val
    table.setdefault((), x.one())

    def rho_of(w):
        if w not in table:
            raise ValueError(f"coproduct leg {u.word_str(w)} lies outside the coideal basis")
        return table[w]

    # condition x rho(v) = rho(v_(1)) (x <| v_(2)) for every basis element
    for bw, rv in table.items():
        legs = h.word_legs(bw)
        for g in range(len(x.gens)):
            lhs = (x.gen(x.gens[g]) * rv).nf()
            rhs = x.zero()
            for c, w1, w2 in legs:
                rhs = rhs + rho_of(w1) * NCPoly(x, t.act_word((g,), w2)) * c
            if (lhs - rhs).nf().terms:
                raise ValueError(f"compatibility condition fails for generator {x.gens[g]} "
                                 f"and {u.word_str(bw) or '1'}")
    xi = {}
    for vw, vc in v.terms.items():
        for c, w1, w2 in h.word_legs(vw):
            r = embed_by_name(x, cp, rho_of(w1).terms)
            s = embed_by_name(u, cp, apply_map(h.S, u, u, {w2: ONE}, anti=True).terms)
            for w, cw in _mul_terms(cp, r, s).items():
                _acc(xi, w, vc * c * cw)
    xi = NCPoly(cp, xi).nf()
    for g in x.gens:
        d = (cp.gen(g) * xi - xi * cp.gen(g)).nf()
        if d.terms:
            raise ValueError(f"xi does not commute with {g}: {d}")
    return xi
