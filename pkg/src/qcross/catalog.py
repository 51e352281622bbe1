"""Concrete algebras, Hopf structures, actions, cross products and identity suites.

Presentations are written in a small text format::

    name: O_Cq
    gens: z zs
    star: z = zs ; zs = z
    zs z -> q^2 z zs

Header lines are ``key: value``; every other non-empty line is a rule
``LHS -> RHS``.  Coefficients use q, s = q^(1/2), lam = q - 1/q and
gamma = 1/(1 - q^2).  Generator names ending in ``i`` denote inverses
(``Ki``), names ending in ``s`` denote stars (``zs``).
"""
from __future__ import annotations

from functools import lru_cache

from .actions import (ActionTable, build_cross_product, coideal_central_element, right_from_left,
                      verify_module_algebra)
from .hopf import HopfStructure, PairingTable
from .ncalg import NCPoly, Presentation, _acc, apply_map, parse_raw, terms_str, verify_identity
from .scalars import GAMMA, LAM, ONE


def parse_presentation(text: str, **extra) -> Presentation:
    header, rules = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if "->" in line:
            lhs, rhs = line.split("->", 1)
            rules.append((lineno, lhs.strip(), rhs.strip()))
        elif ":" in line:
            k, v = line.split(":", 1)
            header[k.strip()] = v.strip()
        else:
            raise SyntaxError(f"line {lineno}: expected 'key: value' or 'LHS -> RHS'")
    gens = header["gens"].split()
    inverses = {}
    for pair in header.get("inverse", "").split(";"):
        if pair.strip():
            a, b = pair.split()
            inverses[a] = b
    weights = {}
    for item in header.get("weights", "").split():
        g, w = item.split("=")
        weights[g] = int(w)
    pres = Presentation(header.get("name", "anon"), gens, inverses=inverses, weights=weights,
                        conj=header.get("conj", "real"), **extra)
    for lineno, lhs, rhs in rules:
        try:
            pres.add_rule(lhs, parse_raw(rhs, pres))
        except (SyntaxError, KeyError, ValueError) as e:
            raise SyntaxError(f"line {lineno}: {e}") from None
    for item in header.get("star", "").split(";"):
        if item.strip():
            g, img = item.split("=", 1)
            pres.star_table[pres.index[g.strip()]] = parse_raw(img, pres)
    return pres


def _strip_comment(line):
    # '#' separates tensor legs in generator names, so comments need '# ' or a leading '#'
    s = line.strip()
    if s.startswith("#"):
        return ""
    cut = s.find(" # ")
    return s[:cut].strip() if cut >= 0 else s


# -- text sources ------------------------------------------------------------

O_EQ2 = """
name: O_Eq2
gens: n ns v vs
inverse: v vs
star: n = ns ; ns = n ; v = vs ; vs = v
ns n -> n ns
v n -> q^-1 n v
vs n -> q n vs
v ns -> q^-1 ns v
vs ns -> q ns vs
v vs -> 1
vs v -> 1
"""

O_CQ = """
name: O_Cq
gens: z zs
star: z = zs ; zs = z
zs z -> q^2 z zs
"""

O_UQ = """
name: O_Uq
gens: z zs
star: z = zs ; zs = z
zs z -> q^2 z zs + 1 - q^2
"""

U_E2 = """
name: U_q_e2
gens: E F K Ki
inverse: K Ki
weights: E=2 F=2
star: E = F ; F = E ; K = K ; Ki = Ki
K E -> q^-1 E K
K F -> q F K
F E -> E F
Ki E -> q E Ki
Ki F -> q^-1 F Ki
K Ki -> 1
Ki K -> 1
"""

_U_SL2_RULES = """
gens: E F K Ki
inverse: K Ki
weights: E=2 F=2
K E -> q E K
K F -> q^-1 F K
F E -> E F - lam^-1 K K + lam^-1 Ki Ki
Ki E -> q^-1 E Ki
Ki F -> q F Ki
K Ki -> 1
Ki K -> 1
"""

U_SL2_STARS = {
    "su11": ("star: E = -F ; F = -E ; K = K ; Ki = Ki", "real"),
    "su2": ("star: E = F ; F = E ; K = K ; Ki = Ki", "real"),
    "sl2R": ("star: E = -q E ; F = -q^-1 F ; K = K ; Ki = Ki", "unimodular"),
}

_O_SL2_RULES = """
gens: a d b c
weights: a=2 d=2
d a -> 1 + q^-1 b c
a d -> 1 + q b c
b a -> q^-1 a b
c a -> q^-1 a c
b d -> q d b
c d -> q d c
c b -> b c
"""

_O_SL2_LOC_RULES = """
gens: a d b bi c ci
inverse: b bi ; c ci
weights: a=2 d=2
d a -> 1 + q^-1 b c
a d -> 1 + q b c
b a -> q^-1 a b
c a -> q^-1 a c
b d -> q d b
c d -> q d c
c b -> b c
bi a -> q a bi
ci a -> q a ci
bi d -> q^-1 d bi
ci d -> q^-1 d ci
b bi -> 1
bi b -> 1
c ci -> 1
ci c -> 1
c bi -> bi c
ci b -> b ci
ci bi -> bi ci
"""

O_SL2_STARS = {
    "su11": ("star: a = d ; d = a ; b = q c ; c = q^-1 b ; bi = q^-1 ci ; ci = q bi", "real"),
    "su2": ("star: a = d ; d = a ; b = -q c ; c = -q^-1 b ; bi = -q^-1 ci ; ci = -q bi", "real"),
    "sl2R": ("star: a = a ; d = d ; b = b ; c = c ; bi = bi ; ci = ci", "unimodular"),
}

U0_X_CQ = """
name: U0|xO_Cq
gens: X Xs z zs
star: X = Xs ; Xs = X ; z = zs ; zs = z
Xs X -> q^2 X Xs
zs z -> q^2 z zs
z X -> q^2 X z + 1
z Xs -> q^2 Xs z
zs X -> q^-2 X zs
zs Xs -> q^-2 Xs zs - q^-2
"""

U0_E2 = """
name: U0_e2
gens: X Xs
star: X = Xs ; Xs = X
Xs X -> q^2 X Xs
"""


# -- Hopf tables -------------------------------------------------------------

def _e2_hopf(p):
    return HopfStructure(
        p,
        coproduct={"E": "E#0 K#1 + Ki#0 E#1", "F": "F#0 K#1 + Ki#0 F#1",
                   "K": "K#0 K#1", "Ki": "Ki#0 Ki#1"},
        counit={"E": 0, "F": 0, "K": 1, "Ki": 1},
        antipode={"E": "-q^-1 E", "F": "-q F", "K": "Ki", "Ki": "K"},
        antipode_inv={"E": "-q E", "F": "-q^-1 F", "K": "Ki", "Ki": "K"},
    )


def _sl2_hopf(p):
    return HopfStructure(
        p,
        coproduct={"E": "E#0 K#1 + Ki#0 E#1", "F": "F#0 K#1 + Ki#0 F#1",
                   "K": "K#0 K#1", "Ki": "Ki#0 Ki#1"},
        counit={"E": 0, "F": 0, "K": 1, "Ki": 1},
        antipode={"E": "-q E", "F": "-q^-1 F", "K": "Ki", "Ki": "K"},
        antipode_inv={"E": "-q^-1 E", "F": "-q F", "K": "Ki", "Ki": "K"},
    )


def _eq2_hopf(p):
    return HopfStructure(
        p,
        coproduct={"v": "v#0 v#1", "vs": "vs#0 vs#1",
                   "n": "v#0 n#1 + n#0 vs#1", "ns": "vs#0 ns#1 + ns#0 v#1"},
        counit={"v": 1, "vs": 1, "n": 0, "ns": 0},
        antipode={"v": "vs", "vs": "v", "n": "-q n", "ns": "-q^-1 ns"},
        antipode_inv={"v": "vs", "vs": "v", "n": "-q^-1 n", "ns": "-q ns"},
    )


def _osl2_hopf(p):
    return HopfStructure(
        p,
        coproduct={"a": "a#0 a#1 + b#0 c#1", "b": "a#0 b#1 + b#0 d#1",
                   "c": "c#0 a#1 + d#0 c#1", "d": "c#0 b#1 + d#0 d#1"},
        counit={"a": 1, "d": 1, "b": 0, "c": 0},
        antipode={"a": "d", "d": "a", "b": "-q^-1 b", "c": "-q c"},
        antipode_inv={"a": "d", "d": "a", "b": "-q b", "c": "-q^-1 c"},
    )


# -- action tables (generator pairs not listed act by zero) -------------------

EQ2_RIGHT = {
    ("ns", "E"): "-q^-1 v", ("n", "F"): "vs",
    ("n", "K"): "s n", ("ns", "K"): "s^-1 ns", ("v", "K"): "s v", ("vs", "K"): "s^-1 vs",
}
EQ2_LEFT = {
    ("n", "F"): "v", ("ns", "E"): "-q^-1 vs",
    ("n", "K"): "s^-1 n", ("ns", "K"): "s ns", ("v", "K"): "s v", ("vs", "K"): "s^-1 vs",
}
CQ_RIGHT = {
    ("z", "K"): "q z", ("zs", "K"): "q^-1 zs", ("zs", "E"): "-q^(-3/2)", ("z", "F"): "q^(-1/2)",
}
CQ_LEFT = {
    ("z", "K"): "q z", ("zs", "K"): "q^-1 zs", ("z", "E"): "-q^(-3/2)", ("zs", "F"): "q^(-1/2)",
}
UQ_LEFT = {
    ("z", "K"): "q^-1 z", ("z", "E"): "s", ("z", "F"): "-s^-1 z z",
    ("zs", "K"): "q zs", ("zs", "E"): "-s zs zs", ("zs", "F"): "s^-1",
}
UQ_PHI = {"K": "K", "Ki": "Ki", "E": "q F", "F": "q^-1 E"}
SL2_RIGHT_INV = {
    ("bi", "F"): "-q^-1 d bi bi", ("bi", "K"): "s bi",
    ("ci", "E"): "-q a ci ci", ("ci", "K"): "s^-1 ci",
}
# K |> b^-1 is q^(-1/2) b^-1; the value q^(1/2) is incompatible with b b^-1 = 1
SL2_LEFT_INV = {
    ("bi", "F"): "-q a bi bi", ("bi", "K"): "s^-1 bi",
    ("ci", "E"): "-q^-1 d ci ci", ("ci", "K"): "s ci",
}


def _complete(table, hopf, module):
    """Fill zeros and the K^-1 entries implied by K acting diagonally."""
    out = dict(table)
    for x in module.gens:
        for f in hopf.base.gens:
            out.setdefault((x, f), None)
    for x in module.gens:
        kv = out.get((x, "K"))
        if out.get((x, "Ki")) is None and kv is not None:
            img = module.parse(kv) if isinstance(kv, str) else kv
            (w, c), = img.terms.items()
            if w != (module.index[x],):
                raise ValueError(f"K does not act diagonally on {x}")
            out[(x, "Ki")] = NCPoly(module, {w: c.inverse()})
    return {k: (v if v is not None else module.zero()) for k, v in out.items()}


# -- catalog entries ---------------------------------------------------------

class Entry:
    def __init__(self, pres, hopf=None, action=None, pairing=None, parts=None):
        self.pres, self.hopf, self.action, self.pairing = pres, hopf, action, pairing


@lru_cache(maxsize=None)
def presentation(aid: str):
    """Resolve an algebra identifier to its catalog entry."""
    return _BUILDERS[aid]()


def pres(aid: str) -> Presentation:
    return presentation(aid).pres


def _b_O_Eq2():
    p = parse_presentation(O_EQ2)
    return Entry(p, hopf=_eq2_hopf(p))


def _b_O_Cq():
    return Entry(parse_presentation(O_CQ))


def _b_O_Uq():
    return Entry(parse_presentation(O_UQ))


def _b_U_q_e2():
    p = parse_presentation(U_E2)
    return Entry(p, hopf=_e2_hopf(p))


def _u_sl2(variant):
    star, conj = U_SL2_STARS[variant]
    p = parse_presentation(f"name: U_q_sl2_{variant}\nconj: {conj}\n{star}\n{_U_SL2_RULES}")
    return Entry(p, hopf=_sl2_hopf(p))


def _o_sl2(variant, localized):
    star, conj = O_SL2_STARS[variant]
    rules = _O_SL2_LOC_RULES if localized else _O_SL2_RULES
    gens = rules.split("gens:")[1].split("\n")[0].split()
    kept = [s for s in star[len("star:"):].split(";") if s.split("=")[0].strip() in gens]
    name = ("O_SLq2_localized" if localized else "O_SLq2") + ("" if variant == "su11" else f"_{variant}")
    p = parse_presentation(f"name: {name}\nconj: {conj}\nstar: {' ; '.join(kept)}\n{rules}")
    return Entry(p, hopf=None if localized else _osl2_hopf(p))


def _b_U0_e2():
    return Entry(parse_presentation(U0_E2))


def _b_U0_x_Cq():
    return Entry(parse_presentation(U0_X_CQ))


def _pairing_e2():
    return PairingTable(presentation("U_q_e2").hopf, presentation("O_Eq2").hopf,
                        {("E", "ns"): "-q^-1", ("F", "n"): 1, ("K", "v"): "s", ("K", "vs"): "s^-1",
                         ("Ki", "v"): "s^-1", ("Ki", "vs"): "s"})


def _pairing_sl2(variant="su11"):
    return PairingTable(presentation(f"U_q_sl2_{variant}").hopf,
                        presentation("O_SLq2" + ("" if variant == "su11" else f"_{variant}")).hopf,
                        {("K", "a"): "s^-1", ("K", "d"): "s", ("Ki", "a"): "s", ("Ki", "d"): "s^-1",
                         ("E", "c"): 1, ("F", "b"): 1})


def _action(hopf_id, module_id, side, table, pairing=None):
    h = presentation(hopf_id).hopf
    m = presentation(module_id).pres
    return ActionTable(h, m, side, _complete(table, h, m))


def _sl2_action(side, variant="su11"):
    """Actions on the localized coordinate algebra: a, b, c, d via the
    pairing, inverses from the explicit table."""
    h = presentation(f"U_q_sl2_{variant}").hopf
    loc = presentation("O_SLq2_localized" + ("" if variant == "su11" else f"_{variant}")).pres
    pt = _pairing_sl2(variant)
    vals = {}
    for x in "abcd":
        for f in h.base.gens:
            v = pt.right_action_value(x, f) if side == "right" else pt.left_action_value(f, x)
            vals[(x, f)] = NCPoly(loc, {tuple(loc.index[pt.a.base.gens[j]] for j in w): c
                                        for w, c in v.terms.items()})
    vals.update(SL2_RIGHT_INV if side == "right" else SL2_LEFT_INV)
    return ActionTable(h, loc, side, _complete(vals, h, loc))


def _cross(hopf_id, module_id, action, name):
    h = presentation(hopf_id).hopf
    cp = build_cross_product(h, presentation(module_id).pres, action, name=name)
    return Entry(cp, action=action)


_BUILDERS = {
    "O_Eq2": _b_O_Eq2,
    "O_Cq": _b_O_Cq,
    "O_Uq": _b_O_Uq,
    "U_q_e2": _b_U_q_e2,
    "U0_e2": _b_U0_e2,
    "U_q_sl2_su11": lambda: _u_sl2("su11"),
    "U_q_sl2_su2": lambda: _u_sl2("su2"),
    "U_q_sl2_sl2R": lambda: _u_sl2("sl2R"),
    "O_SLq2": lambda: _o_sl2("su11", False),
    "O_SLq2_su2": lambda: _o_sl2("su2", False),
    "O_SLq2_sl2R": lambda: _o_sl2("sl2R", False),
    "O_SLq2_localized": lambda: _o_sl2("su11", True),
    "O_SLq2_localized_su2": lambda: _o_sl2("su2", True),
    "O_SLq2_localized_sl2R": lambda: _o_sl2("sl2R", True),
    "U0|xO_Cq": _b_U0_x_Cq,
    "U_q_e2|xO_Eq2": lambda: _cross("U_q_e2", "O_Eq2", action_table("e2_Eq2_right"), "U_q_e2|xO_Eq2"),
    "O_Eq2x|U_q_e2": lambda: _cross("U_q_e2", "O_Eq2", action_table("e2_Eq2_left"), "O_Eq2x|U_q_e2"),
    "U_q_e2|xO_Cq": lambda: _cross("U_q_e2", "O_Cq", action_table("e2_Cq_right"), "U_q_e2|xO_Cq"),
    "O_Cqx|U_q_e2": lambda: _cross("U_q_e2", "O_Cq", action_table("e2_Cq_left"), "O_Cqx|U_q_e2"),
    "U_q_su11|xO_SLq2_localized": lambda: _cross("U_q_sl2_su11", "O_SLq2_localized",
                                                 action_table("su11_SL_right"), "U_q_su11|xO_SLq2_localized"),
    "O_SLq2_localizedx|U_q_su11": lambda: _cross("U_q_sl2_su11", "O_SLq2_localized",
                                                 action_table("su11_SL_left"), "O_SLq2_localizedx|U_q_su11"),
    "U_q_su11|xO_Uq": lambda: _cross("U_q_sl2_su11", "O_Uq", action_table("su11_Uq_right"), "U_q_su11|xO_Uq"),
    "O_Uqx|U_q_su11": lambda: _cross("U_q_sl2_su11", "O_Uq", action_table("su11_Uq_left"), "O_Uqx|U_q_su11"),
    "U_q_su2|xO_SUq2_localized": lambda: _cross("U_q_sl2_su2", "O_SLq2_localized_su2",
                                                _sl2_action("right", "su2"), "U_q_su2|xO_SUq2_localized"),
    "U_q_sl2R|xO_SLq2R_localized": lambda: _cross("U_q_sl2_sl2R", "O_SLq2_localized_sl2R",
                                                  _sl2_action("right", "sl2R"), "U_q_sl2R|xO_SLq2R_localized"),
    "U_q_su11|xO_SLq2": lambda: _cross("U_q_sl2_su11", "O_SLq2", action_table("su11_SL_right_plain"),
                                       "U_q_su11|xO_SLq2"),
}

# short aliases
ALIASES = {
    "E2_Eq2": "U_q_e2|xO_Eq2", "Eq2_E2": "O_Eq2x|U_q_e2",
    "E2_Cq": "U_q_e2|xO_Cq", "Cq_E2": "O_Cqx|U_q_e2",
    "U0_Cq": "U0|xO_Cq",
    "SU11_SL": "U_q_su11|xO_SLq2_localized", "SL_SU11": "O_SLq2_localizedx|U_q_su11",
    "SU11_Uq": "U_q_su11|xO_Uq", "Uq_SU11": "O_Uqx|U_q_su11",
    "SU11_SLplain": "U_q_su11|xO_SLq2",
    "U_q_su11": "U_q_sl2_su11", "U_q_su2": "U_q_sl2_su2", "U_q_sl2R": "U_q_sl2_sl2R",
}


def resolve(aid):
    aid = ALIASES.get(aid, aid)
    if aid not in _BUILDERS:
        raise KeyError(f"unknown algebra id {aid!r}")
    return presentation(aid)


CATALOG_IDS = list(_BUILDERS)


@lru_cache(maxsize=None)
def action_table(name) -> ActionTable:
    if name == "e2_Eq2_right":
        return _action("U_q_e2", "O_Eq2", "right", EQ2_RIGHT)
    if name == "e2_Eq2_left":
        return _action("U_q_e2", "O_Eq2", "left", EQ2_LEFT)
    if name == "e2_Cq_right":
        return _action("U_q_e2", "O_Cq", "right", CQ_RIGHT)
    if name == "e2_Cq_left":
        return _action("U_q_e2", "O_Cq", "left", CQ_LEFT)
    if name == "su11_Uq_left":
        return _action("U_q_sl2_su11", "O_Uq", "left", UQ_LEFT)
    if name == "su11_Uq_right":
        return right_from_left(action_table("su11_Uq_left"), UQ_PHI)
    if name == "su11_SL_right":
        return _sl2_action("right")
    if name == "su11_SL_left":
        return _sl2_action("left")
    if name == "su11_SL_right_plain":
        h = presentation("U_q_sl2_su11").hopf
        m = presentation("O_SLq2").pres
        pt = _pairing_sl2()
        vals = {(x, f): pt.right_action_value(x, f) for x in m.gens for f in h.base.gens}
        return ActionTable(h, m, "right", vals)
    raise KeyError(name)


ACTION_TABLES = ["e2_Eq2_right", "e2_Eq2_left", "e2_Cq_right", "e2_Cq_left",
                 "su11_Uq_left", "su11_Uq_right", "su11_SL_right", "su11_SL_left", "su11_SL_right_plain"]


@lru_cache(maxsize=None)
def pairing(name) -> PairingTable:
    if name == "e2":
        return _pairing_e2()
    if name == "sl2":
        return _pairing_sl2()
    raise KeyError(name)


# -- derived elements --------------------------------------------------------

DERIVED = {
    ("X", "U_q_e2|xO_Cq"): "s F K",
    ("Y", "U_q_e2|xO_Cq"): "-q^(3/2) E K",
    ("gamma", "U0|xO_Cq"): "gamma",
    ("N", "U0|xO_Cq"): "z X - gamma",
    ("Q", "U_q_su11|xO_SLq2_localized"): "-s lam Ki E - Ki Ki ci a",
    ("R", "U_q_su11|xO_SLq2_localized"): "s lam F Ki - q d bi Ki Ki",
    ("Q", "U_q_su2|xO_SUq2_localized"): "-s lam Ki E - Ki Ki ci a",
    ("R", "U_q_su2|xO_SUq2_localized"): "s lam F Ki - q d bi Ki Ki",
    ("Q", "U_q_sl2R|xO_SLq2R_localized"): "-s lam Ki E - Ki Ki ci a",
    ("R", "U_q_sl2R|xO_SLq2R_localized"): "s lam F Ki - q d bi Ki Ki",
    ("S_disc", "U_q_su11|xO_Uq"): "s lam F Ki - q zs Ki Ki",
    ("Ss_disc", "U_q_su11|xO_Uq"): "-s lam Ki E - q Ki Ki z",
    ("T_disc", "U_q_su11|xO_Uq"): "Ki Ki (1 - zs z)",
}


class DerivedElement:
    def __init__(self, name, home, value):
        self.name, self.home, self.value = name, home, value

    def __repr__(self):
        return f"{self.name} in {self.home}: {self.value}"


def derived(name, aid) -> DerivedElement:
    aid = ALIASES.get(aid, aid)
    if aid == "*":
        aid = next((h for (n, h) in DERIVED if n == name), None)
    key = (name, aid)
    if key not in DERIVED:
        raise KeyError(f"{name} is not defined in {aid}")
    return DerivedElement(name, aid, pres(aid).parse(DERIVED[key]))


# -- reports -----------------------------------------------------------------

class Check:
    __slots__ = ("name", "anchor", "relation", "passed", "residual", "detail")

    def __init__(self, name, anchor, relation, passed, residual="0", detail=""):
        self.name, self.anchor, self.relation = name, anchor, relation
        self.passed, self.residual, self.detail = passed, residual, detail

    def as_dict(self):
        return {"name": self.name, "anchor": self.anchor, "relation": self.relation,
                "passed": self.passed, "residual": self.residual, "detail": self.detail}

    def __repr__(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.relation}"


def _identity(name, anchor, p, lhs, rhs, env):
    a, b = _ev(p, lhs, env), _ev(p, rhs, env)
    ok, res = verify_identity(a, b, p)
    return Check(name, anchor, f"{lhs} = {rhs}", ok, str(res) if not ok else "0")


def _ev(p, text, env):
    return p.parse(text, env)


def verify_suite(suite: str):
    """Run one of the named identity suites; returns a list of Check."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    return SUITES[suite]()


def _suite_relnz():
    aid = "U0|xO_Cq"
    p = pres(aid)
    N = derived("N", aid).value
    env = {"N": N, "Ns": N.star()}
    a = "relnz"
    return [
        _identity("zN", a, p, "z N", "q^2 N z", env),
        _identity("zsN", a, p, "zs N", "N zs", env),
        _identity("NsN", a, p, "Ns N", "N Ns", env),
        _identity("zszNsN", a, p, "zs z Ns N", "Ns N zs z", env),
        _identity("N*N normal", "relnz", p, "N Ns", "Ns N", env),
    ]


def _suite_qr():
    aid = "U_q_su11|xO_SLq2_localized"
    p = pres(aid)
    env = {"Q": derived("Q", aid).value, "R": derived("R", aid).value}
    out = []
    for x in "abcd":
        out.append(_identity(f"{x}Q", "qrrel", p, f"{x} Q", f"Q {x}", env))
        out.append(_identity(f"{x}R", "qrrel", p, f"{x} R", f"R {x}", env))
    out.append(_identity("KQ", "qrzrel", p, "K Q", "q Q K", env))
    out.append(_identity("KR", "qrzrel", p, "K R", "q^-1 R K", env))
    out.append(_identity("QR", "qrzrel", p, "Q R - q^2 R Q", "1 - q^2", env))
    # star behaviour in the three real forms
    out.append(_identity("Q*=R (su11)", "Qstar", p, "starQ", "R", {**env, "starQ": env["Q"].star()}))
    p2 = pres("U_q_su2|xO_SUq2_localized")
    e2 = {"Q": derived("Q", p2.name).value, "R": derived("R", p2.name).value}
    out.append(_identity("Q*=-R (su2)", "Qstar", p2, "starQ", "-R", {**e2, "starQ": e2["Q"].star()}))
    p3 = pres("U_q_sl2R|xO_SLq2R_localized")
    e3 = {"Q": derived("Q", p3.name).value, "R": derived("R", p3.name).value}
    sq = p3.parse("s") * e3["Q"]
    sr = p3.parse("s^-1") * e3["R"]
    out.append(_identity("(sQ)*=sQ (sl2R)", "Qstar", p3, "starsQ", "sQ", {"starsQ": sq.star(), "sQ": sq}))
    out.append(_identity("(R/s)*=R/s (sl2R)", "Qstar", p3, "starsR", "sR", {"starsR": sr.star(), "sR": sr}))
    return out


def _suite_st():
    aid = "U_q_su11|xO_Uq"
    p = pres(aid)
    S = derived("S_disc", aid).value
    env = {"S": S, "Ss": derived("Ss_disc", aid).value, "T": derived("T_disc", aid).value}
    out = [_identity("star(S)", "Sstar", p, "starS", "Ss", {**env, "starS": S.star()})]
    for x in ("z", "zs"):
        for y in ("S", "Ss", "T"):
            out.append(_identity(f"{x}{y}", "zstrel", p, f"{x} {y}", f"{y} {x}", env))
    out.append(_identity("ST", "strel", p, "S T", "q^-2 T S", env))
    out.append(_identity("SsT", "strel", p, "Ss T", "q^2 T Ss", env))
    out.append(_identity("SsS", "strel", p, "Ss S - q^2 S Ss", "1 - q^2", env))
    return out


def _suite_centrality():
    p = pres("O_SLq2_localized")
    out = []
    for n in (1, 2):
        elt = " ".join(["bi"] * n + ["c"] * n)
        for g in p.gens:
            out.append(_identity(f"b^-{n}c^{n} vs {g}", "center", p, f"{elt} {g}", f"{g} {elt}", {}))
    return out


def _suite_efdef():
    aid = "U_q_su11|xO_SLq2_localized"
    p = pres(aid)
    env = {"Q": derived("Q", aid).value, "R": derived("R", aid).value}
    out = [
        _identity("E", "efdef", p, "E", "-s^-1 lam^-1 (K Q + Ki ci a)", env),
        _identity("F", "efdef", p, "F", "s^-1 lam^-1 (R K + q d bi Ki)", env),
        _identity("aK", "krel", p, "a K", "s^-1 K a", env),
        _identity("bK", "krel", p, "b K", "s^-1 K b", env),
        _identity("cK", "krel", p, "c K", "s K c", env),
        _identity("dK", "krel", p, "d K", "s K d", env),
    ]
    return out


def _suite_u0():
    aid = "U_q_e2|xO_Cq"
    p = pres(aid)
    X = derived("X", aid).value
    Y = derived("Y", aid).value
    env = {"X": X, "Xs": X.star(), "Y": Y}
    return [
        _identity("YX", "U0", p, "Y X", "q^2 X Y", env),
        _identity("X*", "U0", p, "Xs", "-q^-2 Y", env),
        _identity("qp1a", "qp1", p, "zs z", "q^2 z zs", env),
        _identity("qp1b", "qp1", p, "Xs X", "q^2 X Xs", env),
        _identity("qp2a", "qp2", p, "z X", "q^2 X z + 1", env),
        _identity("qp2b", "qp2", p, "z Xs", "q^2 Xs z", env),
        _identity("qp3a", "qp3", p, "zs X", "q^-2 X zs", env),
        _identity("qp3b", "qp3", p, "zs Xs", "q^-2 Xs zs - q^-2", env),
    ]


def _suite_coideal():
    out = []
    t = action_table("su11_SL_right")
    cp = pres("U_q_su11|xO_SLq2_localized")
    Q, R = derived("Q", cp.name).value, derived("R", cp.name).value
    xi = coideal_central_element("E K", {"E K": "-q^(-3/2) lam^-1 ci a"}, cp, t)
    out.append(_check_eq("xi(EK) = s lam^-1 Q", "coideal", xi, cp.parse("s lam^-1") * Q))
    xi = coideal_central_element("F K", {"F K": "s lam^-1 d bi"}, cp, t)
    out.append(_check_eq("xi(FK) = -s^-1 lam^-1 R", "coideal", xi, cp.parse("-s^-1 lam^-1") * R))
    t = action_table("su11_Uq_right")
    cp = pres("U_q_su11|xO_Uq")
    S = derived("S_disc", cp.name).value
    Ss = derived("Ss_disc", cp.name).value
    T = derived("T_disc", cp.name).value
    xi = coideal_central_element("F K", {"F K": "s lam^-1 zs"}, cp, t)
    out.append(_check_eq("xi(FK) = -s^-1 lam^-1 S", "coideal", xi, cp.parse("-s^-1 lam^-1") * S))
    xi = coideal_central_element("E K", {"E K": "-s^-1 lam^-1 z"}, cp, t)
    out.append(_check_eq("xi(EK) = s lam^-1 S*", "coideal", xi, cp.parse("s lam^-1") * Ss))
    xi = coideal_central_element("K K", {"K K": "1 - zs z"}, cp, t)
    out.append(_check_eq("xi(K^2) = T", "coideal", xi, T))
    xi = coideal_central_element("1", {}, cp, t)
    out.append(_check_eq("xi(1) = 1", "coideal", xi, cp.one()))
    return out


def _check_eq(name, anchor, a, b):
    ok, res = verify_identity(a, b, a.pres)
    return Check(name, anchor, name, ok, "0" if ok else str(res))


def _suite_hopf():
    out = []
    for aid in ("U_q_e2", "U_q_sl2_su11", "O_Eq2", "O_SLq2"):
        fails = presentation(aid).hopf.verify_hopf_axioms(3)
        out.append(Check(f"Hopf axioms {aid}", "Hopf", "coassociativity, counit, antipode, depth 3",
                         not fails, "; ".join(fails[:3]) if fails else "0"))
    return out


def _suite_module():
    out = []
    for name in ACTION_TABLES:
        fails = verify_module_algebra(action_table(name))
        out.append(Check(f"module algebra {name}", "cross0", "relations annihilated, star compatible",
                         not fails, "; ".join(fails[:3]) if fails else "0"))
    return out


def _suite_iso():
    return [c for n in ISOMORPHISMS for c in verify_isomorphism(n)]


SUITES = {
    "relnz": _suite_relnz,
    "qr": _suite_qr,
    "st": _suite_st,
    "centrality": _suite_centrality,
    "efdef": _suite_efdef,
    "u0_relations": _suite_u0,
    "coideal": _suite_coideal,
    "hopf": _suite_hopf,
    "module": _suite_module,
    "isomorphisms": _suite_iso,
}


# -- isomorphisms -------------------------------------------------------------

ISOMORPHISMS = {
    "theta_e2": ("U_q_e2|xO_Eq2", "O_Eq2x|U_q_e2",
                 {"v": "v", "vs": "vs", "n": "ns", "ns": "n", "K": "Ki", "Ki": "K", "E": "F", "F": "E"}),
    "psi_cq": ("U_q_e2|xO_Cq", "O_Cqx|U_q_e2",
               {"z": "z", "zs": "zs", "K": "Ki", "Ki": "K", "E": "F", "F": "E"}),
    "theta_su11": ("U_q_su11|xO_SLq2_localized", "O_SLq2_localizedx|U_q_su11",
                   {"a": "a", "d": "d", "b": "-q c", "c": "-q^-1 b", "bi": "-q^-1 ci", "ci": "-q bi",
                    "E": "F", "F": "E", "K": "Ki", "Ki": "K"}),
    "psi_disc": ("U_q_su11|xO_Uq", "O_Uqx|U_q_su11",
                 {"z": "z", "zs": "zs", "K": "Ki", "Ki": "K", "E": "-F", "F": "-E"}),
}


def check_homomorphism(src, dst, gmap, name="map"):
    """Relations of src map to zero, star compatibility on generators."""
    images = {src.index[g]: parse_raw(v, dst) for g, v in gmap.items()}
    out = []
    missing = [g for g in src.gens if g not in gmap]
    if missing:
        return [Check(name, "iso", "map defined on all generators", False, f"missing {missing}")]
    bad = []
    for lhs, rhs in src.rules.items():
        rel = dict(rhs)
        _acc(rel, lhs, -ONE)
        d = apply_map(images, src, dst, rel).nf()
        if d.terms:
            bad.append(f"{src.word_str(lhs)}: {d}")
    out.append(Check(f"{name} relations", "iso", f"{len(src.rules)} relations of {src.name}",
                     not bad, "; ".join(bad[:3]) or "0"))
    bad = []
    for g in range(len(src.gens)):
        if g not in src.star_table:
            continue
        a = NCPoly(dst, images[g]).star().nf()
        b = apply_map(images, src, dst, src.star_table[g]).nf()
        if (a - b).nf().terms:
            bad.append(src.gens[g])
    out.append(Check(f"{name} star", "iso", "map(g*) = map(g)*", not bad, ", ".join(bad) or "0"))
    return out


def verify_isomorphism(name):
    if name == "identity":
        p = pres("O_Cq")
        return check_homomorphism(p, p, {g: g for g in p.gens}, "identity")
    src_id, dst_id, gmap = ISOMORPHISMS[name]
    src, dst = pres(src_id), pres(dst_id)
    out = check_homomorphism(src, dst, gmap, name)
    out += check_homomorphism(dst, src, gmap, name + " inverse")
    # inverse composes to identity on generators (the inverse uses the same formulas)
    fwd = {src.index[g]: parse_raw(v, dst) for g, v in gmap.items()}
    back = {dst.index[g]: parse_raw(v, src) for g, v in gmap.items()}
    bad = []
    for g in range(len(src.gens)):
        img = apply_map(fwd, src, dst, {(g,): ONE})
        again = apply_map(back, dst, src, img.terms).nf()
        if again.terms != {(g,): ONE}:
            bad.append(src.gens[g])
    out.append(Check(f"{name} inverse", "iso", "inverse o map = id on generators", not bad,
                     ", ".join(bad) or "0"))
    return out
