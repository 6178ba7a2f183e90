"""Algebras on the images of the approximation operators.

* ``uua``: carrier ``S_u = {X^u}`` with ``vee = ∪``, ``wedge = (∩)^u``;
* ``ua``: carrier ``S_lu = {X^l} ∪ {X^u}`` with ``cap = (∩)^l``, ``cup = (∪)^u``;
* ``ua*``: ``ua`` plus the partial ``meet`` (⊓, plain intersection) and
  ``kappa`` (κ, plain complement).

Every operation is a callable on masks that returns ``None`` where it is
undefined; an operation is undefined exactly when its set-theoretic value
falls outside the carrier.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping

from .approx import Approximator
from .audit import Claim, ClaimRegistry, ClaimReport
from .relcore import FiniteRelationSpace, check_bound
from .terms import Term, TermError, evaluate, parse_expr, variables

KINDS = ("uua", "ua", "ua*")
OMEGA, OMEGA_STAR, STRONG = "omega", "omega*", "strong"
_MODE_ALIASES = {"ω": OMEGA, "ω*": OMEGA_STAR, "w": OMEGA, "w*": OMEGA_STAR}

SIGNATURES = {
    "uua": {"vee": 2, "wedge": 2, "union": 2, "l": 1, "u": 1, "bot": 0, "top": 0},
    "ua": {"cap": 2, "cup": 2, "union": 2, "l": 1, "u": 1, "bot": 0, "top": 0},
}
SIGNATURES["ua*"] = {**SIGNATURES["ua"], "meet": 2, "kappa": 1}


@dataclass
class ImageAlgebra:
    space: FiniteRelationSpace
    kind: str
    carrier: tuple[int, ...]
    ops: Mapping[str, Callable] = field(repr=False)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.carrier)

    @property
    def signature(self) -> dict[str, int]:
        return SIGNATURES[self.kind]

    def defined(self, op: str, *args: int) -> bool:
        return self.ops[op](*args) is not None

    def carrier_sets(self) -> list[frozenset[str]]:
        return [self.space.labels(m) for m in self.carrier]

    def to_json(self) -> dict:
        """Carrier as sorted label lists; operation tables index into it (``None`` = undefined)."""
        pos = {m: i for i, m in enumerate(self.carrier)}
        tables: dict = {}
        for op, arity in self.signature.items():
            fn = self.ops[op]
            if arity == 0:
                tables[op] = pos[fn()]
            elif arity == 1:
                tables[op] = [pos.get(fn(a)) for a in self.carrier]
            else:
                tables[op] = [[pos.get(fn(a, b)) for b in self.carrier] for a in self.carrier]
        return {"kind": self.kind, "space": self.space.name,
                "carrier": [self.space.ordered(m) for m in self.carrier], "operations": tables}


def _sort_key(m: int):
    return (bin(m).count("1"), m)


def _partial(carrier: frozenset[int], fn: Callable) -> Callable:
    def op(*args):
        v = fn(*args)
        return v if v in carrier else None
    return op


def _check_closed(alg: ImageAlgebra, total: Iterable[str]):
    for op in total:
        arity = alg.signature[op]
        for args in product(alg.carrier, repeat=arity):
            if alg.ops[op](*args) is None:
                raise AssertionError(f"{alg.kind} carrier is not closed under {op} at {args}")


def build_upper_algebra(space: FiniteRelationSpace, ctx: Approximator | None = None) -> ImageAlgebra:
    check_bound(space)
    ctx = ctx or Approximator(space)
    carrier = tuple(sorted(set(ctx.table("u")), key=_sort_key))
    members = frozenset(carrier)
    top = ctx(space.full, "u")
    ops = {
        "vee": _partial(members, lambda a, b: a | b),
        "wedge": _partial(members, lambda a, b: ctx(a & b, "u")),
        "union": _partial(members, lambda a, b: a | b),
        "l": _partial(members, lambda a: ctx(a, "l")),
        "u": _partial(members, lambda a: ctx(a, "u")),
        "bot": lambda: 0,
        "top": lambda: top,
    }
    alg = ImageAlgebra(space, "uua", carrier, ops)
    _check_closed(alg, ("vee", "wedge", "u"))
    return alg


def build_lu_algebra(space: FiniteRelationSpace, ctx: Approximator | None = None) -> ImageAlgebra:
    check_bound(space)
    ctx = ctx or Approximator(space)
    carrier = tuple(sorted(set(ctx.table("l")) | set(ctx.table("u")), key=_sort_key))
    members = frozenset(carrier)
    top = ctx(space.full, "u")
    ops = {
        "cap": _partial(members, lambda a, b: ctx(a & b, "l")),
        "cup": _partial(members, lambda a, b: ctx(a | b, "u")),
        "union": _partial(members, lambda a, b: a | b),
        "l": _partial(members, lambda a: ctx(a, "l")),
        "u": _partial(members, lambda a: ctx(a, "u")),
        "bot": lambda: 0,
        "top": lambda: top,
    }
    alg = ImageAlgebra(space, "ua", carrier, ops)
    _check_closed(alg, ("cap", "cup", "l", "u"))
    return alg


def extend_partial(space: FiniteRelationSpace, ua: ImageAlgebra) -> ImageAlgebra:
    if ua.kind != "ua":
        raise ValueError("extend_partial expects the algebra built by build_lu_algebra")
    members = ua.members
    full = space.full
    ops = dict(ua.ops)
    ops["meet"] = _partial(members, lambda a, b: a & b)
    ops["kappa"] = _partial(members, lambda a: full & ~a)
    return ImageAlgebra(space, "ua*", ua.carrier, ops)


def build_algebra(space: FiniteRelationSpace, kind: str) -> ImageAlgebra:
    if kind == "uua":
        return build_upper_algebra(space)
    if kind == "ua":
        return build_lu_algebra(space)
    if kind == "ua*":
        return extend_partial(space, build_lu_algebra(space))
    raise ValueError(f"unknown algebra kind {kind!r}")


# -- equalities of partial terms ------------------------------------------

def _as_term(t: Term | str) -> Term:
    return parse_expr(t) if isinstance(t, str) else t


def _check_signature(alg: ImageAlgebra, term: Term):
    from .terms import App
    if isinstance(term, App):
        arity = alg.signature.get(term.op)
        if arity is None:
            raise TermError(f"operation {term.op!r} is not in the {alg.kind} signature")
        if arity != len(term.args):
            raise TermError(f"{term.op} takes {arity} argument(s), got {len(term.args)}")
        for a in term.args:
            _check_signature(alg, a)


def _agree(lhs, rhs, mode: str) -> bool:
    if mode == OMEGA:
        return lhs is None or rhs is None or lhs == rhs
    if mode == OMEGA_STAR:
        return lhs == rhs  # None == None covers joint undefinedness
    if mode == STRONG:
        return lhs is not None and lhs == rhs
    raise ValueError(f"unknown equality mode {mode!r}")


def weak_equality(alg: ImageAlgebra, t1: Term | str, t2: Term | str,
                  mode: str = OMEGA) -> tuple[bool, dict | None]:
    """Sweep all carrier assignments.

    ``omega``: equal wherever both sides are defined. ``omega*``: also
    defined on exactly the same assignments. ``strong``: both always defined
    and equal. The witness maps variables (alphabetical) to label lists.
    """
    mode = _MODE_ALIASES.get(mode, mode)
    t1, t2 = _as_term(t1), _as_term(t2)
    _check_signature(alg, t1)
    _check_signature(alg, t2)
    names = sorted(variables(t1) | variables(t2))
    for values in product(alg.carrier, repeat=len(names)):
        env = dict(zip(names, values))
        lhs, rhs = evaluate(t1, env, alg.ops), evaluate(t2, env, alg.ops)
        if not _agree(lhs, rhs, mode):
            witness = {k: alg.space.ordered(v) for k, v in env.items()}
            witness["lhs"] = None if lhs is None else alg.space.ordered(lhs)
            witness["rhs"] = None if rhs is None else alg.space.ordered(rhs)
            return False, witness
    return True, None


# -- audited claims ---------------------------------------------------------

class AlgebraBundle:
    """Lazy bundle of the three algebras of one space (the audit context)."""

    def __init__(self, space: FiniteRelationSpace):
        self.space = space
        self.approx = Approximator(space)
        self._cache: dict[str, ImageAlgebra] = {}

    def __getitem__(self, kind: str) -> ImageAlgebra:
        if kind not in self._cache:
            if kind == "uua":
                self._cache[kind] = build_upper_algebra(self.space, self.approx)
            elif kind == "ua":
                self._cache[kind] = build_lu_algebra(self.space, self.approx)
            else:
                self._cache[kind] = extend_partial(self.space, self["ua"])
        return self._cache[kind]


REGISTRY = ClaimRegistry("imgalg", lambda c: c["uua"].carrier)

PARTHOOD = ("up_directed", "reflexive", "antisymmetric")
UPDIR = ("up_directed",)


def _equations(kind: str, equations: list[tuple[str, str, str]]):
    parsed = [(parse_expr(l), parse_expr(r), m) for l, r, m in equations]
    names = tuple(sorted(set().union(*(variables(l) | variables(r) for l, r, _ in parsed))))

    def check(c, *values):
        alg = c[kind]
        env = dict(zip(names, values))
        return all(_agree(evaluate(l, env, alg.ops), evaluate(r, env, alg.ops), m)
                   for l, r, m in parsed)
    return check, names


def _term_claim(claim_id: str, kind: str, equations, hypothesis=(), description="",
                expected_failure=False):
    check, names = _equations(kind, equations)
    REGISTRY.register(Claim(claim_id, check, len(names), names, tuple(hypothesis),
                            domain=lambda c, kind=kind: c[kind].carrier,
                            description=description, expected_failure=expected_failure))


S = STRONG
_term_claim("idemp1", "uua", [("vee(a, a)", "a", S), ("vee(a, bot)", "a", S)], UPDIR)
_term_claim("comm2", "uua", [("wedge(a, b)", "wedge(b, a)", S)], UPDIR)
_term_claim("comm1", "uua", [("vee(a, b)", "vee(b, a)", S)], UPDIR)
_term_claim("assoc1", "uua", [("vee(a, vee(b, c))", "vee(vee(a, b), c)", S)], UPDIR)
_term_claim("absfail", "uua", [("vee(wedge(a, a), a)", "wedge(a, a)", S),
                               ("wedge(a, a)", "u(a)", S)], UPDIR)


def _mo1(c, a, b, x):
    alg = c["uua"]
    vee, wedge = alg.ops["vee"], alg.ops["wedge"]
    return vee(a, b) != b or vee(wedge(a, x), wedge(b, x)) == wedge(b, x)


REGISTRY.register(Claim("mo1", _mo1, 3, ("a", "b", "c"), UPDIR, domain=lambda c: c["uua"].carrier))

_term_claim("idemp3", "ua", [("cap(a, a)", "a", S), ("cap(cup(a, a), a)", "a", S)], PARTHOOD)
_term_claim("quasi-idemp4", "ua", [("cup(a, a)", "u(a)", S)], PARTHOOD)
_term_claim("comm12", "ua", [("cap(a, b)", "cap(b, a)", S), ("cup(a, b)", "cup(b, a)", S)], PARTHOOD)
_term_claim("half-absorption", "ua", [("cap(a, cup(b, a))", "a", S)], PARTHOOD)
_term_claim("quasi-assoc1", "ua", [("cup(a, cup(b, c))", "cup(cup(a, u(b)), u(c))", S)], PARTHOOD)
_term_claim("quasi-assoc0", "ua",
            [("cup(cup(a, cup(b, c)), cup(cup(a, b), c))",
              "cup(cup(cup(a, a), cup(b, b)), cup(cup(c, c), c))", S)], PARTHOOD)

AP_SUITE = ("idemp3", "quasi-idemp4", "comm12", "half-absorption", "quasi-assoc1", "quasi-assoc0")
UUA_SUITE = ("idemp1", "comm1", "comm2", "assoc1", "absfail", "mo1")


def _app1(c, a, b, x):
    return all(REGISTRY[cid].check(c, *(a, b, x)[:REGISTRY[cid].arity]) for cid in AP_SUITE)


REGISTRY.register(Claim("app1", _app1, 3, ("a", "b", "c"), UPDIR, domain=lambda c: c["ua*"].carrier,
                        description="the UA reduct satisfies the AP suite"))
W = OMEGA
_term_claim("app2", "ua*", [("meet(a, a)", "a", S), ("meet(a, bot)", "bot", S),
                            ("meet(a, top)", "a", S)], UPDIR)
_term_claim("app3", "ua*", [("meet(a, b)", "meet(b, a)", W),
                            ("meet(a, meet(b, c))", "meet(meet(a, b), c)", W)], UPDIR)
_term_claim("app4", "ua*", [("meet(a, u(a))", "a", S), ("meet(a, l(a))", "a", S),
                            ("kappa(kappa(a))", "a", W)], UPDIR)
_term_claim("app5", "ua*", [("meet(a, union(b, c))", "union(meet(a, b), meet(a, c))", W),
                            ("union(a, meet(b, c))", "meet(union(a, b), union(a, c))", W)], UPDIR)
_term_claim("app6", "ua*", [("kappa(meet(a, b))", "union(kappa(a), kappa(b))", W),
                            ("kappa(union(a, b))", "meet(kappa(a), kappa(b))", W)], UPDIR)

APP_SUITE = ("app1", "app2", "app3", "app4", "app5", "app6")


def audit(spaces: Iterable[FiniteRelationSpace], claim_ids: Iterable[str] | None = None,
          enforce_hypothesis: bool = True) -> list[ClaimReport]:
    """Exhaustive sweeps over the carrier of the algebra each claim lives on."""
    claims = REGISTRY.resolve(claim_ids)
    reports = []
    for space in spaces:
        check_bound(space)
        ctx = AlgebraBundle(space)
        profile = ctx.approx.profile if enforce_hypothesis else None
        for cl in claims:
            reports.append(REGISTRY.run(ctx, cl, space_name=space.name, profile=profile))
    return reports
