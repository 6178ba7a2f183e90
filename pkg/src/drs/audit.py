"""Claim registries: named algebraic laws checked by exhaustive or sampled sweeps."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Sequence

HOLDS = "holds_exhaustively"
HOLDS_SAMPLED = "holds_sampled"
FAILS = "fails"
NOT_APPLICABLE = "not_applicable"


class UnknownClaim(KeyError):
    pass


_ASCII = (("btri_up", "▲"), ("btri_down", "▼"), ("tri_up", "△"), ("tri_down", "▽"), ("<=", "⊆"))


def normalize_claim_id(claim_id: str) -> str:
    """Accept ASCII spellings (``tri_up``, ``<=`` ...) for the symbolic claim ids."""
    for word, sym in _ASCII:
        claim_id = claim_id.replace(word, sym)
    return claim_id


@dataclass
class ClaimReport:
    claim: str
    verdict: str
    space: str | None = None
    hypothesis: tuple[str, ...] = ()
    witness: dict | None = None
    sweep_size: int = 0
    seed: int | None = None
    note: str | None = None
    raw_witness: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def failed(self) -> bool:
        return self.verdict == FAILS

    @property
    def holds(self) -> bool:
        return self.verdict in (HOLDS, HOLDS_SAMPLED)

    def to_json(self) -> dict:
        out = {"claim": self.claim, "verdict": self.verdict, "witness": self.witness,
               "sweepSize": self.sweep_size, "seed": self.seed}
        if self.space is not None:
            out["space"] = self.space
        if self.hypothesis:
            out["hypothesis"] = list(self.hypothesis)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Claim:
    """One law over a context.

    ``check(ctx, *values)`` returns True when the law holds at ``values``
    (or a pair ``(verdict, details)`` whose details join the witness);
    ``values`` range over ``domain(ctx)`` (``arity`` times). ``names`` label
    the variables in witnesses and ``render`` turns a raw value into JSON.
    ``hypothesis`` flags can be waived by the caller; ``requires`` flags are
    construction preconditions and are always enforced.
    """

    id: str
    check: Callable[..., bool]
    arity: int = 1
    names: tuple[str, ...] = ("A", "B", "C")
    hypothesis: tuple[str, ...] = ()
    domain: Callable[[Any], Sequence] | None = None
    render: Callable[[Any, Any], Any] | None = None
    description: str = ""
    expected_failure: bool = False
    requires: tuple[str, ...] = ()


def _outcome(result) -> tuple[bool, dict]:
    # A check returns a bool, or (bool, details) to enrich the witness.
    if isinstance(result, tuple):
        ok, detail = result
        return bool(ok), dict(detail or {})
    return bool(result), {}


def _default_render(ctx, value):
    space = getattr(ctx, "space", None)
    if space is not None and isinstance(value, int):
        return space.ordered(value)
    return value


class ClaimRegistry:
    """Ordered collection of claims; iteration order is the canonical report order."""

    def __init__(self, name: str, default_domain: Callable[[Any], Sequence]):
        self.name = name
        self.default_domain = default_domain
        self._claims: dict[str, Claim] = {}

    def add(self, claim_id: str, arity: int = 1, hypothesis: Iterable[str] = (), **kw):
        def deco(fn):
            self._claims[claim_id] = Claim(claim_id, fn, arity, hypothesis=tuple(hypothesis), **kw)
            return fn
        return deco

    def register(self, claim: Claim):
        self._claims[claim.id] = claim

    def __contains__(self, claim_id):
        return normalize_claim_id(claim_id) in self._claims

    def __getitem__(self, claim_id) -> Claim:
        try:
            return self._claims[normalize_claim_id(claim_id)]
        except KeyError:
            raise UnknownClaim(f"unknown claim id {claim_id!r} in {self.name}") from None

    def ids(self) -> list[str]:
        return list(self._claims)

    def resolve(self, claim_ids: Iterable[str] | None) -> list[Claim]:
        if claim_ids is None:
            return list(self._claims.values())
        wanted = [self[cid].id for cid in claim_ids]
        return [c for c in self._claims.values() if c.id in wanted]

    def run(self, ctx, claim: Claim, *, mode: str = "exhaustive", samples: int = 2000,
            seed: int = 0, space_name: str | None = None, profile=None) -> ClaimReport:
        if profile is None and claim.requires:
            profile = getattr(ctx, "profile", None)
            wanted = claim.requires
        else:
            wanted = claim.hypothesis + claim.requires
        if profile is not None:
            missing = [h for h in wanted if not getattr(profile, h)]
            if missing:
                return ClaimReport(claim.id, NOT_APPLICABLE, space_name, claim.hypothesis,
                                   note="hypothesis not met: " + ", ".join(missing))
        domain = (claim.domain or self.default_domain)(ctx)
        render = claim.render or _default_render
        if mode == "exhaustive":
            tuples: Iterable = product(domain, repeat=claim.arity)
            used_seed = None
        elif mode == "sampled":
            rng = random.Random(seed)
            tuples = (tuple(rng.choice(domain) for _ in range(claim.arity)) for _ in range(samples))
            used_seed = seed
        else:
            raise ValueError(f"unknown audit mode {mode!r}")
        count = 0
        for values in tuples:
            count += 1
            ok, detail = _outcome(claim.check(ctx, *values))
            if not ok:
                witness = {name: render(ctx, v) for name, v in zip(claim.names, values)}
                witness.update(detail)
                return ClaimReport(claim.id, FAILS, space_name, claim.hypothesis, witness,
                                   count, used_seed, raw_witness=tuple(values))
        verdict = HOLDS if mode == "exhaustive" else HOLDS_SAMPLED
        return ClaimReport(claim.id, verdict, space_name, claim.hypothesis, None, count, used_seed)

    def recheck(self, ctx, report: ClaimReport) -> bool:
        """True when a stored failing witness still refutes its claim."""
        if report.raw_witness is None:
            return False
        return not _outcome(self[report.claim].check(ctx, *report.raw_witness))[0]
