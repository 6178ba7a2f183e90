"""Naive set-based reference implementations, written straight from the
definitions and sharing no code with the package (only the universe and
the relation pairs are read off a space)."""
from __future__ import annotations

from itertools import chain, combinations, product


def rel(space):
    return set(space.relation)


def nbd(space, x):
    R = rel(space)
    return frozenset(y for y in space.universe if (y, x) in R)


def nbd_i(space, x):
    R = rel(space)
    return frozenset(y for y in space.universe if (x, y) in R)


def nbd_o(space, x):
    return nbd(space, x) & nbd_i(space, x)


def powerset(universe):
    u = list(universe)
    return [frozenset(c) for c in chain.from_iterable(combinations(u, k) for k in range(len(u) + 1))]


def _union(sets):
    out = frozenset()
    for s in sets:
        out |= s
    return out


GRANULE = {"l": nbd, "u": nbd, "l_i": nbd_i, "u_i": nbd_i, "l_s": nbd_o, "u_s": nbd_o}


def approx(space, A, op):
    A = frozenset(A)
    S = space.universe
    if op in GRANULE:
        g = [GRANULE[op](space, x) for x in S]
        if op.startswith("l"):
            return _union(x for x in g if x <= A)
        return _union(x for x in g if x & A)
    if op == "l_plus":
        return frozenset(x for x in S if nbd(space, x) <= A)
    if op == "u_plus":
        return frozenset(x for x in S if nbd(space, x) & A)
    if op == "li_plus":
        return frozenset(x for x in S if nbd_i(space, x) <= A)
    if op == "ui_plus":
        return frozenset(x for x in S if nbd_i(space, x) & A)
    if op == "tri_up":
        return _union(nbd_i(space, x) for x in A)
    if op == "btri_up":
        return _union(nbd(space, x) for x in A)
    if op == "tri_down":
        return frozenset(x for x in A if nbd_i(space, x) <= A)
    if op == "btri_down":
        return frozenset(x for x in A if nbd(space, x) <= A)
    raise ValueError(op)


def common_successors(space, a, b):
    return nbd_i(space, a) & nbd_i(space, b)


def is_up_directed(space):
    return all(common_successors(space, a, b) for a, b in product(space.universe, repeat=2))


def is_reflexive(space):
    return all((x, x) in space.relation for x in space.universe)


def is_antisymmetric(space):
    R = rel(space)
    return all(a == b or (b, a) not in R for a, b in R)


def is_transitive(space):
    R = rel(space)
    return all((a, d) in R for a, b in R for c, d in R if b == c)


def is_symmetric(space):
    R = rel(space)
    return all((b, a) in R for a, b in R)


def realization_violations(space, G):
    """Cells of ``G`` breaking ``Rab ⇒ ab = b`` or ``¬Rab ⇒ ab ∈ U_R(a,b)``."""
    bad = []
    for a, b in product(space.universe, repeat=2):
        c = G(a, b)
        if (a, b) in space.relation:
            if c != b:
                bad.append((a, b))
        elif c not in common_successors(space, a, b):
            bad.append((a, b))
    return bad


def count_realizations(space):
    total = 1
    for a, b in product(space.universe, repeat=2):
        if (a, b) not in space.relation:
            total *= len(common_successors(space, a, b))
    return total


def is_distributive(elements, join, meet):
    return all(meet(x, join(y, z)) == join(meet(x, y), meet(x, z))
               for x, y, z in product(elements, repeat=3))


def subset_lattice_ops(family):
    """lub/glb inside a family of frozensets, by brute force over bounds."""
    family = list(family)

    def join(x, y):
        ups = [z for z in family if x <= z and y <= z]
        least = [z for z in ups if all(z <= w for w in ups)]
        assert len(least) == 1
        return least[0]

    def meet(x, y):
        downs = [z for z in family if z <= x and z <= y]
        great = [z for z in downs if all(w <= z for w in downs)]
        assert len(great) == 1
        return great[0]

    return join, meet


def is_tolerance_trivial(universe, mul):
    """Brute force: every reflexive symmetric relation compatible with ``mul`` is transitive."""
    n = len(universe)
    off = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for choice in product((False, True), repeat=len(off)):
        T = {(i, i) for i in range(n)}
        for (i, j), c in zip(off, choice):
            if c:
                T |= {(i, j), (j, i)}
        compatible = all((mul(a, c), mul(b, d)) in T for a, b in T for c, d in T)
        if not compatible:
            continue
        if not all((a, d) in T for a, b in T for c, d in T if b == c):
            return False
    return True
