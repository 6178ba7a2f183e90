"""Terms over a finite signature, parsing, and (partial) evaluation.

Two concrete syntaxes are supported:

* groupoid words, where juxtaposition is the binary operation and binds to
  the left: ``"azxauz"`` is ``((((az)x)a)u)z`` and ``"x(az)"`` nests;
* function-call expressions such as ``"cap(a, cup(b, c))"``, parsed with
  :mod:`ast`, for algebras with several named operations.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Callable, Mapping, Union

DOT = "·"


class TermError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...]

    def __str__(self):
        if self.op == DOT and len(self.args) == 2:
            left, right = self.args
            r = str(right)
            return f"{left}{r if isinstance(right, Var) else '(' + r + ')'}"
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(map(str, self.args))})"


Term = Union[Var, App]


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    label: str | None = None

    def variables(self) -> list[str]:
        return sorted(variables(self.lhs) | variables(self.rhs))

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


def variables(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    out: set[str] = set()
    for arg in term.args:
        out |= variables(arg)
    return out


def mul(a: Term, b: Term) -> App:
    return App(DOT, (a, b))


# -- groupoid words --------------------------------------------------------

def parse_word(text: str) -> Term:
    """Parse a juxtaposition word with left-binding products."""
    text = text.replace(" ", "")
    if not text:
        raise TermError("empty term")
    pos = 0

    def sequence() -> Term:
        nonlocal pos
        acc = None
        while pos < len(text) and text[pos] != ")":
            ch = text[pos]
            if ch == "(":
                pos += 1
                item = sequence()
                if pos >= len(text) or text[pos] != ")":
                    raise TermError(f"unbalanced parentheses in {text!r}")
                pos += 1
            elif ch.isalpha():
                item = Var(ch)
                pos += 1
            else:
                raise TermError(f"unexpected character {ch!r} in {text!r}")
            acc = item if acc is None else mul(acc, item)
        if acc is None:
            raise TermError(f"empty subterm in {text!r}")
        return acc

    term = sequence()
    if pos != len(text):
        raise TermError(f"unbalanced parentheses in {text!r}")
    return term


def parse_identity(text: str, label: str | None = None) -> Identity:
    if text.count("=") != 1:
        raise TermError(f"identity needs exactly one '=': {text!r}")
    lhs, rhs = text.split("=")
    return Identity(parse_word(lhs), parse_word(rhs), label)


# -- function-call expressions ---------------------------------------------

def parse_expr(text: str, constants: frozenset[str] = frozenset({"bot", "top"})) -> Term:
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise TermError(f"malformed term {text!r}: {exc.msg}") from None

    def walk(n) -> Term:
        if isinstance(n, ast.Name):
            return App(n.id, ()) if n.id in constants else Var(n.id)
        if isinstance(n, ast.Call) and isinstance(n.func, ast.Name) and not n.keywords:
            return App(n.func.id, tuple(walk(a) for a in n.args))
        raise TermError(f"malformed term {text!r}: unsupported syntax {ast.dump(n)[:40]}")

    return walk(node)


# -- evaluation ------------------------------------------------------------

def evaluate(term: Term, env: Mapping[str, object], ops: Mapping[str, Callable]):
    """Evaluate ``term``; an operation returning ``None`` is undefined and
    makes every enclosing term undefined."""
    if isinstance(term, Var):
        try:
            return env[term.name]
        except KeyError:
            raise TermError(f"unbound variable {term.name!r}") from None
    try:
        fn = ops[term.op]
    except KeyError:
        raise TermError(f"unknown operation {term.op!r}") from None
    args = []
    for a in term.args:
        v = evaluate(a, env, ops)
        if v is None:
            return None
        args.append(v)
    return fn(*args)
