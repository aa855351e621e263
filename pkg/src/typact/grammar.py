"""Group-expression grammar.

::

    expr  := term ("+" term)*
    term  := atom ("^" power)?
    atom  := "0" | "Z" | "Z/" nat | "C(" prime "^inf)" | "T(" prime ")" | "(" expr ")"
    power := nat | "inf"

Whitespace is ignored.  ``0`` denotes the trivial group.  ``T(p)`` is the
tower ``Z/p + Z/p^2 + ...``; it may appear at most once per prime and cannot
be raised to a power (two towers are outside the representable class).
"""
from __future__ import annotations

import re

from .group_model import (
    OMEGA,
    GroupDesc,
    GroupError,
    cyclic_group,
    direct_sum,
    extent_str,
    group,
    is_prime,
    normalize,
)


class ParseError(GroupError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<inf>inf)|(?P<sym>Z\s*/|Z|C\s*\(|T\s*\(|\(|\)|\^|\+))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, re.sub(r"\s+", "", m.group(kind)), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> GroupDesc:
        out = self.term()
        while self.peek()[1] == "+":
            self.take()
            out = _sum_checked(out, self.term(), self.peek()[2])
        return out

    def term(self) -> GroupDesc:
        start = self.peek()[2]
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "inf":
                self.take()
                power = OMEGA
            else:
                power = int(self.take("nat")[1])
                if power == 0:
                    raise ParseError("power 0 is not allowed", tok[2])
            if base.towers and power != 1:
                raise ParseError("a tower T(p) cannot be repeated", start)
            base = _scale(base, power)
        return base

    def atom(self) -> GroupDesc:
        kind, val, pos = self.peek()
        if kind == "nat":
            self.take()
            if val != "0":
                raise ParseError(f"unexpected number {val}", pos)
            return GroupDesc()
        if val == "Z":
            self.take()
            return group(free_rank=1)
        if val == "Z/":
            self.take()
            n_tok = self.take("nat")
            n = int(n_tok[1])
            if n == 0:
                raise ParseError("Z/0 is not a finite cyclic group", n_tok[2])
            return cyclic_group(n)
        if val == "C(":
            self.take()
            p_tok = self.take("nat")
            p = int(p_tok[1])
            if not is_prime(p):
                raise ParseError(f"{p} is not prime", p_tok[2])
            self.take("sym", "^")
            self.take("inf")
            self.take("sym", ")")
            return group(prufer={p: 1})
        if val == "T(":
            self.take()
            p_tok = self.take("nat")
            p = int(p_tok[1])
            if not is_prime(p):
                raise ParseError(f"{p} is not prime", p_tok[2])
            self.take("sym", ")")
            return group(towers=[p])
        if val == "(":
            self.take()
            inner = self.expr()
            self.take("sym", ")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def _sum_checked(a: GroupDesc, b: GroupDesc, pos: int) -> GroupDesc:
    if set(a.towers) & set(b.towers):
        raise ParseError("a tower T(p) cannot be repeated", pos)
    return direct_sum(a, b)


def _scale(g: GroupDesc, power) -> GroupDesc:
    def mul(v):
        return v * power

    return normalize(
        GroupDesc(
            mul(g.free_rank),
            tuple((k, mul(v)) for k, v in g.cyclic),
            tuple((p, mul(v)) for p, v in g.prufer),
            g.towers,
        )
    )


def parse_group(text: str) -> GroupDesc:
    """Parse an expression into a normalized :class:`GroupDesc`."""
    parser = _Parser(text)
    if parser.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    out = parser.expr()
    parser.take("end")
    return out


def _power(s: str, v) -> str:
    return s if v == 1 else f"{s}^{extent_str(v)}"


def format_group(g: GroupDesc) -> str:
    """Canonical serialization: free part, then primes descending; within a
    prime Prüfer, tower, then cyclic summands by descending exponent."""
    parts = []
    if g.free_rank != 0:
        parts.append(_power("Z", g.free_rank))
    pru = g.prufer_dict()
    for p in sorted(g.primes(), reverse=True):
        if p in pru:
            parts.append(_power(f"C({p}^inf)", pru[p]))
        if p in g.towers:
            parts.append(f"T({p})")
        for k in range(g.max_exponent(p), 0, -1):
            v = g.cyclic_at(p, k)
            if v:
                atom = f"Z/{p ** k}"
                parts.append(atom if v == 1 else f"({atom})^{extent_str(v)}")
    return " + ".join(parts) if parts else "0"
