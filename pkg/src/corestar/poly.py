"""Exact multivariate polynomials in x1..xn and p1..pn over the rationals.

The computational core works on plain dicts mapping a monomial key to a
Fraction, where a key is a pair of exponent tuples ((x_exponents), (p_exponents)).
Zero coefficients are never stored; the empty dict is the zero polynomial.
The Polynomial wrapper carries the ambient dimension and is what the parser,
the serializer and the CLI trade in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

Monomial = tuple[tuple[int, ...], tuple[int, ...]]
Terms = dict  # Monomial -> Fraction


_RAT_RE = re.compile(r"[+-]?\d+(/\d+)?\Z")


def rat_from_str(s: str) -> Fraction:
    # strict integer or num/den form; no decimals on the I/O surface
    t = s.strip()
    if not _RAT_RE.match(t):
        raise ValueError(f"not an integer-ratio literal: {s!r}")
    return Fraction(t)


def rat_to_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# dict-level arithmetic

def p_zero() -> Terms:
    return {}


def p_const(n: int, c) -> Terms:
    c = Fraction(c)
    if not c:
        return {}
    return {((0,) * n, (0,) * n): c}


def p_xvar(n: int, i: int) -> Terms:
    e = [0] * n
    e[i] = 1
    return {(tuple(e), (0,) * n): Fraction(1)}


def p_pvar(n: int, i: int) -> Terms:
    e = [0] * n
    e[i] = 1
    return {((0,) * n, tuple(e)): Fraction(1)}


def p_add(a: Terms, b: Terms) -> Terms:
    r = dict(a)
    for m, c in b.items():
        s = r.get(m, 0) + c
        if s:
            r[m] = s
        else:
            r.pop(m, None)
    return r


def p_scale(a: Terms, s) -> Terms:
    if not s:
        return {}
    return {m: c * s for m, c in a.items()}


def p_mul(a: Terms, b: Terms) -> Terms:
    # integer pair accumulation: one Fraction normalization per monomial,
    # not one per term pair
    acc: dict = {}
    b_rows = [(xb, pb, cb.numerator, cb.denominator) for (xb, pb), cb in b.items()]
    for (xa, pa), ca in a.items():
        ca_n, ca_d = ca.numerator, ca.denominator
        for xb, pb, cb_n, cb_d in b_rows:
            m = (tuple(u + v for u, v in zip(xa, xb)),
                 tuple(u + v for u, v in zip(pa, pb)))
            num = ca_n * cb_n
            den = ca_d * cb_d
            cur = acc.get(m)
            if cur is None:
                acc[m] = [num, den]
            else:
                cur[0] = cur[0] * den + num * cur[1]
                cur[1] *= den
    r: Terms = {}
    for m, (num, den) in acc.items():
        if num:
            c = Fraction(num, den)
            if c:
                r[m] = c
    return r


def p_diff_x(a: Terms, i: int) -> Terms:
    r: Terms = {}
    for (xe, pe), c in a.items():
        if xe[i]:
            m = list(xe)
            m[i] -= 1
            r[(tuple(m), pe)] = c * xe[i]
    return r


def p_diff_p(a: Terms, i: int) -> Terms:
    r: Terms = {}
    for (xe, pe), c in a.items():
        if pe[i]:
            m = list(pe)
            m[i] -= 1
            r[(xe, tuple(m))] = c * pe[i]
    return r


def x_degree(a: Terms) -> int:
    return max((sum(xe) for (xe, _pe) in a), default=0)


def p_degree(a: Terms) -> int:
    return max((sum(pe) for (_xe, pe) in a), default=0)


def p_truncate(a: Terms, cutoff: int) -> tuple[Terms, bool]:
    """Drop all monomials of p-degree above the cutoff; report whether any were dropped."""
    kept = {m: c for m, c in a.items() if sum(m[1]) <= cutoff}
    return kept, len(kept) != len(a)


def p_at_p0(a: Terms) -> Terms:
    """The p-independent part."""
    return {m: c for m, c in a.items() if not any(m[1])}


def p_subst(a: Terms, x_images: list, p_images: list) -> Terms:
    """Substitute every variable by the given polynomial images."""
    out: Terms = {}
    n = len(x_images)
    for (xe, pe), c in a.items():
        term = p_const(n, c)
        for i in range(n):
            for _ in range(xe[i]):
                term = p_mul(term, x_images[i])
            for _ in range(pe[i]):
                term = p_mul(term, p_images[i])
        out = p_add(out, term)
    return out


def mono_order_key(m: Monomial):
    # graded-lex on the concatenated exponent vectors; grade first
    xe, pe = m
    return (sum(xe) + sum(pe), xe, pe)


# ---------------------------------------------------------------------------
# wrapper type

@dataclass(frozen=True)
class Polynomial:
    dim: int
    terms_key: tuple  # frozen canonical form of the terms dict

    @staticmethod
    def from_terms(dim: int, terms: Terms) -> "Polynomial":
        items = tuple(sorted(((m, c) for m, c in terms.items() if c),
                             key=lambda mc: mono_order_key(mc[0])))
        return Polynomial(dim, items)

    @property
    def terms(self) -> Terms:
        return dict(self.terms_key)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._same_dim(other)
        return Polynomial.from_terms(self.dim, p_add(self.terms, other.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._same_dim(other)
        return Polynomial.from_terms(self.dim, p_add(self.terms, p_scale(other.terms, Fraction(-1))))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._same_dim(other)
            return Polynomial.from_terms(self.dim, p_mul(self.terms, other.terms))
        return Polynomial.from_terms(self.dim, p_scale(self.terms, Fraction(other)))

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return Polynomial.from_terms(self.dim, p_scale(self.terms, Fraction(-1)))

    def __bool__(self) -> bool:
        return bool(self.terms_key)

    def partial_x(self, i: int) -> "Polynomial":
        self._check_index(i)
        return Polynomial.from_terms(self.dim, p_diff_x(self.terms, i))

    def partial_p(self, i: int) -> "Polynomial":
        self._check_index(i)
        return Polynomial.from_terms(self.dim, p_diff_p(self.terms, i))

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.dim:
            raise IndexError(f"variable index {i} out of range for dimension {self.dim}")

    def _same_dim(self, other: "Polynomial") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __str__(self) -> str:
        return serialize_poly(self.dim, self.terms)


# ---------------------------------------------------------------------------
# parser

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


def _tokens(src: str) -> Iterator[tuple[str, str, int]]:
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            yield ("int", src[i:j], i)
            i = j
            continue
        if ch in "xp" and i + 1 < len(src) and src[i + 1].isdigit():
            j = i + 1
            while j < len(src) and src[j].isdigit():
                j += 1
            yield ("var", src[i:j], i)
            i = j
            continue
        if ch in "+-*/^()":
            yield (ch, ch, i)
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    yield ("end", "", len(src))


class _Parser:
    def __init__(self, src: str, dim: int):
        self.toks = list(_tokens(src))
        self.k = 0
        self.dim = dim

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        t = self.toks[self.k]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind}, found {t[1]!r}" if t[1] else f"expected {kind}", t[2])
        self.k += 1
        return t

    def expr(self) -> Terms:
        if self.peek()[0] == "-":
            self.take()
            out = p_scale(self.term(), Fraction(-1))
        else:
            out = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            out = p_add(out, rhs if op == "+" else p_scale(rhs, Fraction(-1)))
        return out

    def term(self) -> Terms:
        out = self.factor()
        while self.peek()[0] == "*":
            self.take()
            out = p_mul(out, self.factor())
        return out

    def factor(self) -> Terms:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            t = self.take("int")
            e = int(t[1])
            out = p_const(self.dim, 1)
            for _ in range(e):
                out = p_mul(out, base)
            return out
        return base

    def atom(self) -> Terms:
        kind, text, pos = self.peek()
        if kind == "int":
            self.take()
            num = int(text)
            if self.peek()[0] == "/":
                self.take()
                den = int(self.take("int")[1])
                if den == 0:
                    raise ParseError("zero denominator", pos)
                return p_const(self.dim, Fraction(num, den))
            return p_const(self.dim, num)
        if kind == "var":
            self.take()
            idx = int(text[1:]) - 1
            if not 0 <= idx < self.dim:
                raise ParseError(f"unknown variable {text!r} for dimension {self.dim}", pos)
            return p_xvar(self.dim, idx) if text[0] == "x" else p_pvar(self.dim, idx)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "-":
            self.take()
            return p_scale(self.factor(), Fraction(-1))
        raise ParseError(f"unexpected token {text!r}" if text else "unexpected end of input", pos)


def parse_poly(src: str, dim: int) -> Polynomial:
    p = _Parser(src, dim)
    terms = p.expr()
    p.take("end")
    return Polynomial.from_terms(dim, terms)


def serialize_poly(dim: int, terms: Terms) -> str:
    if not terms:
        return "0"
    items = sorted(terms.items(), key=lambda mc: mono_order_key(mc[0]))
    pieces = []
    for (xe, pe), c in items:
        vars_ = []
        for i, e in enumerate(xe):
            if e:
                vars_.append(f"x{i + 1}" + (f"^{e}" if e > 1 else ""))
        for i, e in enumerate(pe):
            if e:
                vars_.append(f"p{i + 1}" + (f"^{e}" if e > 1 else ""))
        body = "*".join(vars_)
        if not body:
            chunk = rat_to_str(c)
        elif c == 1:
            chunk = body
        elif c == -1:
            chunk = "-" + body
        else:
            chunk = rat_to_str(c) + "*" + body
        pieces.append(chunk)
    out = pieces[0]
    for chunk in pieces[1:]:
        out += (" - " + chunk[1:]) if chunk.startswith("-") else (" + " + chunk)
    return out
