"""Lazy multilinear cochains on the graded smash algebra, with the circle
product, the bracket, and the two anticommuting differentials.

A cochain of arity r and internal degree m eats r homogeneous elements and
returns an element; its total degree is r + m.  Evaluations are memoized per
cochain, keyed by a canonical form of the arguments; callers split
inhomogeneous arguments into form-degree parts via evaluate_split.
"""

from __future__ import annotations

from fractions import Fraction
import itertools

from .coresolution import (Context, Element, bullet, diff_d, homotopy_h,
                           sigma_proj, form_degree, degree_parts, e_add, e_scale)


class Cochain:
    __slots__ = ("arity", "internal", "fn", "memo")

    def __init__(self, arity: int, internal: int, fn):
        self.arity = arity
        self.internal = internal
        self.fn = fn
        self.memo: dict = {}

    @property
    def total(self) -> int:
        return self.arity + self.internal


def _arg_key(args) -> tuple:
    return tuple(
        tuple(sorted(
            (k, tuple(sorted((m, (c.numerator, c.denominator)) for m, c in v.items())))
            for k, v in a.items()))
        for a in args)


def evaluate(ctx: Context, f: Cochain, args: list) -> Element:
    """Evaluate on homogeneous arguments (memoized)."""
    assert len(args) == f.arity
    if any(not a for a in args):
        return {}
    key = _arg_key(args)
    r = f.memo.get(key)
    if r is None:
        r = f.fn(*args)
        f.memo[key] = r
    return r


def evaluate_split(ctx: Context, f: Cochain, args: list) -> Element:
    """Evaluate after splitting each argument into form-degree parts."""
    parts = [list(degree_parts(a).values()) for a in args]
    if any(not p for p in parts):
        return {}
    out: Element = {}
    for combo in itertools.product(*parts) if f.arity else [()]:
        out = e_add(out, evaluate(ctx, f, list(combo)))
    return out


def cochain_zero(arity: int, internal: int) -> Cochain:
    return Cochain(arity, internal, lambda *a: {})


def cochain_add(ctx: Context, f: Cochain, g: Cochain) -> Cochain:
    assert f.arity == g.arity and f.internal == g.internal
    return Cochain(f.arity, f.internal,
                   lambda *a: e_add(evaluate(ctx, f, list(a)), evaluate(ctx, g, list(a))))


def cochain_scale(ctx: Context, f: Cochain, s) -> Cochain:
    return Cochain(f.arity, f.internal, lambda *a: e_scale(evaluate(ctx, f, list(a)), s))


def cochain_from_element(w: Element, internal: int) -> Cochain:
    """Arity-0 cochain with a fixed value."""
    return Cochain(0, internal, lambda: w)


def multiplication_cochain(ctx: Context) -> Cochain:
    """The product as a degree-1 cochain: m(a1,a2) = (-1)^{|a1|} a1 • a2."""
    def fn(a1, a2):
        s = Fraction(-1) if form_degree(a1) % 2 else Fraction(1)
        return e_scale(bullet(ctx, a1, a2), s)
    return Cochain(2, 0, fn)


def compose_circle(ctx: Context, f: Cochain, g: Cochain) -> Cochain:
    """Circle insertion of g into f, summed over slots with graded signs.
    Inserting into an arity-0 cochain gives zero."""
    if f.arity == 0:
        return cochain_zero(g.arity - 1 if g.arity >= 1 else 0, f.internal + g.internal)
    arity = f.arity + g.arity - 1
    g_tot = g.total

    def fn(*args):
        out: Element = {}
        for i in range(f.arity):
            inner = list(args[i:i + g.arity])
            g_val = evaluate(ctx, g, inner)
            if not g_val:
                continue
            s_exp = (g_tot + 1) * sum(form_degree(args[j]) + 1 for j in range(i))
            s = Fraction(-1) if s_exp % 2 else Fraction(1)
            for part in degree_parts(g_val).values():
                f_args = list(args[:i]) + [part] + list(args[i + g.arity:])
                out = e_add(out, e_scale(evaluate(ctx, f, f_args), s))
        return out

    return Cochain(arity, f.internal + g.internal, fn)


def gerstenhaber_bracket(ctx: Context, f: Cochain, g: Cochain) -> Cochain:
    """[f,g] = f∘g − (−1)^{(|f|+1)(|g|+1)} g∘f, degrees shifted by one."""
    a = compose_circle(ctx, f, g)
    b = compose_circle(ctx, g, f)
    s_exp = (f.total + 1) * (g.total + 1)
    s = Fraction(-1) if s_exp % 2 else Fraction(1)
    if a.arity != b.arity:
        arity = max(a.arity, b.arity)
        a = a if a.arity == arity else cochain_zero(arity, a.internal)
        b = b if b.arity == arity else cochain_zero(arity, b.internal)
    return cochain_add(ctx, a, cochain_scale(ctx, b, -s))


def hochschild_delta(ctx: Context, f: Cochain) -> Cochain:
    """The Hochschild differential as the bracket with the product cochain."""
    return gerstenhaber_bracket(ctx, multiplication_cochain(ctx), f)


def hochschild_delta_direct(ctx: Context, f: Cochain) -> Cochain:
    """Independent term-by-term form of the Hochschild differential:

      (δf)(a1..an) = −(−1)^{(|a1|+1)|f|} a1 • f(a2..an)
                     − Σ_{i=2}^{n} (−1)^{ε_i} f(.., a_{i−1}•a_i, ..)
                     + (−1)^{ε_n} f(a1..a_{n−1}) • a_n,

    ε_i = |f| + |a1| + … + |a_{i−1}| − i + 1 with |f| the total degree.
    Used as a cross-check of the bracket route, never by the engine itself.
    """
    n = f.arity + 1
    f_tot = f.total

    def fn(*args):
        degs = [form_degree(a) for a in args]
        out: Element = {}
        s1 = (degs[0] + 1) * f_tot
        inner = evaluate_split(ctx, f, list(args[1:]))
        if inner:
            out = e_add(out, e_scale(bullet(ctx, args[0], inner),
                                     Fraction(1) if s1 % 2 else Fraction(-1)))
        for i in range(2, n + 1):
            eps = f_tot + sum(degs[:i - 1]) - i + 1
            merged = bullet(ctx, args[i - 2], args[i - 1])
            f_args = list(args[:i - 2]) + [merged] + list(args[i:])
            val = evaluate_split(ctx, f, f_args)
            if val:
                out = e_add(out, e_scale(val, Fraction(1) if eps % 2 else Fraction(-1)))
        eps_n = f_tot + sum(degs[:n - 1]) - n + 1
        lead = evaluate_split(ctx, f, list(args[:n - 1]))
        if lead:
            out = e_add(out, e_scale(bullet(ctx, lead, args[n - 1]),
                                     Fraction(-1) if eps_n % 2 else Fraction(1)))
        return out

    return Cochain(n, f.internal, fn)


def cochain_d(ctx: Context, f: Cochain) -> Cochain:
    """The coresolution differential on cochains:

      (df)(a1..an) = d[f(a1..an)] + Σ_i (−1)^{|f| + |a1|+…+|a_{i−1}| + i + 1}
                                      f(a1, .., d a_i, .., an).

    The sign exponent (including the +i+1 offset) is the unique affine
    convention in (|f|, Σ|a_j|, i) for which d² = 0, dδ + δd = 0 and the
    contracting-homotopy identity hold on this algebra; the identity suite
    pins it.
    """
    f_tot = f.total

    def fn(*args):
        degs = [form_degree(a) for a in args]
        out = diff_d(ctx, evaluate(ctx, f, list(args)))
        for i in range(1, f.arity + 1):
            eps = f_tot + sum(degs[:i - 1]) + i + 1
            da = diff_d(ctx, args[i - 1])
            if not da:
                continue
            f_args = list(args[:i - 1]) + [da] + list(args[i:])
            out = e_add(out, e_scale(evaluate(ctx, f, f_args),
                                     Fraction(-1) if eps % 2 else Fraction(1)))
        return out

    return Cochain(f.arity, f.internal + 1, fn)


def cochain_h(ctx: Context, f: Cochain) -> Cochain:
    """Postcompose with the contracting homotopy; lowers internal degree."""
    return Cochain(f.arity, f.internal - 1,
                   lambda *a: homotopy_h(ctx, evaluate(ctx, f, list(a))))


def cochain_sigma(ctx: Context, f: Cochain) -> Cochain:
    """Postcompose with the augmentation-section projection."""
    return Cochain(f.arity, f.internal,
                   lambda *a: sigma_proj(ctx, evaluate(ctx, f, list(a))))
