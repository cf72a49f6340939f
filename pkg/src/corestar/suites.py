"""Randomized verification suites: cochain identities, homotopy identities,
order-by-order associativity, and the first-order reference comparison.

Each suite returns a dict of SuiteReport keyed by identity name.  Pools are
seeded explicitly so every run is reproducible; counterexamples are serialized
in the report when a case fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .poly import Terms, p_add, p_const, p_xvar
from .coresolution import (Context, Element, bullet, diff_d, homotopy_h,
                           sigma_proj, form_degree, e_add, e_scale, e_sub,
                           e_is_zero, e_from_poly, a_part, element_to_str)
from .hochschild import (Cochain, evaluate_split, multiplication_cochain,
                         gerstenhaber_bracket, hochschild_delta,
                         hochschild_delta_direct, cochain_d, cochain_h,
                         cochain_scale)
from .deformation import DeformationState
from .presets import Preset, reference_mu1


@dataclass
class SuiteReport:
    name: str
    passed: bool
    cases: int
    counterexample: dict | None = None

    def as_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "cases": self.cases}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


# ---------------------------------------------------------------------------
# randomized pools

def random_poly(rng: random.Random, n: int, deg: int,
                p_too: bool = False, nterms: int = 1) -> Terms:
    out: Terms = {}
    for _ in range(nterms):
        d = rng.randint(0, deg)
        xe = [0] * n
        for _ in range(d):
            xe[rng.randrange(n)] += 1
        pe = [0] * n
        if p_too:
            dp = rng.randint(0, deg)
            for _ in range(dp):
                pe[rng.randrange(n)] += 1
        c = Fraction(rng.randint(-3, 3))
        if c:
            out = p_add(out, {(tuple(xe), tuple(pe)): c})
    return out


def random_element(rng: random.Random, ctx: Context, deg: int = 3,
                   wedge_max: int = 2, with_group: bool = True,
                   p_too: bool = True) -> Element:
    n = ctx.dim
    l = rng.randint(0, min(wedge_max, n))
    I = tuple(sorted(rng.sample(range(n), l)))
    gi = (rng.randrange(len(ctx.group.elements)) if with_group
          else ctx.group.identity_index)
    c = random_poly(rng, n, deg, p_too=p_too)
    if not c:
        c = p_const(n, 1)
    return {(gi, I): c}


def _product_cochain(ctx: Context, ws: list) -> Cochain:
    """Test cochain built from fixed elements: f(a1..ar) = w0•(a1•w1)•(a2•w2)…
    Its internal degree is the total form degree of the w's."""
    mdeg = sum(form_degree(w) for w in ws)

    def fn(*args):
        out = ws[0]
        for i, a in enumerate(args):
            out = bullet(ctx, out, bullet(ctx, a, ws[i + 1]))
        return out

    return Cochain(len(ws) - 1, mdeg, fn)


def _ser(ctx: Context, elems) -> list:
    return [element_to_str(ctx, e) for e in elems]


# ---------------------------------------------------------------------------
# cochain identity suite

def cochain_suite(ctx: Context, trials: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    names = ["delta_squared", "d_squared", "d_delta_anticommute",
             "delta_is_bracket_with_product", "bracket_antisymmetry",
             "graded_jacobi", "d_leibniz_over_bracket",
             "delta_leibniz_over_bracket"]
    reports = {nm: SuiteReport(nm, True, 0) for nm in names}

    def fail(nm: str, payload: dict) -> None:
        r = reports[nm]
        if r.passed:
            r.passed = False
            r.counterexample = payload

    def pool_elem():
        return random_element(rng, ctx, deg=2, wedge_max=1)

    def pool_co(arity: int) -> Cochain:
        return _product_cochain(ctx, [pool_elem() for _ in range(arity + 1)])

    for t in range(trials):
        ar = t % 3
        f = pool_co(ar)
        args = [pool_elem() for _ in range(ar + 2)]

        df = hochschild_delta(ctx, f)
        if not e_is_zero(evaluate_split(ctx, hochschild_delta(ctx, df), args)):
            fail("delta_squared", {"arity": ar, "args": _ser(ctx, args)})
        reports["delta_squared"].cases += 1

        cf = cochain_d(ctx, f)
        if not e_is_zero(evaluate_split(ctx, cochain_d(ctx, cf), args[:ar])):
            fail("d_squared", {"arity": ar, "args": _ser(ctx, args[:ar])})
        reports["d_squared"].cases += 1

        anti = e_add(evaluate_split(ctx, hochschild_delta(ctx, cf), args[:ar + 1]),
                     evaluate_split(ctx, cochain_d(ctx, df), args[:ar + 1]))
        if not e_is_zero(anti):
            fail("d_delta_anticommute", {"arity": ar, "args": _ser(ctx, args[:ar + 1])})
        reports["d_delta_anticommute"].cases += 1

        v1 = evaluate_split(ctx, df, args[:ar + 1])
        v2 = evaluate_split(ctx, hochschild_delta_direct(ctx, f), args[:ar + 1])
        if not e_is_zero(e_sub(v1, v2)):
            fail("delta_is_bracket_with_product",
                 {"arity": ar, "args": _ser(ctx, args[:ar + 1])})
        reports["delta_is_bracket_with_product"].cases += 1

    for t in range(trials):
        arf = t % 3
        arg = (t + 1) % 3
        f = pool_co(arf)
        g = pool_co(arg)
        fg = gerstenhaber_bracket(ctx, f, g)
        gf = gerstenhaber_bracket(ctx, g, f)
        s = Fraction(-1) if ((f.total + 1) * (g.total + 1)) % 2 else Fraction(1)
        n_args = max(arf + arg - 1, 0)
        args = [pool_elem() for _ in range(n_args)]
        lhs = evaluate_split(ctx, fg, args)
        rhs = e_scale(evaluate_split(ctx, gf, args), -s)
        if not e_is_zero(e_sub(lhs, rhs)):
            fail("bracket_antisymmetry",
                 {"arities": (arf, arg), "args": _ser(ctx, args)})
        reports["bracket_antisymmetry"].cases += 1

        sgn = Fraction(-1) if (f.total + 1) % 2 else Fraction(1)
        d_lhs = evaluate_split(ctx, cochain_d(ctx, fg), args)
        d_rhs = e_add(
            evaluate_split(ctx, gerstenhaber_bracket(ctx, cochain_d(ctx, f), g), args),
            e_scale(evaluate_split(
                ctx, gerstenhaber_bracket(ctx, f, cochain_d(ctx, g)), args), sgn))
        if not e_is_zero(e_sub(d_lhs, d_rhs)):
            fail("d_leibniz_over_bracket",
                 {"arities": (arf, arg), "args": _ser(ctx, args)})
        reports["d_leibniz_over_bracket"].cases += 1

        args_l = [pool_elem() for _ in range(n_args + 1)]
        l_lhs = evaluate_split(ctx, hochschild_delta(ctx, fg), args_l)
        l_rhs = e_add(
            evaluate_split(ctx, gerstenhaber_bracket(ctx, hochschild_delta(ctx, f), g), args_l),
            e_scale(evaluate_split(
                ctx, gerstenhaber_bracket(ctx, f, hochschild_delta(ctx, g)), args_l), sgn))
        if not e_is_zero(e_sub(l_lhs, l_rhs)):
            fail("delta_leibniz_over_bracket",
                 {"arities": (arf, arg), "args": _ser(ctx, args_l)})
        reports["delta_leibniz_over_bracket"].cases += 1

    for t in range(trials):
        arf = t % 2
        arg = (t + 1) % 2
        arh = (t + 2) % 2 + 1
        f = pool_co(arf)
        g = pool_co(arg)
        h = pool_co(arh)
        # derivation form: [f,[g,h]] = [[f,g],h] + (-1)^{(|f|+1)(|g|+1)} [g,[f,h]]
        sgn = Fraction(-1) if ((f.total + 1) * (g.total + 1)) % 2 else Fraction(1)
        n_args = max(arf + arg + arh - 2, 0)
        args = [pool_elem() for _ in range(n_args)]
        lhs = evaluate_split(ctx, gerstenhaber_bracket(
            ctx, f, gerstenhaber_bracket(ctx, g, h)), args)
        rhs = e_add(
            evaluate_split(ctx, gerstenhaber_bracket(
                ctx, gerstenhaber_bracket(ctx, f, g), h), args),
            e_scale(evaluate_split(ctx, gerstenhaber_bracket(
                ctx, g, gerstenhaber_bracket(ctx, f, h)), args), sgn))
        if not e_is_zero(e_sub(lhs, rhs)):
            fail("graded_jacobi",
                 {"arities": (arf, arg, arh), "args": _ser(ctx, args)})
        reports["graded_jacobi"].cases += 1

    return reports


# ---------------------------------------------------------------------------
# homotopy identity suite

def homotopy_suite(ctx: Context, trials: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    names = ["hd_dh_is_one_minus_projection_deg0", "hd_dh_is_one_degpos",
             "h_squared_zero", "h_section_identity_on_kernel"]
    reports = {nm: SuiteReport(nm, True, 0) for nm in names}

    def fail(nm: str, payload: dict) -> None:
        r = reports[nm]
        if r.passed:
            r.passed = False
            r.counterexample = payload

    def contraction(A: Element) -> Element:
        return e_add(homotopy_h(ctx, diff_d(ctx, A)),
                     diff_d(ctx, homotopy_h(ctx, A)))

    for _ in range(trials):
        A0 = random_element(rng, ctx, deg=3, wedge_max=0)
        rhs = e_sub(A0, sigma_proj(ctx, A0))
        if not e_is_zero(e_sub(contraction(A0), rhs)):
            fail("hd_dh_is_one_minus_projection_deg0",
                 {"elem": element_to_str(ctx, A0)})
        reports["hd_dh_is_one_minus_projection_deg0"].cases += 1

        A = random_element(rng, ctx, deg=3, wedge_max=2)
        while not form_degree(A):
            A = random_element(rng, ctx, deg=3, wedge_max=2)
        if not e_is_zero(e_sub(contraction(A), A)):
            fail("hd_dh_is_one_degpos", {"elem": element_to_str(ctx, A)})
        reports["hd_dh_is_one_degpos"].cases += 1
        # nilpotence of the contraction applies from form degree 1 up; on
        # degree 0 the operator is the idempotent kernel projection
        if not e_is_zero(homotopy_h(ctx, homotopy_h(ctx, A))):
            fail("h_squared_zero", {"elem": element_to_str(ctx, A)})
        reports["h_squared_zero"].cases += 1

        kern = random_element(rng, ctx, deg=3, wedge_max=0, p_too=False)
        if not e_is_zero(e_sub(homotopy_h(ctx, kern), kern)):
            fail("h_section_identity_on_kernel",
                 {"elem": element_to_str(ctx, kern)})
        reports["h_section_identity_on_kernel"].cases += 1

    return reports


# ---------------------------------------------------------------------------
# associativity suite

def star_coefficient(state: DeformationState, k: int, u: Element,
                     v: Element) -> Element:
    """Order-k product coefficient on degree-0 elements, exactified by the
    p-independent projection for k >= 1."""
    if k == 0:
        return bullet(state.ctx, u, v)
    return a_part(evaluate_split(state.ctx, state.mu[k], [u, v]))


def assoc_suite(state: DeformationState, trials: int = 10, seed: int = 0,
                deg: int = 3, corrupt_sign: bool = False) -> dict:
    """Order-by-order associator on random degree-0 smash elements.

    corrupt_sign deliberately flips the order-1 coefficient on the left
    branch; the suite must then fail (negative control).
    """
    ctx = state.ctx
    rng = random.Random(seed)
    report = SuiteReport("associativity", True, 0)

    def coeff(k, u, v, corrupt=False):
        val = star_coefficient(state, k, u, v)
        if corrupt and k == 1:
            val = e_scale(val, Fraction(-1))
        return val

    for _ in range(trials):
        parts = []
        for _ in range(3):
            gi = rng.randrange(len(ctx.group.elements))
            pol = random_poly(rng, ctx.dim, deg, nterms=2) or p_const(ctx.dim, 1)
            parts.append({(gi, ()): pol})
        A, B, C = parts
        for n in range(1, state.order + 1):
            lhs: Element = {}
            rhs: Element = {}
            for k in range(0, n + 1):
                lhs = e_add(lhs, coeff(k, coeff(n - k, A, B, corrupt_sign), C,
                                       corrupt_sign))
                rhs = e_add(rhs, coeff(k, A, coeff(n - k, B, C)))
            if not e_is_zero(e_sub(lhs, rhs)):
                if report.passed:
                    report.passed = False
                    report.counterexample = {
                        "order": n, "triple": _ser(ctx, [A, B, C])}
        report.cases += 1

    return {"associativity": report}


# ---------------------------------------------------------------------------
# reference comparison suite

def reference_suite(preset: Preset, state: DeformationState,
                    trials: int = 10, seed: int = 0) -> dict:
    """Engine first-order coefficient vs the closed-form reference, on all
    generator pairs and on random polynomial pairs of degree <= 3."""
    ctx = state.ctx
    rng = random.Random(seed)
    report = SuiteReport("reference_bracket", True, 0)

    def check(a: Element, b: Element, label: str) -> None:
        eng = a_part(evaluate_split(ctx, state.mu[1], [a, b]))
        ref = reference_mu1(preset, a, b)
        if not e_is_zero(e_sub(eng, ref)):
            if report.passed:
                report.passed = False
                report.counterexample = {
                    "pair": label, "engine": element_to_str(ctx, eng),
                    "reference": element_to_str(ctx, ref)}
        report.cases += 1

    n = ctx.dim
    for i in range(n):
        for j in range(n):
            check(e_from_poly(ctx, p_xvar(n, i)),
                  e_from_poly(ctx, p_xvar(n, j)), f"x{i + 1},x{j + 1}")
    for _ in range(trials):
        a = random_poly(rng, n, 3, nterms=2) or p_const(n, 1)
        b = random_poly(rng, n, 3, nterms=2) or p_const(n, 1)
        check(e_from_poly(ctx, a), e_from_poly(ctx, b), "random")

    return {"reference_bracket": report}


def residual_probe_triples(ctx: Context, seed: int = 0, count: int = 6) -> list:
    """Probe triples for residual checks: every generator pair extended by a
    third generator, plus seeded random monomial triples of total degree <= 6."""
    n = ctx.dim
    rng = random.Random(seed)
    triples = []
    for i in range(n):
        for j in range(n):
            triples.append((e_from_poly(ctx, p_xvar(n, i)),
                            e_from_poly(ctx, p_xvar(n, j)),
                            e_from_poly(ctx, p_xvar(n, (i + j) % n))))
    for _ in range(count):
        degs = [rng.randint(0, 2) for _ in range(3)]
        while sum(degs) > 6:
            degs[rng.randrange(3)] -= 1
        triple = []
        for d in degs:
            xe = [0] * n
            for _ in range(d):
                xe[rng.randrange(n)] += 1
            triple.append(e_from_poly(ctx, {(tuple(xe), (0,) * n): Fraction(1)}))
        triples.append(tuple(triple))
    return triples
