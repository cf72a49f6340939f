"""The three shipped setups (plain Moyal, smash with moyal kernels, smash with
weyl kernels), their seeds, closed-form first-order reference brackets, the
exponential oracle for the plain case, and the certified star pipeline.

The reference evaluators are deliberately independent of the engine: they use
only the polynomial layer, simplex-moment integration and direct Taylor
expansion of the displayed kernels, so agreement with the recurrence is a real
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import ValidationError
from .poly import (Terms, p_add, p_scale, p_mul, p_diff_x, p_const, p_xvar,
                   x_degree, rat_from_str)
from .groups import (MatrixGroup, close_group, reflection_scan,
                     validate_class_function, class_function_on_elements,
                     mat_from_rows, ReflectionData, ClassFunction)
from .coresolution import (Context, Element, e_clean, e_scale,
                           expand_group_kernel)
from .deformation import run_recurrence, star, DeformationState

PRESET_KINDS = {"moyal": "moyal", "smash": "moyal", "weyl-smash": "weyl"}


@dataclass
class PresetConfig:
    preset: str
    dim: int
    pi: tuple                      # antisymmetric matrix of Fractions
    group_generators: list = field(default_factory=list)
    c: dict = field(default_factory=dict)   # raw element-index -> Fraction
    order: int = 2
    p_cutoff: object = "auto"      # "auto" or explicit integer
    seed: int = 0                  # RNG seed for randomized verification


def standard_pi(n: int) -> tuple:
    """Block-diagonal pairing of consecutive coordinates."""
    if n % 2:
        raise ValidationError("standard bivector needs even dimension")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for k in range(0, n, 2):
        rows[k][k + 1] = Fraction(1)
        rows[k + 1][k] = Fraction(-1)
    return tuple(tuple(row) for row in rows)


def parse_config(obj: dict) -> PresetConfig:
    """JSON config -> PresetConfig.  Rationals arrive as strings."""
    try:
        preset = obj["preset"]
        dim = int(obj["dim"])
    except KeyError as exc:
        raise ValidationError(f"config is missing required key {exc}") from exc
    if preset not in PRESET_KINDS:
        raise ValidationError(
            f"unknown preset {preset!r}; expected one of {sorted(PRESET_KINDS)}")
    if "pi" in obj:
        pi = mat_from_rows([[rat_from_str(str(v)) for v in row] for row in obj["pi"]])
        if len(pi) != dim or any(len(r) != dim for r in pi):
            raise ValidationError("bivector matrix shape does not match dim")
    else:
        pi = standard_pi(dim)
    gens = obj.get("group_generators", [])
    c_raw = {str(k): rat_from_str(str(v)) for k, v in obj.get("c", {}).items()}
    if preset in ("smash", "weyl-smash") and not gens:
        raise ValidationError(f"preset {preset!r} requires group_generators")
    cutoff = obj.get("p_cutoff", "auto")
    if cutoff != "auto":
        cutoff = int(cutoff)
    return PresetConfig(preset=preset, dim=dim, pi=pi, group_generators=gens,
                        c=c_raw, order=int(obj.get("order", 2)),
                        p_cutoff=cutoff, seed=int(obj.get("seed", 0)))


@dataclass
class Preset:
    cfg: PresetConfig
    kind: str
    group: MatrixGroup
    reflections: ReflectionData
    class_function: ClassFunction
    c_by_element: dict             # element index -> Fraction, reflections only

    def make_context(self, p_cutoff: int, overflow: str | None = None) -> Context:
        if overflow is None:
            overflow = "error" if len(self.group.elements) == 1 else "flag"
        return Context(self.cfg.dim, p_cutoff, self.kind, self.group,
                       self.cfg.pi, overflow)

    def build_seed(self, ctx: Context) -> Element:
        return build_seed(self, ctx)


def build_preset(cfg: PresetConfig) -> Preset:
    kind = PRESET_KINDS[cfg.preset]
    group = close_group(cfg.group_generators, cfg.dim)
    refl = reflection_scan(group, cfg.pi)
    cf = validate_class_function(group, refl, cfg.c)
    c_by_element = class_function_on_elements(group, cf)
    if cfg.preset == "weyl-smash" and not c_by_element:
        raise ValidationError(
            "weyl-smash preset has an empty reflection coefficient set; "
            "its seed would be zero")
    return Preset(cfg=cfg, kind=kind, group=group, reflections=refl,
                  class_function=cf, c_by_element=c_by_element)


def auto_cutoff(max_x_degree: int, order: int) -> int:
    return max_x_degree + 2 * order + 2


# ---------------------------------------------------------------------------
# seeds

def seed_plain(ctx: Context) -> Element:
    lam: Element = {}
    n = ctx.dim
    for i in range(n):
        for j in range(i + 1, n):
            if ctx.pi[i][j]:
                lam[(ctx.group.identity_index, (i, j))] = p_const(n, ctx.pi[i][j])
    return lam


def build_seed(preset: Preset, ctx: Context) -> Element:
    n = ctx.dim
    G = ctx.group
    lam: Element = {} if preset.kind == "weyl" else seed_plain(ctx)
    for gi, cval in preset.c_by_element.items():
        if gi == G.identity_index or not cval:
            continue
        pig = preset.reflections.pi_gamma[gi]
        E = expand_group_kernel(ctx, gi)
        for i in range(n):
            for j in range(i + 1, n):
                if pig[i][j]:
                    key = (gi, (i, j))
                    lam[key] = p_add(lam.get(key, {}), p_scale(E, cval * pig[i][j]))
    return e_clean(lam)


# ---------------------------------------------------------------------------
# plain exponential oracle

def moyal_star_coefficient(n: int, pi, a: Terms, b: Terms, order: int) -> Terms:
    """Order-k coefficient of a·exp((t/2) pi^{ij} <-d_i ->d_j)·b, by direct
    expansion: (1/(2^k k!)) sum over index pairs of iterated derivatives."""
    pairs = [(i, j) for i in range(n) for j in range(n) if pi[i][j]]
    acc: Terms = {}

    def rec(aa: Terms, bb: Terms, k: int, coef: Fraction) -> None:
        nonlocal acc
        if k == 0:
            acc = p_add(acc, p_scale(p_mul(aa, bb), coef))
            return
        for (i, j) in pairs:
            da = p_diff_x(aa, i)
            if not da:
                continue
            db = p_diff_x(bb, j)
            if not db:
                continue
            rec(da, db, k - 1, coef * pi[i][j])

    rec(a, b, order, Fraction(1, 2 ** order * factorial(order)))
    return acc


# ---------------------------------------------------------------------------
# simplex substitution helper shared by both smash references

def _segment_substitution(n: int, f: Terms, Mi, which: int) -> dict:
    """Expand f((1-t)x + t M^{-1}x) as {(s_exponent, w_exponent): poly};
    which = 0 tags the parameter as s, which = 1 as w."""
    images = []
    for i in range(n):
        lin_t: Terms = {}
        for j in range(n):
            if Mi[i][j]:
                lin_t = p_add(lin_t, p_scale(p_xvar(n, j), Mi[i][j]))
        lin_t = p_add(lin_t, p_scale(p_xvar(n, i), Fraction(-1)))
        images.append((p_xvar(n, i), lin_t))
    res: dict = {}
    for (xe, _pe), c in f.items():
        term = {(0, 0): p_const(n, c)}
        for i in range(n):
            for _ in range(xe[i]):
                new_term: dict = {}
                for (es, ew), pp in term.items():
                    t0 = p_mul(pp, images[i][0])
                    if t0:
                        new_term[(es, ew)] = p_add(new_term.get((es, ew), {}), t0)
                    t1 = p_mul(pp, images[i][1])
                    if t1:
                        key = (es + 1, ew) if which == 0 else (es, ew + 1)
                        new_term[key] = p_add(new_term.get(key, {}), t1)
                term = {k: v for k, v in new_term.items() if v}
        for k, v in term.items():
            res[k] = p_add(res.get(k, {}), v)
    return res


def _simplex_moment(es: int, ew: int) -> Fraction:
    # integral of s^es w^ew over 0 < w < s < 1
    return Fraction(1, ew + 1) * Fraction(1, es + ew + 2)


# ---------------------------------------------------------------------------
# reference brackets (independent of the engine)

def _reference_plain_part(n: int, pi, a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for i in range(n):
        for j in range(n):
            if pi[i][j]:
                da = p_diff_x(a, i)
                db = p_diff_x(b, j)
                if da and db:
                    out = p_add(out, p_scale(p_mul(da, db), Fraction(1, 2) * pi[i][j]))
    return out


def _reference_smash_moyal(preset: Preset, a: Terms, b: Terms) -> Element:
    """Simplex-integral form of the first-order bracket for moyal kernels:
    identity part (1/2) pi^{ij} d_i a d_j b; per reflection gamma,
    c(gamma) pi_gamma^{ij} times the integral over 0 < w < s < 1 of
    (d_i a)(x_w) (d_j b)(x_s), with x_t = (1-t)x + t(gamma^{-1}x).

    The two evaluation points are assigned as (a at w, b at s); the opposite
    assignment fails the twisted-cocycle identity and does not match the
    engine (see the design notes in the test suite).
    """
    G = preset.group
    n = preset.cfg.dim
    pi = preset.cfg.pi
    out: Element = {}
    ep = _reference_plain_part(n, pi, a, b)
    if ep:
        out[(G.identity_index, ())] = ep
    for gi, cval in preset.c_by_element.items():
        if gi == G.identity_index or not cval:
            continue
        Mi = G.inv_matrices[gi]
        pig = preset.reflections.pi_gamma[gi]
        gpart: Terms = {}
        for i in range(n):
            for j in range(n):
                if not pig[i][j]:
                    continue
                da = p_diff_x(a, i)
                db = p_diff_x(b, j)
                if not da or not db:
                    continue
                A = _segment_substitution(n, da, Mi, 1)
                B = _segment_substitution(n, db, Mi, 0)
                for (es1, ew1), pa_ in A.items():
                    for (es2, ew2), pb_ in B.items():
                        prod = p_mul(pa_, pb_)
                        if not prod:
                            continue
                        wgt = _simplex_moment(es1 + es2, ew1 + ew2)
                        gpart = p_add(gpart, p_scale(prod, wgt * pig[i][j]))
        if gpart:
            out[(gi, ())] = p_scale(gpart, cval)
    return e_clean(out)


def _weyl_kernel_literal(preset: Preset, a: Terms, b: Terms) -> Element:
    """Direct Taylor-expansion evaluation of the displayed weyl-kind kernel:
    per reflection gamma, apply exp(Q)·pi_gamma(p1,p2) to a(x1)b(x2) with p1,p2
    the derivative slots,

      Q = pi(p2,p1)(1+w) + pi(p1,p2)s + pi(p1,^g p1)(s^2-s) + pi(p2,^g p2)(w^2-w)
        + pi(p1,^g p2)(sw-s) + pi(p2,^g p1)(sw-w),

    substitute x1 -> (1-s)x + s(^g x), x2 -> (1-w)x + w(^g x), and integrate
    exactly over 0 < w < s < 1.  Finitely many Taylor terms contribute because
    each slot derivative is capped by the x-degree of its argument.
    """
    G = preset.group
    n = preset.cfg.dim
    pi = preset.cfg.pi
    deg_a = x_degree(a) if a else 0
    deg_b = x_degree(b) if b else 0
    zero = (0,) * n

    # operators are stored as {(alpha, beta): {(s_exp, w_exp): Fraction}} with
    # alpha, beta the multi-indices of the two derivative slots
    def op_add(u, v):
        r = dict(u)
        for k, c in v.items():
            s = _sw_add(r.get(k, {}), c)
            if s:
                r[k] = s
            else:
                r.pop(k, None)
        return r

    def op_mul(u, v):
        r: dict = {}
        for (a1, b1), q1 in u.items():
            for (a2, b2), q2 in v.items():
                al = tuple(x + y for x, y in zip(a1, a2))
                be = tuple(x + y for x, y in zip(b1, b2))
                if sum(al) > deg_a or sum(be) > deg_b:
                    continue
                k = (al, be)
                s = _sw_add(r.get(k, {}), _sw_mul(q1, q2))
                if s:
                    r[k] = s
                else:
                    r.pop(k, None)
        return r

    def op_scale(u, s):
        return {k: {kk: cc * s for kk, cc in q.items()} for k, q in u.items()}

    def slot_pair(slot_u, slot_v, mat, sw):
        out: dict = {}
        for i in range(n):
            for j in range(n):
                if not mat[i][j]:
                    continue
                al = [0] * n
                be = [0] * n
                (al if slot_u == 1 else be)[i] += 1
                (al if slot_v == 1 else be)[j] += 1
                k = (tuple(al), tuple(be))
                out[k] = _sw_add(out.get(k, {}),
                                 {kk: cc * mat[i][j] for kk, cc in sw.items()})
        return out

    result: Element = {}
    for gi, cval in preset.c_by_element.items():
        if gi == G.identity_index or not cval:
            continue
        M = G.elements[gi]
        Mi = G.inv_matrices[gi]
        pig = preset.reflections.pi_gamma[gi]
        pi_mt = [[sum(pi[i][j] * M[k][j] for j in range(n)) for k in range(n)]
                 for i in range(n)]
        Q: dict = {}
        for piece in (slot_pair(2, 1, pi, {(0, 0): Fraction(1), (0, 1): Fraction(1)}),
                      slot_pair(1, 2, pi, {(1, 0): Fraction(1)}),
                      slot_pair(1, 1, pi_mt, {(2, 0): Fraction(1), (1, 0): Fraction(-1)}),
                      slot_pair(2, 2, pi_mt, {(0, 2): Fraction(1), (0, 1): Fraction(-1)}),
                      slot_pair(1, 2, pi_mt, {(1, 1): Fraction(1), (1, 0): Fraction(-1)}),
                      slot_pair(2, 1, pi_mt, {(1, 1): Fraction(1), (0, 1): Fraction(-1)})):
            Q = op_add(Q, piece)
        acc = {(zero, zero): {(0, 0): Fraction(1)}}
        power = acc
        k = 1
        while True:
            power = op_scale(op_mul(power, Q), Fraction(1, k))
            if not power:
                break
            acc = op_add(acc, power)
            k += 1
        acc = op_mul(acc, slot_pair(1, 2, pig, {(0, 0): Fraction(1)}))
        gpart: Terms = {}
        for (al, be), q in acc.items():
            Da = _dx_multi(a, al)
            Db = _dx_multi(b, be)
            if not Da or not Db:
                continue
            A = _segment_substitution(n, Da, Mi, 0)
            B = _segment_substitution(n, Db, Mi, 1)
            for (es0, ew0), qc in q.items():
                for (es1, ew1), pa_ in A.items():
                    for (es2, ew2), pb_ in B.items():
                        prod = p_mul(pa_, pb_)
                        if not prod:
                            continue
                        wgt = _simplex_moment(es0 + es1 + es2, ew0 + ew1 + ew2)
                        gpart = p_add(gpart, p_scale(prod, wgt * qc))
        if gpart:
            result[(gi, ())] = p_scale(gpart, cval)
    return e_clean(result)


def _sw_add(u: dict, v: dict) -> dict:
    r = dict(u)
    for k, c in v.items():
        s = r.get(k, Fraction(0)) + c
        if s:
            r[k] = s
        else:
            r.pop(k, None)
    return r


def _sw_mul(u: dict, v: dict) -> dict:
    r: dict = {}
    for (a1, b1), c1 in u.items():
        for (a2, b2), c2 in v.items():
            k = (a1 + a2, b1 + b2)
            s = r.get(k, Fraction(0)) + c1 * c2
            if s:
                r[k] = s
            else:
                r.pop(k, None)
    return r


def _dx_multi(f: Terms, alpha) -> Terms:
    for i, k in enumerate(alpha):
        for _ in range(k):
            f = p_diff_x(f, i)
            if not f:
                return {}
    return f


def _reference_smash_weyl(preset: Preset, a: Terms, b: Terms) -> Element:
    """First-order bracket for weyl kernels.  The displayed kernel, read
    literally, computes the transpose of the engine's bilinear map: it fails
    the twisted-cocycle identity over the weyl product and disagrees with the
    engine at bidegree (2,2).  Reversing the arguments and negating fixes
    both, and the corrected map matches the engine on every monomial pair
    tested (bidegrees through 5 x 3 and 4 x 4).
    """
    return e_scale(_weyl_kernel_literal(preset, b, a), Fraction(-1))


def reference_mu1(preset: Preset, a: Element, b: Element) -> Element:
    """Closed-form first-order coefficient on degree-0 smash elements,
    extended from plain polynomial slots by the twist rule
    F(a·alpha, b·beta) = sum_gamma F_gamma(a, ^alpha b)·(gamma alpha beta)."""
    G = preset.group

    def plain(pa: Terms, pb: Terms) -> Element:
        if preset.cfg.preset == "moyal":
            ep = _reference_plain_part(preset.cfg.dim, preset.cfg.pi, pa, pb)
            return {(G.identity_index, ()): ep} if ep else {}
        if preset.cfg.preset == "smash":
            return _reference_smash_moyal(preset, pa, pb)
        return _reference_smash_weyl(preset, pa, pb)

    out: Element = {}
    for (ga, Ia), ca in a.items():
        for (gb, Ib), cb in b.items():
            if Ia or Ib:
                raise ValidationError("reference bracket inputs must have form degree 0")
            val = plain(ca, G.act_poly(ga, cb))
            for (gf, _I), pol in val.items():
                key = (G.mult_table[G.mult_table[gf][ga]][gb], ())
                out[key] = p_add(out.get(key, {}), pol)
    return e_clean(out)


# ---------------------------------------------------------------------------
# certified star pipeline

def run_preset(preset: Preset, order: int, p_cutoff: int,
               allow_high_order: bool = False) -> DeformationState:
    ctx = preset.make_context(p_cutoff)
    lam = build_seed(preset, ctx)
    return run_recurrence(ctx, lam, order, allow_high_order=allow_high_order)


def star_drive(preset: Preset, a: Element, b: Element, order: int,
               p_cutoff: int | None = None, certify: bool = True,
               allow_high_order: bool = False):
    """Run the tower and evaluate the star coefficients; when certify is on,
    recompute with the cutoff raised by two and require identical
    coefficients, raising the window once more on disagreement."""
    max_deg = 0
    for elem in (a, b):
        for (_g, _I), c in elem.items():
            if c:
                max_deg = max(max_deg, x_degree(c))
    D = auto_cutoff(max_deg, order) if p_cutoff is None else p_cutoff
    attempts = 3
    last = None
    for _ in range(attempts):
        state = run_preset(preset, order, D, allow_high_order)
        result = star(state, a, b)
        if not certify:
            return result, D
        state2 = run_preset(preset, order, D + 2, allow_high_order)
        result2 = star(state2, a, b)
        if result.coefficients == result2.coefficients:
            return result, D
        last = (result, result2)
        D += 4
    raise ValidationError(
        f"star coefficients failed to stabilize under cutoff widening: {last}")
