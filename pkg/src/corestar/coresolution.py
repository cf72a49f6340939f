"""The graded smash algebra (polynomials in x,p) tensor (wedge of dp's) acted
on by a finite matrix group, together with its bullet product, differential,
contracting homotopy and augmentation data.

Element encoding: a dict mapping (group_index, wedge_tuple) to a coefficient
polynomial dict (see poly.Terms).  Wedge tuples are strictly increasing; all
antisymmetry signs are paid at insertion time via wedge_merge.  The zero
element is the empty dict.

Coefficients are p-jets: power series in the p variables truncated at the
context's p_cutoff.  Every public answer on the kernel subalgebra is
p-independent, so the truncation never touches reported values; the context
records a sticky flag whenever a product or kernel expansion drops terms, and
callers certify results by recomputing with the cutoff raised by two.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial, gcd

from .errors import ValidationError
from .groups import MatrixGroup
from .poly import (Terms, p_add, p_scale, p_mul, p_diff_x, p_diff_p,
                   p_truncate, p_at_p0, p_const, p_xvar, p_pvar,
                   serialize_poly, parse_poly)

Element = dict  # (group_index, wedge_tuple) -> Terms


# ---------------------------------------------------------------------------
# wedge bookkeeping

def wedge_merge(I: tuple, J: tuple):
    """Concatenate two increasing index tuples; return (sign, sorted tuple),
    with sign 0 when an index repeats."""
    if set(I) & set(J):
        return 0, None
    merged = list(I) + list(J)
    sign = 1
    for i in range(1, len(merged)):
        j = i
        while j > 0 and merged[j - 1] > merged[j]:
            merged[j - 1], merged[j] = merged[j], merged[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(merged)


def form_degree(a: Element):
    """Common wedge length of a homogeneous element; None for zero."""
    degs = {len(I) for (_gi, I) in a}
    if len(degs) > 1:
        raise ValueError(f"element is not homogeneous: form degrees {sorted(degs)}")
    return degs.pop() if degs else None


def degree_parts(a: Element) -> dict:
    out: dict = {}
    for (gi, I), c in a.items():
        out.setdefault(len(I), {})[(gi, I)] = c
    return out


# ---------------------------------------------------------------------------
# linear structure

def e_clean(a: Element) -> Element:
    return {k: v for k, v in a.items() if v}


def e_is_zero(a: Element) -> bool:
    return not e_clean(a)


def e_add(a: Element, b: Element) -> Element:
    out = dict(a)
    for k, v in b.items():
        s = p_add(out.get(k, {}), v)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def e_scale(a: Element, s) -> Element:
    if not s:
        return {}
    return {k: p_scale(v, s) for k, v in a.items()}


def e_sub(a: Element, b: Element) -> Element:
    return e_add(a, e_scale(b, Fraction(-1)))


def e_from_poly(ctx: "Context", a: Terms, gi: int | None = None) -> Element:
    gi = ctx.group.identity_index if gi is None else gi
    return {(gi, ()): dict(a)} if a else {}


def a_part(a: Element) -> Element:
    """p-degree-0 projection per (group, wedge) key.  On outputs that are
    honestly p-independent this recovers the exact value from a jet whose
    junk lives strictly above the cutoff."""
    out = {}
    for k, pol in a.items():
        q = p_at_p0(pol)
        if q:
            out[k] = q
    return out


# ---------------------------------------------------------------------------
# context

class Context:
    """Ambient data for all products: dimension, truncation cutoff, product
    kind ('moyal' or 'weyl'), the acting group, and the bivector.

    overflow = 'error' raises when a product would drop terms above the
    cutoff; 'flag' records the drop in self.truncated and continues.
    """

    def __init__(self, dim: int, p_cutoff: int, kind: str, group: MatrixGroup,
                 pi=None, overflow: str = "flag"):
        if kind not in ("moyal", "weyl"):
            raise ValidationError(f"unknown product kind {kind!r}")
        if kind == "weyl" and pi is None:
            raise ValidationError("weyl kind requires a bivector matrix")
        if overflow not in ("error", "flag"):
            raise ValidationError(f"unknown overflow policy {overflow!r}")
        if group.dim != dim:
            raise ValidationError("group dimension does not match context dimension")
        self.dim = dim
        self.p_cutoff = p_cutoff
        self.kind = kind
        self.group = group
        self.pi = pi
        self.overflow = overflow
        self.truncated = False
        self._bullet_cache: dict = {}

    def widened(self, extra: int = 2) -> "Context":
        return Context(self.dim, self.p_cutoff + extra, self.kind, self.group,
                       self.pi, self.overflow)

    def _note_drop(self) -> None:
        if self.overflow == "error":
            raise ValidationError(
                f"product exceeds p-degree cutoff {self.p_cutoff} "
                "and overflow policy is 'error'")
        self.truncated = True

    def _trunc(self, a: Terms) -> Terms:
        kept, dropped = p_truncate(a, self.p_cutoff)
        if dropped:
            self._note_drop()
        return kept


# ---------------------------------------------------------------------------
# bullet product

def _weyl_D(ctx: Context, a: Terms, i: int) -> Terms:
    # D_i = d/dp_i + pi^{ij} d/dx_j
    r = p_diff_p(a, i)
    for j in range(ctx.dim):
        if ctx.pi[i][j]:
            r = p_add(r, p_scale(p_diff_x(a, j), ctx.pi[i][j]))
    return r


def bullet_coeff(ctx: Context, a: Terms, b: Terms) -> Terms:
    """Coefficient-level product: sum over multi-indices alpha of
    (1/alpha!) (d_x^alpha a)(D^alpha b), D depending on the kind.

    Hot path: derivatives of both factors are memoized along the alpha
    lattice, term pairs whose p-degree exceeds the cutoff are skipped up
    front (recorded as a drop), and coefficients accumulate as integer
    numerator/denominator pairs with a single normalization per monomial."""
    if not a or not b:
        return {}
    key = (frozenset(a.items()), frozenset(b.items()))
    hit = ctx._bullet_cache.get(key)
    if hit is not None:
        result, dropped = hit
        if dropped:
            ctx._note_drop()  # cache hits must still keep the flag sticky
        return result
    n = ctx.dim
    cap = ctx.p_cutoff
    maxx = [0] * n
    for (xe, _pe) in a:
        for i in range(n):
            maxx[i] = max(maxx[i], xe[i])

    # derivative trees hold integer numerator/denominator pairs; plain
    # derivatives are injective on monomials, only the two-branch weyl
    # operator can collide and accumulate
    def _acc(out, m, num, den):
        cur = out.get(m)
        if cur is None:
            out[m] = [num, den]
        else:
            cur[0] = cur[0] * den + num * cur[1]
            cur[1] *= den

    def node_diff_x(node, i):
        out: dict = {}
        for (xe, pe), (num, den) in node.items():
            e = xe[i]
            if e:
                out[(xe[:i] + (e - 1,) + xe[i + 1:], pe)] = [num * e, den]
        return out

    def node_diff_p(node, i):
        out: dict = {}
        for (xe, pe), (num, den) in node.items():
            e = pe[i]
            if e:
                out[(xe, pe[:i] + (e - 1,) + pe[i + 1:])] = [num * e, den]
        return out

    if ctx.kind == "moyal":
        node_D = node_diff_p
    else:
        pi = ctx.pi

        def node_D(node, i):
            out = node_diff_p(node, i)
            for j in range(n):
                v = pi[i][j]
                if v:
                    for m, (num, den) in node_diff_x(node, j).items():
                        _acc(out, m, num * v.numerator, den * v.denominator)
            # keep tree entries reduced: unreduced denominators compound
            # multiplicatively along derivative chains
            for cur in out.values():
                g = gcd(cur[0], cur[1])
                if g > 1:
                    cur[0] //= g
                    cur[1] //= g
            return out

    zero_alpha = (0,) * n
    a_der = {zero_alpha: {m: [c.numerator, c.denominator] for m, c in a.items()}}
    b_der = {zero_alpha: {m: [c.numerator, c.denominator] for m, c in b.items()}}

    def get_der(table, op, alpha):
        hit = table.get(alpha)
        if hit is not None:
            return hit
        i = next(k for k in range(n) if alpha[k])
        prev = list(alpha)
        prev[i] -= 1
        r = op(get_der(table, op, tuple(prev)), i)
        table[alpha] = r
        return r

    acc: dict = {}
    dropped = False
    for alpha in itertools.product(*[range(m + 1) for m in maxx]):
        da = get_der(a_der, node_diff_x, alpha)
        if not da:
            continue
        db = get_der(b_der, node_D, alpha)
        if not db:
            continue
        f = 1
        for ai in alpha:
            f *= factorial(ai)
        db_rows = [(xb, pb, sum(pb), num, den)
                   for (xb, pb), (num, den) in db.items()]
        for (xa, pa), (ca_n, ca_d0) in da.items():
            pda = sum(pa)
            ca_d = ca_d0 * f
            for xb, pb, pdb, cb_n, cb_d in db_rows:
                if pda + pdb > cap:
                    dropped = True
                    continue
                m = (tuple(u + v for u, v in zip(xa, xb)),
                     tuple(u + v for u, v in zip(pa, pb)))
                _acc(acc, m, ca_n * cb_n, ca_d * cb_d)
    kept: Terms = {}
    for m, (num, den) in acc.items():
        if num:
            kept[m] = Fraction(num, den)
    ctx._bullet_cache[key] = (kept, dropped)
    if dropped:
        ctx._note_drop()
    return kept


def act_form(ctx: Context, gi: int, form: dict) -> dict:
    """Group twist on a {wedge: poly} map: coefficients via act_poly,
    each dp_i replaced by M[j][i] dp_j."""
    G = ctx.group
    if gi == G.identity_index:
        return dict(form)
    M = G.elements[gi]
    out: dict = {}
    for I, c in form.items():
        cc = G.act_poly(gi, c)
        parts = [((), Fraction(1))]
        for i_r in I:
            new_parts = []
            for (J, s) in parts:
                for j in range(ctx.dim):
                    if M[j][i_r]:
                        sg, K = wedge_merge(J, (j,))
                        if sg:
                            new_parts.append((K, s * M[j][i_r] * sg))
            parts = new_parts
        for (J, s) in parts:
            out[J] = p_add(out.get(J, {}), p_scale(cc, s))
    return {k: v for k, v in out.items() if v}


def bullet(ctx: Context, a: Element, b: Element) -> Element:
    """Full product: left group element twists the right coefficients and
    wedges, group parts multiply through the table, wedges merge with signs."""
    G = ctx.group
    out: Element = {}
    for (ga, Ia), ca in a.items():
        for (gb, Ib), cb in b.items():
            twisted = act_form(ctx, ga, {Ib: cb})
            for (Ib2, cb2) in twisted.items():
                sg, I = wedge_merge(Ia, Ib2)
                if not sg:
                    continue
                c = bullet_coeff(ctx, ca, cb2)
                if not c:
                    continue
                key = (G.mult_table[ga][gb], I)
                prev = p_add(out.get(key, {}), p_scale(c, sg))
                if prev:
                    out[key] = prev
                else:
                    out.pop(key, None)
    return e_clean(out)


# ---------------------------------------------------------------------------
# differential, homotopy, augmentation

def diff_d(ctx: Context, a: Element) -> Element:
    """d: differentiate coefficients in p, wedge the new dp_j on the left."""
    out: Element = {}
    for (gi, I), c in a.items():
        for j in range(ctx.dim):
            cj = p_diff_p(c, j)
            if not cj:
                continue
            sg, K = wedge_merge((j,), I)
            if not sg:
                continue
            out[(gi, K)] = p_add(out.get((gi, K), {}), p_scale(cj, sg))
    return e_clean(out)


def homotopy_h(ctx: Context, a: Element) -> Element:
    """Contracting homotopy, applied per group part.

    On a monomial of p-degree k under a wedge of length l >= 1: the full
    interior contraction, weight 1/(k+l), alternating signs over the wedge
    slots.  On form degree 0 it returns the p-independent part (the
    augmentation-section composite), which is what makes hd + dh = 1 - eps.sigma
    close on degree 0 and h.eps = identity on the kernel.
    """
    out: Element = {}
    for (gi, I), c in a.items():
        l = len(I)
        if l == 0:
            r = p_at_p0(c)
            if r:
                out[(gi, I)] = p_add(out.get((gi, I), {}), r)
            continue
        for r_idx in range(l):
            rest = I[:r_idx] + I[r_idx + 1:]
            sgn = (-1) ** r_idx
            p_var = p_pvar(ctx.dim, I[r_idx])
            for (xe, pe), coef in c.items():
                k = sum(pe)
                term = p_scale(p_mul({(xe, pe): coef}, p_var), Fraction(sgn, k + l))
                out[(gi, rest)] = p_add(out.get((gi, rest), {}), term)
    return e_clean(out)


def sigma_proj(ctx: Context, a: Element) -> Element:
    """eps.sigma: the p-independent, wedge-free part."""
    out: Element = {}
    for (gi, I), c in a.items():
        if len(I) == 0:
            r = p_at_p0(c)
            if r:
                out[(gi, I)] = r
    return out


# ---------------------------------------------------------------------------
# exponential kernels

def expand_group_kernel(ctx: Context, gi: int) -> Terms:
    """Taylor expansion, to the context cutoff, of the exponential kernel
    attached to a group element: exp(-<p, x - ^g x>) for the moyal kind,
    with the extra bilinear term pi(p, ^g p) in the exponent for weyl."""
    n = ctx.dim
    G = ctx.group
    M = G.elements[gi]
    Mi = G.inv_matrices[gi]
    expo: Terms = {}
    for i in range(n):
        gxi: Terms = {}
        for j in range(n):
            if Mi[i][j]:
                gxi = p_add(gxi, p_scale(p_xvar(n, j), Mi[i][j]))
        diff = p_add(p_xvar(n, i), p_scale(gxi, Fraction(-1)))
        expo = p_add(expo, p_scale(p_mul(p_pvar(n, i), diff), Fraction(-1)))
    if ctx.kind == "weyl":
        for i in range(n):
            for j in range(n):
                if ctx.pi[i][j]:
                    gpj: Terms = {}
                    for k in range(n):
                        if M[k][j]:
                            gpj = p_add(gpj, p_scale(p_pvar(n, k), M[k][j]))
                    expo = p_add(expo, p_scale(p_mul(p_pvar(n, i), gpj), ctx.pi[i][j]))
    out = p_const(n, 1)
    term = p_const(n, 1)
    k = 1
    while True:
        term, dropped = p_truncate(p_mul(term, expo), ctx.p_cutoff)
        if dropped:
            ctx._note_drop()
        if not term:
            break
        out = p_add(out, p_scale(term, Fraction(1, factorial(k))))
        k += 1
        if k > 2 * ctx.p_cutoff + 2:
            break
    kept, dropped = p_truncate(out, ctx.p_cutoff)
    if dropped:
        ctx._note_drop()
    return kept


# ---------------------------------------------------------------------------
# structural checks

def p_window(a: Element, w: int) -> Element:
    """Restriction to monomials of p-degree at most w."""
    out: Element = {}
    for key, terms in a.items():
        kept = {m: c for m, c in terms.items() if sum(m[1]) <= w}
        if kept:
            out[key] = kept
    return out


def check_invariant_central(ctx: Context, lam: Element) -> dict:
    """Report {is_A_invariant, is_central, is_d_closed} for a candidate seed.

    A-invariance: commutes with every x^i.  Centrality: additionally commutes
    with every p_i and with the group elements.  Closedness: d(lam) = 0.

    A kernel built at cutoff C is a p-jet to exactly degree C, so commutant
    residuals are certified on degrees <= C-1 only: the degree-C component of
    the commutant identity needs the absent degree-(C+1) jet term.  Genuine
    failures of exact elements always land in the window, because the probe
    commutators never raise p-degree.  Each verdict is recomputed with the
    product cutoff widened by two; a disagreement means the window cannot
    certify the answer and raises.
    """
    window = ctx.p_cutoff - 1

    def verdicts(c: Context) -> tuple:
        probes_x = [e_from_poly(c, p_xvar(c.dim, i)) for i in range(c.dim)]
        probes_p = [e_from_poly(c, p_pvar(c.dim, i)) for i in range(c.dim)]
        probes_g = [{(gi, ()): p_const(c.dim, 1)}
                    for gi in range(len(c.group.elements))]

        def commutes(q: Element) -> bool:
            r = e_sub(bullet(c, q, lam), bullet(c, lam, q))
            return e_is_zero(p_window(r, window))

        inv_ok = all(commutes(q) for q in probes_x)
        cen_ok = inv_ok and all(commutes(q) for q in probes_p + probes_g)
        d_ok = e_is_zero(diff_d(c, lam))
        return inv_ok, cen_ok, d_ok

    first = verdicts(ctx)
    second = verdicts(ctx.widened())
    if first != second:
        raise ValidationError(
            "truncation inconclusive: invariance/centrality verdicts changed "
            f"when the p-degree window was widened ({first} vs {second})")
    return {"is_A_invariant": first[0], "is_central": first[1], "is_d_closed": first[2]}


# ---------------------------------------------------------------------------
# serialization

def element_to_obj(ctx: Context, a: Element) -> list:
    """Deterministic JSON-friendly form: parts sorted by (group, wedge)."""
    parts = []
    for (gi, I) in sorted(a.keys()):
        parts.append({
            "group": gi,
            "wedge": [i + 1 for i in I],
            "coeff": serialize_poly(ctx.dim, a[(gi, I)]),
        })
    return parts


def element_from_obj(ctx: Context, obj: list) -> Element:
    out: Element = {}
    for part in obj:
        gi = int(part.get("group", ctx.group.identity_index))
        if not 0 <= gi < len(ctx.group.elements):
            raise ValidationError(f"group index {gi} out of range")
        I = tuple(int(i) - 1 for i in part.get("wedge", []))
        if list(I) != sorted(set(I)) or any(not 0 <= i < ctx.dim for i in I):
            raise ValidationError(f"bad wedge index tuple {part.get('wedge')}")
        c = parse_poly(part["coeff"], ctx.dim).terms
        if c:
            out[(gi, I)] = p_add(out.get((gi, I), {}), c)
    return e_clean(out)


def element_to_str(ctx: Context, a: Element) -> str:
    """Text form: '(coeff) dp[i,j]#g<k>' parts joined by ' + '; '0' if zero."""
    if not a:
        return "0"
    chunks = []
    for (gi, I) in sorted(a.keys()):
        c = serialize_poly(ctx.dim, a[(gi, I)])
        body = f"({c})"
        if I:
            body += " dp[" + ",".join(str(i + 1) for i in I) + "]"
        body += f"#g{gi}"
        chunks.append(body)
    return " + ".join(chunks)
