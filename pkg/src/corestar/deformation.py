"""Order-by-order construction of the associative deformation from a valid
degree-2 seed, via the contracting-homotopy recurrence:

    Psi_n = h Lambda_{n-1}
    Phi_n = -h( delta Psi_n + sum_{k=1}^{n-1} [mu_k, Psi_{n-k}] )
    mu_n  = -(1/n)( delta Phi_n + sum_{k=1}^{n-1} [mu_k, Phi_{n-k}] )
    Lambda_n = (1/n) sum_{k=1}^{n} Phi_k(Lambda_{n-k})

Orientation normalization: run on the seed as given, these lines produce the
Poisson bracket with the opposite sign at order 1.  The engine therefore
recurses on the reflected seed -lambda (equivalently, reverses the sign of
the formal parameter), which by the homogeneity mu_n[-lambda] =
(-1)^n mu_n[lambda] and the gauge normalization h(Psi) = h(Phi) = 0 is the
unique tower with mu_1 = the (+1/2) Poisson bracket.  Lambda[0] stores the
reflected seed; the user's seed is kept separately.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError, CostLimitExceeded
from .coresolution import (Context, Element, bullet, diff_d, homotopy_h,
                           form_degree, e_add, e_scale, e_sub, e_is_zero,
                           e_clean, a_part, check_invariant_central)
from .hochschild import (Cochain, cochain_from_element, cochain_add,
                         cochain_scale, cochain_h, multiplication_cochain,
                         gerstenhaber_bracket, hochschild_delta,
                         evaluate_split)

DEFAULT_ORDER_LIMIT_PLAIN = 4   # trivial group
DEFAULT_ORDER_LIMIT_SMASH = 2   # nontrivial group: kernels make orders expensive


def validate_seed(ctx: Context, lam: Element) -> dict:
    """Structural gate for the recurrence: form degree 2, central, d-closed.

    Returns the diagnostics report on success, raises otherwise.
    """
    if not lam:
        raise ValidationError("seed is zero")
    deg = form_degree(lam)
    if deg != 2:
        raise ValidationError(f"seed must have form degree 2, got {deg}")
    report = check_invariant_central(ctx, lam)
    if not report["is_central"]:
        raise ValidationError(
            "seed is not central (fails a commutant probe); "
            f"diagnostics: {report}")
    if not report["is_d_closed"]:
        raise ValidationError(f"seed is not d-closed; diagnostics: {report}")
    return report


@dataclass
class DeformationState:
    ctx: Context
    seed: Element                  # the seed as supplied
    order: int
    Lambda: dict = field(default_factory=dict)   # 0..N, elements of degree 2
    Psi: dict = field(default_factory=dict)      # 1..N, elements of degree 1
    Phi: dict = field(default_factory=dict)      # 1..N, arity-1 cochains
    mu: dict = field(default_factory=dict)       # 1..N, arity-2 cochains


def run_recurrence(ctx: Context, lam: Element, order: int,
                   skip_validation: bool = False,
                   allow_high_order: bool = False) -> DeformationState:
    """Populate the deformation tower to the requested order."""
    if order < 1:
        raise ValidationError("order must be >= 1")
    limit = (DEFAULT_ORDER_LIMIT_PLAIN if len(ctx.group.elements) == 1
             else DEFAULT_ORDER_LIMIT_SMASH)
    if order > limit:
        if not allow_high_order:
            raise CostLimitExceeded(
                f"order {order} exceeds the default limit {limit} for this "
                "configuration; pass the override to proceed")
        warnings.warn(
            f"order {order} exceeds the default cost limit {limit}; "
            "expect exponential running time", stacklevel=2)
    if not skip_validation:
        validate_seed(ctx, lam)

    state = DeformationState(ctx=ctx, seed=lam, order=order)
    state.Lambda[0] = e_scale(lam, Fraction(-1))   # orientation normalization
    minus_1 = Fraction(-1)
    for n in range(1, order + 1):
        state.Psi[n] = homotopy_h(ctx, state.Lambda[n - 1])
        acc = hochschild_delta(ctx, cochain_from_element(state.Psi[n], 1))
        for k in range(1, n):
            acc = cochain_add(ctx, acc, gerstenhaber_bracket(
                ctx, state.mu[k], cochain_from_element(state.Psi[n - k], 1)))
        state.Phi[n] = cochain_scale(ctx, cochain_h(ctx, acc), minus_1)
        acc2 = hochschild_delta(ctx, state.Phi[n])
        for k in range(1, n):
            acc2 = cochain_add(ctx, acc2, gerstenhaber_bracket(
                ctx, state.mu[k], state.Phi[n - k]))
        state.mu[n] = cochain_scale(ctx, acc2, Fraction(-1, n))
        lam_n: Element = {}
        for k in range(1, n + 1):
            lam_n = e_add(lam_n, evaluate_split(ctx, state.Phi[k],
                                                [state.Lambda[n - k]]))
        state.Lambda[n] = e_scale(lam_n, Fraction(1, n))
    return state


# ---------------------------------------------------------------------------
# star products

@dataclass(frozen=True)
class StarResult:
    coefficients: tuple   # c_0 .. c_N, elements of the degree-0 smash algebra
    truncated: bool


def check_in_kernel_algebra(a: Element) -> None:
    """Inputs to star must be wedge-free and p-independent (hence d-closed)."""
    for (gi, I), c in a.items():
        if I:
            raise ValidationError("star inputs must have form degree 0")
        if any(any(pe) for (_xe, pe) in c):
            raise ValidationError("star inputs must not depend on the p variables")


def star(state: DeformationState, a: Element, b: Element) -> StarResult:
    """Coefficient list of the deformed product on two kernel-algebra
    elements: c_0 = a • b, c_n = mu_n(a, b) projected to its p-independent
    part (the values are p-independent; the projection strips jet junk that
    truncation parks strictly above the cutoff)."""
    check_in_kernel_algebra(a)
    check_in_kernel_algebra(b)
    ctx = state.ctx
    coeffs = [bullet(ctx, a, b)]
    for n in range(1, state.order + 1):
        coeffs.append(a_part(evaluate_split(ctx, state.mu[n], [a, b])))
    return StarResult(tuple(coeffs), ctx.truncated)


# ---------------------------------------------------------------------------
# residuals

def mc_residual(state: DeformationState, n: int, probes: list) -> list:
    """Evaluate delta(mu_n) + 1/2 sum_{k=1}^{n-1} [mu_k, mu_{n-k}] on each
    probe triple; all residuals are expected to vanish."""
    ctx = state.ctx
    res = hochschild_delta(ctx, state.mu[n])
    for k in range(1, n):
        res = cochain_add(ctx, res, cochain_scale(
            ctx, gerstenhaber_bracket(ctx, state.mu[k], state.mu[n - k]),
            Fraction(1, 2)))
    return [evaluate_split(ctx, res, list(triple)) for triple in probes]


def deformed_closedness(state: DeformationState, n: int, probes: list) -> list:
    """Order-n component of the deformed closedness residual on the Lambda
    tower.  Returns [arity-0 part] + [arity-1 part on each probe]; all zero
    when the tower is consistent.

    The arity-0 part is d(Lambda_n); the arity-1 part is
    delta(Lambda_n) + sum_{k=1}^{n} [mu_k, Lambda_{n-k}] as a cochain.
    """
    ctx = state.ctx
    out = [diff_d(ctx, state.Lambda[n])]
    arity1 = hochschild_delta(ctx, cochain_from_element(state.Lambda[n], 2))
    for k in range(1, n + 1):
        arity1 = cochain_add(ctx, arity1, gerstenhaber_bracket(
            ctx, state.mu[k], cochain_from_element(state.Lambda[n - k], 2)))
    for probe in probes:
        out.append(evaluate_split(ctx, arity1, [probe]))
    return out


# ---------------------------------------------------------------------------
# independent compositions for cross-checks

def mu1_composite(ctx: Context, lam0: Element) -> Cochain:
    """Hand-rolled delta h delta h applied to a degree-2 element, bypassing
    the recurrence loop.  Equals mu_1 of the tower built on the same element."""
    h_lam = homotopy_h(ctx, lam0)
    phi = cochain_scale(ctx, cochain_h(
        ctx, hochschild_delta(ctx, cochain_from_element(h_lam, 1))), Fraction(-1))
    return cochain_scale(ctx, hochschild_delta(ctx, phi), Fraction(-1))


def mu2_composite(ctx: Context, lam0: Element) -> Cochain:
    """The closed-form order-2 coefficient

        1/2 ( [dhd(h lam), h d(h lam)] + d h [dhd(h lam), h lam]
              - d h d h [h lam, lam] )

    written with d = hochschild delta and h = the homotopy postcomposition,
    all brackets Gerstenhaber.  Independent of the recurrence loop."""
    lam_co = cochain_from_element(lam0, 2)
    h_lam = cochain_h(ctx, lam_co)                       # h lam, arity 0
    dh_lam = hochschild_delta(ctx, h_lam)                # delta h lam, arity 1
    hdh_lam = cochain_h(ctx, dh_lam)                     # h delta h lam
    dhdh_lam = hochschild_delta(ctx, hdh_lam)            # delta h delta h lam = mu_1

    t1 = gerstenhaber_bracket(ctx, dhdh_lam, hdh_lam)
    t2 = hochschild_delta(ctx, cochain_h(
        ctx, gerstenhaber_bracket(ctx, dhdh_lam, h_lam)))
    t3 = hochschild_delta(ctx, cochain_h(ctx, hochschild_delta(ctx, cochain_h(
        ctx, gerstenhaber_bracket(ctx, hdh_lam, lam_co)))))
    total = cochain_add(ctx, cochain_add(ctx, t1, t2),
                        cochain_scale(ctx, t3, Fraction(-1)))
    return cochain_scale(ctx, total, Fraction(1, 2))
