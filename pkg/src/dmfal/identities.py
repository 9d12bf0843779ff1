"""Catalog of operator identities and their canonical-form verification.

Every identity is checked by building both sides as formal operators at the
correct domain level and comparing canonical coset tables exactly.  Violated
hypotheses yield a skip ("not-applicable") result, never a silent pass.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

from .matrices import al_representative
from .operators import (
    CanonicalOperator,
    Operator,
    WeightType,
    identity_op,
    op_embed,
    op_Tp,
    op_trace,
    op_trace_twisted,
    op_Up,
    op_W,
    scalar_times_identity,
    zero_op,
)
from .poly import (
    IdealA,
    Poly,
    RatFunc,
    exact_divisor_ideals,
    gcd_poly,
    is_irreducible,
    monic_polys,
)

IDENTITY_NAMES = (
    "involution-square",
    "al-product",
    "fricke-factorization",
    "lemma-DW",
    "thm-comm",
    "cor-comm",
    "eqTr",
    "twist",
    "ker-traces",
    "newform-commutator",
    "dirsum-aux-1",
    "dirsum-aux-2",
    "cross-level",
    "up-dp-kernel",
    "tp-decomposition",
)


@dataclass
class VerifyCheck:
    tag: str
    passed: bool
    lhs: CanonicalOperator
    rhs: CanonicalOperator
    diff: dict


@dataclass
class VerifyResult:
    identity: str
    params: dict
    status: str  # "pass" | "fail" | "skip"
    checks: list = dc_field(default_factory=list)
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def prime_power_factors(nu: Poly):
    """Prime-power factorization by trial division (desk-scale levels)."""
    out = []
    rest = nu.monic()[0]
    d = 1
    while rest.deg > 0:
        hit = None
        for cand in monic_polys(nu.f, d):
            if (rest % cand).is_zero():
                hit = cand
                break
        if hit is None:
            d += 1
            continue
        e = 0
        while (rest % hit).is_zero():
            rest = rest // hit
            e += 1
        out.append((hit, e))
    return out


class IdentityContext:
    """Bundle of level data, weight, and the AL-representative provider."""

    def __init__(self, pi: IdealA, P: IdealA, wt: WeightType, rep_provider=None):
        self.pi = pi
        self.P = P
        self.wt = wt
        self.mp = pi * P
        self.F = pi.f
        self._provider = rep_provider or al_representative

    def rep(self, d: IdealA, n: IdealA):
        return self._provider(d, n)

    def W(self, d: IdealA, n: IdealA) -> Operator:
        return op_W(d, n, self.wt, rep=self.rep(d, n))

    def Tr(self) -> Operator:
        return op_trace(self.pi, self.P, self.wt)

    def Tr_twist(self, d: IdealA, base: IdealA | None = None) -> Operator:
        m = self.pi if base is None else base
        n = m * self.P
        return op_trace_twisted(d, m, self.P, self.wt, rep=self.rep(d, n))

    def Up(self) -> Operator:
        return op_Up(self.P, self.mp, self.wt)

    def Pk(self, exponent: int) -> RatFunc:
        return RatFunc(self.P.gen) ** exponent


def _compare(ctx, tag, lhs: Operator, rhs: Operator) -> VerifyCheck:
    lc, rc = lhs.canonical(), rhs.canonical()
    if lc.level != rc.level or lc.wt != rc.wt:
        raise ValueError(f"sides of {tag} live at different domains")
    diff = lc.diff(rc)
    return VerifyCheck(tag, not diff, lc, rc, diff)


# --- individual identities; each returns a list of VerifyCheck ---


def _involution_square(ctx: IdentityContext, d: IdealA):
    n = ctx.mp
    rep = ctx.rep(d, n)
    W = op_W(d, n, ctx.wt, rep=rep)
    lhs = W @ W
    zd = RatFunc(d.gen.scale(rep.zeta))
    rhs = scalar_times_identity(zd ** (2 * ctx.wt.m - ctx.wt.k), n, ctx.wt)
    return [_compare(ctx, "involution-square", lhs, rhs)]


def _al_product(ctx: IdentityContext, n1: IdealA, n2: IdealA):
    n = ctx.mp
    W1, W2 = ctx.W(n1, n), ctx.W(n2, n)
    lhs = W2 @ W1  # f -> f | (W1 W2)
    g = gcd_poly(n1.gen, n2.gen)
    d12 = IdealA((n1.gen * n2.gen) // (g * g))
    rhs = ctx.W(d12, n).scale(RatFunc(g) ** (2 * ctx.wt.m - ctx.wt.k))
    return [_compare(ctx, "al-product", lhs, rhs)]


def _fricke_factorization(ctx: IdentityContext):
    n = ctx.mp
    acc = None
    for prime, e in prime_power_factors(n.gen):
        Wi = ctx.W(IdealA(prime ** e), n)
        acc = Wi if acc is None else (Wi @ acc)
    rhs = ctx.W(n, n)
    return [_compare(ctx, "fricke-factorization", acc, rhs)]


def _lemma_dw(ctx: IdentityContext, d: IdealA):
    n = ctx.mp
    quot = n.quotient(d)
    lhs = op_embed(d, n, "Dquot", ctx.wt)
    rhs = ctx.W(quot, n).with_domain(d)
    return [_compare(ctx, "lemma-DW", lhs, rhs)]


def _thm_comm(ctx: IdentityContext, d: IdealA):
    Tp = op_Tp(ctx.P, ctx.pi, ctx.wt)
    Wd = ctx.W(d, ctx.pi)
    return [_compare(ctx, "thm-comm", Wd @ Tp, Tp @ Wd)]


def _cor_comm(ctx: IdentityContext, d: IdealA):
    Up = ctx.Up()
    Wd = ctx.W(d, ctx.mp)
    return [_compare(ctx, "cor-comm", Wd @ Up, Up @ Wd)]


def _eqtr(ctx: IdentityContext):
    lhs = ctx.Tr()
    rhs = identity_op(ctx.mp, ctx.wt) + (ctx.Up() @ ctx.W(ctx.P, ctx.mp)).scale(
        ctx.Pk(-ctx.wt.m)
    )
    return [_compare(ctx, "eqTr", lhs, rhs)]


def _twist(ctx: IdentityContext, d: IdealA):
    lhs = ctx.Tr_twist(d)
    m_, k_ = ctx.wt.m, ctx.wt.k
    checks = []
    if not ctx.P.divides(d):
        rhs1 = ctx.W(d, ctx.mp) + (ctx.Up() @ ctx.W(d * ctx.P, ctx.mp)).scale(ctx.Pk(-m_))
        rhs2 = ctx.W(d, ctx.mp) + (
            ctx.W(d, ctx.mp) @ ctx.Up() @ ctx.W(ctx.P, ctx.mp)
        ).scale(ctx.Pk(-m_))
        checks.append(_compare(ctx, "twist:p-coprime", lhs, rhs1))
        checks.append(_compare(ctx, "twist2:p-coprime", lhs, rhs2))
    else:
        dp = d.quotient(ctx.P)
        rhs1 = ctx.W(d, ctx.mp) + (ctx.Up() @ ctx.W(dp, ctx.mp)).scale(ctx.Pk(m_ - k_))
        rhs2 = ctx.W(d, ctx.mp) + (ctx.W(dp, ctx.mp) @ ctx.Up()).scale(ctx.Pk(m_ - k_))
        checks.append(_compare(ctx, "twist:p-divides", lhs, rhs1))
        checks.append(_compare(ctx, "twist2:p-divides", lhs, rhs2))
    return checks


def _ker_traces(ctx: IdentityContext, d: IdealA):
    lhs = ctx.W(ctx.pi, ctx.mp) @ ctx.Tr_twist(d)
    e = 2 * ctx.wt.m - ctx.wt.k
    if not ctx.P.divides(d):
        scalar = RatFunc(d.gen) ** e
        rhs = ctx.Tr_twist(ctx.pi.quotient(d)).scale(scalar)
        tag = "ker-traces:p-coprime"
    else:
        scalar = RatFunc(d.gen, ctx.P.gen) ** e
        target = (ctx.pi * ctx.P * ctx.P).quotient(d)
        rhs = ctx.Tr_twist(target).scale(scalar)
        tag = "ker-traces:p-divides"
    return [_compare(ctx, tag, lhs, rhs)]


def _newform_commutator(ctx: IdentityContext):
    k_, m_ = ctx.wt.k, ctx.wt.m
    Wp = ctx.W(ctx.P, ctx.mp)
    Up = ctx.Up()
    lhs = (Wp @ Up) - (Up @ Wp)
    rhs = (Wp @ ctx.Tr_twist(ctx.P)).scale(ctx.Pk(k_ - m_)) - ctx.Tr().scale(ctx.Pk(m_))
    return [_compare(ctx, "newform-commutator", lhs, rhs)]


def _dirsum_aux_1(ctx: IdentityContext):
    lhs = ctx.Tr() @ op_embed(ctx.pi, ctx.mp, "Dquot", ctx.wt)
    rhs = op_Tp(ctx.P, ctx.pi, ctx.wt).scale(ctx.Pk(ctx.wt.m - ctx.wt.k))
    return [_compare(ctx, "dirsum-aux-1", lhs, rhs)]


def _dirsum_aux_2(ctx: IdentityContext):
    lhs = ctx.Tr_twist(ctx.P) @ op_embed(ctx.pi, ctx.mp, "Dquot", ctx.wt)
    rhs = scalar_times_identity(ctx.Pk(2 * ctx.wt.m - ctx.wt.k), ctx.pi, ctx.wt)
    return [_compare(ctx, "dirsum-aux-2", lhs, rhs)]


def _cross_level(ctx: IdentityContext):
    one = IdealA.one(ctx.F)
    wt = ctx.wt
    D1_into_mp = op_embed(ctx.P, ctx.mp, "D1", wt)
    Dm_into_mp = op_embed(ctx.P, ctx.mp, "Dquot", wt)
    D1_into_m = op_embed(one, ctx.pi, "D1", wt)
    D1_level_mp = op_embed(one, ctx.mp, "D1", wt)
    Tr_low = op_trace(one, ctx.P, wt)
    Trp_low = op_trace_twisted(one * ctx.P, one, ctx.P, wt, rep=ctx.rep(ctx.P, one * ctx.P))
    Wm = ctx.W(ctx.pi, ctx.mp)
    checks = [
        _compare(ctx, "cross-level:Tr-D1", ctx.Tr() @ D1_into_mp, D1_into_m @ Tr_low),
        _compare(
            ctx, "cross-level:Trp-D1", ctx.Tr_twist(ctx.P) @ D1_into_mp, D1_into_m @ Trp_low
        ),
        _compare(
            ctx, "cross-level:Tr-Dm", ctx.Tr() @ Dm_into_mp, Wm @ D1_level_mp @ Tr_low
        ),
        _compare(
            ctx,
            "cross-level:Trp-Dm",
            ctx.Tr_twist(ctx.P) @ Dm_into_mp,
            Wm @ D1_level_mp @ Trp_low,
        ),
    ]
    return checks


def _up_dp_kernel(ctx: IdentityContext):
    lhs = ctx.Up() @ op_embed(ctx.pi, ctx.mp, "Dquot", ctx.wt)
    return [_compare(ctx, "up-dp-kernel", lhs, zero_op(ctx.pi, ctx.wt))]


def _tp_decomposition(ctx: IdentityContext):
    lhs = op_Tp(ctx.P, ctx.pi, ctx.wt)
    rhs = op_embed(ctx.pi, ctx.mp, "Dquot", ctx.wt).scale(
        ctx.Pk(ctx.wt.k - ctx.wt.m)
    ) + ctx.Up() @ op_embed(ctx.pi, ctx.mp, "D1", ctx.wt)
    return [_compare(ctx, "tp-decomposition", lhs, rhs)]


_NEEDS_D = {
    "involution-square": "mp",
    "lemma-DW": "mp",
    "twist": "mp",
    "ker-traces": "mp",
    "thm-comm": "m",
    "cor-comm": "m",
}


def verify_identity(
    name: str,
    *,
    pi: IdealA,
    P: IdealA,
    k: int,
    m: int,
    d: IdealA | None = None,
    n1: IdealA | None = None,
    n2: IdealA | None = None,
    rep_provider=None,
) -> VerifyResult:
    """Check one catalog identity; returns pass/fail/skip with tables."""
    if name not in IDENTITY_NAMES:
        raise ValueError(f"unknown identity {name!r}")
    params = _param_dict(name, pi, P, k, m, d, n1, n2)

    def skip(reason):
        return VerifyResult(name, params, "skip", reason=reason)

    if not P.is_prime():
        return skip("hypothesis P prime violated")
    if not gcd_poly(pi.gen, P.gen).is_one():
        return skip("hypothesis (pi,P)=1 violated")
    wt = WeightType(k, m)
    mp = pi * P
    if name in _NEEDS_D:
        if d is None:
            return skip("identity requires an exact divisor d")
        scope = mp if _NEEDS_D[name] == "mp" else pi
        if not d.exact_divides(scope):
            return skip(f"hypothesis d || {'mp' if scope == mp else 'm'} violated")
    if name == "al-product":
        if n1 is None or n2 is None:
            return skip("identity requires exact divisors n1, n2")
        if not (n1.exact_divides(mp) and n2.exact_divides(mp)):
            return skip("hypothesis n_i || n violated")
    if name == "newform-commutator" and not wt.congruent(pi.f.q):
        return skip("registered only for k = 2m mod (q-1)")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ctx = IdentityContext(pi, P, wt, rep_provider)
        runner = {
            "involution-square": lambda: _involution_square(ctx, d),
            "al-product": lambda: _al_product(ctx, n1, n2),
            "fricke-factorization": lambda: _fricke_factorization(ctx),
            "lemma-DW": lambda: _lemma_dw(ctx, d),
            "thm-comm": lambda: _thm_comm(ctx, d),
            "cor-comm": lambda: _cor_comm(ctx, d),
            "eqTr": lambda: _eqtr(ctx),
            "twist": lambda: _twist(ctx, d),
            "ker-traces": lambda: _ker_traces(ctx, d),
            "newform-commutator": lambda: _newform_commutator(ctx),
            "dirsum-aux-1": lambda: _dirsum_aux_1(ctx),
            "dirsum-aux-2": lambda: _dirsum_aux_2(ctx),
            "cross-level": lambda: _cross_level(ctx),
            "up-dp-kernel": lambda: _up_dp_kernel(ctx),
            "tp-decomposition": lambda: _tp_decomposition(ctx),
        }[name]
        checks = runner()
    status = "pass" if all(c.passed for c in checks) else "fail"
    return VerifyResult(name, params, status, checks=checks)


def _param_dict(name, pi, P, k, m, d, n1, n2):
    F = pi.f
    out = {
        "q": F.q,
        "pi": repr(pi.gen),
        "P": repr(P.gen),
        "k": k,
        "m": m,
    }
    if F.e > 1:
        out["modulus"] = "".join(str(c) for c in F.modulus)
    if d is not None:
        out["d"] = repr(d.gen)
    if n1 is not None:
        out["n1"] = repr(n1.gen)
    if n2 is not None:
        out["n2"] = repr(n2.gen)
    return out


def identity_instances(name: str, pi: IdealA, P: IdealA):
    """Extra-parameter dictionaries enumerating d (or n1, n2) per identity."""
    mp = pi * P
    if name in _NEEDS_D:
        scope = mp if _NEEDS_D[name] == "mp" else pi
        return [{"d": d} for d in exact_divisor_ideals(scope)]
    if name == "al-product":
        divs = exact_divisor_ideals(mp)
        return [{"n1": a, "n2": b} for a in divs for b in divs]
    return [{}]
