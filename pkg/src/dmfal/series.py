"""Truncated u-expansion engine.

A USeries is a finite map exponent -> K-coefficient together with an
explicit precision (the series is known modulo u^prec) and a formal period
grade.  Coefficients are exact elements of K; the transcendental period is
never evaluated.  Grades add under multiplication and must agree under
addition; every public result is asserted to sit at grade 0, the grade of
period-normalized forms.  Inside the shift-sum backend the torsion constants
and the uniformizer carry the opposite formal grades +1 and -1, which is why
shift sums land back at grade 0.
"""

from __future__ import annotations

from math import comb

from .carlitz import InternalConsistencyError, carlitz_context, cyc_context
from .ffield import Fq
from .operators import WeightType
from .poly import IdealA, Poly, RatFunc


class USeries:
    __slots__ = ("F", "coeffs", "prec", "grade")

    def __init__(self, F: Fq, coeffs: dict, prec: int, grade: int = 0):
        if prec < 1:
            raise ValueError("precision must be at least 1")
        self.F = F
        self.coeffs = {e: c for e, c in coeffs.items() if e < prec and not c.is_zero()}
        self.prec = prec
        self.grade = grade

    @property
    def ring(self) -> str:
        return "K"

    # --- constructors ---

    @staticmethod
    def zero(F: Fq, prec: int) -> "USeries":
        return USeries(F, {}, prec)

    @staticmethod
    def constant(F: Fq, c: RatFunc, prec: int) -> "USeries":
        return USeries(F, {0: c}, prec)

    @staticmethod
    def u(F: Fq, prec: int) -> "USeries":
        return USeries(F, {1: RatFunc.one(F)}, prec)

    # --- queries ---

    def order(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def coeff(self, e: int) -> RatFunc:
        return self.coeffs.get(e, RatFunc.zero(self.F))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coeffs.values())

    def _ord_or_prec(self) -> int:
        o = self.order()
        return self.prec if o is None else o

    # --- arithmetic ---

    def truncate(self, prec: int) -> "USeries":
        return USeries(self.F, self.coeffs, min(prec, self.prec), self.grade)

    def __add__(self, other: "USeries") -> "USeries":
        if self.grade != other.grade:
            raise ValueError("period grade mismatch in addition")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            got = out.get(e)
            out[e] = c if got is None else got + c
        return USeries(self.F, out, min(self.prec, other.prec), self.grade)

    def __neg__(self) -> "USeries":
        return USeries(self.F, {e: -c for e, c in self.coeffs.items()}, self.prec, self.grade)

    def __sub__(self, other: "USeries") -> "USeries":
        return self + (-other)

    def scale(self, c: RatFunc) -> "USeries":
        return USeries(self.F, {e: c * v for e, v in self.coeffs.items()}, self.prec, self.grade)

    def __mul__(self, other: "USeries") -> "USeries":
        prec = min(self.prec + other._ord_or_prec(), other.prec + self._ord_or_prec())
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= prec:
                    continue
                prod = c1 * c2
                got = out.get(e)
                out[e] = prod if got is None else got + prod
        return USeries(self.F, out, prec, self.grade + other.grade)

    def __pow__(self, n: int) -> "USeries":
        if n < 0:
            raise ValueError("negative series power")
        r = USeries.constant(self.F, RatFunc.one(self.F), self.prec)
        r.grade = 0
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def frobenius_power(self, pr: int) -> "USeries":
        """The pr-th power for pr a power of the characteristic:
        coefficientwise Frobenius with exponent dilation, exact."""
        p = self.F.p
        m = pr
        while m > 1:
            if m % p:
                raise ValueError("frobenius_power needs a power of p")
            m //= p
        out = {e * pr: c ** pr for e, c in self.coeffs.items()}
        return USeries(self.F, out, self.prec * pr, self.grade * pr)

    def substitute(self, g: "USeries") -> "USeries":
        """Compose self(g) for a series g of order >= 1."""
        og = g.order()
        if og is None or og < 1:
            raise ValueError("substitution needs a series of positive order")
        prec = min(self.prec * og, g.prec)
        out = USeries.zero(self.F, prec)
        out.grade = self.grade
        power = USeries.constant(self.F, RatFunc.one(self.F), prec)
        top = max(self.coeffs) if self.coeffs else 0
        for e in range(top + 1):
            if e:
                power = (power * g).truncate(prec)
                power.grade = 0
            c = self.coeffs.get(e)
            if c is not None:
                out = out + power.scale(c)
        return out

    def vp(self, P: IdealA) -> int | None:
        """Coefficientwise P-adic valuation, None for the zero series."""
        if not P.is_prime():
            raise ValueError(f"{P!r} is not prime")
        vals = [c.vp(P.gen) for c in self.coeffs.values()]
        return min(vals) if vals else None

    def same_to_prec(self, other: "USeries", prec: int | None = None) -> bool:
        prec = min(self.prec, other.prec) if prec is None else prec
        for e in range(prec):
            if self.coeff(e) != other.coeff(e):
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, USeries)
            and self.prec == other.prec
            and self.grade == other.grade
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        terms = [f"({c!r})*u^{e}" for e, c in sorted(self.coeffs.items())[:6]]
        more = "+..." if len(self.coeffs) > 6 else ""
        return f"<{'+'.join(terms) or '0'}{more} mod u^{self.prec}>"


def series_vp(f: USeries, P: IdealA) -> int | None:
    return f.vp(P)


def congruent_mod(f: USeries, g: USeries, P: IdealA, r: int) -> bool:
    """True iff vp(f - g) >= r up to the common precision."""
    v = (f - g).vp(P)
    return v is None or v >= r


def u_of_az(a: Poly, N: int) -> USeries:
    """Expansion of u(az) = 1 / C_a(1/u) as a series of order q^deg(a)."""
    if a.is_zero():
        raise ValueError("u(az) needs a nonzero a")
    F = a.f
    ctx = carlitz_context(F)
    q = F.q
    coeffs = ctx.carlitz_coeffs(a)
    D = a.deg
    qD = q ** D
    # C_a(1/u) = u^(-qD) * V(u) with V(u) = sum_j c_j u^(qD - q^j)
    V: dict = {}
    for j, cj in enumerate(coeffs):
        if not cj.is_zero():
            V[qD - q ** j] = RatFunc(cj)
    # invert V as a power series mod u^N (V(0) = lc(a) is a unit)
    inv = [RatFunc.zero(F) for _ in range(N)]
    v0 = V.pop(qD - q ** D)
    v0inv = v0.inverse()
    inv[0] = v0inv
    for e in range(1, N):
        acc = RatFunc.zero(F)
        for j, vj in V.items():
            if j <= e:
                acc = acc + vj * inv[e - j]
        inv[e] = -(acc * v0inv)
    out = {qD + e: c for e, c in enumerate(inv) if not c.is_zero()}
    return USeries(F, out, N, 0)


def eval_poly_at_series(poly_dict: dict, g: USeries, prec: int) -> USeries:
    """Evaluate a polynomial (dict degree -> RatFunc) at a series of
    positive order, truncated to the given precision."""
    F = g.F
    out = USeries.zero(F, prec)
    power = USeries.constant(F, RatFunc.one(F), prec)
    top = max(poly_dict) if poly_dict else 0
    for e in range(top + 1):
        if e:
            power = (power * g).truncate(prec)
        c = poly_dict.get(e)
        if c is not None and not c.is_zero():
            out = out + power.scale(c)
    return out


# --- Hecke-type operators on series ---


def series_Dp(f: USeries, wt: WeightType, P: IdealA) -> USeries:
    """Slash by (P, 0; 0, 1): P^m times the substitution u -> u(Pz)."""
    sub = f.substitute(u_of_az(P.gen, f.prec))
    return sub.scale(RatFunc(P.gen) ** wt.m)


def series_Up(
    f: USeries,
    wt: WeightType,
    P: IdealA,
    backend: str = "goss",
    corrupt: bool = False,
) -> USeries:
    """The level-lowering Hecke sum: with the chosen normalization the
    slash prefactors cancel and U_P f = sum over residues Q mod P of
    f((z + Q)/P).  Output precision ceil(prec / q^d).

    backend "cyclotomic" realizes the q^d shifts through Carlitz P-torsion
    values and recompresses; "goss" maps each monomial u^n through the Goss
    polynomial table of the P-torsion lattice; "both" runs the two and
    insists they agree.
    """
    if backend == "both":
        a = series_Up(f, wt, P, "cyclotomic", corrupt=corrupt)
        b = series_Up(f, wt, P, "goss")
        if a.coeffs != b.coeffs or a.prec != b.prec:
            raise InternalConsistencyError("shift-sum and Goss backends disagree")
        return b
    F = f.F
    d = P.gen.deg
    qd = F.q ** d
    N = f.prec
    out_prec = -(-N // qd)
    if backend == "goss":
        ctx = carlitz_context(F)
        Ppow = [RatFunc(P.gen) ** e for e in range(out_prec)]
        out: dict = {}
        for n, a_n in f.coeffs.items():
            if n == 0:
                continue  # q^d * a_0 = 0 in characteristic p
            G = ctx.goss_finite(P.gen, n, max_deg=out_prec - 1)
            for e, g_ne in G.items():
                v = a_n * g_ne * Ppow[e]
                got = out.get(e)
                out[e] = v if got is None else got + v
        return USeries(F, out, out_prec, f.grade)
    if backend != "cyclotomic":
        raise ValueError(f"unknown backend {backend!r}")
    cyc = cyc_context(P)
    psums = cyc.power_sums(N, corrupt=corrupt)
    p = F.p
    shifted: dict = {}
    for e in range(1, N):
        acc = RatFunc.zero(F)
        for n, a_n in f.coeffs.items():
            if n == 0 or n > e:
                continue
            j = e - n
            c = comb(e - 1, j) % p
            if c == 0:
                continue
            if j & 1:
                c = (p - c) % p
                if c == 0:
                    continue
            acc = acc + (a_n * psums[j]).scale_code(c)
        if not acc.is_zero():
            shifted[e] = acc
    return _recompress(F, shifted, N, P, f.grade)


def _recompress(F: Fq, s_coeffs: dict, N: int, P: IdealA, grade: int) -> USeries:
    """Rewrite a shift sum F(s), s = u(z/P), as a series in u = u(z);
    a nonzero residual is an internal inconsistency."""
    qd = F.q ** P.gen.deg
    out_prec = -(-N // qd)
    U = u_of_az(P.gen, N)
    R = dict(s_coeffs)
    out: dict = {}
    power = USeries.constant(F, RatFunc.one(F), N)
    for i in range(out_prec):
        if i:
            power = (power * U).truncate(N)
        h = R.get(i * qd)
        if h is None or h.is_zero():
            continue
        out[i] = h
        for e, c in power.coeffs.items():
            got = R.get(e)
            val = -(h * c) if got is None else got - h * c
            R[e] = val
    if any(not c.is_zero() for e, c in R.items() if e < N):
        raise InternalConsistencyError("recompression residual is nonzero")
    return USeries(F, out, out_prec, grade)


def series_Tp(f: USeries, wt: WeightType, P: IdealA, backend: str = "goss") -> USeries:
    """T_P f = P^(k-m) * (f slash (P,0;0,1)) + U_P f."""
    lead = series_Dp(f, wt, P).scale(RatFunc(P.gen) ** (wt.k - wt.m))
    return lead + series_Up(f, wt, P, backend=backend)


# --- named forms ---


class FormModel:
    """A named form: level, weight/type, expansion at infinity, and any
    known Atkin-Lehner images (global data not derivable from exp_inf)."""

    __slots__ = ("name", "level", "wt", "exp_inf", "al_images")

    def __init__(self, name, level: IdealA, wt: WeightType, exp_inf: USeries, al_images=None):
        self.name = name
        self.level = level
        self.wt = wt
        self.exp_inf = exp_inf
        self.al_images = dict(al_images or {})

    def al_image(self, d: IdealA) -> USeries:
        got = self.al_images.get(d)
        if got is None:
            raise ValueError(f"insufficient model: no AL image for {d!r} on {self.name}")
        return got

    def __repr__(self):
        return f"FormModel({self.name}, level={self.level!r}, wt={self.wt!r})"


def eisenstein_gk(F: Fq, k: int, N: int) -> FormModel:
    """The weight q^k - 1, type 0 Eisenstein series of level (1).

    Expansion: the constant term comes from the period-normalized even zeta
    value (coefficient of z^(q^k - 1) in z/e_C(z)) and the tail sums the
    Goss polynomial of the period lattice over u(az) for monic a; the lcm
    prefactor makes every coefficient land in A.
    """
    if k < 1:
        raise ValueError("k must be positive")
    ctx = carlitz_context(F)
    q = F.q
    m = q ** k - 1
    sign = 1 if (k % 2 == 0 or F.p == 2) else F.p - 1  # (-1)^k in F_p
    Lk = RatFunc(ctx.L(k)).scale_code(sign)
    total = USeries.constant(F, Lk * ctx.bc(m), N)
    from .poly import monic_polys

    G = ctx.goss_carlitz(m, max_deg=m)
    deg_a = 0
    while q ** deg_a < N:
        for a in monic_polys(F, deg_a):
            tail = eval_poly_at_series(G, u_of_az(a, N), N)
            total = total + tail.scale(Lk)
        deg_a += 1
    level = IdealA.one(F)
    return FormModel(f"g{k}", level, WeightType(m, 0), total)


def embed_level(g: FormModel, m: IdealA, P: IdealA) -> FormModel:
    """View a form of level dividing m at level m*P (the identity
    degeneracy map), attaching its AL image at P, which is the other
    degeneracy image."""
    if not g.level.divides(m):
        raise ValueError(f"{g.name} does not live at a level dividing {m!r}")
    dp = series_Dp(g.exp_inf, g.wt, P)
    return FormModel(
        f"D1({g.name})", m * P, g.wt, g.exp_inf, {P: dp}
    )


def embed_dp(g: FormModel, m: IdealA, P: IdealA) -> FormModel:
    """The (P,0;0,1)-degeneracy image at level m*P; its AL image at P is
    the involution scalar P^(2m-k) times the original expansion."""
    if not g.level.divides(m):
        raise ValueError(f"{g.name} does not live at a level dividing {m!r}")
    scalar = RatFunc(P.gen) ** (2 * g.wt.m - g.wt.k)
    return FormModel(
        f"Dp({g.name})",
        m * P,
        g.wt,
        series_Dp(g.exp_inf, g.wt, P),
        {P: g.exp_inf.scale(scalar)},
    )


def mul_models(f1: FormModel, f2: FormModel) -> FormModel:
    """Product form: weights and types add; AL images multiply where both
    factors carry them."""
    if f1.level != f2.level:
        raise ValueError("product needs equal levels")
    wt = WeightType(f1.wt.k + f2.wt.k, f1.wt.m + f2.wt.m)
    al = {}
    for d in f1.al_images:
        if d in f2.al_images:
            al[d] = f1.al_images[d] * f2.al_images[d]
    return FormModel(
        f"{f1.name}*{f2.name}", f1.level, wt, f1.exp_inf * f2.exp_inf, al
    )


def al_apply(fm: FormModel, d: IdealA, zeta: int = 1) -> FormModel:
    """The model of W_d(f): expansion is the stored image, and the image of
    the image follows from the involution scalar law."""
    img = fm.al_image(d)
    scalar = RatFunc(d.gen.scale(zeta)) ** (2 * fm.wt.m - fm.wt.k)
    return FormModel(f"W({fm.name})", fm.level, fm.wt, img, {d: fm.exp_inf.scale(scalar)})


def check_involution_law(fm: FormModel, img_model: FormModel, d: IdealA, zeta: int = 1) -> bool:
    """With both directions present (a model for f and one for f|W_d whose
    expansion matches the stored image), the composed images must realize
    (f|W)|W = (zeta delta)^(2m-k) f to the common precision."""
    scalar = RatFunc(d.gen.scale(zeta)) ** (2 * fm.wt.m - fm.wt.k)
    if not fm.al_image(d).same_to_prec(img_model.exp_inf):
        return False
    return img_model.al_image(d).same_to_prec(fm.exp_inf.scale(scalar))


def vincent_g(n: int, r: int, pi: IdealA, P: IdealA, prec: int) -> FormModel:
    """The p-adic approximation form: g_(0) = P^w g_d^n - P^(2w) (g_d^n|W_P)
    with w = n(q^d - 1), raised to the p^r-th power, at level pi*P.

    Both the expansion and the W_P-image are carried; the image follows from
    the involution scalar law and Frobenius multiplicativity.
    """
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    F = pi.f
    d = P.gen.deg
    w = n * (F.q ** d - 1)
    g_d = eisenstein_gk(F, d, prec)
    gdn = g_d.exp_inf ** n
    wt0 = WeightType(w, 0)
    dp = series_Dp(gdn, wt0, P)  # g_d^n | W_P at level pi*P
    Pw = RatFunc(P.gen) ** w
    g0 = gdn.scale(Pw) - dp.scale(Pw * Pw)
    g0_w = dp.scale(Pw) - gdn.scale(Pw)  # apply W_P, using (f|W)|W = P^(-w) f
    pr = F.p ** r
    return FormModel(
        f"g({r})", pi * P, WeightType(pr * w, 0),
        g0.frobenius_power(pr),
        {P: g0_w.frobenius_power(pr)},
    )


def trace_via_eqTr(fm: FormModel, P: IdealA, backend: str = "goss") -> USeries:
    """u-expansion at infinity of the trace down one prime level:
    Tr(f) = f + P^(-m) U_P(f | W_P); needs the stored AL image."""
    fw = fm.al_image(P)
    up = series_Up(fw, fm.wt, P, backend=backend)
    return fm.exp_inf.truncate(up.prec) + up.scale(RatFunc(P.gen) ** (-fm.wt.m))


def random_integral_series(F: Fq, prec: int, rng, max_deg: int = 3, p_mult: Poly | None = None) -> USeries:
    """Random series with coefficients in A, for property tests."""
    coeffs = {}
    for e in range(prec):
        if rng.random() < 0.3:
            continue
        c = Poly(F, [rng.randrange(F.q) for _ in range(rng.randint(0, max_deg) + 1)])
        if p_mult is not None and rng.random() < 0.3:
            c = c * p_mult
        if not c.is_zero():
            coeffs[e] = RatFunc(c)
    return USeries(F, coeffs, prec)
