"""2x2 matrices over K, Gamma_0(n) cosets, and Atkin-Lehner representatives.

The canonical label of a left coset Gamma_0(n)*M (M nonsingular over K) is
computed in three steps: strip a K*-scalar to reach the unique primitive
integral matrix, take the Hermite normal form H of that (unique in the left
GL_2(A)-coset), and record the P^1(A/n) class of the bottom row of eps^{-1}
where eps*M0 = H.  Matrices in the same Gamma_0(n) coset get the same label,
distinct cosets get distinct labels.
"""

from __future__ import annotations

from .ffield import Fq
from .poly import (
    IdealA,
    Poly,
    RatFunc,
    gcd_bezout,
    gcd_poly,
    lcm_poly,
    polys_of_degree_below,
)


class Mat2:
    """2x2 matrix over K with nonzero determinant not enforced at build."""

    __slots__ = ("a", "b", "c", "d", "_det", "_h")

    def __init__(self, a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc):
        self.a, self.b, self.c, self.d = a, b, c, d
        self._det = None
        self._h = None

    @staticmethod
    def from_polys(a: Poly, b: Poly, c: Poly, d: Poly) -> "Mat2":
        return Mat2(RatFunc(a), RatFunc(b), RatFunc(c), RatFunc(d))

    @staticmethod
    def identity(F: Fq) -> "Mat2":
        one, zero = RatFunc.one(F), RatFunc.zero(F)
        return Mat2(one, zero, zero, one)

    @staticmethod
    def scalar(F: Fq, s: RatFunc) -> "Mat2":
        zero = RatFunc.zero(F)
        return Mat2(s, zero, zero, s)

    @property
    def f(self) -> Fq:
        return self.a.f

    @property
    def det(self) -> RatFunc:
        if self._det is None:
            self._det = self.a * self.d - self.b * self.c
        return self._det

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self.entries())

    def poly_entries(self):
        return tuple(x.as_poly() for x in self.entries())

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def scale(self, s: RatFunc) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def inverse(self) -> "Mat2":
        det = self.det
        if det.is_zero():
            raise ValueError("singular matrix")
        return Mat2(self.d / det, -(self.b / det), -(self.c / det), self.a / det)

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.entries() == other.entries()

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.entries())
        return self._h

    def __repr__(self):
        return f"[{self.a!r} {self.b!r}; {self.c!r} {self.d!r}]"


def is_in_gl2a(M: Mat2) -> bool:
    if not M.is_integral():
        return False
    det = M.det
    return det.is_integral() and not det.is_zero() and det.num.is_const()


def is_in_gamma0(M: Mat2, n: IdealA) -> bool:
    if not is_in_gl2a(M):
        return False
    return (M.c.as_poly() % n.gen).is_zero()


def primitive_form(M: Mat2):
    """Write M = s * M0 with M0 integral of monic content 1 and monic first
    nonzero entry (row-major); returns (M0, s) with s in K*."""
    if M.det.is_zero():
        raise ValueError("singular matrix")
    F = M.f
    den = Poly.one(F)
    for x in M.entries():
        den = lcm_poly(den, x.den)
    ints = [x.num * (den // x.den) for x in M.entries()]
    content = Poly.zero(F)
    for p in ints:
        content = gcd_poly(content, p) if not content.is_zero() else p.monic()[0]
    ints = [p // content for p in ints]
    unit = next(p for p in ints if not p.is_zero()).lc()
    if unit != 1:
        inv = F.inv(unit)
        ints = [p.scale(inv) for p in ints]
    s = RatFunc(content.scale(unit), den)
    return Mat2.from_polys(*ints), s


def hnf(M: Mat2):
    """Hermite normal form of an integral nonsingular matrix.

    Returns (H, eps) with eps in GL_2(A), eps*M = H, H upper triangular with
    monic diagonal and deg(upper-right) < deg(lower-right); H is the unique
    such representative of the left GL_2(A)-coset of M.
    """
    if M.det.is_zero():
        raise ValueError("singular matrix")
    if not M.is_integral():
        raise ValueError("hnf requires integral entries")
    F = M.f
    a, b, c, d = M.poly_entries()
    e11, e12, e21, e22 = Poly.one(F), Poly.zero(F), Poly.zero(F), Poly.one(F)

    def rowop(u, v, w, x):
        nonlocal a, b, c, d, e11, e12, e21, e22
        a, c = u * a + v * c, w * a + x * c
        b, d = u * b + v * d, w * b + x * d
        e11, e21 = u * e11 + v * e21, w * e11 + x * e21
        e12, e22 = u * e12 + v * e22, w * e12 + x * e22

    if not c.is_zero():
        g, u, v = gcd_bezout(a, c)
        rowop(u, v, -(c // g), a // g)
    if a.lc() != 1:
        inv = F.inv(a.lc())
        rowop(Poly.const(F, inv), Poly.zero(F), Poly.zero(F), Poly.one(F))
    if d.lc() != 1:
        inv = F.inv(d.lc())
        rowop(Poly.one(F), Poly.zero(F), Poly.zero(F), Poly.const(F, inv))
    q = b // d
    if not q.is_zero():
        rowop(Poly.one(F), -q, Poly.zero(F), Poly.one(F))
    H = Mat2.from_polys(a, b, c, d)
    eps = Mat2.from_polys(e11, e12, e21, e22)
    return H, eps


# --- P^1(A/n) ---


class P1Context:
    """Canonical representatives of P^1(A/n) under the (A/n)* action.

    With g = gcd(c, nu) (a unit-scaling invariant) the orbit of (c, d) has a
    unique member whose first coordinate is g itself; the residual stabilizer
    {u = 1 + (nu/g) s} is small, and minimizing the second coordinate over it
    pins the representative.  Results are memoized.
    """

    def __init__(self, n: IdealA):
        self.n = n
        self.nu = n.gen
        self._memo: dict = {}

    def canon(self, c: Poly, d: Poly):
        F = self.n.f
        nu = self.nu
        if nu.is_one():
            z = Poly.zero(F)
            return (z, z)
        c, d = c % nu, d % nu
        key = (c.c, d.c)
        got = self._memo.get(key)
        if got is not None:
            return got
        if not gcd_poly(gcd_poly(c, d), nu).is_one():
            raise ValueError("non-primitive row")
        g = gcd_poly(c, nu) if not c.is_zero() else nu
        if g == nu:
            # c = 0 mod nu, d a unit
            point = (Poly.zero(F), Poly.one(F))
        elif g.is_one():
            _, lam, _ = gcd_bezout(c, nu)
            point = (Poly.one(F), (lam * d) % nu)
        else:
            h = nu // g
            c1 = (c // g) % h
            _, lam0, _ = gcd_bezout(c1, h)
            lam = None
            for s in polys_of_degree_below(F, g.deg):
                cand = (lam0 + h * s) % nu
                if gcd_poly(cand, nu).is_one():
                    lam = cand
                    break
            d1 = (lam * d) % nu
            best = d1
            one = Poly.one(F)
            for s in polys_of_degree_below(F, g.deg):
                u = (one + h * s) % nu
                if not gcd_poly(u, nu).is_one():
                    continue
                cand = (d1 * u) % nu
                if cand.sort_key() < best.sort_key():
                    best = cand
            point = (g, best)
        self._memo[key] = point
        return point


_P1_CACHE: dict = {}


def p1_context(n: IdealA) -> P1Context:
    ctx = _P1_CACHE.get(n)
    if ctx is None:
        ctx = P1Context(n)
        _P1_CACHE[n] = ctx
    return ctx


def p1_point(c: Poly, d: Poly, n: IdealA):
    """Canonical representative of (c : d) in P^1(A/n)."""
    return p1_context(n).canon(c, d)


class CosetKey:
    """Canonical label of a left coset Gamma_0(n)*M."""

    __slots__ = ("hnf", "p1", "_h")

    def __init__(self, hnf_entries, p1_pair):
        self.hnf = hnf_entries  # 4 Polys, row-major
        self.p1 = p1_pair       # 2 Polys
        self._h = None

    def __eq__(self, other):
        return isinstance(other, CosetKey) and self.hnf == other.hnf and self.p1 == other.p1

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.hnf, self.p1))
        return self._h

    def sort_key(self):
        return tuple(p.sort_key() for p in self.hnf + self.p1)

    def __repr__(self):
        h = self.hnf
        return f"<hnf=[{h[0]!r} {h[1]!r}; {h[2]!r} {h[3]!r}] p1=({self.p1[0]!r}:{self.p1[1]!r})>"


_COSET_CACHE: dict = {}


def coset_key(M: Mat2, n: IdealA, k: int, m: int):
    """Canonical coset label of M at level n plus the scalar adjustment.

    Writes M = s * delta * M* with s in K*, delta in Gamma_0(n) and M* the
    canonical coset representative; returns (key(M*), s^(2m-k)).
    """
    cache_key = (n, M)
    got = _COSET_CACHE.get(cache_key)
    if got is None:
        M0, s = primitive_form(M)
        H, eps = hnf(M0)
        epsinv = eps.inverse()
        pt = p1_point(epsinv.c.as_poly(), epsinv.d.as_poly(), n)
        got = (CosetKey(H.poly_entries(), pt), s)
        _COSET_CACHE[cache_key] = got
    key, s = got
    return key, s ** (2 * m - k)


# --- Atkin-Lehner representatives ---


class ALMatrix:
    """Matrix (delta*a, b; nu*c, delta*d) with delta^2*a*d - nu*c*b = zeta*delta."""

    __slots__ = ("mat", "d", "n", "zeta")

    def __init__(self, mat: Mat2, d: IdealA, n: IdealA, zeta: int):
        if not d.exact_divides(n):
            raise ValueError(f"{d!r} is not an exact divisor of {n!r}")
        delta, nu = d.gen, n.gen
        if not mat.is_integral():
            raise ValueError("Atkin-Lehner matrix must be integral")
        a, b, c, dd = mat.poly_entries()
        if not (a % delta).is_zero() or not (c % nu).is_zero() or not (dd % delta).is_zero():
            raise ValueError("matrix does not have Atkin-Lehner shape")
        det = mat.det.as_poly()
        if det != delta.scale(zeta):
            raise ValueError("determinant is not zeta*delta")
        if zeta == 0:
            raise ValueError("zeta must be a unit")
        self.mat, self.d, self.n, self.zeta = mat, d, n, zeta

    def __repr__(self):
        return f"W[{self.d!r}||{self.n!r}]{self.mat!r}"


def al_representative(d: IdealA, n: IdealA) -> ALMatrix:
    """Deterministic Atkin-Lehner representative with zeta = 1.

    d = (1) gives the identity matrix and d = n the Fricke matrix
    (0, -1; nu, 0); otherwise Bezout on (delta, nu/delta) produces
    (delta, -v; nu, delta*u) with u*delta + v*(nu/delta) = 1.
    """
    if not d.exact_divides(n):
        raise ValueError(f"{d!r} is not an exact divisor of {n!r}")
    F = d.f
    delta, nu = d.gen, n.gen
    if d.is_one():
        return ALMatrix(Mat2.identity(F), d, n, 1)
    if d == n:
        mat = Mat2.from_polys(
            Poly.zero(F), -Poly.one(F), nu, Poly.zero(F)
        )
        return ALMatrix(mat, d, n, 1)
    comp = nu // delta
    g, u, v = gcd_bezout(delta, comp)
    assert g.is_one()
    mat = Mat2.from_polys(delta, -v, nu, delta * u)
    return ALMatrix(mat, d, n, 1)


def randomized_al_representative(d: IdealA, n: IdealA, rng) -> ALMatrix:
    """A random valid zeta-preserving representative gamma1 * W * gamma2."""
    W = al_representative(d, n)
    g1 = random_gamma0_det1(n, rng)
    g2 = random_gamma0_det1(n, rng)
    return ALMatrix(g1 * W.mat * g2, d, n, W.zeta)


def random_poly(F: Fq, max_deg: int, rng) -> Poly:
    return Poly(F, [rng.randrange(F.q) for _ in range(rng.randint(0, max_deg) + 1)])


def random_gamma0_det1(n: IdealA, rng) -> Mat2:
    """Random element of Gamma_0(n) with determinant exactly 1."""
    F = n.f
    M = Mat2.identity(F)
    for _ in range(rng.randint(1, 3)):
        x = random_poly(F, 2, rng)
        upper = Mat2.from_polys(Poly.one(F), x, Poly.zero(F), Poly.one(F))
        y = random_poly(F, 1, rng) * n.gen
        lower = Mat2.from_polys(Poly.one(F), Poly.zero(F), y, Poly.one(F))
        M = M * upper * lower
    return M


def random_gamma0(n: IdealA, rng) -> Mat2:
    """Random element of Gamma_0(n), arbitrary unit determinant."""
    M = random_gamma0_det1(n, rng)
    F = n.f
    z1 = rng.randrange(1, F.q)
    z2 = rng.randrange(1, F.q)
    units = Mat2.from_polys(
        Poly.const(F, z1), Poly.zero(F), Poly.zero(F), Poly.const(F, z2)
    )
    return units * M


def random_gl2a(F: Fq, rng) -> Mat2:
    return random_gamma0(IdealA.one(F), rng)


def coset_reps(m: IdealA, p: IdealA):
    """Complete irredundant representatives of Gamma_0(m*p) \\ Gamma_0(m).

    Exactly q^d + 1 matrices in Gamma_0(m): the lifts (1, 0; pi*u, 1) of the
    finite points of P^1(A/p) and a Bezout lift of (1 : 0).
    """
    if not p.is_prime():
        raise ValueError(f"{p!r} is not prime")
    if p.divides(m):
        raise ValueError(f"{p!r} divides {m!r}; representatives need (pi, P) = 1")
    F = m.f
    pi, P = m.gen, p.gen
    reps = []
    for u in polys_of_degree_below(F, P.deg):
        reps.append(Mat2.from_polys(Poly.one(F), Poly.zero(F), pi * u, Poly.one(F)))
    g, alpha, beta = gcd_bezout(pi, P)
    assert g.is_one()
    reps.append(Mat2.from_polys(Poly.one(F), -alpha, pi, beta * P))
    return reps
