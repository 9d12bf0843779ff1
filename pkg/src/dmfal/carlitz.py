"""Carlitz module data: brackets, factorials, Goss polynomials, torsion.

All data lives in K = F_q(t) or in the P-torsion extension K[lambda]/phi_P,
where phi_P(X) = C_P(X)/X; the transcendental period never appears as a
number, only as the formal grading tracked by the series layer.

C_a denotes the F_q-linear polynomial of the Carlitz module at a, with
C_t(X) = t X + X^q; it is stored as its q-power coefficient vector, so
composition is the twisted convolution (C_a o C_b)_k = sum a_i b_j^(q^i).
"""

from __future__ import annotations

from .ffield import Fq
from .poly import IdealA, Poly, RatFunc


class InternalConsistencyError(RuntimeError):
    """A cross-checked internal invariant failed (exit code 3 in the CLI)."""


class CarlitzContext:
    """Per-field cache of brackets [i], factorials D_i, lcms L_k, the
    linear coefficient vectors of C_a, and Goss polynomial tables."""

    def __init__(self, F: Fq):
        self.F = F
        self._brackets: dict[int, Poly] = {}
        self._D: dict[int, Poly] = {0: Poly.one(F)}
        self._L: dict[int, Poly] = {0: Poly.one(F)}
        self._carlitz: dict = {}
        self._goss: dict = {}

    def bracket(self, i: int) -> Poly:
        """[i] = t^(q^i) - t."""
        got = self._brackets.get(i)
        if got is None:
            got = Poly.monomial(self.F, self.F.q ** i) - Poly.t(self.F)
            self._brackets[i] = got
        return got

    def D(self, i: int) -> Poly:
        """D_0 = 1, D_i = [i] * D_{i-1}^q."""
        got = self._D.get(i)
        if got is None:
            got = self.bracket(i) * (self.D(i - 1) ** self.F.q)
            self._D[i] = got
        return got

    def L(self, k: int) -> Poly:
        """lcm of all monic polynomials of degree k; equals [1][2]...[k]."""
        got = self._L.get(k)
        if got is None:
            got = self.L(k - 1) * self.bracket(k)
            self._L[k] = got
        return got

    def carlitz_coeffs(self, a: Poly):
        """Coefficient vector (c_0, ..., c_D) of C_a(X) = sum c_j X^(q^j)."""
        if a.is_zero():
            raise ValueError("C_a is only defined for nonzero a")
        got = self._carlitz.get(a.c)
        if got is not None:
            return got
        F = self.F
        q = F.q
        # C_{t^i} by iterated composition with C_t = (t, 1)
        rows = [(Poly.one(F),)]
        for _ in range(a.deg):
            prev = rows[-1]
            new = [Poly.zero(F)] * (len(prev) + 1)
            # C_t o C_{t^(i-1)}: (f o g)_k = sum_{i+j=k} f_i * g_j^(q^i)
            for j, gj in enumerate(prev):
                new[j] = new[j] + Poly.t(F) * gj
                new[j + 1] = new[j + 1] + gj ** q
            rows.append(tuple(new))
        out = [Poly.zero(F) for _ in range(a.deg + 1)]
        for i, code in enumerate(a.c):
            if code:
                for j, cj in enumerate(rows[i]):
                    out[j] = out[j] + cj.scale(code)
        got = tuple(out)
        self._carlitz[a.c] = got
        return got

    def carlitz_poly(self, a: Poly):
        """C_a as a dense coefficient list over A (index = X-degree)."""
        coeffs = self.carlitz_coeffs(a)
        dense = [Poly.zero(self.F)] * (self.F.q ** a.deg + 1)
        for j, cj in enumerate(coeffs):
            dense[self.F.q ** j] = cj
        return dense

    # --- Goss polynomials ---

    def goss_table(self, alphas, n_max: int, max_deg: int, cache_key):
        """Goss polynomials G_1..G_n for the lattice with exponential
        sum alpha_i z^(q^i) (alpha_0 = 1), as coefficient dicts truncated to
        X-degree max_deg.

        Recursion: G_n = X * (delta_{n,1} + G_{n-1} + sum_{i>=1} alpha_i
        G_{n-q^i}), G_n = 0 for n <= 0; hence G_n = X^n for n <= q.
        """
        key = (cache_key, max_deg)
        table = self._goss.get(key)
        if table is None:
            table = [None, {1: RatFunc.one(self.F)}]  # G_0 unused, G_1 = X
            self._goss[key] = table
        q = self.F.q
        while len(table) <= n_max:
            n = len(table)
            acc: dict[int, RatFunc] = {}
            _acc_add(acc, table[n - 1], None)
            i = 1
            while q ** i < n:
                alpha = alphas(i)
                if alpha is not None and not alpha.is_zero():
                    _acc_add(acc, table[n - q ** i], alpha)
                i += 1
            shifted = {}
            for e, v in acc.items():
                if e + 1 <= max_deg:
                    shifted[e + 1] = v
            table.append(shifted)
        return table

    def goss_carlitz(self, n: int, max_deg: int | None = None):
        """Goss polynomial of the Carlitz period lattice (alpha_i = 1/D_i)."""
        if n < 1:
            raise ValueError("Goss polynomials are indexed by n >= 1")
        md = max_deg if max_deg is not None else n

        def alphas(i):
            return RatFunc(Poly.one(self.F), self.D(i))

        return self.goss_table(alphas, n, md, ("carlitz", md))[n]

    def goss_finite(self, P: Poly, n: int, max_deg: int | None = None):
        """Goss polynomial of the finite lattice of P-torsion values, whose
        exponential is C_P(X)/P (alpha_i = c_i / P)."""
        coeffs = self.carlitz_coeffs(P)
        md = max_deg if max_deg is not None else n

        def alphas(i):
            if i >= len(coeffs):
                return None
            return RatFunc(coeffs[i], P)

        return self.goss_table(alphas, n, md, ("finite", P.c, md))[n]

    def bc(self, m: int) -> RatFunc:
        """Coefficient of z^m in z / e_C(z), the Bernoulli-Carlitz style
        expansion giving period-normalized even zeta values."""
        # invert e_C(z)/z = 1 + sum_{i>=1} z^(q^i - 1) / D_i  mod z^(m+1)
        F = self.F
        q = F.q
        inv = [RatFunc.zero(F) for _ in range(m + 1)]
        inv[0] = RatFunc.one(F)
        body: dict[int, RatFunc] = {}
        i = 1
        while q ** i - 1 <= m:
            body[q ** i - 1] = RatFunc(Poly.one(F), self.D(i))
            i += 1
        for e in range(1, m + 1):
            acc = RatFunc.zero(F)
            for j, bj in body.items():
                if j <= e:
                    acc = acc + bj * inv[e - j]
            inv[e] = -acc
        return inv[m]


def _acc_add(acc: dict, poly_dict: dict | None, scale: RatFunc | None):
    if not poly_dict:
        return
    for e, v in poly_dict.items():
        w = v if scale is None else v * scale
        got = acc.get(e)
        acc[e] = w if got is None else got + w


_CARLITZ: dict = {}


def carlitz_context(F: Fq) -> CarlitzContext:
    ctx = _CARLITZ.get(F)
    if ctx is None:
        ctx = CarlitzContext(F)
        _CARLITZ[F] = ctx
    return ctx


class CycContext:
    """The P-torsion extension K[lambda] / phi_P(lambda), phi_P = C_P(X)/X.

    Elements are coefficient tuples of length q^d - 1 over K.  The formal
    period grade of lambda is +1 (and of the uniformizer -1); their pairing
    in every shift keeps public series at grade 0.
    """

    TORSION_GRADE = +1

    def __init__(self, P: IdealA):
        if not P.is_prime():
            raise ValueError(f"{P!r} is not prime")
        self.P = P
        self.F = P.f
        self.car = carlitz_context(self.F)
        q, d = self.F.q, P.gen.deg
        self.dim = q ** d - 1
        # phi coefficients: C_P(X)/X has coefficient c_j at X^(q^j - 1)
        phi = [RatFunc.zero(self.F) for _ in range(self.dim + 1)]
        for j, cj in enumerate(self.car.carlitz_coeffs(P.gen)):
            phi[q ** j - 1] = RatFunc(cj)
        self.phi = phi
        self._red_rows = self._reduction_rows()
        self._torsion: dict = {}

    def _reduction_rows(self):
        """X^(dim + j) mod phi for 0 <= j < dim - 1, as coefficient lists."""
        F = self.F
        dim = self.dim
        rows = []
        # X^dim = -(phi - X^dim) since phi is monic
        base = [-self.phi[i] for i in range(dim)]
        rows.append(base)
        for _ in range(dim - 2):
            prev = rows[-1]
            nxt = [RatFunc.zero(F)] + prev[:-1]
            top = prev[-1]
            if not top.is_zero():
                for i in range(dim):
                    nxt[i] = nxt[i] + top * base[i]
            rows.append(nxt)
        return rows

    def zero(self):
        return tuple(RatFunc.zero(self.F) for _ in range(self.dim))

    def one(self):
        return self.from_K(RatFunc.one(self.F))

    def from_K(self, x: RatFunc):
        out = [RatFunc.zero(self.F)] * self.dim
        out[0] = x
        return tuple(out)

    def lam(self):
        if self.dim == 1:
            # phi is linear, lambda = -phi(0) already lies in K
            return (-self.phi[0],)
        out = [RatFunc.zero(self.F)] * self.dim
        out[1] = RatFunc.one(self.F)
        return tuple(out)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, c: RatFunc):
        return tuple(x * c for x in a)

    def mul(self, a, b):
        F = self.F
        dim = self.dim
        conv = [RatFunc.zero(F)] * (2 * dim - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if not y.is_zero():
                    conv[i + j] = conv[i + j] + x * y
        out = conv[:dim]
        for j in range(dim, 2 * dim - 1):
            top = conv[j]
            if top.is_zero():
                continue
            row = self._red_rows[j - dim]
            for i in range(dim):
                if not row[i].is_zero():
                    out[i] = out[i] + top * row[i]
        return tuple(out)

    def is_in_K(self, a) -> bool:
        return all(x.is_zero() for x in a[1:])

    def k_part(self, a) -> RatFunc:
        if not self.is_in_K(a):
            raise InternalConsistencyError("Galois residue: lambda components survive")
        return a[0]

    def torsion_value(self, Q: Poly):
        """lambda_Q = C_Q(lambda); the torsion constant attached to a shift."""
        got = self._torsion.get(Q.c)
        if got is not None:
            return got
        if Q.is_zero():
            val = self.zero()
        else:
            lam = self.lam()
            val = self.zero()
            lam_qpow = lam  # lambda^(q^j)
            for j, cj in enumerate(self.car.carlitz_coeffs(Q)):
                if not cj.is_zero():
                    val = self.add(val, self.scale(lam_qpow, RatFunc(cj)))
                if j < Q.deg:
                    lam_qpow = self._qth_power(lam_qpow)
        self._torsion[Q.c] = val
        return val

    def _qth_power(self, a):
        result = self.one()
        base = a
        n = self.F.q
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def power_sums(self, j_max: int, corrupt: bool = False):
        """p_j = sum over residues Q mod P of lambda_Q^j, for 0 <= j < j_max.

        Each p_j is asserted to be Galois invariant (no lambda component)
        and is returned as an element of K.  The shift-sum over all q^d
        torsion values happens here.  `corrupt` flips one torsion constant,
        for negative controls.
        """
        from .poly import polys_of_degree_below

        torsions = [self.torsion_value(Q) for Q in polys_of_degree_below(self.F, self.P.gen.deg)]
        if corrupt and torsions:
            bad = list(torsions[-1])
            bad[0] = bad[0] + RatFunc.one(self.F)
            torsions[-1] = tuple(bad)
        sums = []
        powers = [self.one() for _ in torsions]
        for j in range(j_max):
            if j == 0:
                total = self.from_K(RatFunc.const(self.F, len(torsions) % self.F.p))
            else:
                total = self.zero()
                for idx in range(len(torsions)):
                    powers[idx] = self.mul(powers[idx], torsions[idx])
                    total = self.add(total, powers[idx])
            sums.append(self.k_part(total))
        return sums


_CYC: dict = {}


def cyc_context(P: IdealA) -> CycContext:
    ctx = _CYC.get(P)
    if ctx is None:
        ctx = CycContext(P)
        _CYC[P] = ctx
    return ctx
