"""Exact arithmetic in A = F_q[t], K = F_q(t), and ideals of A.

Polynomials are immutable coefficient tuples in ascending degree with no
trailing zeros; rational functions are always stored with monic denominator
and coprime numerator/denominator, so equality is componentwise.  Ideals are
represented by their unique monic generator.
"""

from __future__ import annotations

from .ffield import Fq, field  # noqa: F401  (re-exported for convenience)


class Poly:
    """Element of A = F_q[t]."""

    __slots__ = ("f", "c", "_h")

    def __init__(self, f: Fq, coeffs):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.f = f
        self.c = tuple(c)
        self._h = None

    # --- constructors ---

    @staticmethod
    def zero(f: Fq) -> "Poly":
        return Poly(f, ())

    @staticmethod
    def one(f: Fq) -> "Poly":
        return Poly(f, (1,))

    @staticmethod
    def const(f: Fq, code: int) -> "Poly":
        return Poly(f, (code % f.q if code >= 0 else code % f.p,))

    @staticmethod
    def t(f: Fq) -> "Poly":
        return Poly(f, (0, 1))

    @staticmethod
    def monomial(f: Fq, deg: int, coeff: int = 1) -> "Poly":
        return Poly(f, (0,) * deg + (coeff,))

    # --- basic queries ---

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def lc(self) -> int:
        if not self.c:
            raise ValueError("leading coefficient of zero polynomial")
        return self.c[-1]

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def const_coeff(self) -> int:
        return self.c[0] if self.c else 0

    # --- ring operations ---

    def __add__(self, other: "Poly") -> "Poly":
        f = self.f
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        add = f.add
        for i, x in enumerate(b):
            out[i] = add(out[i], x)
        return Poly(f, out)

    def __neg__(self) -> "Poly":
        neg = self.f.neg
        return Poly(self.f, [neg(x) for x in self.c])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        f = self.f
        a, b = self.c, other.c
        if not a or not b:
            return Poly(f, ())
        out = [0] * (len(a) + len(b) - 1)
        mul, add = f.mul, f.add
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return Poly(f, out)

    def scale(self, code: int) -> "Poly":
        if code == 0:
            return Poly(self.f, ())
        mul = self.f.mul
        return Poly(self.f, [mul(code, x) for x in self.c])

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k."""
        if not self.c:
            return self
        return Poly(self.f, (0,) * k + self.c)

    def __divmod__(self, other: "Poly"):
        f = self.f
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        if len(self.c) < len(other.c):
            return Poly(f, ()), self
        rem = list(self.c)
        db = other.deg
        binv = f.inv(other.lc())
        quo = [0] * (len(rem) - db)
        mul, sub = f.mul, f.sub
        bc = other.c
        for i in range(len(rem) - 1, db - 1, -1):
            coef = rem[i]
            if coef:
                fq = mul(coef, binv)
                quo[i - db] = fq
                for j in range(db + 1):
                    rem[i - db + j] = sub(rem[i - db + j], mul(fq, bc[j]))
        return Poly(f, quo), Poly(f, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.one(self.f)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def powmod(self, n: int, modulus: "Poly") -> "Poly":
        r = Poly.one(self.f) % modulus
        b = self % modulus
        while n:
            if n & 1:
                r = (r * b) % modulus
            b = (b * b) % modulus
            n >>= 1
        return r

    def monic(self):
        """Return (m, u) with self = u * m, m monic (or (0, 1) for zero)."""
        if not self.c:
            return self, 1
        u = self.c[-1]
        if u == 1:
            return self, 1
        return self.scale(self.f.inv(u)), u

    def evaluate(self, code: int) -> int:
        f = self.f
        acc = 0
        for coef in reversed(self.c):
            acc = f.add(f.mul(acc, code), coef)
        return acc

    # --- comparisons and hashing ---

    def sort_key(self):
        """Total order key: by degree, then coefficients from the top down."""
        return (len(self.c), tuple(reversed(self.c)))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c and self.f == other.f

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.f, self.c))
        return self._h

    def __repr__(self):
        return format_poly(self)


# --- gcd machinery ---


def gcd_poly(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()[0] if not a.is_zero() else a


def gcd_bezout(a: Poly, b: Poly):
    """Extended Euclid: (g, u, v) with g = u*a + v*b, g monic.

    Deterministic: u is reduced modulo b/g, so the output is the unique
    minimal-degree cofactor pair.  Raises on (0, 0).
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("zero gcd")
    F = a.f
    if b.is_zero():
        g, unit = a.monic()
        return g, Poly.const(F, F.inv(unit)), Poly.zero(F)
    if a.is_zero():
        g, unit = b.monic()
        return g, Poly.zero(F), Poly.const(F, F.inv(unit))
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    g, unit = r0.monic()
    u = s0.scale(F.inv(unit))
    bg = b // g
    # reducing u mod b/g makes the cofactor pair unique of minimal degree
    u = u % bg if bg.deg > 0 else Poly.zero(F)
    v = (g - u * a) // b
    assert (u * a + v * b) == g
    return g, u, v


def lcm_poly(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.f)
    return ((a * b) // gcd_poly(a, b)).monic()[0]


# --- irreducibility and valuations ---


def _int_prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(fpoly: Poly) -> bool:
    """Irreducibility over F_q via the Frobenius criterion.

    f of degree n is irreducible iff t^(q^n) = t mod f and, for every prime
    l | n, gcd(t^(q^(n/l)) - t mod f, f) = 1.  Constants are rejected.
    """
    if fpoly.is_zero() or fpoly.deg < 1:
        raise ValueError("irreducibility is only defined for nonconstant polynomials")
    F = fpoly.f
    n = fpoly.deg
    tt = Poly.t(F)
    frob = tt.powmod(F.q ** n, fpoly)
    if frob != tt % fpoly:
        return False
    for ell in _int_prime_factors(n):
        h = tt.powmod(F.q ** (n // ell), fpoly) - tt
        if not gcd_poly(h % fpoly, fpoly).is_one():
            return False
    return True


def vp_poly(a: Poly, P: Poly) -> int | None:
    """Multiplicity of the prime P in a; None encodes +infinity (a = 0)."""
    if a.is_zero():
        return None
    n = 0
    while True:
        q, r = divmod(a, P)
        if not r.is_zero():
            return n
        a = q
        n += 1


class RatFunc:
    """Element of K = F_q(t), stored with monic denominator and gcd 1."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num: Poly, den: Poly | None = None):
        F = num.f
        if den is None:
            den = Poly.one(F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = Poly.zero(F), Poly.one(F)
        else:
            if not den.is_one():
                g = gcd_poly(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
            den, unit = den.monic()
            if unit != 1:
                num = num.scale(F.inv(unit))
        self.num = num
        self.den = den
        self._h = None

    # --- constructors ---

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    @staticmethod
    def zero(F: Fq) -> "RatFunc":
        return RatFunc(Poly.zero(F))

    @staticmethod
    def one(F: Fq) -> "RatFunc":
        return RatFunc(Poly.one(F))

    @staticmethod
    def const(F: Fq, code: int) -> "RatFunc":
        return RatFunc(Poly.const(F, code))

    @property
    def f(self) -> Fq:
        return self.num.f

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_integral(self) -> bool:
        return self.den.is_one()

    def as_poly(self) -> Poly:
        if not self.den.is_one():
            raise ValueError(f"{self!r} is not integral")
        return self.num

    # --- field operations ---

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num + other.num)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        r = RatFunc.__new__(RatFunc)
        r.num, r.den, r._h = -self.num, self.den, None
        return r

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.den.is_one() and other.den.is_one():
            r = RatFunc.__new__(RatFunc)
            r.num, r.den, r._h = self.num * other.num, self.den, None
            return r
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return RatFunc(self.num * other.den, self.den * other.num)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        return RatFunc(self.den, self.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def scale_code(self, code: int) -> "RatFunc":
        return RatFunc(self.num.scale(code), self.den)

    def vp(self, P: Poly) -> int | None:
        """P-adic valuation; None encodes +infinity."""
        if self.is_zero():
            return None
        vn = vp_poly(self.num, P)
        vd = vp_poly(self.den, P)
        return vn - vd

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc) and self.num == other.num and self.den == other.den
        )

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.num, self.den))
        return self._h

    def __repr__(self):
        if self.den.is_one():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def vp_rational(x: RatFunc, P: "IdealA") -> int | None:
    """Exact order of the prime P in x; None encodes +infinity (x = 0)."""
    if not P.is_prime():
        raise ValueError(f"{P!r} is not prime")
    return x.vp(P.gen)


class IdealA:
    """Nonzero ideal of A, represented by its monic generator."""

    __slots__ = ("gen", "_h", "_prime")

    def __init__(self, gen: Poly):
        if gen.is_zero():
            raise ValueError("the zero ideal is excluded")
        self.gen = gen.monic()[0]
        self._h = None
        self._prime = None

    @staticmethod
    def one(F: Fq) -> "IdealA":
        return IdealA(Poly.one(F))

    @property
    def f(self) -> Fq:
        return self.gen.f

    @property
    def degree(self) -> int:
        return self.gen.deg

    def is_one(self) -> bool:
        return self.gen.is_one()

    def is_prime(self) -> bool:
        if self._prime is None:
            self._prime = self.gen.deg >= 1 and is_irreducible(self.gen)
        return self._prime

    def __mul__(self, other: "IdealA") -> "IdealA":
        return IdealA(self.gen * other.gen)

    def divides(self, other: "IdealA") -> bool:
        return (other.gen % self.gen).is_zero()

    def quotient(self, other: "IdealA") -> "IdealA":
        """self / other, which must be exact."""
        q, r = divmod(self.gen, other.gen)
        if not r.is_zero():
            raise ValueError(f"{other!r} does not divide {self!r}")
        return IdealA(q)

    def gcd(self, other: "IdealA") -> "IdealA":
        return IdealA(gcd_poly(self.gen, other.gen))

    def exact_divides(self, other: "IdealA") -> bool:
        """d || n: d divides n with gcd(d, n/d) = 1."""
        if not self.divides(other):
            return False
        return gcd_poly(self.gen, other.gen // self.gen).is_one()

    def residues(self):
        """All residues mod the generator (q^deg polynomials)."""
        return list(polys_of_degree_below(self.f, self.gen.deg))

    def __eq__(self, other):
        return isinstance(other, IdealA) and self.gen == other.gen

    def __hash__(self):
        if self._h is None:
            self._h = hash(("ideal", self.gen))
        return self._h

    def __repr__(self):
        return f"({format_poly(self.gen)})"


# --- enumeration helpers ---


def polys_of_degree_below(F: Fq, n: int):
    """Iterate over all polynomials of degree < n (q^n of them), sorted."""
    if n <= 0:
        yield Poly.zero(F)
        return
    total = F.q ** n
    for code in range(total):
        c = []
        v = code
        for _ in range(n):
            c.append(v % F.q)
            v //= F.q
        yield Poly(F, c)


def monic_polys(F: Fq, deg: int):
    """Iterate over monic polynomials of exact degree deg, sorted."""
    for low in polys_of_degree_below(F, deg):
        yield Poly(F, low.c + (0,) * (deg - len(low.c)) + (1,))


def monic_divisors(n: Poly):
    """All monic divisors of a nonzero polynomial, by brute scan."""
    out = []
    for d in range(n.deg + 1):
        for cand in monic_polys(n.f, d):
            if (n % cand).is_zero():
                out.append(cand)
    return out


def exact_divisor_ideals(n: IdealA):
    """All ideals d with d || n, in sorted order."""
    out = []
    for cand in monic_divisors(n.gen):
        d = IdealA(cand)
        if d.exact_divides(n):
            out.append(d)
    return out


def first_irreducible(F: Fq, deg: int) -> Poly:
    """Deterministically first monic irreducible of given degree."""
    for cand in monic_polys(F, deg):
        if is_irreducible(cand):
            return cand
    raise ValueError(f"no irreducible of degree {deg}")


# --- literals ---


def format_poly(p: Poly) -> str:
    """Canonical literal: descending monomials, e.g. ``t^2+2*t+1``.

    Prime-power coefficients outside the prime subfield are parenthesized
    x-expressions, e.g. ``(x+1)*t^2+x``.
    """
    if p.is_zero():
        return "0"
    F = p.f
    parts = []
    for i in range(p.deg, -1, -1):
        c = p.c[i]
        if c == 0:
            continue
        cs = F.element_str(c)
        need_paren = ("+" in cs) or ("*" in cs)
        if i == 0:
            parts.append(f"({cs})" if need_paren else cs)
            continue
        ts = "t" if i == 1 else f"t^{i}"
        if cs == "1":
            parts.append(ts)
        elif need_paren:
            parts.append(f"({cs})*{ts}")
        else:
            parts.append(f"{cs}*{ts}")
    return "+".join(parts)


def parse_poly(F: Fq, text: str) -> Poly:
    """Parse a polynomial literal over F_q in the variable t.

    Accepts sums of monomials like ``t^2+2*t+1``; for prime-power q the
    coefficients may be x-expressions, parenthesized when they multiply a
    power of t: ``(x+1)*t^2+x*t+1``.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial literal")
    coeffs: dict[int, int] = {}
    i = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    n = len(s)
    while i <= n:
        # scan one term up to an unparenthesized +/-
        j = i
        depth = 0
        while j < n:
            ch = s[j]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch in "+-" and depth == 0:
                break
            j += 1
        term = s[i:j]
        if not term:
            raise ValueError(f"bad polynomial literal {text!r}")
        coeff_code, exp = _parse_term(F, term)
        if sign == -1:
            coeff_code = F.neg(coeff_code)
        coeffs[exp] = F.add(coeffs.get(exp, 0), coeff_code)
        if j >= n:
            break
        sign = -1 if s[j] == "-" else 1
        i = j + 1
    top = max(coeffs) if coeffs else 0
    return Poly(F, [coeffs.get(k, 0) for k in range(top + 1)])


def _parse_term(F: Fq, term: str):
    if term.startswith("("):
        close = term.index(")")
        coeff = F.parse_element(term[1:close])
        rest = term[close + 1:]
        if rest.startswith("*"):
            rest = rest[1:]
    elif "t" in term:
        k = term.index("t")
        head = term[:k].rstrip("*")
        coeff = F.parse_element(head) if head else 1
        rest = term[k:]
    else:
        return F.parse_element(term), 0
    if rest == "":
        exp = 0
    elif rest == "t":
        exp = 1
    elif rest.startswith("t^"):
        exp = int(rest[2:])
    else:
        raise ValueError(f"bad term {term!r}")
    return coeff, exp
