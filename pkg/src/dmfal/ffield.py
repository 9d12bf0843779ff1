"""Arithmetic in small finite fields F_q with q = p^e.

Elements are integer codes in range(q).  The code of the residue
c_0 + c_1*x + ... + c_{e-1}*x^{e-1} is c_0 + c_1*p + ... + c_{e-1}*p^{e-1},
so codes 0..p-1 form the prime subfield and arithmetic on them is plain
mod-p arithmetic.  For e > 1 the caller must supply a monic irreducible
modulus over F_p in the generator symbol ``x``; there are no built-in
Conway tables.
"""

from __future__ import annotations


def is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _fp_polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _fp_polymod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        f = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for j in range(dm + 1):
            a[shift + j] = (a[shift + j] - f * m[j]) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _fp_modulus_irreducible(m, p):
    """Trial division of a monic F_p[x] polynomial by all lower-degree monics."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            div = []
            c = code
            for _ in range(d):
                div.append(c % p)
                c //= p
            div.append(1)
            if not _fp_polymod(m, div, p):
                return False
    return True


class Fq:
    """The field with q = p^e elements, with full lookup tables.

    Instances are interned through :func:`field`; arithmetic methods take
    and return integer codes.
    """

    __slots__ = ("p", "e", "q", "modulus", "_mul", "_add", "_inv", "_neg", "_hash")

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime_int(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError("e must be positive")
        if e == 1:
            if modulus is not None:
                raise ValueError("modulus only applies to prime-power fields")
            mod = None
        else:
            if modulus is None:
                raise ValueError(f"a degree-{e} irreducible modulus over F_{p} is required")
            mod = tuple(c % p for c in modulus)
            if len(mod) != e + 1 or mod[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if not _fp_modulus_irreducible(list(mod), p):
                raise ValueError("modulus is not irreducible over F_p")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = mod
        self._build_tables()
        self._hash = hash((p, e, mod))

    def _digits(self, code):
        out = []
        for _ in range(self.e):
            out.append(code % self.p)
            code //= self.p
        return out

    def _code(self, digits):
        c = 0
        for d in reversed(digits):
            c = c * self.p + (d % self.p)
        return c

    def _build_tables(self):
        q, p = self.q, self.p
        mul = [0] * (q * q)
        if self.e == 1:
            for a in range(q):
                row = a * q
                for b in range(q):
                    mul[row + b] = (a * b) % p
        else:
            m = list(self.modulus)
            digs = [self._digits(a) for a in range(q)]
            for a in range(q):
                da = digs[a]
                row = a * q
                for b in range(a, q):
                    prod = _fp_polymod(_fp_polymul(da, digs[b], p), m, p) if a and b else []
                    code = self._code(prod) if prod else 0
                    mul[row + b] = code
                    mul[b * q + a] = code
        self._mul = mul
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        self._inv = inv
        if self.e == 1:
            self._neg = [(-a) % p for a in range(q)]
            self._add = [(a + b) % p for a in range(q) for b in range(q)]
        else:
            self._neg = [self._code([(-d) % p for d in self._digits(a)]) for a in range(q)]
            add = [0] * (q * q)
            for a in range(q):
                da = self._digits(a)
                for b in range(q):
                    db = self._digits(b)
                    add[a * q + b] = self._code([(x + y) % p for x, y in zip(da, db)])
            self._add = add

    # --- element arithmetic on codes ---

    def add(self, a, b):
        return self._add[a * self.q + b]

    def sub(self, a, b):
        return self._add[a * self.q + self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a * self.q + b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("inverse of zero in F_q")
            return 0 if n else 1
        n %= self.q - 1
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    # --- element literals ---

    def element_str(self, code) -> str:
        """Literal for one element: an integer for prime fields, an
        x-expression such as ``x^2+x+1`` otherwise."""
        if self.e == 1 or code < self.p:
            return str(code)
        terms = []
        for i, d in reversed(list(enumerate(self._digits(code)))):
            if d == 0:
                continue
            if i == 0:
                terms.append(str(d))
            else:
                xs = "x" if i == 1 else f"x^{i}"
                terms.append(xs if d == 1 else f"{d}*{xs}")
        return "+".join(terms) if terms else "0"

    def parse_element(self, text: str) -> int:
        """Parse an element literal (integers, or x-expressions for e > 1)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty field element literal")
        digits = [0] * self.e
        sign = 1
        i = 0
        if s[0] in "+-":
            sign = -1 if s[0] == "-" else 1
            i = 1
        term = ""
        chunks = []
        while i <= len(s):
            ch = s[i] if i < len(s) else None
            if ch in ("+", "-", None):
                if not term:
                    raise ValueError(f"bad element literal {text!r}")
                chunks.append((sign, term))
                if ch is None:
                    break
                sign = -1 if ch == "-" else 1
                term = ""
            else:
                term += ch
            i += 1
        for sg, t in chunks:
            if "*" in t:
                c_s, x_s = t.split("*", 1)
                coeff = int(c_s)
            elif t.startswith("x"):
                coeff, x_s = 1, t
            else:
                coeff, x_s = int(t), ""
            if x_s == "":
                exp = 0
            elif x_s == "x":
                exp = 1
            elif x_s.startswith("x^"):
                exp = int(x_s[2:])
            else:
                raise ValueError(f"bad element literal {text!r}")
            if exp >= self.e:
                raise ValueError(f"generator power x^{exp} out of range for e = {self.e}")
            digits[exp] = (digits[exp] + sg * coeff) % self.p
        return self._code(digits)

    def __eq__(self, other):
        return (
            isinstance(other, Fq)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.q}(x:{''.join(map(str, self.modulus))})"


_FIELDS: dict = {}


def field(p: int, e: int = 1, modulus=None) -> Fq:
    """Interned field constructor; identical parameters give the same object."""
    key = (p, e, tuple(c % p for c in modulus) if modulus is not None else None)
    f = _FIELDS.get(key)
    if f is None:
        f = Fq(p, e, modulus)
        _FIELDS[key] = f
    return f
