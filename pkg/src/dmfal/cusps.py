"""Cusps of X_0(n) and the Atkin-Lehner permutation action on them.

A cusp is a Gamma_0(n)-orbit on P^1(K); every orbit has a representative
(x : y) with x, y monic, y | nu and gcd(x, nu) = 1, and two such represent
the same cusp iff y = y' and zeta*x' = x mod gcd(y, nu/y) for a unit zeta.
"""

from __future__ import annotations

from .matrices import Mat2
from .poly import IdealA, Poly, gcd_bezout, gcd_poly, monic_divisors, monic_polys


class Cusp:
    __slots__ = ("x", "y", "_h")

    def __init__(self, x: Poly, y: Poly):
        self.x = x
        self.y = y
        self._h = None

    def __eq__(self, other):
        return isinstance(other, Cusp) and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.x, self.y))
        return self._h

    def sort_key(self):
        return (self.y.sort_key(), self.x.sort_key())

    def __repr__(self):
        return f"({self.x!r} : {self.y!r})"


def _canonical_x(x_class: Poly, g: Poly, n: IdealA) -> Poly:
    """Lexicographically least monic x with x = zeta*x_class mod g for some
    unit zeta and gcd(x, nu) = 1."""
    F = n.f
    targets = set()
    if g.is_one():
        targets.add(())
    else:
        for z in range(1, F.q):
            targets.add((x_class.scale(z) % g).c)
    for deg in range(0, n.gen.deg + g.deg + 2):
        for cand in monic_polys(F, deg):
            if (cand % g).c in targets and gcd_poly(cand, n.gen).is_one():
                return cand
    raise AssertionError("no canonical x found")  # unreachable for valid input


def enumerate_cusps(n: IdealA):
    """Complete irredundant cusp list for X_0(n), deterministically sorted.

    For each monic y | nu the x-classes run over units of A/gcd(y, nu/y)
    modulo scaling by F_q*; each class is represented by its canonical x.
    """
    nu = n.gen
    F = n.f
    out = []
    for y in monic_divisors(nu):
        g = gcd_poly(y, nu // y)
        if g.is_one():
            out.append(Cusp(_canonical_x(Poly.zero(F), g, n), y))
            continue
        seen = set()
        for r in _residues_mod(F, g):
            if not gcd_poly(r, g).is_one():
                continue
            orbit = frozenset((r.scale(z) % g).c for z in range(1, F.q))
            if orbit in seen:
                continue
            seen.add(orbit)
            out.append(Cusp(_canonical_x(r, g, n), y))
    out.sort(key=lambda c: c.sort_key())
    return out


def _residues_mod(F, g: Poly):
    from .poly import polys_of_degree_below

    if g.is_one():
        return [Poly.zero(F)]
    return list(polys_of_degree_below(F, g.deg))


def _coprime_pair(x: Poly, y: Poly):
    """Reduce an integral pair to a coprime one (projective scaling)."""
    if x.is_zero() and y.is_zero():
        raise ValueError("(0, 0) is not a projective point")
    g = gcd_poly(x, y)
    if not g.is_one() and not g.is_zero():
        x, y = x // g, y // g
    return x, y


def _complete_unimodular(x: Poly, y: Poly):
    """Matrix (x, b; y, d) of determinant 1 for a coprime pair."""
    g, u, v = gcd_bezout(x, y)
    assert g.is_one()
    # x*u + y*v = 1, so det (x, -v; y, u) = x*u + v*y = 1
    return Mat2.from_polys(x, -v, y, u)


def _equivalent(x: Poly, y: Poly, x2: Poly, y2: Poly, n: IdealA) -> bool:
    """Gamma_0(n)-equivalence of two coprime pairs.

    With unimodular completions M, M' the pairs are equivalent iff
    M' T M^{-1} lies in Gamma_0(n) for some upper-triangular unit matrix T;
    eliminating the free entry of T leaves a solvable linear congruence."""
    F = n.f
    nu = n.gen
    M = _complete_unimodular(x, y)
    M2 = _complete_unimodular(x2, y2)
    d1 = M.d.as_poly()
    d2 = M2.d.as_poly()
    modulus = gcd_poly((y2 * y) % nu, nu)
    for u0 in range(1, F.q):
        for v0 in range(1, F.q):
            val = (y2 * d1).scale(u0) - (d2 * y).scale(v0)
            if modulus.is_one() or (val % modulus).is_zero():
                return True
    return False


def cusp_canonical(x: Poly, y: Poly, n: IdealA) -> Cusp:
    """Canonical representative of the cusp containing (x : y)."""
    x, y = _coprime_pair(x, y)
    for c in enumerate_cusps(n):
        if _equivalent(x, y, c.x, c.y, n):
            return c
    raise AssertionError(f"({x!r} : {y!r}) matched no cusp")  # unreachable


def al_on_cusp(d: IdealA, n: IdealA, c: Cusp, rep=None) -> Cusp:
    """Image of a cusp under the Atkin-Lehner involution for d || n."""
    from .matrices import al_representative

    W = (rep or al_representative(d, n)).mat
    x2 = W.a.as_poly() * c.x + W.b.as_poly() * c.y
    y2 = W.c.as_poly() * c.x + W.d.as_poly() * c.y
    return cusp_canonical(x2, y2, n)


def al_cusp_permutation(d: IdealA, n: IdealA, cusps=None, rep=None):
    """The AL action as an index permutation on enumerate_cusps(n)."""
    if cusps is None:
        cusps = enumerate_cusps(n)
    index = {c: i for i, c in enumerate(cusps)}
    return [index[al_on_cusp(d, n, c, rep=rep)] for c in cusps]


def denominator_formula(d: IdealA, n: IdealA, c: Cusp) -> Poly:
    """Closed form for the y-part of the AL image: with n = n1*n2, n2 = d,
    the image denominator is (nu2/(y,nu2)) * (y,nu1)."""
    nu2 = d.gen
    nu1 = n.gen // nu2
    g2 = gcd_poly(c.y, nu2)
    g1 = gcd_poly(c.y, nu1)
    return (nu2 // g2) * g1


def permutation_cycles(perm) -> str:
    """Cycle notation, fixed points omitted; 'id' for the identity."""
    seen = [False] * len(perm)
    cycles = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        if len(cyc) > 1:
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) if cycles else "id"
