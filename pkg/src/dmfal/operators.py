"""Formal slash-operator calculus.

An Operator is a finite K-linear combination of slash terms acting on forms
that are invariant under Gamma_0(domain_level) with fixed weight and type.
Composition follows (O2 o O1) f = O2(O1 f), which on matrices concatenates
products inner*outer term by term.  Canonicalization folds every term onto
its canonical coset label at the domain level, giving normal forms on which
operator equality is exact table equality.
"""

from __future__ import annotations

import warnings

from .matrices import ALMatrix, Mat2, al_representative, coset_key, coset_reps
from .poly import IdealA, Poly, RatFunc


class WeightType:
    """Weight k and type m.  A warning is attached when k != 2m mod (q-1),
    where the space of forms is zero; the formal calculus stays defined."""

    __slots__ = ("k", "m")

    def __init__(self, k: int, m: int):
        if k < 1:
            raise ValueError("weight must be positive")
        self.k = k
        self.m = m

    def congruent(self, q: int) -> bool:
        return (self.k - 2 * self.m) % (q - 1) == 0 if q > 2 else True

    def __eq__(self, other):
        return isinstance(other, WeightType) and self.k == other.k and self.m == other.m

    def __hash__(self):
        return hash((self.k, self.m))

    def __repr__(self):
        return f"(k={self.k}, m={self.m})"


class Operator:
    """Finite formal sum of (coefficient, matrix) slash terms."""

    __slots__ = ("level", "wt", "terms")

    def __init__(self, level: IdealA, wt: WeightType, terms):
        terms = tuple(terms)
        for coeff, mat in terms:
            if mat.det.is_zero():
                raise ValueError("singular matrix in operator term")
        if not wt.congruent(level.f.q):
            warnings.warn(
                f"weight/type {wt!r} with k != 2m mod (q-1): the form space is zero",
                stacklevel=2,
            )
        self.level = level
        self.wt = wt
        self.terms = terms

    # --- linear structure ---

    def __add__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.level, self.wt, self.terms + other.terms)

    def __neg__(self) -> "Operator":
        F = self.level.f
        minus = -RatFunc.one(F)
        return Operator(self.level, self.wt, [(minus * c, M) for c, M in self.terms])

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def scale(self, c: RatFunc) -> "Operator":
        return Operator(self.level, self.wt, [(c * c0, M) for c0, M in self.terms])

    def __matmul__(self, inner: "Operator") -> "Operator":
        """self o inner: apply inner first.  Matrices multiply inner*outer."""
        if self.wt != inner.wt:
            raise ValueError("weight/type mismatch in composition")
        terms = [
            (ci * co, Mi * Mo)
            for ci, Mi in inner.terms
            for co, Mo in self.terms
        ]
        return Operator(inner.level, self.wt, terms)

    def with_domain(self, level: IdealA) -> "Operator":
        """Reinterpret on the coarser domain of level-d forms (d | level)."""
        if not level.divides(self.level):
            raise ValueError(f"{level!r} does not divide {self.level!r}")
        return Operator(level, self.wt, self.terms)

    def canonical(self) -> "CanonicalOperator":
        return canonicalize(self)

    def _check_compatible(self, other: "Operator"):
        if self.level != other.level:
            raise ValueError(f"domain level mismatch: {self.level!r} vs {other.level!r}")
        if self.wt != other.wt:
            raise ValueError(f"weight/type mismatch: {self.wt!r} vs {other.wt!r}")

    def __repr__(self):
        return f"Operator(level={self.level!r}, wt={self.wt!r}, {len(self.terms)} terms)"


class CanonicalOperator:
    """Normal form: finite map from coset keys to K-coefficients."""

    __slots__ = ("level", "wt", "table")

    def __init__(self, level: IdealA, wt: WeightType, table: dict):
        self.level = level
        self.wt = wt
        self.table = table

    def items_sorted(self):
        return sorted(self.table.items(), key=lambda kv: kv[0].sort_key())

    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other):
        return (
            isinstance(other, CanonicalOperator)
            and self.level == other.level
            and self.wt == other.wt
            and self.table == other.table
        )

    def diff(self, other: "CanonicalOperator"):
        """Mismatched entries as {key: (self_coeff, other_coeff)} with zeros
        for missing keys."""
        out = {}
        zero = RatFunc.zero(self.level.f)
        for key in set(self.table) | set(other.table):
            l = self.table.get(key, zero)
            r = other.table.get(key, zero)
            if l != r:
                out[key] = (l, r)
        return out

    def __repr__(self):
        return f"CanonicalOperator(level={self.level!r}, wt={self.wt!r}, {len(self.table)} cosets)"


def canonicalize(op: Operator) -> CanonicalOperator:
    """Fold terms onto canonical coset labels at the domain level, scaling
    coefficients by s^(2m-k), summing collisions, pruning zeros."""
    k, m = op.wt.k, op.wt.m
    table: dict = {}
    for coeff, mat in op.terms:
        key, adj = coset_key(mat, op.level, k, m)
        acc = table.get(key)
        val = coeff * adj if acc is None else acc + coeff * adj
        table[key] = val
    return CanonicalOperator(
        op.level, op.wt, {k_: v for k_, v in table.items() if not v.is_zero()}
    )


def op_equal(o1: Operator, o2: Operator) -> bool:
    """Exact equality of canonical tables; domain and weight must match."""
    o1._check_compatible(o2)
    return canonicalize(o1).table == canonicalize(o2).table


# --- constructors ---


def identity_op(level: IdealA, wt: WeightType) -> Operator:
    F = level.f
    return Operator(level, wt, [(RatFunc.one(F), Mat2.identity(F))])


def scalar_times_identity(c: RatFunc, level: IdealA, wt: WeightType) -> Operator:
    return Operator(level, wt, [(c, Mat2.identity(level.f))])


def zero_op(level: IdealA, wt: WeightType) -> Operator:
    return Operator(level, wt, [])


def op_Tp(p: IdealA, n: IdealA, wt: WeightType) -> Operator:
    """Hecke operator at a prime p not dividing the level n:
    P^(k-m) [ (P,0;0,1) + sum over deg Q < d of (1,Q;0,P) ]."""
    if not p.is_prime():
        raise ValueError(f"{p!r} is not prime")
    if p.divides(n):
        raise ValueError(f"{p!r} divides the level {n!r}; use op_Up")
    F = n.f
    P = p.gen
    coeff = RatFunc(P) ** (wt.k - wt.m)
    one, zero = Poly.one(F), Poly.zero(F)
    terms = [(coeff, Mat2.from_polys(P, zero, zero, one))]
    for Q in _residues(p):
        terms.append((coeff, Mat2.from_polys(one, Q, zero, P)))
    return Operator(n, wt, terms)


def op_Up(p: IdealA, n: IdealA, wt: WeightType) -> Operator:
    """Hecke operator at a prime p dividing the level n:
    P^(k-m) sum over deg Q < d of (1,Q;0,P)."""
    if not p.is_prime():
        raise ValueError(f"{p!r} is not prime")
    if not p.divides(n):
        raise ValueError(f"{p!r} does not divide the level {n!r}; use op_Tp")
    F = n.f
    P = p.gen
    coeff = RatFunc(P) ** (wt.k - wt.m)
    one, zero = Poly.one(F), Poly.zero(F)
    terms = [(coeff, Mat2.from_polys(one, Q, zero, P)) for Q in _residues(p)]
    return Operator(n, wt, terms)


def _residues(p: IdealA):
    from .poly import polys_of_degree_below

    return polys_of_degree_below(p.f, p.gen.deg)


def op_W(d: IdealA, n: IdealA, wt: WeightType, rep: ALMatrix | None = None) -> Operator:
    """Partial Atkin-Lehner involution for an exact divisor d of n."""
    if rep is None:
        rep = al_representative(d, n)
    else:
        if rep.d != d or rep.n != n:
            raise ValueError("representative does not match (d, n)")
    return Operator(n, wt, [(RatFunc.one(n.f), rep.mat)])


def op_embed(d_from: IdealA, n_to: IdealA, which: str, wt: WeightType) -> Operator:
    """Degeneracy maps from level d_from into level n_to.

    which = "D1" is the identity embedding; which = "Dquot" slashes by
    (nu/delta, 0; 0, 1).  For Dquot the quotient must be coprime to d_from.
    """
    if not d_from.divides(n_to):
        raise ValueError(f"{d_from!r} does not divide {n_to!r}")
    F = d_from.f
    if which == "D1":
        return identity_op(d_from, wt)
    if which != "Dquot":
        raise ValueError(f"unknown degeneracy map {which!r}")
    quot = n_to.quotient(d_from)
    if not d_from.gcd(quot).is_one():
        raise ValueError(f"{n_to!r}/{d_from!r} is not coprime to {d_from!r}")
    mat = Mat2.from_polys(quot.gen, Poly.zero(F), Poly.zero(F), Poly.one(F))
    return Operator(d_from, wt, [(RatFunc.one(F), mat)])


def op_trace(m: IdealA, p: IdealA, wt: WeightType, reps=None) -> Operator:
    """Trace from level m*p down to level m: sum over coset representatives
    of Gamma_0(mp) \\ Gamma_0(m) with coefficient 1."""
    if reps is None:
        reps = coset_reps(m, p)
    n = m * p
    one = RatFunc.one(m.f)
    return Operator(n, wt, [(one, g) for g in reps])


def op_trace_twisted(
    d: IdealA, m: IdealA, p: IdealA, wt: WeightType,
    rep: ALMatrix | None = None, reps=None,
) -> Operator:
    """d-twisted trace: op_trace o op_W(d, mp)."""
    n = m * p
    if not d.exact_divides(n):
        raise ValueError(f"{d!r} is not an exact divisor of {n!r}")
    return op_trace(m, p, wt, reps=reps) @ op_W(d, n, wt, rep=rep)
