"""Exact Hecke / Atkin-Lehner operator calculus on Drinfeld modular forms.

Layers: finite fields and F_q[t] arithmetic (ffield, poly), matrix and coset
canonicalization (matrices), the formal operator calculus and its identity
catalog (operators, identities), cusp geometry (cusps), the truncated
u-series engine (carlitz, series, crosscheck), JSON schemas (serialize) and
the command line front end (cli).

All values are immutable after construction and all operations are pure;
the only shared state consists of idempotent memo caches, so everything is
safe to use from concurrent tasks.
"""

from .ffield import Fq, field
from .poly import (
    IdealA,
    Poly,
    RatFunc,
    format_poly,
    gcd_bezout,
    is_irreducible,
    parse_poly,
    vp_rational,
)
from .matrices import (
    ALMatrix,
    CosetKey,
    Mat2,
    al_representative,
    coset_key,
    coset_reps,
    hnf,
    p1_point,
    primitive_form,
)
from .operators import (
    CanonicalOperator,
    Operator,
    WeightType,
    canonicalize,
    op_embed,
    op_equal,
    op_Tp,
    op_trace,
    op_trace_twisted,
    op_Up,
    op_W,
)
from .identities import IDENTITY_NAMES, VerifyResult, verify_identity

__all__ = [
    "ALMatrix",
    "CanonicalOperator",
    "CosetKey",
    "Fq",
    "IDENTITY_NAMES",
    "IdealA",
    "Mat2",
    "Operator",
    "Poly",
    "RatFunc",
    "VerifyResult",
    "WeightType",
    "al_representative",
    "canonicalize",
    "coset_key",
    "coset_reps",
    "field",
    "format_poly",
    "gcd_bezout",
    "hnf",
    "is_irreducible",
    "op_embed",
    "op_equal",
    "op_Tp",
    "op_trace",
    "op_trace_twisted",
    "op_Up",
    "op_W",
    "p1_point",
    "parse_poly",
    "primitive_form",
    "verify_identity",
    "vp_rational",
]
