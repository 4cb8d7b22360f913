"""Max-plus arithmetic, tropical polynomials and the dequantization semirings.

Tropical addition is ``max`` and tropical multiplication is ``+``.  The
additive identity is the distinguished value :data:`NEG_INF`; it is never
stored as a polynomial coefficient (an absent term plays that role).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Mapping, Sequence


class _NegInf:
    """Bottom element of the tropical semifield."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __reduce__(self):
        return (_NegInf, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("tropica.NEG_INF")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self


NEG_INF = _NegInf()


def trop_add(x, y):
    """Tropical sum ``max(x, y)``; ``NEG_INF`` is the identity."""
    if x is NEG_INF:
        return y
    if y is NEG_INF:
        return x
    return x if x >= y else y


def trop_mul(x, y):
    """Tropical product ``x + y``; ``NEG_INF`` absorbs."""
    if x is NEG_INF or y is NEG_INF:
        return NEG_INF
    return x + y


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings ("3/4", "0.25") and floats to Fraction.

    Floats are converted exactly (binary expansion), never rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not tropical coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Real):
        if not math.isfinite(value):
            raise ValueError(f"coefficient must be finite, got {value}")
        return Fraction(float(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class TropicalPolynomial:
    """``F(x) = max_j <j, x> + a_j`` over a finite nonempty support in Z^n."""

    terms: tuple  # sorted tuple of (exponent tuple, Fraction)
    dim: int

    def __init__(self, terms: Mapping[Sequence[int], object] | Iterable, dim: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[tuple[int, ...], Fraction] = {}
        for exp, coef in items:
            exp = (int(exp),) if isinstance(exp, (int,)) else tuple(int(e) for e in exp)
            coef = as_rational(coef)
            # Duplicate exponents are combined tropically.
            merged[exp] = max(merged[exp], coef) if exp in merged else coef
        if not merged:
            raise ValueError("a tropical polynomial needs at least one term")
        dims = {len(e) for e in merged}
        if len(dims) != 1:
            raise ValueError("exponent vectors have inconsistent lengths")
        n = dims.pop()
        if dim is not None and dim != n:
            raise ValueError(f"dim={dim} does not match exponent length {n}")
        if n < 1:
            raise ValueError("dimension must be at least 1")
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))
        object.__setattr__(self, "dim", n)

    @property
    def support(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.terms]

    @property
    def coefficients(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def __len__(self):
        return len(self.terms)

    def evaluate(self, x: Sequence) -> tuple[Fraction, frozenset]:
        """Exact value and the set of exponents attaining the maximum."""
        if len(x) != self.dim:
            raise ValueError(f"point has {len(x)} coordinates, polynomial has dim {self.dim}")
        xs = [as_rational(c) for c in x]
        best = None
        arg: list[tuple[int, ...]] = []
        for exp, coef in self.terms:
            val = coef + sum(e * c for e, c in zip(exp, xs))
            if best is None or val > best:
                best, arg = val, [exp]
            elif val == best:
                arg.append(exp)
        return best, frozenset(arg)

    def __call__(self, x: Sequence) -> Fraction:
        return self.evaluate(x)[0]

    def evaluate_float(self, x) -> float:
        """Float adapter used by the numeric modules; ``x`` may be an (..., n) array."""
        import numpy as np

        x = np.asarray(x, dtype=float)
        exps = np.array([e for e, _ in self.terms], dtype=float)
        coefs = np.array([float(c) for _, c in self.terms])
        return np.max(x @ exps.T + coefs, axis=-1)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "TropicalPolynomial":
        terms = [(tuple(t["exp"]), Fraction(str(t["coef"]))) for t in data["terms"]]
        return cls(terms, dim=int(data["dim"]))

    @classmethod
    def from_json(cls, text: str) -> "TropicalPolynomial":
        return cls.from_dict(json.loads(text))


def trop_eval(F: TropicalPolynomial, x: Sequence) -> tuple[Fraction, frozenset]:
    return F.evaluate(x)


def legendre_of_lift(v: Mapping) -> TropicalPolynomial:
    """Tropical polynomial whose coefficient at ``j`` is the lift value ``v(j)``."""
    if not v:
        raise ValueError("lift has empty support")
    return TropicalPolynomial(v)


def legendre_dual(F: TropicalPolynomial) -> dict[tuple[int, ...], Fraction]:
    """Values of the concave envelope of the coefficients at every lattice point
    of the Newton polytope.

    This is ``-F*(alpha)`` where ``F*`` is the convex conjugate of ``F``.
    Exact for n <= 2; for n >= 3 it falls back to a floating LP.
    """
    from . import lattice_polytope as lp

    coefs = F.coefficients
    if F.dim == 1:
        pts = sorted((e[0], c) for e, c in coefs.items())
        hull = lp.upper_hull_1d(pts)
        lo, hi = pts[0][0], pts[-1][0]
        return {(a,): lp.interpolate_hull_1d(hull, a) for a in range(lo, hi + 1)}
    if F.dim == 2:
        return lp.concave_envelope_2d(coefs)
    return _legendre_dual_lp(coefs)


def _legendre_dual_lp(coefs):
    import itertools

    import numpy as np
    from scipy.optimize import linprog

    exps = np.array(list(coefs), dtype=float)
    vals = np.array([float(c) for c in coefs.values()])
    lo = exps.min(axis=0).astype(int)
    hi = exps.max(axis=0).astype(int)
    k = len(vals)
    a_eq = np.vstack([exps.T, np.ones(k)])
    out = {}
    for alpha in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        res = linprog(-vals, A_eq=a_eq, b_eq=np.r_[alpha, 1.0], bounds=(0, None), method="highs")
        if res.status == 0:
            out[tuple(alpha)] = -res.fun
    return out


def _check_t(t: float) -> float:
    if not t > 1:
        raise ValueError(f"dequantization parameter must satisfy t > 1, got {t}")
    return float(t)


def deq_add(x: float, y: float, t: float) -> float:
    """``log_t(t**x + t**y)`` computed as ``max + log_t(1 + t**-|x-y|)``."""
    t = _check_t(t)
    hi, lo = (x, y) if x >= y else (y, x)
    if lo == -math.inf:
        return hi
    return hi + math.log1p(t ** (lo - hi)) / math.log(t)


def deq_sum(values: Iterable[float], t: float) -> float:
    """Iterated :func:`deq_add`, evaluated stably as a log-sum-exp in base t."""
    t = _check_t(t)
    vals = list(values)
    if not vals:
        return -math.inf
    m = max(vals)
    lt = math.log(t)
    return m + math.log(math.fsum(math.exp((v - m) * lt) for v in vals)) / lt


def maslov_add(z: float, w: float, h: float) -> float:
    """``(z**(1/h) + w**(1/h))**h`` for h > 0, ``max(z, w)`` at h = 0."""
    if z < 0 or w < 0:
        raise ValueError("Maslov addition is defined on non-negative reals")
    if h < 0:
        raise ValueError("h must be non-negative")
    hi, lo = max(z, w), min(z, w)
    if h == 0 or lo == 0:
        return hi
    return hi * (1.0 + (lo / hi) ** (1.0 / h)) ** h


def deq_eval(coeffs: Mapping, x: Sequence[float], t: float) -> float:
    """``phi_t(x)``: the t-deformed sum of ``alpha_j + <j, x>`` over the support.

    Sandwiched as ``F(x) <= phi_t(x) <= F(x) + log_t N`` with N the support size.
    """
    vals = []
    for exp, a in coeffs.items():
        exp = (exp,) if isinstance(exp, int) else exp
        vals.append(float(a) + sum(e * float(c) for e, c in zip(exp, x)))
    if len(vals) == 1:
        return vals[0]
    return deq_sum(vals, t)
