"""Complex Laurent polynomials in two variables, vectorized over numpy arrays."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .. import lattice_polytope as lp


@dataclass(frozen=True)
class ComplexLaurentPolynomial:
    """``f(z, w) = sum a_jk z^j w^k`` with exact integer exponents."""

    terms: tuple  # sorted ((j, k), complex)

    def __init__(self, terms: Mapping | tuple):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, int], complex] = {}
        for exp, c in items:
            exp = (int(exp[0]), int(exp[1]))
            acc[exp] = acc.get(exp, 0) + complex(c)
        acc = {e: c for e, c in acc.items() if c != 0}
        if not acc:
            raise ValueError("zero polynomial")
        object.__setattr__(self, "terms", tuple(sorted(acc.items())))

    @property
    def coefficients(self) -> dict[tuple[int, int], complex]:
        return dict(self.terms)

    @property
    def support(self) -> list[tuple[int, int]]:
        return [e for e, _ in self.terms]

    def newton_polygon(self) -> lp.LatticePolygon:
        return lp.newton_polygon(self.support)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree_range(self, axis: int) -> tuple[int, int]:
        ks = [e[axis] for e in self.support]
        return min(ks), max(ks)

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for (j, k), c in self.terms:
            out = out + c * z**j * w**k
        return out

    def partial(self, axis: int) -> "ComplexLaurentPolynomial | None":
        """Derivative in z (axis 0) or w (axis 1); None if identically zero."""
        terms = {}
        for (j, k), c in self.terms:
            e = (j, k)[axis]
            if e:
                new = (j - 1, k) if axis == 0 else (j, k - 1)
                terms[new] = c * e
        return ComplexLaurentPolynomial(terms) if terms else None

    def euler(self, axis: int) -> "ComplexLaurentPolynomial | None":
        """``z df/dz`` (axis 0) or ``w df/dw`` (axis 1)."""
        terms = {e: c * e[axis] for e, c in self.terms if e[axis]}
        return ComplexLaurentPolynomial(terms) if terms else None

    def slice_coeffs(self, fixed, axis: int = 0) -> np.ndarray:
        """Coefficients, lowest power first, of the one-variable polynomial left
        after fixing variable ``axis`` to the values ``fixed``.

        The Laurent shift is removed: row ``i`` holds ``c_0 .. c_d`` with
        ``f = u**kmin * sum c_m u**m`` in the free variable ``u``.
        """
        fixed = np.atleast_1d(np.asarray(fixed, dtype=complex))
        free = 1 - axis
        kmin, kmax = self.degree_range(free)
        out = np.zeros((fixed.size, kmax - kmin + 1), dtype=complex)
        for exp, c in self.terms:
            out[:, exp[free] - kmin] += c * fixed ** exp[axis]
        return out

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"exp": list(e), "re": repr(c.real), "im": repr(c.imag)} for e, c in self.terms
            ]
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ComplexLaurentPolynomial":
        return cls({tuple(t["exp"]): complex(float(t["re"]), float(t["im"])) for t in data["terms"]})

    def swap(self) -> "ComplexLaurentPolynomial":
        return ComplexLaurentPolynomial({(k, j): c for (j, k), c in self.terms})
