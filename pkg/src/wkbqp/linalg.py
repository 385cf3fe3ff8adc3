"""Exact sparse linear algebra over Q and Q(i)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Mapping, Sequence

from .novikov import GaussQ, NovikovScalar, as_coefficient

# Non-constant Novikov scalars are evaluated at q = GENERIC_BASE**D, with D
# the common denominator of all exponents involved, so every power is
# integral.  Ranks there equal ranks over the field of fractions except at
# finitely many bases.
GENERIC_BASE = Fraction(7, 3)


class ScalarEvaluator:
    """Maps Novikov scalars to exact field elements.

    Constants map to themselves.  Other scalars need either ``q_value=1``
    (exact sum of coefficients) or the default generic evaluation.
    """

    def __init__(self, scalars: Iterable[NovikovScalar] = (), q_value=None, base: Fraction = GENERIC_BASE):
        self.q_value = q_value
        self.base = Fraction(base)
        self.used_generic = False
        self.den = 1
        for c in scalars:
            for e, _ in c.terms:
                self.den = lcm(self.den, e.denominator)

    def __call__(self, c: NovikovScalar):
        if c.is_constant():
            return c.constant_value()
        if self.q_value == 1:
            return c.specialize(1)
        if self.q_value is not None:
            raise ValueError("exact evaluation is only available at q = 1 or generically")
        self.used_generic = True
        total = Fraction(0)
        for e, coef in c.terms:
            k = e * self.den
            if k.denominator != 1:
                raise ValueError(f"exponent {e} was not registered with the evaluator")
            total = coef * self.base ** int(k) + total
        return as_coefficient(total)


class Echelon:
    """Incremental row echelon form with pivots at the smallest column.

    Rows are sparse ``{column: value}`` maps over an ordered column set.
    """

    def __init__(self):
        self.pivots: dict = {}

    def add(self, row: Mapping) -> Hashable | None:
        """Insert a row; return its new pivot column or ``None`` if dependent."""
        row = {k: v for k, v in row.items() if v != 0}
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                inv = 1 / row[col] if isinstance(row[col], GaussQ) else Fraction(1) / row[col]
                self.pivots[col] = {k: v * inv for k, v in row.items()}
                return col
            f = row[col]
            for k, v in piv.items():
                nv = row.get(k, 0) - f * v
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
        return None

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Iterable[Sequence]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add({j: Fraction(v) if not isinstance(v, GaussQ) else v for j, v in enumerate(r)})
    return ech.rank


def kernel_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Dimension of the right kernel of a square or rectangular matrix."""
    ncols = len(matrix[0]) if matrix else 0
    return ncols - rank(matrix)
