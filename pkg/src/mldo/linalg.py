"""Exact linear algebra over Q and over generic fields.

Systems over Q are solved fraction-free: each row is scaled to integers and
Gauss-Jordan elimination proceeds by integer cross-multiplication with
content removal, so no intermediate Fractions are formed. Pivot columns are
taken in the given column order; free variables are set to zero, which makes
the returned particular solution deterministic.
"""

from fractions import Fraction
from math import gcd
from functools import reduce


def _lcm(a, b):
    return a * b // gcd(a, b)


def _integer_row(row):
    den = reduce(_lcm, (Fraction(x).denominator for x in row), 1)
    return [int(Fraction(x) * den) for x in row]


def _primitive(row):
    g = reduce(gcd, (abs(x) for x in row if x), 0)
    if g > 1:
        return [x // g for x in row]
    return row


def rref_integer(rows, ncols):
    """Fraction-free Gauss-Jordan on an augmented integer matrix.

    Returns ``(rows, pivots)`` where ``rows`` is in reduced echelon shape up
    to a nonzero integer scale per row and ``pivots`` lists pivot columns.
    Only the first ``ncols`` columns are eligible as pivots.
    """
    rows = [_primitive(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        if p[col] < 0:
            p = rows[r] = [-x for x in p]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = _primitive([p[col] * x - f * y for x, y in zip(rows[i], p)])
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_rational(matrix, rhs):
    """Solve ``matrix @ x = rhs`` over Q.

    Returns the solution with free variables set to zero, or ``None`` when the
    system is inconsistent.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [_integer_row(list(row) + [b]) for row, b in zip(matrix, rhs)]
    rows, pivots = rref_integer(aug, ncols)
    for row in rows[len(pivots):]:
        if row[-1]:
            return None
    x = [Fraction(0)] * ncols
    for row, col in zip(rows, pivots):
        x[col] = Fraction(row[-1], row[col])
    return x


def nullspace_rational(matrix, ncols=None):
    """Basis of the right kernel over Q, one vector per free column."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows, pivots = rref_integer([_integer_row(r) for r in matrix], ncols)
    rows = rows[: len(pivots)]
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, col in zip(rows, pivots):
            v[col] = Fraction(-row[free], row[col])
        basis.append(v)
    return basis


def rank_rational(matrix):
    if not matrix:
        return 0
    _, pivots = rref_integer([_integer_row(r) for r in matrix], len(matrix[0]))
    return len(pivots)


def first_dependency(vectors, zero, one):
    """Find the first vector that is a combination of its predecessors.

    ``vectors`` is a sequence of equal-length lists over a field whose
    elements support ``+ - *``, ``inverse()`` and truthiness. Returns
    ``(r, coeffs)`` with ``vectors[r] = sum(coeffs[s] * vectors[s])`` for
    ``s < r``, or ``None`` if all vectors are independent.
    """
    basis = []  # (pivot index, reduced vector, combination over originals)
    for r, v in enumerate(vectors):
        v = list(v)
        combo = [zero] * r + [one]
        for piv, bvec, bcombo in basis:
            f = v[piv]
            if f:
                v = [x - f * y for x, y in zip(v, bvec)]
                combo = [c - f * bc for c, bc in zip(combo, bcombo + [zero] * (len(combo) - len(bcombo)))]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            # combo . vectors == 0 with combo[r] == 1
            return r, [-c for c in combo[:r]]
        inv = v[piv].inverse()
        v = [x * inv for x in v]
        combo = [c * inv for c in combo]
        basis.append((piv, v, combo))
    return None
