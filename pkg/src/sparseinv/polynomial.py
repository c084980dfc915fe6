"""Univariate polynomials over Q and polynomial matrices in the symbol z."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlin import RatMatrix, kernel, rank, to_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Poly:
    """Polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def z(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    @staticmethod
    def _coerce(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other) -> "Poly":
        other = Poly._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in itertools.zip_longest(a, b, fillvalue=_ZERO)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-Poly._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = Poly._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = Poly._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [_ZERO] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quo), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "z" if k == 1 else f"z^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is 0."""
    while b:
        a, b = b, a % b
    return a.monic()


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots, ascending."""
    if p.degree < 1:
        return []
    den = 1
    for c in p.coeffs:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    roots = set()
    while ints and ints[0] == 0:
        roots.add(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(roots)
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(k: int) -> list[int]:
        return [d for d in range(1, k + 1) if k % d == 0]

    q = Poly(ints)
    for num in divisors(a0):
        for dn in divisors(an):
            for cand in (Fraction(num, dn), Fraction(-num, dn)):
                if q(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


class PolyMatrix:
    """Dense matrix whose entries are polynomials in z."""

    __slots__ = ("entries", "nrows", "ncols")

    def __init__(self, entries: Sequence[Sequence[Poly]], ncols: int | None = None):
        rows = tuple(tuple(Poly._coerce(e) for e in r) for r in entries)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged polynomial matrix")
        self.entries = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def pencil(cls, M0: RatMatrix, M1: RatMatrix) -> "PolyMatrix":
        """``M0 + z M1``."""
        if M0.shape != M1.shape:
            raise ValueError("pencil coefficients must share a shape")
        return cls(
            [[Poly((a, b)) for a, b in zip(r0, r1)] for r0, r1 in zip(M0.rows, M1.rows)],
            M0.ncols,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def degree(self) -> int:
        return max((e.degree for r in self.entries for e in r), default=-1)

    def coefficient(self, k: int) -> RatMatrix:
        """Matrix of the z^k coefficients."""
        return RatMatrix(
            [[e.coeffs[k] if k < len(e.coeffs) else _ZERO for e in r] for r in self.entries],
            self.ncols,
        )

    def evaluate(self, z0) -> RatMatrix:
        z0 = to_fraction(z0)
        return RatMatrix([[e(z0) for e in r] for r in self.entries], self.ncols)

    def select_rows(self, idx: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([self.entries[i] for i in idx], self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"PolyMatrix({[[str(e) for e in r] for r in self.entries]})"


def poly_det(M: PolyMatrix) -> Poly:
    """Determinant by fraction-free elimination over Q[z] (exact divisions)."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Poly.const(1)
    a = [list(r) for r in M.entries]
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return Poly()
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                q, r = divmod(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
                if r:
                    raise ArithmeticError("inexact division in fraction-free determinant")
                a[i][j] = q
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def minors_gcd(M: PolyMatrix, k: int | None = None) -> Poly:
    """Monic gcd of all k x k minors (default: maximal ones), by enumeration."""
    if k is None:
        k = min(M.nrows, M.ncols)
    g = Poly()
    for rows in itertools.combinations(range(M.nrows), k):
        for cols in itertools.combinations(range(M.ncols), k):
            sub = PolyMatrix([[M.entries[i][j] for j in cols] for i in rows], k)
            g = poly_gcd(g, poly_det(sub))
            if g == 1:
                return g
    return g


def determinantal_divisor(M: PolyMatrix) -> Poly:
    """Monic gcd of the maximal column minors of ``M`` (``rows >= cols``).

    Computed by unimodular row reduction over Q[z] to upper-triangular form;
    the product of the pivots is the gcd of the ``cols x cols`` minors.
    Returns 0 when ``M`` lacks full normal column rank.
    """
    nrows, ncols = M.shape
    if ncols == 0:
        return Poly.const(1)
    if nrows < ncols:
        return Poly()
    a = [list(r) for r in M.entries]
    d = Poly.const(1)
    r = 0
    for c in range(ncols):
        while True:
            live = [i for i in range(r, nrows) if a[i][c]]
            if not live:
                return Poly()
            piv = min(live, key=lambda i: (a[i][c].degree, i))
            a[r], a[piv] = a[piv], a[r]
            prow = a[r]
            clean = True
            for i in range(r + 1, nrows):
                if a[i][c]:
                    q = a[i][c] // prow[c]
                    a[i] = [x - q * y for x, y in zip(a[i], prow)]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        d = d * a[r][c]
        r += 1
    return d.monic()


def normal_rank(M: PolyMatrix) -> int:
    """Rank over the rational-function field.

    A nonzero r x r minor has degree at most ``r * deg``, so it cannot vanish
    at all of the points ``0, 1, ..., min(rows, cols) * deg``.
    """
    bound = min(M.nrows, M.ncols) * max(M.degree, 0)
    best = 0
    full = min(M.nrows, M.ncols)
    for z0 in range(bound + 1):
        best = max(best, rank(M.evaluate(z0)))
        if best == full:
            break
    return best


def pencil_full_rank_everywhere(E0: RatMatrix, E1: RatMatrix) -> bool:
    """Whether ``E0 + z E1`` has full column rank for every complex z.

    Staircase reduction: the combinations of rows that cancel ``E1`` give
    z-free equations, so the columns are restricted to their kernel and the
    step repeats.  Once no z-free equation remains, the pencil has at most
    as many independent rows as its ``E1`` part; with any columns left it
    then either lacks normal rank or is square with a nonconstant
    determinant, and drops rank somewhere in C.
    """
    if E0.shape != E1.shape:
        raise ValueError("pencil coefficients must share a shape")
    while E0.ncols:
        left = kernel(E1.T)
        if left.is_zero():
            return False
        G0 = RatMatrix.from_columns(left.vectors, E0.nrows).T @ E0
        K = kernel(G0)
        if K.dim == E0.ncols:
            return False
        basis = K.basis
        E0, E1 = E0 @ basis, E1 @ basis
    return True


def fullrank_all_z(M: PolyMatrix) -> tuple[bool, Poly | None]:
    """Full column rank of ``M(z)`` at every complex z, decided exactly.

    Returns ``(True, None)`` or ``(False, divisor)`` where ``divisor`` is the
    gcd of the maximal minors: its roots are exactly the rank-drop points,
    and it is 0 when the rank drops everywhere.
    """
    if M.degree <= 1:
        ok = pencil_full_rank_everywhere(M.coefficient(0), M.coefficient(1))
        return (True, None) if ok else (False, determinantal_divisor(M))
    d = determinantal_divisor(M)
    if d.is_constant() and d:
        return True, None
    return False, d
