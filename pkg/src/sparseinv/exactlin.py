"""Exact rational linear algebra, canonical subspaces and subspace arrangements.

Every decision made by the certifiers (ranks, kernels, containments) goes
through this module, so nothing here touches floating point.  Elimination is
fraction-free over Python integers: each row is scaled by the lcm of its
denominators and then reduced with Bareiss-style exact divisions.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction or rational string ("-3/2") to a Fraction.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (_ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(_ONE if k == i else _ZERO for k in range(n))


def is_zero_vector(v: Sequence) -> bool:
    return not any(v)


class RatMatrix:
    """Immutable dense matrix of exact rationals.

    Shapes with zero rows or zero columns are legal and keep track of the
    other dimension, which is what lets ``Γ_S`` with an empty support be a
    well-formed ``pN x 0`` block.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {ncols}")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _trusted(cls, rows: tuple, ncols: int) -> "RatMatrix":
        # rows already tuples of Fractions with correct width
        obj = cls.__new__(cls)
        obj._rows = rows
        obj.nrows = len(rows)
        obj.ncols = ncols
        obj._hash = None
        return obj

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls._trusted(tuple((_ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._trusted(tuple(unit_vector(n, i) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "RatMatrix":
        cols = [vector(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length does not match nrows")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls._trusted(rows, len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, key):
        i, j = key
        return self._rows[i][j]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._trusted(
            tuple(zip(*self._rows)) if self.nrows else tuple(() for _ in range(self.ncols)),
            self.nrows,
        )

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
            rows = tuple(
                tuple(sum((a * b for a, b in zip(r, c) if a and b), _ZERO) for c in cols)
                for r in self._rows
            )
            return RatMatrix._trusted(rows, other.ncols)
        v = other
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} does not fit {self.shape}")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), _ZERO) for r in self._rows)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return RatMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._trusted(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "RatMatrix":
        c = to_fraction(c)
        return RatMatrix._trusted(tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    def power(self, k: int) -> "RatMatrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = RatMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def select_cols(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix._trusted(tuple(tuple(r[j] for j in idx) for r in self._rows), len(idx))

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix._trusted(tuple(self._rows[i] for i in idx), self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self._rows))
        return self._hash

    def tolist(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._rows]

    def __repr__(self) -> str:
        return f"RatMatrix({self.tolist()!r}, ncols={self.ncols})"


def hstack(*blocks: RatMatrix) -> RatMatrix:
    nrows = blocks[0].nrows
    if any(b.nrows != nrows for b in blocks):
        raise ValueError("hstack blocks must share the row count")
    rows = tuple(tuple(itertools.chain.from_iterable(b._rows[i] for b in blocks)) for i in range(nrows))
    return RatMatrix._trusted(rows, sum(b.ncols for b in blocks))


def vstack(*blocks: RatMatrix) -> RatMatrix:
    ncols = blocks[0].ncols
    if any(b.ncols != ncols for b in blocks):
        raise ValueError("vstack blocks must share the column count")
    return RatMatrix._trusted(tuple(itertools.chain.from_iterable(b._rows for b in blocks)), ncols)


def block(grid: Sequence[Sequence[RatMatrix]]) -> RatMatrix:
    return vstack(*(hstack(*row) for row in grid))


# ---------------------------------------------------------------------------
# fraction-free elimination
# ---------------------------------------------------------------------------


def _integer_rows(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if x.denominator != 1:
                den = math.lcm(den, x.denominator)
        out.append([x.numerator * (den // x.denominator) for x in row])
    return out


def _bareiss(rows: list[list[int]], ncols: int, reduce_above: bool) -> list[int]:
    """In-place fraction-free elimination; returns pivot columns.

    With ``reduce_above`` the result is a scaled reduced echelon form in which
    every pivot row carries the same pivot value.
    """
    nrows = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and rows[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        targets = range(nrows) if reduce_above else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            if a == 0 and prev == piv:
                continue
            if a == 0:
                rows[i] = [x * piv // prev for x in row]
            else:
                rows[i] = [(x * piv - a * y) // prev for x, y in zip(row, prow)]
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank(M: RatMatrix) -> int:
    """Exact rank of ``M``."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    rows = _integer_rows(M.rows)
    if M.nrows > M.ncols:
        # eliminate the short side
        rows = [list(c) for c in zip(*rows)]
        return len(_bareiss(rows, M.nrows, reduce_above=False))
    return len(_bareiss(rows, M.ncols, reduce_above=False))


def rref(M: RatMatrix) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form: nonzero rows (pivots equal to 1) and pivot columns."""
    if M.nrows == 0 or M.ncols == 0:
        return [], []
    rows = _integer_rows(M.rows)
    pivots = _bareiss(rows, M.ncols, reduce_above=True)
    out = []
    for i, c in enumerate(pivots):
        piv = rows[i][c]
        out.append(tuple(Fraction(x, piv) for x in rows[i]))
    return out, pivots


def solve(M: RatMatrix, b: Sequence) -> Vector | None:
    """A particular solution of ``M x = b``, or None when inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    b = vector(b)
    if len(b) != M.nrows:
        raise ValueError("right-hand side length does not match the row count")
    if M.nrows == 0:
        return zero_vector(M.ncols)
    aug = hstack(M, RatMatrix._trusted(tuple((x,) for x in b), 1))
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [_ZERO] * M.ncols
    for row, c in zip(rows, pivots):
        x[c] = row[-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """A linear subspace of Q^ambient in canonical form.

    The basis is stored as the reduced row echelon form of its spanning
    vectors, which is unique per subspace; equality and hashing are therefore
    structural.  ``basis`` exposes the same vectors as the columns of an
    ``ambient x dim`` matrix.
    """

    __slots__ = ("ambient", "vectors", "pivots", "_ann", "_hash")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        vecs = [vector(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
        if vecs:
            rows, pivots = rref(RatMatrix._trusted(tuple(vecs), ambient))
        else:
            rows, pivots = [], []
        self.ambient = ambient
        self.vectors = tuple(rows)
        self.pivots = tuple(pivots)
        self._ann = None
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, (unit_vector(n, i) for i in range(n)))

    @classmethod
    def coordinate(cls, n: int, support: Iterable[int]) -> "Subspace":
        """The canonical subspace spanned by e_i, i in ``support``."""
        return cls(n, (unit_vector(n, i) for i in support))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> RatMatrix:
        return RatMatrix.from_columns(self.vectors, self.ambient)

    def is_zero(self) -> bool:
        return not self.vectors

    @property
    def annihilator(self) -> RatMatrix:
        """Rows spanning the orthogonal complement; ``self`` is their kernel."""
        if self._ann is None:
            n = self.ambient
            free = [j for j in range(n) if j not in self.pivots]
            ann = []
            for f in free:
                y = [_ZERO] * n
                y[f] = _ONE
                for i, c in enumerate(self.pivots):
                    y[c] = -self.vectors[i][f]
                ann.append(tuple(y))
            self._ann = RatMatrix._trusted(tuple(ann), n)
        return self._ann

    def contains_vector(self, v: Sequence) -> bool:
        return is_zero_vector(self.annihilator @ vector(v))

    def contains(self, other: "Subspace") -> bool:
        """True if ``other`` is a subset of ``self``."""
        if other.ambient != self.ambient:
            raise ValueError("ambient dimensions differ")
        if other.dim > self.dim:
            return False
        ann = self.annihilator
        return all(is_zero_vector(ann @ v) for v in other.vectors)

    def sort_key(self):
        return (self.dim, self.vectors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.vectors == other.vectors

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient, self.vectors))
        return self._hash

    def __repr__(self) -> str:
        vecs = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vectors)
        return f"Subspace(ambient={self.ambient}, span{{{vecs}}})"


def kernel(M: RatMatrix) -> Subspace:
    """Null space of ``M`` as a canonical subspace of Q^ncols."""
    n = M.ncols
    rows, pivots = rref(M)
    pivset = set(pivots)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [_ZERO] * n
        v[f] = _ONE
        for row, c in zip(rows, pivots):
            v[c] = -row[f]
        vecs.append(v)
    return Subspace(n, vecs)


def image(M: RatMatrix, V: Subspace | None = None) -> Subspace:
    """Column space of ``M``, or the image ``M V`` of a subspace."""
    if V is None:
        return Subspace(M.nrows, M.columns())
    if V.ambient != M.ncols:
        raise ValueError("subspace does not live in the domain of M")
    return Subspace(M.nrows, (M @ v for v in V.vectors))


def preimage(M: RatMatrix, V: Subspace) -> Subspace:
    """``{x : M x in V}``, computed as the kernel of ``Q M`` where ``ker Q = V``."""
    if V.ambient != M.nrows:
        raise ValueError("subspace does not live in the codomain of M")
    return kernel(V.annihilator @ M) if V.annihilator.nrows else Subspace.full(M.ncols)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    if U.ambient != V.ambient:
        raise ValueError("ambient dimensions differ")
    return Subspace(U.ambient, U.vectors + V.vectors)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    if U.ambient != V.ambient:
        raise ValueError("ambient dimensions differ")
    if U.contains(V):
        return V
    if V.contains(U):
        return U
    return kernel(vstack(U.annihilator, V.annihilator))


def product(U: Subspace, V: Subspace) -> Subspace:
    """``U x V`` inside Q^(a+b)."""
    a, b = U.ambient, V.ambient
    vecs = [tuple(u) + zero_vector(b) for u in U.vectors]
    vecs += [zero_vector(a) + tuple(v) for v in V.vectors]
    return Subspace(a + b, vecs)


# ---------------------------------------------------------------------------
# arrangements
# ---------------------------------------------------------------------------


class Arrangement:
    """A finite union of subspaces, kept pruned and canonically sorted.

    No member is contained in another, so ``size`` is the minimal number of
    subspaces needed.  The zero arrangement is one zero-dimensional member.
    """

    __slots__ = ("ambient", "members", "_hash")

    def __init__(self, ambient: int, members: Iterable[Subspace]):
        uniq = {}
        for U in members:
            if U.ambient != ambient:
                raise ValueError("member ambient dimension differs from arrangement")
            uniq.setdefault(U, None)
        cand = sorted(uniq, key=Subspace.sort_key, reverse=True)
        kept: list[Subspace] = []
        for U in cand:
            # larger members come first, so only need to test against kept ones
            if not any(K.contains(U) for K in kept):
                kept.append(U)
        if not kept:
            kept = [Subspace.zero(ambient)]
        kept.sort(key=Subspace.sort_key)
        self.ambient = ambient
        self.members = tuple(kept)
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "Arrangement":
        return cls(n, [Subspace.zero(n)])

    @classmethod
    def full(cls, n: int) -> "Arrangement":
        return cls(n, [Subspace.full(n)])

    @property
    def size(self) -> int:
        return len(self.members)

    def is_zero(self) -> bool:
        return self.members[0].is_zero() and len(self.members) == 1

    def contains_vector(self, v: Sequence) -> bool:
        return any(U.contains_vector(v) for U in self.members)

    def dim_vector(self) -> tuple[int, ...]:
        return dim_vector(self)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Arrangement):
            return NotImplemented
        return self.ambient == other.ambient and self.members == other.members

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient, self.members))
        return self._hash

    def __repr__(self) -> str:
        return f"Arrangement(ambient={self.ambient}, members={list(self.members)!r})"


def sparse_arrangement(m: int, s: int) -> Arrangement:
    """The s-sparse vectors of Q^m as a pruned union of coordinate subspaces."""
    if s < 0:
        raise ValueError("sparsity must be nonnegative")
    k = min(s, m)
    return Arrangement(m, (Subspace.coordinate(m, S) for S in itertools.combinations(range(m), k)))


def dim_vector(A: Arrangement) -> tuple[int, ...]:
    counts = [0] * A.ambient
    for U in A.members:
        if U.dim:
            counts[U.dim - 1] += 1
    return tuple(counts)


def dim_order_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Dimensional order: compare at the largest index where ``a`` and ``b`` differ."""
    if len(a) != len(b):
        raise ValueError("dimension vectors of different length")
    for j in range(len(a) - 1, -1, -1):
        if a[j] != b[j]:
            return a[j] < b[j]
    return True


def dim_order_lt(a: Sequence[int], b: Sequence[int]) -> bool:
    return tuple(a) != tuple(b) and dim_order_leq(a, b)


def map_arrangement(kind: str, operand, A: Arrangement) -> Arrangement:
    """Distribute a linear operation over the members of ``A`` and prune.

    ``kind`` is one of ``"image"`` and ``"preimage"`` (operand a RatMatrix),
    ``"sum"`` and ``"intersect"`` (operand a Subspace).
    """
    if kind == "image":
        return Arrangement(operand.nrows, (image(operand, U) for U in A.members))
    if kind == "preimage":
        return Arrangement(operand.ncols, (preimage(operand, U) for U in A.members))
    if kind == "sum":
        return Arrangement(A.ambient, (subspace_sum(U, operand) for U in A.members))
    if kind == "intersect":
        return Arrangement(A.ambient, (intersect(U, operand) for U in A.members))
    raise ValueError(f"unknown arrangement operation {kind!r}")


def arr_union(*arrs: Arrangement) -> Arrangement:
    return Arrangement(arrs[0].ambient, itertools.chain.from_iterable(a.members for a in arrs))


def arr_intersect(A: Arrangement, B: Arrangement) -> Arrangement:
    return Arrangement(A.ambient, (intersect(U, V) for U in A.members for V in B.members))


def arr_sum(A: Arrangement, B: Arrangement) -> Arrangement:
    return Arrangement(A.ambient, (subspace_sum(U, V) for U in A.members for V in B.members))


def arr_product(A: Arrangement, B: Arrangement) -> Arrangement:
    return Arrangement(A.ambient + B.ambient, (product(U, V) for U in A.members for V in B.members))


def arr_contains(A: Arrangement, V: Subspace) -> bool:
    """Whether the point set of ``A`` contains ``V``.

    A subspace covered by finitely many subspaces over an infinite field lies
    in one of them, so a member-wise test is exact.
    """
    return any(U.contains(V) for U in A.members)


def arr_subset(A: Arrangement, B: Arrangement) -> bool:
    return all(arr_contains(B, U) for U in A.members)


def arr_equal(A: Arrangement, B: Arrangement) -> bool:
    return arr_subset(A, B) and arr_subset(B, A)
