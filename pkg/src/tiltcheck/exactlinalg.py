"""Exact fields and dense matrices.

Two ground fields are supported: the rationals (entries are
:class:`fractions.Fraction`, always in lowest terms) and prime fields
``GF(p)`` (entries are :class:`ModP`, canonical representative in
``[0, p)``).  There is no floating point anywhere in the package.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class ModP:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction) and other.denominator == 1:
            return other.numerator
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def inverse(self) -> "ModP":
        if self.v == 0:
            raise ZeroDivisionError("residue 0 has no inverse")
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class Field:
    """A ground field: ``Field()`` is the rationals, ``Field(p)`` is GF(p)."""

    __slots__ = ("characteristic", "zero", "one")

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"{characteristic} is not a prime")
        self.characteristic = characteristic
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, x):
        p = self.characteristic
        if p == 0:
            if type(x) is Fraction:
                return x
            if isinstance(x, ModP):
                raise TypeError("cannot coerce a residue into the rationals")
            return Fraction(x)
        if type(x) is ModP:
            if x.p != p:
                raise ValueError("residue of a different prime")
            return x
        x = Fraction(x)
        return ModP(x.numerator, p) / ModP(x.denominator, p)

    def parse(self, text: str):
        """Parse a literal such as ``3``, ``-2`` or ``1/2``."""
        try:
            return self(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad field literal {text!r}") from exc

    def format(self, x) -> str:
        return str(x)

    @property
    def name(self) -> str:
        return "Q" if self.characteristic == 0 else f"Fp {self.characteristic}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "_rows", "_hash")

    def __init__(self, field: Field, rows: Iterable[Sequence], ncols: int | None = None):
        self.field = field
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self.nrows = len(rows)
        self.ncols = ncols
        self._rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, field, rows, ncols):
        m = object.__new__(cls)
        m.field = field
        m.nrows = len(rows)
        m.ncols = ncols
        m._rows = rows
        m._hash = None
        return m

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls._raw(field, tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(
            field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns: Sequence[Sequence]) -> "Matrix":
        columns = [tuple(field(x) for x in c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column of wrong length")
        rows = tuple(tuple(c[i] for c in columns) for i in range(nrows))
        return cls._raw(field, rows, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple, ...]:
        return self._rows

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix.zeros(self.field, self.ncols, 0)
        return Matrix._raw(self.field, tuple(zip(*self._rows)), self.nrows)

    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            self.field,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            self.field,
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.field, tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(self.field, tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.field.zero
        cols = other.columns()
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in cols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if b:
                        s = s + a * b
                row.append(s)
            out.append(tuple(row))
        return Matrix._raw(self.field, tuple(out), other.ncols)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(vec) != self.ncols:
            raise ValueError("vector of wrong length")
        z = self.field.zero
        nz = [(k, v) for k, v in enumerate(vec) if v]
        out = []
        for r in self._rows:
            s = z
            for k, v in nz:
                a = r[k]
                if a:
                    s = s + a * v
            out.append(s)
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(a for r in self._rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self._rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self._rows)
        return f"Matrix({self.nrows}x{self.ncols}, [{body}])"

    # -- elimination ---------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int], int]:
        """Reduced row echelon form, pivot columns, rank."""
        rows = [list(r) for r in self._rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            piv = None
            for i in range(r, self.nrows):
                if rows[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = self.field.one / rows[r][c]
            rows[r] = [a * inv for a in rows[r]]
            pr = rows[r]
            for i in range(self.nrows):
                if i != r:
                    f = rows[i][c]
                    if f:
                        rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        m = Matrix._raw(self.field, tuple(tuple(x) for x in rows), self.ncols)
        return m, pivots, len(pivots)

    def rank(self) -> int:
        return self.rref()[2]

    def kernel_basis(self) -> "Matrix":
        """Columns spanning the null space; shape ``ncols x nullity``."""
        red, pivots, rank = self.rref()
        free = [c for c in range(self.ncols) if c not in set(pivots)]
        z, o = self.field.zero, self.field.one
        cols = []
        for f in free:
            v = [z] * self.ncols
            v[f] = o
            for i, p in enumerate(pivots):
                v[p] = -red._rows[i][f]
            cols.append(v)
        return Matrix.from_columns(self.field, self.ncols, cols)

    def column_basis(self) -> "Matrix":
        """The pivot columns of ``self``: a basis of the column space."""
        _, pivots, _ = self.rref()
        return Matrix.from_columns(self.field, self.nrows, [self.col(j) for j in pivots])

    def solve(self, b: "Matrix") -> "Matrix | None":
        """Some ``X`` with ``self @ X == b``, or ``None`` if inconsistent."""
        if b.nrows != self.nrows:
            raise ValueError(f"shape mismatch {self.shape} vs {b.shape}")
        aug = hstack(self, b)
        red, pivots, _ = aug.rref()
        n = self.ncols
        if any(p >= n for p in pivots):
            return None
        z = self.field.zero
        x = [[z] * b.ncols for _ in range(n)]
        for i, p in enumerate(pivots):
            x[p] = list(red._rows[i][n:])
        return Matrix._raw(self.field, tuple(tuple(r) for r in x), b.ncols)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("non-square matrix")
        x = self.solve(Matrix.identity(self.field, self.nrows))
        if x is None:
            raise ZeroDivisionError("singular matrix")
        return x


def hstack(*ms: Matrix) -> Matrix:
    if not ms:
        raise ValueError("nothing to stack")
    n = ms[0].nrows
    for m in ms:
        if m.nrows != n:
            raise ValueError("row counts differ")
    rows = tuple(tuple(x for m in ms for x in m._rows[i]) for i in range(n))
    return Matrix._raw(ms[0].field, rows, sum(m.ncols for m in ms))


def vstack(*ms: Matrix) -> Matrix:
    if not ms:
        raise ValueError("nothing to stack")
    c = ms[0].ncols
    for m in ms:
        if m.ncols != c:
            raise ValueError("column counts differ")
    return Matrix._raw(ms[0].field, tuple(r for m in ms for r in m._rows), c)


def block_diag(field: Field, *ms: Matrix) -> Matrix:
    nr = sum(m.nrows for m in ms)
    nc = sum(m.ncols for m in ms)
    z = field.zero
    rows = []
    off = 0
    for m in ms:
        for r in m._rows:
            rows.append((z,) * off + tuple(r) + (z,) * (nc - off - m.ncols))
        off += m.ncols
    return Matrix._raw(field, tuple(rows), nc)


def block_matrix(field: Field, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> Matrix:
    """Assemble a matrix from ``blocks[(i, j)]``; missing blocks are zero."""
    z = field.zero
    rows = []
    for i, ri in enumerate(row_sizes):
        for k in range(ri):
            row = []
            for j, cj in enumerate(col_sizes):
                b = blocks.get((i, j))
                if b is None:
                    row.extend((z,) * cj)
                else:
                    row.extend(b._rows[k])
            rows.append(tuple(row))
    return Matrix._raw(field, tuple(rows), sum(col_sizes))


# module-level spellings of the core kernels


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    return m.rref()


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    return a.solve(b)


def kernel_basis(a: Matrix) -> Matrix:
    return a.kernel_basis()


class Subquotient:
    """A subquotient ``Z / B`` of ``field^n`` with canonical representatives.

    ``B`` is row-reduced once; a vector is normalized by clearing its entries
    at the pivot coordinates of ``B``.  Two vectors of ``Z`` represent the same
    class exactly when their normal forms are equal.
    """

    def __init__(self, field: Field, n: int, cycles: Sequence[Sequence], boundaries: Sequence[Sequence]):
        self.field = field
        self.n = n
        if boundaries:
            red, piv, rank = Matrix(field, boundaries, n).rref()
            self._brows = [(piv[i], red.row(i)) for i in range(rank)]
        else:
            self._brows = []
        reduced = [self.reduce(z) for z in cycles]
        if reduced:
            red, piv, rank = Matrix(field, reduced, n).rref()
            self.basis = [red.row(i) for i in range(rank)]
            self._piv = piv[:rank]
        else:
            self.basis = []
            self._piv = []

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def boundary_rank(self) -> int:
        return len(self._brows)

    def reduce(self, v: Sequence) -> tuple:
        v = [self.field(x) for x in v]
        for p, row in self._brows:
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return tuple(v)

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of the class of ``v`` in :attr:`basis` (``v`` must be a cycle)."""
        r = self.reduce(v)
        coords = tuple(r[p] for p in self._piv)
        z = self.field.zero
        recon = [z] * self.n
        for c, b in zip(coords, self.basis):
            if c:
                recon = [a + c * x for a, x in zip(recon, b)]
        if tuple(recon) != r:
            raise ValueError("vector is not a cycle of this subquotient")
        return coords

    def is_zero(self, v: Sequence) -> bool:
        return not any(self.reduce(v))
