"""Bit-packed linear algebra over GF(2).

Vectors and matrices store their bits in Python integers, little-endian
bit order: bit i of a length-n vector is ``(bits >> i) & 1``.  All bits at
positions >= n are kept at zero; set DEBUG_CHECKS to re-verify that
invariant after every operation.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

DEBUG_CHECKS = False


def set_debug_checks(enabled: bool) -> None:
    global DEBUG_CHECKS
    DEBUG_CHECKS = bool(enabled)


def _mask(n: int) -> int:
    return (1 << n) - 1


class BitVec:
    """Vector over GF(2), bits packed into one int (bit i = coordinate i)."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 0:
            raise ValueError("negative length")
        if bits < 0 or bits >> n:
            raise ValueError("bits outside [0, 2^n)")
        self.n = n
        self.bits = bits
        if DEBUG_CHECKS:
            self._check()

    def _check(self) -> None:
        assert 0 <= self.bits and self.bits >> self.n == 0, "trailing bits set"

    @classmethod
    def zeros(cls, n: int) -> "BitVec":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitVec":
        return cls(n, _mask(n))

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVec":
        if not 0 <= i < n:
            raise ValueError("unit index out of range")
        return cls(n, 1 << i)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        acc = 0
        n = 0
        for b in bits:
            if b:
                acc |= 1 << n
            n += 1
        return cls(n, acc)

    def to_bits(self) -> List[int]:
        return [(self.bits >> i) & 1 for i in range(self.n)]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVec(self.n, self.bits ^ other.bits)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitVec)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"BitVec({self.n}, 0b{self.bits:0{max(self.n, 1)}b})"

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def dot(self, other: "BitVec") -> int:
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(self.n + other.n, self.bits | (other.bits << self.n))

    def slice(self, start: int, stop: int) -> "BitVec":
        if not 0 <= start <= stop <= self.n:
            raise ValueError("bad slice bounds")
        return BitVec(stop - start, (self.bits >> start) & _mask(stop - start))

    def to_bytes(self) -> bytes:
        return self.bits.to_bytes((self.n + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, n: int, data: bytes) -> "BitVec":
        bits = int.from_bytes(data, "little") & _mask(n)
        return cls(n, bits)


class BitMatrix:
    """Dense matrix over GF(2), row-major list of row ints."""

    __slots__ = ("rows", "cols", "row_bits", "_cols_cache")

    def __init__(self, rows: int, cols: int, row_bits: Optional[List[int]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        if row_bits is None:
            row_bits = [0] * rows
        if len(row_bits) != rows:
            raise ValueError("row count mismatch")
        m = _mask(cols)
        for r in row_bits:
            if r < 0 or r & ~m:
                raise ValueError("row bits outside column range")
        self.row_bits = list(row_bits)
        self._cols_cache: Optional[List[int]] = None
        if DEBUG_CHECKS:
            self._check()

    def _check(self) -> None:
        m = _mask(self.cols)
        assert len(self.row_bits) == self.rows
        assert all(0 <= r and r & ~m == 0 for r in self.row_bits)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec]) -> "BitMatrix":
        if not rows:
            raise ValueError("need at least one row")
        cols = rows[0].n
        if any(r.n != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [r.bits for r in rows])

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        return cls.from_rows([BitVec.from_bits(row) for row in entries])

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.row_bits[i])

    def get(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def set(self, i: int, j: int, v: int) -> None:
        self._cols_cache = None
        if v:
            self.row_bits[i] |= 1 << j
        else:
            self.row_bits[i] &= ~(1 << j)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, list(self.row_bits))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.row_bits == other.row_bits
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self.row_bits)))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.row_bits)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.row_bits):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.cols, self.rows, out)

    def column_bits(self) -> List[int]:
        """Column masks: entry j packs column j into an int over row indices."""
        return self.transpose().row_bits

    def columns_cached(self) -> List[int]:
        """Column masks, cached; only for matrices not mutated afterwards."""
        if self._cols_cache is None:
            self._cols_cache = self.column_bits()
        return self._cols_cache

    def cols_xor(self, x: BitVec) -> BitVec:
        """A @ x via XOR of cached column masks (fast path for sparse x)."""
        if x.n != self.cols:
            raise ValueError("dimension mismatch")
        masks = self.columns_cached()
        acc = 0
        b = x.bits
        while b:
            low = b & -b
            acc ^= masks[low.bit_length() - 1]
            b ^= low
        return BitVec(self.rows, acc)

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        """Matrix product; rows of the result accumulate XORs of other's rows."""
        if self.cols != other.rows:
            raise ValueError(
                f"dimension mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        out = []
        for r in self.row_bits:
            acc = 0
            rr = r
            while rr:
                low = rr & -rr
                acc ^= other.row_bits[low.bit_length() - 1]
                rr ^= low
            out.append(acc)
        return BitMatrix(self.rows, other.cols, out)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return self.mul(other)

    def mul_vec(self, x: BitVec) -> BitVec:
        """A @ x for a column vector x of length cols."""
        if x.n != self.cols:
            raise ValueError("dimension mismatch")
        acc = 0
        for i, r in enumerate(self.row_bits):
            acc |= ((r & x.bits).bit_count() & 1) << i
        return BitVec(self.rows, acc)

    def vec_mul(self, s: BitVec) -> BitVec:
        """s @ A for a row vector s of length rows (XOR of selected rows)."""
        if s.n != self.rows:
            raise ValueError("dimension mismatch")
        acc = 0
        b = s.bits
        while b:
            low = b & -b
            acc ^= self.row_bits[low.bit_length() - 1]
            b ^= low
        return BitVec(self.cols, acc)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, self.row_bits + other.row_bits)

    def submatrix_cols(self, cols: Sequence[int]) -> "BitMatrix":
        out = []
        for r in self.row_bits:
            acc = 0
            for jj, j in enumerate(cols):
                acc |= ((r >> j) & 1) << jj
            out.append(acc)
        return BitMatrix(self.rows, len(cols), out)


def _row_echelon(row_bits: List[int], cols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form.

    Pivot rule: for each column left to right, take the first row (from the
    top of the not-yet-pivoted block) with a nonzero entry.  Returns the
    reduced rows and the list of pivot columns.
    """
    work = list(row_bits)
    pivots: List[int] = []
    rank = 0
    for col in range(cols):
        bit = 1 << col
        pivot = None
        for r in range(rank, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] & bit):
                work[r] ^= work[rank]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work, pivots


def rank(a: BitMatrix) -> int:
    """GF(2) rank via row reduction; input untouched."""
    _, pivots = _row_echelon(a.row_bits, a.cols)
    return len(pivots)


def kernel_basis(a: BitMatrix) -> List[BitVec]:
    """Basis of {x : A x = 0}; one vector per free column, in increasing
    free-column order."""
    reduced, pivots = _row_echelon(a.row_bits, a.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        fbit = 1 << free
        for r, pcol in enumerate(pivots):
            if reduced[r] & fbit:
                v |= 1 << pcol
        basis.append(BitVec(a.cols, v))
    if DEBUG_CHECKS:
        for v in basis:
            assert a.mul_vec(v).is_zero()
    return basis


def invert(a: BitMatrix) -> Optional[BitMatrix]:
    """Inverse of a square matrix, or None when singular."""
    if a.rows != a.cols:
        raise ValueError("invert needs a square matrix")
    n = a.rows
    # Augment with the identity on the high columns.
    work = [a.row_bits[i] | (1 << (n + i)) for i in range(n)]
    reduced, pivots = _row_echelon(work, 2 * n)
    if pivots != list(range(n)):
        return None
    inv_rows = [(reduced[i] >> n) & _mask(n) for i in range(n)]
    return BitMatrix(n, n, inv_rows)


def solve(a: BitMatrix, y: BitVec) -> Optional[BitVec]:
    """Any x with A x = y, or None when the system is inconsistent."""
    if y.n != a.rows:
        raise ValueError("dimension mismatch")
    aug = [a.row_bits[i] | (((y.bits >> i) & 1) << a.cols) for i in range(a.rows)]
    reduced, pivots = _row_echelon(aug, a.cols + 1)
    if a.cols in pivots:
        return None
    x = 0
    ybit = 1 << a.cols
    for r, pcol in enumerate(pivots):
        if reduced[r] & ybit:
            x |= 1 << pcol
    return BitVec(a.cols, x)


def min_distance(a: BitMatrix) -> Optional[int]:
    """Exact minimum weight of a nonzero kernel vector of A, by enumerating
    the kernel span; None when the kernel is trivial.  Feasible for kernel
    dimension up to ~20."""
    basis = kernel_basis(a)
    if not basis:
        return None
    dim = len(basis)
    if dim > 24:
        raise ValueError(f"kernel dimension {dim} too large to enumerate")
    best = None
    vecs = [b.bits for b in basis]
    # Gray-code walk over the 2^dim - 1 nonzero combinations.
    acc = 0
    prev = 0
    for i in range(1, 1 << dim):
        g = i ^ (i >> 1)
        acc ^= vecs[(g ^ prev).bit_length() - 1]
        prev = g
        w = acc.bit_count()
        if best is None or w < best:
            best = w
    return best


class SparseMatrix:
    """Column-sparse GF(2) matrix: every column holds exactly k distinct,
    sorted row indices."""

    __slots__ = ("n", "m", "k", "columns", "_col_masks")

    def __init__(self, n: int, m: int, k: int, columns: Sequence[Sequence[int]]):
        if k < 0 or k > n:
            raise ValueError("need 0 <= k <= n")
        if len(columns) != m:
            raise ValueError("column count mismatch")
        cols: List[Tuple[int, ...]] = []
        for c in columns:
            tc = tuple(c)
            if len(tc) != k:
                raise ValueError(f"column weight {len(tc)} != k={k}")
            if len(set(tc)) != k:
                raise ValueError("duplicate row index in column")
            if any(not 0 <= r < n for r in tc):
                raise ValueError("row index out of range")
            if list(tc) != sorted(tc):
                tc = tuple(sorted(tc))
            cols.append(tc)
        self.n = n
        self.m = m
        self.k = k
        self.columns = cols
        self._col_masks: Optional[List[int]] = None

    def col_masks(self) -> List[int]:
        """Column j as an int over row indices (cached)."""
        if self._col_masks is None:
            self._col_masks = [
                sum(1 << r for r in col) for col in self.columns
            ]
        return self._col_masks

    def densify(self) -> BitMatrix:
        rows = [0] * self.n
        for j, col in enumerate(self.columns):
            for r in col:
                rows[r] |= 1 << j
        return BitMatrix(self.n, self.m, rows)

    @classmethod
    def from_dense(cls, a: BitMatrix, k: int) -> "SparseMatrix":
        cols = []
        for j in range(a.cols):
            col = tuple(i for i in range(a.rows) if a.get(i, j))
            cols.append(col)
        return cls(a.rows, a.cols, k, cols)

    def mul_vec(self, x: BitVec) -> BitVec:
        """M @ x: XOR of the columns selected by the set bits of x."""
        if x.n != self.m:
            raise ValueError("dimension mismatch")
        masks = self.col_masks()
        acc = 0
        b = x.bits
        while b:
            low = b & -b
            acc ^= masks[low.bit_length() - 1]
            b ^= low
        return BitVec(self.n, acc)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and (self.n, self.m, self.k) == (other.n, other.m, other.k)
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.k, tuple(self.columns)))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.n}x{self.m}, k={self.k})"
