"""Dense GF(2) matrices and the polar kernel.

Matrices are held as numpy ``uint8`` arrays of 0/1 entries; all arithmetic
is reduced modulo 2.  The Kronecker power ``F(m)`` of the 2x2 kernel
``[[1, 0], [1, 1]]`` is built without any bit-reversal permutation.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

M_CAP = 20

KERNEL = ((1, 0), (1, 1))


class BitMatrix:
    """Immutable dense matrix over GF(2).

    Parameters
    ----------
    bits : array-like
        2-D array of 0/1 entries.  Any integer input is reduced mod 2.
        Zero-row matrices are allowed (a rate-0 generator has no rows);
        the column count must be positive.
    """

    __slots__ = ("_a",)

    def __init__(self, bits):
        a = np.array(bits, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            raise ValueError("cannot infer columns of an empty matrix; use BitMatrix.zeros(0, n)")
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {a.shape}")
        if a.shape[1] < 1:
            raise ValueError("matrix must have at least one column")
        a = (a & 1).astype(np.uint8)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Sequence[str] | Sequence[Sequence[int]], cols: int | None = None) -> "BitMatrix":
        """Build from bit strings like ``"1010"`` or nested int lists."""
        if len(rows) == 0:
            if cols is None:
                raise ValueError("cols is required for an empty row list")
            return cls.zeros(0, cols)
        parsed = [[int(c) for c in r] if isinstance(r, str) else list(r) for r in rows]
        return cls(parsed)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def to_numpy(self) -> np.ndarray:
        """Read-only ``uint8`` view of the entries."""
        return self._a

    def __getitem__(self, key):
        return self._a[key]

    def row(self, i: int) -> list[int]:
        return self._a[i].tolist()

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mul(self, other)

    def __repr__(self) -> str:
        if self.rows * self.cols <= 256:
            body = ", ".join(self.to_strings())
            return f"BitMatrix({self.rows}x{self.cols}: {body})"
        return f"BitMatrix({self.rows}x{self.cols})"

    def to_strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in r) for r in self._a]

    def dumps(self) -> str:
        """Serialize as ``"rows cols"`` followed by one 0/1 line per row."""
        lines = [f"{self.rows} {self.cols}", *self.to_strings()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        try:
            rows, cols = (int(t) for t in lines[0].split())
        except (IndexError, ValueError):
            raise ValueError("matrix header must be 'rows cols'") from None
        body = lines[1:]
        if len(body) != rows or any(len(ln) != cols or set(ln) - {"0", "1"} for ln in body):
            raise ValueError(f"matrix body does not match header {rows}x{cols}")
        return cls.from_rows(body, cols=cols)


def _check_exponent(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or m < 1 or m > M_CAP:
        raise ValueError(f"exponent m must be in 1..{M_CAP}, got {m!r}")


def identity(n: int) -> BitMatrix:
    """n x n identity; ``n`` is the side length, not an exponent."""
    if n < 1:
        raise ValueError(f"identity side must be positive, got {n}")
    return BitMatrix(np.eye(n, dtype=np.uint8))


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix(np.kron(a.to_numpy(), b.to_numpy()))


def f_matrix(m: int) -> BitMatrix:
    """Kronecker power F(m) of the kernel [[1, 0], [1, 1]], size 2^m.

    Built by the block recursion ``[[F, 0], [F, F]]``.
    """
    _check_exponent(m)
    f = np.array(KERNEL, dtype=np.uint8)
    for _ in range(m - 1):
        z = np.zeros_like(f)
        f = np.block([[f, z], [f, f]])
    return BitMatrix(f)


def transpose(a: BitMatrix) -> BitMatrix:
    return BitMatrix(a.to_numpy().T)


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) product ``a @ b``."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    if a.rows == 0:
        return BitMatrix.zeros(0, b.cols)
    # float64 matmul is exact for inner dimensions far beyond the m cap.
    prod = a.to_numpy().astype(np.float64) @ b.to_numpy().astype(np.float64)
    return BitMatrix(prod.astype(np.int64) & 1)


def mul_vec(a: BitMatrix, x: Iterable[int]) -> np.ndarray:
    """GF(2) product ``a @ x`` for a bit vector ``x``."""
    v = np.asarray(list(x) if not isinstance(x, np.ndarray) else x, dtype=np.int64)
    if v.shape != (a.cols,):
        raise ValueError(f"vector length {v.shape} does not match {a.cols} columns")
    return ((a.to_numpy().astype(np.int64) @ v) & 1).astype(np.uint8)


def solve_lower_unitriangular(l: BitMatrix, rhs: Iterable[int]) -> np.ndarray:
    """Forward substitution for ``l @ x = rhs`` over GF(2).

    ``l`` must be square and lower-triangular with a unit diagonal; the
    solution is then unique.
    """
    if l.rows != l.cols:
        raise ValueError(f"matrix must be square, got {l.shape}")
    a = l.to_numpy()
    if not np.all(np.diag(a) == 1):
        raise ValueError("matrix has a zero on the diagonal")
    if np.any(np.triu(a, k=1)):
        raise ValueError("matrix is not lower-triangular")
    b = np.asarray(list(rhs) if not isinstance(rhs, np.ndarray) else rhs, dtype=np.uint8) & 1
    if b.shape != (l.rows,):
        raise ValueError(f"rhs length {b.shape} does not match {l.rows}")
    x = np.zeros(l.rows, dtype=np.uint8)
    for i in range(l.rows):
        x[i] = b[i] ^ (int(a[i, :i] @ x[:i]) & 1)
    return x
