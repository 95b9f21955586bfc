"""Polar code specifications, frozen-set constructors and the dual code."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .gf2 import M_CAP, BitMatrix, f_matrix, mul_vec, transpose


class InvalidFrozenSet(ValueError):
    pass


@dataclass(frozen=True)
class PolarCodeSpec:
    """Length ``n = 2^m`` polar code with frozen row labels ``frozen``.

    Frozen bits are always 0.  ``construction`` records how the frozen
    set was chosen (``"explicit"``, ``"bec:<eps>"`` or ``"rm"``).
    """

    m: int
    frozen: tuple[int, ...]
    construction: str = "explicit"

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return self.n - len(self.frozen)

    @property
    def info(self) -> tuple[int, ...]:
        """Unfrozen labels, ascending."""
        fz = set(self.frozen)
        return tuple(i for i in range(self.n) if i not in fz)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.frozen)] = True
        return mask

    def to_json(self) -> str:
        return json.dumps(
            {"m": self.m, "n": self.n, "k": self.k, "frozen": list(self.frozen), "construction": self.construction}
        )

    @classmethod
    def from_json(cls, text: str) -> "PolarCodeSpec":
        d = json.loads(text)
        code = new_code(d["m"], d["frozen"], d.get("construction", "explicit"))
        if ("n" in d and d["n"] != code.n) or ("k" in d and d["k"] != code.k):
            raise InvalidFrozenSet("n/k fields disagree with m and frozen set")
        return code


def new_code(m: int, frozen_set: Iterable[int], construction: str = "explicit") -> PolarCodeSpec:
    if not isinstance(m, (int, np.integer)) or m < 1 or m > M_CAP:
        raise ValueError(f"exponent m must be in 1..{M_CAP}, got {m!r}")
    labels = [int(i) for i in frozen_set]
    n = 1 << m
    if len(set(labels)) != len(labels):
        raise InvalidFrozenSet(f"duplicate frozen labels in {labels}")
    bad = [i for i in labels if not 0 <= i < n]
    if bad:
        raise InvalidFrozenSet(f"frozen labels {bad} out of range 0..{n - 1}")
    return PolarCodeSpec(int(m), tuple(sorted(labels)), construction)


def _check_k(m: int, k: int) -> int:
    n = 1 << m
    if not 0 <= k <= n:
        raise ValueError(f"dimension k must be in 0..{n}, got {k}")
    return n


def bhattacharyya_bec(m: int, eps: float) -> np.ndarray:
    """Bhattacharyya parameters of the 2^m synthetic channels of BEC(eps).

    Bits of each index are consumed MSB first; 0 takes ``2Z - Z^2`` and 1
    takes ``Z^2``.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {eps}")
    z = np.array([float(eps)])
    for _ in range(m):
        # Appending a bit as the new LSB keeps earlier bits as the MSB prefix.
        z = np.stack([2 * z - z * z, z * z], axis=1).ravel()
    return z


def _freeze_largest(score: np.ndarray, count: int) -> tuple[int, ...]:
    # Sort by descending score, then ascending index.
    order = sorted(range(len(score)), key=lambda i: (-score[i], i))
    return tuple(sorted(order[:count]))


def frozen_bec(m: int, k: int, eps: float) -> tuple[int, ...]:
    """Freeze the ``n - k`` least reliable indices on BEC(eps)."""
    n = _check_k(m, k)
    z = bhattacharyya_bec(m, eps)
    return _freeze_largest(z, n - k)


def frozen_rm(m: int, k: int) -> tuple[int, ...]:
    """Freeze the ``n - k`` rows of smallest weight ``2^popcount(i)``."""
    n = _check_k(m, k)
    weight = np.array([1 << bin(i).count("1") for i in range(n)], dtype=float)
    return _freeze_largest(-weight, n - k)


def generator(code: PolarCodeSpec) -> BitMatrix:
    """Unfrozen rows of F(m), ascending label order."""
    f = f_matrix(code.m).to_numpy()
    return BitMatrix(f[list(code.info)]) if code.k else BitMatrix.zeros(0, code.n)


def parity_check(code: PolarCodeSpec) -> BitMatrix:
    """Rows of F(m)^T labelled by the frozen set, ascending order."""
    ft = transpose(f_matrix(code.m)).to_numpy()
    return BitMatrix(ft[list(code.frozen)]) if code.frozen else BitMatrix.zeros(0, code.n)


def is_codeword(x, code: PolarCodeSpec) -> bool:
    x = np.asarray(x)
    if x.shape != (code.n,):
        raise ValueError(f"word length {x.shape} does not match n={code.n}")
    if not code.frozen:
        return True
    return not mul_vec(parity_check(code), x).any()


@dataclass(frozen=True)
class DualCode:
    """The dual code as a polar code on reversed coordinates.

    ``code`` has frozen set ``{n-1-j : j not in S_F}``; when ``reversed`` is
    set, its codewords must be read with coordinates reversed to obtain
    the dual of the original code.
    """

    code: PolarCodeSpec
    reversed: bool = True

    def generator(self) -> BitMatrix:
        g = generator(self.code)
        return BitMatrix(g.to_numpy()[:, ::-1]) if self.reversed and g.rows else g

    def codewords(self) -> set[tuple[int, ...]]:
        return span(self.generator())


def dual(code: PolarCodeSpec | DualCode) -> DualCode:
    """Dual code: frozen set ``{n-1-j : j not in S_F}`` plus coordinate reversal.

    A ``DualCode`` argument is dualised too; reversal commutes with taking
    the dual, so the flags toggle.
    """
    flag = False
    if isinstance(code, DualCode):
        flag, code = code.reversed, code.code
    n = code.n
    fz = set(code.frozen)
    dual_frozen = [n - 1 - j for j in range(n) if j not in fz]
    return DualCode(new_code(code.m, dual_frozen, "dual"), not flag)


def span(g: BitMatrix) -> set[tuple[int, ...]]:
    """All GF(2) combinations of the rows of ``g`` (small dimensions only)."""
    a = g.to_numpy().astype(np.int64)
    if g.rows > 20:
        raise ValueError(f"refusing to enumerate 2^{g.rows} codewords")
    out = set()
    for coeffs in itertools.product((0, 1), repeat=g.rows):
        out.add(tuple(((np.asarray(coeffs, dtype=np.int64) @ a) & 1).tolist()) if g.rows else (0,) * g.cols)
    return out


@dataclass(frozen=True)
class SystematicPartition:
    """Row partition of F(m) and F(m)^T into frozen and unfrozen parts.

    ``pi`` lists the row labels frozen-first, so ``F(m)[pi]`` stacks
    ``g_f`` over ``g_u`` and ``F(m)^T[pi]`` stacks ``h_u`` over ``h_f``.
    """

    pi: tuple[int, ...]
    g_f: BitMatrix
    g_u: BitMatrix
    h_u: BitMatrix
    h_f: BitMatrix


def systematic_partition(code: PolarCodeSpec) -> SystematicPartition:
    f = f_matrix(code.m).to_numpy()
    ft = f.T
    fz, un = list(code.frozen), list(code.info)

    def take(a, idx):
        return BitMatrix(a[idx]) if idx else BitMatrix.zeros(0, code.n)

    return SystematicPartition(tuple(fz + un), take(f, fz), take(f, un), take(ft, fz), take(ft, un))
