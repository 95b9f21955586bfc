"""Encoding and decoding of polar codes.

LLRs are positive when bit 0 is more likely and are clipped to ``CLIP``.
Known bits are represented by ``+-CLIP``.  Every decoder has a batched
form taking an ``(B, n)`` LLR array; each frame is processed with
exactly the same arithmetic as when it is decoded alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf2 import BitMatrix, solve_lower_unitriangular
from .graphs import RoleKind, fe_full, he_full
from .polar import PolarCodeSpec, parity_check

CLIP = 40.0
DEFAULT_MAX_ITERS = 200


class Schedule(str, enum.Enum):
    FLOODING = "flooding"
    STAGE_SWEEP = "stagesweep"


@dataclass(frozen=True)
class DecodeResult:
    bits: np.ndarray
    info_bits: np.ndarray
    converged: bool
    iterations: int


@dataclass(frozen=True)
class BatchDecodeResult:
    bits: np.ndarray  # (B, n)
    info_bits: np.ndarray  # (B, k)
    converged: np.ndarray  # (B,)
    iterations: np.ndarray  # (B,)

    def __len__(self) -> int:
        return len(self.converged)

    def __getitem__(self, i: int) -> DecodeResult:
        return DecodeResult(self.bits[i], self.info_bits[i], bool(self.converged[i]), int(self.iterations[i]))


def hard_decision(llrs) -> np.ndarray:
    """Bit 1 where the LLR is negative; an exact zero decides 0."""
    return (np.asarray(llrs, dtype=float) < 0).astype(np.uint8)


def polar_transform(u) -> np.ndarray:
    """``u @ F(m)`` over GF(2) along the last axis, in O(n log n).

    F(m) is an involution, so this also maps codewords back to ``u``.
    """
    x = np.array(u, dtype=np.uint8, copy=True)
    n = x.shape[-1]
    if n & (n - 1) or n < 2:
        raise ValueError(f"length must be a power of two >= 2, got {n}")
    lead = x.shape[:-1]
    h = n // 2
    while h >= 1:
        v = x.reshape(*lead, -1, 2, h)
        v[..., 0, :] ^= v[..., 1, :]
        h //= 2
    return x


def _as_bits(bits, length: int, what: str) -> np.ndarray:
    b = np.asarray(bits)
    if b.shape[-1:] != (length,):
        raise ValueError(f"{what} length {b.shape[-1:]} does not match {length}")
    if np.any((b != 0) & (b != 1)):
        raise ValueError(f"{what} must contain only 0/1 values")
    return b.astype(np.uint8)


def encode(code: PolarCodeSpec, info) -> np.ndarray:
    """Non-systematic encoding ``u F(m)`` with zeros at frozen labels.

    Accepts a single info vector or a ``(B, k)`` batch.
    """
    v = _as_bits(info, code.k, "info") if code.k else np.zeros(np.shape(info)[:-1] + (0,), dtype=np.uint8)
    u = np.zeros(v.shape[:-1] + (code.n,), dtype=np.uint8)
    u[..., list(code.info)] = v
    return polar_transform(u)


@lru_cache(maxsize=64)
def _systematic_solver(code: PolarCodeSpec):
    # Parity rows restricted to frozen columns form a principal submatrix of
    # F(m)^T: upper-unitriangular.  Reversing both orders makes it lower.
    h = parity_check(code).to_numpy()
    fz, un = list(code.frozen), list(code.info)
    sub = h[:, fz][::-1, ::-1]
    return BitMatrix(sub) if fz else None, h[:, un].astype(np.int64)


def systematic_encode(code: PolarCodeSpec, info) -> np.ndarray:
    """Codeword with ``info`` verbatim at the unfrozen coordinates.

    The frozen coordinates solve ``H_F x_F = H_U x_U`` where ``H`` is
    ``parity_check(code)``; the frozen-column block is triangular with unit
    diagonal, so forward substitution gives the unique solution.
    """
    v = _as_bits(info, code.k, "info") if code.k else np.zeros(np.shape(info)[:-1] + (0,), dtype=np.uint8)
    x = np.zeros(v.shape[:-1] + (code.n,), dtype=np.uint8)
    x[..., list(code.info)] = v
    if not code.frozen:
        return x
    lower, h_u = _systematic_solver(code)
    frames = int(np.prod(v.shape[:-1], dtype=np.int64))
    flat_v = v.reshape(frames, code.k).astype(np.int64)
    flat_x = x.reshape(frames, code.n)
    fz = list(code.frozen)
    for row, vi in enumerate(flat_v):
        rhs = (h_u @ vi) & 1 if code.k else np.zeros(len(fz), dtype=np.int64)
        flat_x[row, fz] = solve_lower_unitriangular(lower, rhs[::-1])[::-1]
    return x


def extract_info(code: PolarCodeSpec, bits, systematic: bool = False) -> np.ndarray:
    """Information bits carried by codeword estimate(s) under the chosen encoder."""
    b = np.asarray(bits, dtype=np.uint8)
    src = b if systematic else polar_transform(b)
    return src[..., list(code.info)]


def _clip(x):
    return np.clip(x, -CLIP, CLIP)


def _boxplus(a, b):
    with np.errstate(over="ignore", divide="ignore"):
        return _clip(2.0 * np.arctanh(np.tanh(a / 2.0) * np.tanh(b / 2.0)))


def _as_llrs(llrs, n: int) -> np.ndarray:
    a = np.asarray(llrs, dtype=float)
    if a.shape[-1:] != (n,):
        raise ValueError(f"llr length {a.shape[-1:]} does not match n={n}")
    if np.isnan(a).any():
        raise ValueError("llrs contain NaN")
    return _clip(a)


# -- successive cancellation ----------------------------------------------


def _sc(llr: np.ndarray, frozen: np.ndarray):
    n = llr.shape[1]
    if n == 1:
        u = np.zeros(llr.shape, dtype=np.uint8) if frozen[0] else hard_decision(llr)
        return u, u
    h = n // 2
    left, right = llr[:, :h], llr[:, h:]
    u_up, xa = _sc(_boxplus(left, right), frozen[:h])
    b = _clip(right + (1.0 - 2.0 * xa) * left)
    u_low, xb = _sc(b, frozen[h:])
    return np.concatenate([u_up, u_low], axis=1), np.concatenate([xa ^ xb, xb], axis=1)


def sc_decode_batch(code: PolarCodeSpec, llrs, systematic: bool = False) -> BatchDecodeResult:
    a = np.atleast_2d(_as_llrs(llrs, code.n))
    u, x = _sc(a, code.frozen_mask)
    info = x[:, list(code.info)] if systematic else u[:, list(code.info)]
    ones = np.ones(len(a), dtype=bool)
    return BatchDecodeResult(x, info, ones, ones.astype(np.int64))


def sc_decode(code: PolarCodeSpec, llrs, systematic: bool = False) -> DecodeResult:
    """Successive cancellation on the butterfly of plain F(m), labels in natural order."""
    return sc_decode_batch(code, np.asarray(llrs, dtype=float)[None, :], systematic)[0]


# -- belief propagation -----------------------------------------------------


class _SumProduct:
    """Layered sum-product on a fixed bipartite graph.

    ``groups`` are disjoint check-index arrays; ``sequence`` is the order
    in which groups are updated within one iteration (a group may recur).
    A single group holding every check is flooding.
    """

    def __init__(self, n_var: int, ev: np.ndarray, ec: np.ndarray, groups: list[np.ndarray],
                 sequence: list[int] | None = None):
        self.n_var = n_var
        rank = np.full(int(ec.max()) + 1 if len(ec) else 0, -1)
        for gi, g in enumerate(groups):
            rank[g] = gi
        keep = rank[ec] >= 0
        ev, ec = ev[keep], ec[keep]
        order = np.lexsort((ev, ec, rank[ec]))
        self.ev, self.ec = ev[order], ec[order]
        grank = rank[self.ec]
        spans = {}
        for gi in range(len(groups)):
            idx = np.flatnonzero(grank == gi)
            if len(idx) == 0:
                continue
            lo, hi = int(idx[0]), int(idx[-1]) + 1
            chk = self.ec[lo:hi]
            starts = np.flatnonzero(np.r_[True, chk[1:] != chk[:-1]])
            seg = np.repeat(np.arange(len(starts)), np.diff(np.r_[starts, hi - lo]))
            spans[gi] = (lo, hi, starts, seg)
        if sequence is None:
            sequence = list(range(len(groups)))
        self.slices = [spans[gi] for gi in sequence if gi in spans]

    def run(self, prior: np.ndarray, max_iters: int, certify):
        """Iterate until ``certify(posterior_batch)`` accepts a frame or the cap.

        Returns ``(posterior, converged, iterations)``; each frame's
        posterior is frozen at its first certified iteration or at a
        message fixed point.
        """
        n_frames = prior.shape[0]
        post_out = prior.copy()
        conv = np.zeros(n_frames, dtype=bool)
        iters = np.zeros(n_frames, dtype=np.int64)
        active = np.arange(n_frames)
        post = prior.copy()
        msg = np.zeros((n_frames, len(self.ev)))
        for it in range(1, max_iters + 1):
            changed = np.zeros(len(active), dtype=bool)
            for lo, hi, starts, seg in self.slices:
                ev = self.ev[lo:hi]
                old = msg[:, lo:hi]
                new = self._check_update(post[:, ev] - old, starts, seg)
                delta = new - old
                changed |= (delta != 0).any(axis=1)
                np.add.at(post, (slice(None), ev), delta)
                msg[:, lo:hi] = new
            ok = certify(post)
            done = ok | ~changed
            if done.any():
                fin = active[done]
                post_out[fin] = post[done]
                conv[fin] = ok[done]
                iters[fin] = it
                keep = ~done
                active, post, msg = active[keep], post[keep], msg[keep]
                if len(active) == 0:
                    break
        if len(active):
            post_out[active] = post
            iters[active] = max_iters
        return post_out, conv, iters

    @staticmethod
    def _check_update(v2c: np.ndarray, starts: np.ndarray, seg: np.ndarray) -> np.ndarray:
        v2c = _clip(v2c)
        t = np.tanh(v2c / 2.0)
        mag = np.abs(t)
        zero = mag == 0.0
        neg = (t < 0).astype(np.int64)
        with np.errstate(divide="ignore"):
            logmag = np.where(zero, 0.0, np.log(np.where(zero, 1.0, mag)))
        s_log = np.add.reduceat(logmag, starts, axis=1)[:, seg]
        s_zero = np.add.reduceat(zero.astype(np.int64), starts, axis=1)[:, seg]
        s_neg = np.add.reduceat(neg, starts, axis=1)[:, seg]
        ext_mag = np.minimum(np.exp(s_log - logmag), 1.0)
        ext_mag = np.where(s_zero - zero > 0, 0.0, ext_mag)
        sign = 1.0 - 2.0 * ((s_neg - neg) & 1)
        with np.errstate(divide="ignore"):
            out = sign * 2.0 * np.arctanh(ext_mag)
        return _clip(out)


def _groups(levels: np.ndarray, schedule: Schedule, active: np.ndarray):
    """Check groups and per-iteration visiting order for ``schedule``."""
    idx = np.flatnonzero(active)
    if Schedule(schedule) is Schedule.FLOODING:
        return [idx], [0]
    lv = levels[idx]
    distinct = sorted(set(lv.tolist()), reverse=True)  # deepest first
    groups = [idx[lv == level] for level in distinct]
    down = list(range(len(groups)))
    return groups, down + down[::-1][1:]


class BPDecoder:
    """Sum-product decoder on the G-space (``"g"``) or H-space (``"h"``) graph.

    G-space runs on ``fe_full(m)``: frozen inputs are pinned to ``+CLIP``,
    every coordinate check gets an extra variable carrying the channel
    LLR, and a frame stops once the coordinate decisions form a codeword.
    H-space runs on ``he_full(m)`` keeping internal checks and the
    terminal checks labelled by the frozen set; it stops once the
    coordinate decisions satisfy ``parity_check(code)``.  A decision with a
    zero posterior is unresolved and never certified.
    """

    def __init__(self, code: PolarCodeSpec, space: str = "h", schedule: Schedule = Schedule.FLOODING,
                 max_iters: int = DEFAULT_MAX_ITERS):
        if max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {max_iters}")
        if space not in ("g", "h"):
            raise ValueError(f"space must be 'g' or 'h', got {space!r}")
        self.code, self.space, self.max_iters = code, space, int(max_iters)
        self.schedule = Schedule(schedule)
        n = code.n
        ht = parity_check(code).to_numpy().T.astype(np.int64) if code.frozen else np.zeros((n, 0), dtype=np.int64)
        self._ht = ht
        if space == "g":
            self._build_g()
        else:
            self._build_h()

    def _build_g(self):
        code = self.code
        g = fe_full(code.m)
        s = g.n_var
        coord_col = np.array([j for j, r in enumerate(g.chk_roles) if r.kind is RoleKind.COORDINATE_CHECK])
        coord_idx = np.array([g.chk_roles[j].index for j in coord_col])
        col_of_coord = np.empty(code.n, dtype=np.int64)
        col_of_coord[coord_idx] = coord_col
        ev = np.concatenate([g.edges[:, 0], s + np.arange(code.n)])
        ec = np.concatenate([g.edges[:, 1], col_of_coord])
        levels = np.array([r.level for r in g.chk_roles])
        self._engine = _SumProduct(s + code.n, ev, ec, *_groups(levels, self.schedule, np.ones(g.n_chk, bool)))
        self._n_var = s + code.n
        self._coord_vars = s + np.arange(code.n)
        self._info_vars = np.array(code.info, dtype=np.int64)  # inputs are the first n rows, in label order
        self._pinned = np.array(code.frozen, dtype=np.int64)

    def _build_h(self):
        code = self.code
        g = he_full(code.m)
        fz = set(code.frozen)
        keep = np.array(
            [r.kind is RoleKind.INTERNAL_CHECK or r.index in fz for r in g.chk_roles], dtype=bool
        )
        levels = np.array([r.level for r in g.chk_roles])
        self._engine = _SumProduct(g.n_var, g.edges[:, 0], g.edges[:, 1], *_groups(levels, self.schedule, keep))
        self._n_var = g.n_var
        var_of_coord = np.empty(code.n, dtype=np.int64)
        for v, r in enumerate(g.var_roles):
            if r.kind is RoleKind.COORDINATE_VARIABLE:
                var_of_coord[r.index] = v
        self._coord_vars = var_of_coord
        self._info_vars = None
        self._pinned = np.zeros(0, dtype=np.int64)

    def _certify(self, post: np.ndarray) -> np.ndarray:
        c = post[:, self._coord_vars]
        bits = (c < 0).astype(np.int64)
        ok = (c != 0).all(axis=1)
        if self._ht.shape[1]:
            ok &= ~((bits @ self._ht) & 1).any(axis=1)
        return ok

    def decode_batch(self, llrs, systematic: bool = False) -> BatchDecodeResult:
        code = self.code
        a = np.atleast_2d(_as_llrs(llrs, code.n))
        prior = np.zeros((len(a), self._n_var))
        prior[:, self._coord_vars] = a
        prior[:, self._pinned] = CLIP
        if len(self._engine.slices) == 0:
            post, conv, iters = prior, self._certify(prior), np.ones(len(a), dtype=np.int64)
        else:
            post, conv, iters = self._engine.run(prior, self.max_iters, self._certify)
        bits = hard_decision(post[:, self._coord_vars])
        info = extract_info(code, bits, systematic)
        if not systematic and self._info_vars is not None:
            # Unconverged G-space frames report the input-node decisions.
            raw = hard_decision(post[:, self._info_vars])
            info = np.where(conv[:, None], info, raw)
        return BatchDecodeResult(bits, info.astype(np.uint8), conv, iters)

    def decode(self, llrs, systematic: bool = False) -> DecodeResult:
        return self.decode_batch(np.asarray(llrs, dtype=float)[None, :], systematic)[0]


@lru_cache(maxsize=32)
def _decoder(code: PolarCodeSpec, space: str, schedule: Schedule, max_iters: int) -> BPDecoder:
    return BPDecoder(code, space, schedule, max_iters)


def bp_decode_g(code: PolarCodeSpec, llrs, schedule: Schedule = Schedule.FLOODING,
                max_iters: int = DEFAULT_MAX_ITERS, systematic: bool = False) -> DecodeResult:
    return _decoder(code, "g", Schedule(schedule), max_iters).decode(llrs, systematic)


def bp_decode_h(code: PolarCodeSpec, llrs, schedule: Schedule = Schedule.FLOODING,
                max_iters: int = DEFAULT_MAX_ITERS, systematic: bool = False) -> DecodeResult:
    return _decoder(code, "h", Schedule(schedule), max_iters).decode(llrs, systematic)

