"""Expanded factor graphs of F(m) and exact girth.

Three families are built here:

* ``fe_full(m)``: the 4-cycle-free recursive expansion.  One level reads
  ``[[0, 0, I], [0, F, I], [F, 0, I]]`` with variable rows
  ``[v_upper, v_lower, w]`` and check columns ``[x_left, x_right, c_w]``;
  both ``F`` blocks are expanded again down to F(1).
* ``fe_sc_full(m)``: the conventional successive-cancellation graph, the
  same recursion with an extra copy row block and copy check column.
* ``he_full(m)``: the H-space graph, the transpose of ``fe_full(m)`` with
  node roles swapped.

Biadjacency matrices always have variable nodes as rows and check nodes as
columns.  Node order is part of the contract: it reproduces the 6x6 matrix
of the two-level expansion verbatim and is deterministic for every ``m``.
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np

from .gf2 import BitMatrix, M_CAP, f_matrix

INFINITE_GIRTH = math.inf


class RoleKind(str, enum.Enum):
    ORIGINAL_VARIABLE = "original_variable"
    INTERMEDIATE = "intermediate"
    TRIVIAL_COPY = "trivial_copy"
    COORDINATE_CHECK = "coordinate_check"
    INTERNAL_CHECK = "internal_check"
    # H-space roles
    COORDINATE_VARIABLE = "coordinate_variable"
    HIDDEN_SUM = "hidden_sum"
    TERMINAL_CHECK = "terminal_check"


@dataclass(frozen=True)
class NodeRole:
    """Role of one node.

    ``index`` is the coordinate or row label for original variables,
    coordinate checks/variables and terminal checks; ``level`` is the
    recursion depth the node belongs to (0 = outermost).
    """

    kind: RoleKind
    index: int | None = None
    level: int | None = None

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "index": self.index, "level": self.level}

    @classmethod
    def from_json(cls, d: dict[str, Any]) -> "NodeRole":
        return cls(RoleKind(d["kind"]), d.get("index"), d.get("level"))


@dataclass(frozen=True, eq=False)
class LabeledFactorGraph:
    """Bipartite graph with role-labelled variable and check nodes.

    ``edges`` is an ``(E, 2)`` integer array of ``(var, chk)`` pairs sorted
    lexicographically and free of duplicates.
    """

    n_var: int
    n_chk: int
    edges: np.ndarray
    var_roles: tuple[NodeRole, ...]
    chk_roles: tuple[NodeRole, ...]
    kind: str = "custom"
    m: int | None = None

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e[:, 0].min() < 0 or e[:, 0].max() >= self.n_var:
                raise ValueError("variable index out of range in edges")
            if e[:, 1].min() < 0 or e[:, 1].max() >= self.n_chk:
                raise ValueError("check index out of range in edges")
        e = np.unique(e, axis=0) if e.size else e
        if len(e) != len(np.asarray(self.edges).reshape(-1, 2)):
            raise ValueError("duplicate edges")
        if len(self.var_roles) != self.n_var or len(self.chk_roles) != self.n_chk:
            raise ValueError("role lists must match node counts")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_matrix(cls, mat: BitMatrix, var_roles=None, chk_roles=None, kind="custom", m=None):
        r, c = np.nonzero(mat.to_numpy())
        if var_roles is None:
            var_roles = tuple(NodeRole(RoleKind.ORIGINAL_VARIABLE, i) for i in range(mat.rows))
        if chk_roles is None:
            chk_roles = tuple(NodeRole(RoleKind.COORDINATE_CHECK, j) for j in range(mat.cols))
        return cls(mat.rows, mat.cols, np.stack([r, c], axis=1), tuple(var_roles), tuple(chk_roles), kind, m)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def biadjacency(self) -> BitMatrix:
        a = np.zeros((self.n_var, self.n_chk), dtype=np.uint8)
        a[self.edges[:, 0], self.edges[:, 1]] = 1
        return BitMatrix(a)

    @cached_property
    def var_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n_var)

    @cached_property
    def chk_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.n_chk)

    def var_neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n_var)]
        for v, c in self.edges.tolist():
            nb[v].append(c)
        return nb

    def chk_neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n_chk)]
        for v, c in self.edges.tolist():
            nb[c].append(v)
        return nb

    def role_counts(self) -> dict[str, dict[str, int]]:
        return {
            "var": dict(Counter(r.kind.value for r in self.var_roles)),
            "chk": dict(Counter(r.kind.value for r in self.chk_roles)),
        }

    def same_edges(self, other: "LabeledFactorGraph") -> bool:
        return (self.n_var, self.n_chk) == (other.n_var, other.n_chk) and np.array_equal(self.edges, other.edges)

    # -- export -------------------------------------------------------

    def to_alist(self) -> str:
        """alist text, variable nodes listed first, neighbours 1-indexed."""
        vn, cn = self.var_neighbors(), self.chk_neighbors()
        dv = max((len(x) for x in vn), default=0)
        dc = max((len(x) for x in cn), default=0)

        def padded(lists, width):
            return [" ".join(str(i + 1) for i in x) + " 0" * (width - len(x)) for x in lists]

        lines = [
            f"{self.n_var} {self.n_chk}",
            f"{dv} {dc}",
            " ".join(str(len(x)) for x in vn),
            " ".join(str(len(x)) for x in cn),
            *(ln.strip() for ln in padded(vn, dv)),
            *(ln.strip() for ln in padded(cn, dc)),
        ]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "m": self.m,
            "n_var": self.n_var,
            "n_chk": self.n_chk,
            "edges": self.edges.tolist(),
            "var_roles": [r.to_json() for r in self.var_roles],
            "chk_roles": [r.to_json() for r in self.chk_roles],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "LabeledFactorGraph":
        d = json.loads(text)
        return cls(
            d["n_var"],
            d["n_chk"],
            np.asarray(d["edges"], dtype=np.int64).reshape(-1, 2),
            tuple(NodeRole.from_json(r) for r in d["var_roles"]),
            tuple(NodeRole.from_json(r) for r in d["chk_roles"]),
            d.get("kind", "custom"),
            d.get("m"),
        )


def parse_alist(text: str) -> tuple[int, int, np.ndarray]:
    """Parse alist text into ``(n_var, n_chk, edges)``.

    Only the variable-side neighbour lists are used for the edges; the
    check-side lists are checked for consistency.
    """
    tok = [[int(t) for t in ln.split()] for ln in text.strip().splitlines()]
    n_var, n_chk = tok[0]
    var_deg, chk_deg = tok[2], tok[3]
    vlists = tok[4 : 4 + n_var]
    clists = tok[4 + n_var : 4 + n_var + n_chk]
    edges = sorted((v, c - 1) for v, row in enumerate(vlists) for c in row if c)
    back = sorted((v - 1, c) for c, row in enumerate(clists) for v in row if v)
    if edges != back:
        raise ValueError("alist variable and check lists disagree")
    if [len([c for c in r if c]) for r in vlists] != var_deg or [len([v for v in r if v]) for r in clists] != chk_deg:
        raise ValueError("alist degree lines disagree with neighbour lists")
    return n_var, n_chk, np.asarray(edges, dtype=np.int64).reshape(-1, 2)


# -- single-step expansion ------------------------------------------------


def expand_pair(mat: BitMatrix, r1: int, r2: int) -> BitMatrix:
    """Remove one 4-cycle between rows ``r1`` and ``r2``.

    The first two columns ``c1 < c2`` shared by both rows are cleared in
    those rows; a new column marks ``r1`` and ``r2``, and a new row holds
    ``c1``, ``c2`` and the new column (the constraint ``x1 + x2 + x12 = 0``).
    The rewrite reads the same in H-space (rows are checks) and in G-space
    (rows are information bits).
    """
    a = mat.to_numpy()
    if r1 == r2 or not (0 <= r1 < mat.rows and 0 <= r2 < mat.rows):
        raise ValueError(f"need two distinct row indices, got {r1}, {r2}")
    shared = np.flatnonzero(a[r1] & a[r2])
    if len(shared) < 2:
        raise ValueError(f"rows {r1} and {r2} share {len(shared)} column(s); no 4-cycle to remove")
    c1, c2 = shared[:2]
    out = np.zeros((mat.rows + 1, mat.cols + 1), dtype=np.uint8)
    out[:-1, :-1] = a
    out[[r1, r1, r2, r2], [c1, c2, c1, c2]] = 0
    out[[r1, r2], -1] = 1
    out[-1, [c1, c2, mat.cols]] = 1
    return BitMatrix(out)


def expand_step(m: int) -> BitMatrix:
    """One-level expansion ``[[0, 0, I], [0, F(m-1), I], [F(m-1), 0, I]]``."""
    if m < 2 or m > M_CAP:
        raise ValueError(f"expand_step needs 2 <= m <= {M_CAP}, got {m}")
    h = 1 << (m - 1)
    f = f_matrix(m - 1).to_numpy()
    z = np.zeros((h, h), dtype=np.uint8)
    i = np.eye(h, dtype=np.uint8)
    return BitMatrix(np.block([[z, z, i], [z, f, i], [f, z, i]]))


def staged_size(m: int, i: int) -> int:
    """Side of the expansion after ``i`` recursive steps: ``i*2^(m-1) + 2^m``."""
    if m < 2:
        raise ValueError(f"staged_size needs m >= 2, got {m}")
    if not 1 <= i <= m - 1:
        raise ValueError(f"step i must be in 1..{m - 1}, got {i}")
    return i * (1 << (m - 1)) + (1 << m)


# -- full recursive builders ---------------------------------------------

_VAR_INPUT = -1  # placeholder code for rows whose role the parent assigns


@dataclass
class _Block:
    """Recursive construction state for one sub-expansion.

    ``var_code``/``chk_code`` hold role kinds as small ints (or
    ``_VAR_INPUT`` for the first ``2^m`` rows, labelled by the caller);
    ``coord_cols[j]`` is the column carrying coordinate ``j``.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    var_kind: np.ndarray
    var_level: np.ndarray
    chk_kind: np.ndarray
    chk_level: np.ndarray
    coord_cols: np.ndarray


_KINDS = list(RoleKind)
_K = {k: i for i, k in enumerate(_KINDS)}


def _base_block(depth: int) -> _Block:
    return _Block(
        n=2,
        rows=np.array([0, 1, 1]),
        cols=np.array([0, 0, 1]),
        var_kind=np.array([_VAR_INPUT, _VAR_INPUT]),
        var_level=np.array([depth, depth]),
        chk_kind=np.array([_K[RoleKind.COORDINATE_CHECK]] * 2),
        chk_level=np.array([depth, depth]),
        coord_cols=np.array([0, 1]),
    )


def _adopt_inputs(b: _Block, kind: RoleKind) -> np.ndarray:
    k = b.var_kind.copy()
    k[: len(b.coord_cols)] = _K[kind]
    return k


def _fe_block(m: int, depth: int) -> _Block:
    if m == 1:
        return _base_block(depth)
    h = 1 << (m - 1)
    c1 = _fe_block(m - 1, depth + 1)  # realises x_left = w F(m-1)
    c2 = c1  # identical structure; realises x_right = v_lower F(m-1)
    s = c1.n
    n = h + 2 * s
    idx = np.arange(h)
    cw_cols = 2 * s + idx
    rows = np.concatenate([c2.rows + h, c1.rows + h + s, idx, h + idx, h + s + idx])
    cols = np.concatenate([c2.cols + s, c1.cols, cw_cols, cw_cols, cw_cols])
    var_kind = np.concatenate([np.full(h, _VAR_INPUT), c2.var_kind, _adopt_inputs(c1, RoleKind.INTERMEDIATE)])
    var_level = np.concatenate([np.full(h, depth), c2.var_level, c1.var_level])
    chk_kind = np.concatenate([c1.chk_kind, c2.chk_kind, np.full(h, _K[RoleKind.INTERNAL_CHECK])])
    chk_level = np.concatenate([c1.chk_level, c2.chk_level, np.full(h, depth)])
    coord_cols = np.concatenate([c1.coord_cols, c2.coord_cols + s])
    return _Block(n, rows, cols, var_kind, var_level, chk_kind, chk_level, coord_cols)


def _sc_block(m: int, depth: int) -> _Block:
    if m == 1:
        return _base_block(depth)
    h = 1 << (m - 1)
    c1 = _sc_block(m - 1, depth + 1)
    c2 = c1
    s = c1.n
    n = 2 * h + 2 * s
    idx = np.arange(h)
    cw_cols = 2 * s + idx
    cp_cols = 2 * s + h + idx
    rows = np.concatenate(
        [
            c2.rows + 2 * h,
            c1.rows + 2 * h + s,
            idx,  # v_upper -> c_w
            h + idx,  # v_lower -> c_w
            2 * h + s + idx,  # w -> c_w
            h + idx,  # v_lower -> copy check
            2 * h + idx,  # copy -> copy check
        ]
    )
    cols = np.concatenate([c2.cols + s, c1.cols, cw_cols, cw_cols, cw_cols, cp_cols, cp_cols])
    var_kind = np.concatenate(
        [
            np.full(2 * h, _VAR_INPUT),
            _adopt_inputs(c2, RoleKind.TRIVIAL_COPY),
            _adopt_inputs(c1, RoleKind.INTERMEDIATE),
        ]
    )
    var_level = np.concatenate([np.full(2 * h, depth), c2.var_level, c1.var_level])
    chk_kind = np.concatenate([c1.chk_kind, c2.chk_kind, np.full(2 * h, _K[RoleKind.INTERNAL_CHECK])])
    chk_level = np.concatenate([c1.chk_level, c2.chk_level, np.full(2 * h, depth)])
    coord_cols = np.concatenate([c1.coord_cols, c2.coord_cols + s])
    return _Block(n, rows, cols, var_kind, var_level, chk_kind, chk_level, coord_cols)


def _check_m(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or m < 1 or m > M_CAP:
        raise ValueError(f"exponent m must be in 1..{M_CAP}, got {m!r}")


def _finish(b: _Block, m: int, kind: str) -> LabeledFactorGraph:
    n_coords = 1 << m
    coord_of_col = np.full(b.n, -1)
    coord_of_col[b.coord_cols] = np.arange(n_coords)
    var_roles = []
    for i, (k, lvl) in enumerate(zip(b.var_kind.tolist(), b.var_level.tolist())):
        if k == _VAR_INPUT:
            var_roles.append(NodeRole(RoleKind.ORIGINAL_VARIABLE, i, 0))
        else:
            var_roles.append(NodeRole(_KINDS[k], None, lvl))
    chk_roles = []
    for j, (k, lvl) in enumerate(zip(b.chk_kind.tolist(), b.chk_level.tolist())):
        idx = int(coord_of_col[j]) if k == _K[RoleKind.COORDINATE_CHECK] else None
        chk_roles.append(NodeRole(_KINDS[k], idx, lvl))
    edges = np.stack([b.rows, b.cols], axis=1)
    return LabeledFactorGraph(b.n, b.n, edges, tuple(var_roles), tuple(chk_roles), kind, m)


def base_graph(m: int) -> LabeledFactorGraph:
    """Unexpanded graph of F(m): rows are inputs, columns coordinates."""
    _check_m(m)
    g = LabeledFactorGraph.from_matrix(f_matrix(m), kind="base", m=m)
    return g


def fe_full(m: int) -> LabeledFactorGraph:
    """Fully expanded 4-cycle-free G-space graph with ``(m+1) 2^(m-1)`` nodes per side.

    Variable rows: ``[v_upper ; child-2 rows ; child-1 rows]``; check
    columns: ``[child-1 columns ; child-2 columns ; c_w]``.  Child 1 realises
    ``x_left = w F(m-1)``, child 2 ``x_right = v_lower F(m-1)``, and each
    ``c_w`` check ties ``w_i + v_upper_i + v_lower_i = 0``.  The first
    ``2^m`` rows are the original inputs in label order.
    """
    _check_m(m)
    return _finish(_fe_block(m, 0), m, "fe")


def fe_sc_full(m: int) -> LabeledFactorGraph:
    """Conventional SC graph with ``m 2^m`` nodes per side.

    Rows ``[v_upper ; v_lower ; child-2 rows ; child-1 rows]`` and columns
    ``[child-1 ; child-2 ; c_w ; copy]``.  The inputs of child 2 are
    ``TRIVIAL_COPY`` nodes tied to ``v_lower`` by degree-2 copy checks.
    """
    _check_m(m)
    return _finish(_sc_block(m, 0), m, "sc")


def he_full(m: int) -> LabeledFactorGraph:
    """H-space graph: transpose of ``fe_full(m)`` with roles exchanged.

    Coordinate checks become coordinate variables, ``c_w`` checks become
    hidden-sum variables, original input rows become terminal checks and
    intermediate rows become internal checks.

    Labels carry the index reversal ``j -> N-1-j`` that maps a row of F(m)
    onto a row of F(m)^T: the node built from coordinate column ``c`` is
    code coordinate ``N-1-c`` and the check built from input row ``r`` is
    parity row ``N-1-r``.  With internal checks enforced, terminal check
    ``j`` then evaluates row ``j`` of F(m)^T on the coordinate word, so a
    code with frozen set S_F keeps exactly the terminal checks in S_F.
    """
    g = fe_full(m)
    n = 1 << m
    var_roles = []
    for r in g.chk_roles:
        if r.kind is RoleKind.COORDINATE_CHECK:
            var_roles.append(NodeRole(RoleKind.COORDINATE_VARIABLE, n - 1 - r.index, r.level))
        else:
            var_roles.append(NodeRole(RoleKind.HIDDEN_SUM, None, r.level))
    chk_roles = []
    for r in g.var_roles:
        if r.kind is RoleKind.ORIGINAL_VARIABLE:
            chk_roles.append(NodeRole(RoleKind.TERMINAL_CHECK, n - 1 - r.index, r.level))
        else:
            chk_roles.append(NodeRole(RoleKind.INTERNAL_CHECK, None, r.level))
    edges = g.edges[:, ::-1]
    return LabeledFactorGraph(g.n_chk, g.n_var, edges, tuple(var_roles), tuple(chk_roles), "he", m)


# -- girth ------------------------------------------------------------------


def girth(g: LabeledFactorGraph | BitMatrix) -> float | int:
    """Exact length of the shortest cycle, or ``INFINITE_GIRTH`` for a forest.

    Breadth-first search from every node, ignoring the edge a node was
    reached by; searches stop once they cannot beat the best cycle found.
    """
    if isinstance(g, BitMatrix):
        g = LabeledFactorGraph.from_matrix(g)
    nv = g.n_var
    adj: list[list[int]] = [[] for _ in range(nv + g.n_chk)]
    for v, c in g.edges.tolist():
        adj[v].append(nv + c)
        adj[nv + c].append(v)

    best = INFINITE_GIRTH
    n_nodes = len(adj)
    dist = [-1] * n_nodes
    parent = [-1] * n_nodes
    for root in range(n_nodes):
        if len(adj[root]) < 2:
            continue
        touched = [root]
        dist[root] = 0
        frontier = [root]
        while frontier and 2 * dist[frontier[0]] < best:
            nxt = []
            for u in frontier:
                du = dist[u]
                for w in adj[u]:
                    if w == parent[u]:
                        continue
                    if dist[w] < 0:
                        dist[w] = du + 1
                        parent[w] = u
                        touched.append(w)
                        nxt.append(w)
                    else:
                        cyc = du + dist[w] + 1
                        if cyc < best:
                            best = cyc
            frontier = nxt
        for t in touched:
            dist[t] = -1
            parent[t] = -1
    return best
