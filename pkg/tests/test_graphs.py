import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarfg.gf2 import BitMatrix, f_matrix, transpose
from polarfg.graphs import (
    INFINITE_GIRTH,
    LabeledFactorGraph,
    RoleKind,
    base_graph,
    expand_pair,
    expand_step,
    fe_full,
    fe_sc_full,
    girth,
    he_full,
    parse_alist,
    staged_size,
)

from oracles import f_dense, gf2_solve, has_4cycle, has_6cycle

FE2 = [
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 1, 1, 0, 1],
    [1, 0, 0, 0, 1, 0],
    [1, 1, 0, 0, 0, 1],
]


def nx_girth(g: LabeledFactorGraph):
    h = nx.Graph()
    h.add_nodes_from(range(g.n_var + g.n_chk))
    h.add_edges_from((int(v), g.n_var + int(c)) for v, c in g.edges)
    return nx.girth(h)


def test_fe2_matrix_and_roles():
    g = fe_full(2)
    assert g.biadjacency.tolist() == FE2
    kinds = [r.kind for r in g.var_roles]
    assert kinds[:4] == [RoleKind.ORIGINAL_VARIABLE] * 4
    assert kinds[4:] == [RoleKind.INTERMEDIATE] * 2
    assert [r.index for r in g.var_roles[:4]] == [0, 1, 2, 3]


def test_expand_step_m2_is_fe2():
    assert expand_step(2).tolist() == FE2


def test_expand_pair_on_f2():
    # Rows 1 and 3 of F(2) share columns 0 and 1.
    out = expand_pair(f_matrix(2), 1, 3).to_numpy()
    assert out.shape == (5, 5)
    assert out[1].tolist() == [0, 0, 0, 0, 1]
    assert out[3].tolist() == [0, 0, 1, 1, 1]
    assert out[4].tolist() == [1, 1, 0, 0, 1]


def test_expand_pair_rejects_non_cycle():
    with pytest.raises(ValueError):
        expand_pair(f_matrix(2), 0, 2)
    with pytest.raises(ValueError):
        expand_pair(f_matrix(2), 1, 1)


def test_sc_graph_m2():
    g = fe_sc_full(2)
    assert (g.n_var, g.n_chk) == (8, 8)
    counts = g.role_counts()["var"]
    assert counts[RoleKind.ORIGINAL_VARIABLE.value] == 4
    assert counts[RoleKind.TRIVIAL_COPY.value] == 2
    assert counts[RoleKind.INTERMEDIATE.value] == 2


def test_sc_m1_is_base():
    assert fe_sc_full(1).biadjacency == f_matrix(1)
    assert fe_full(1).biadjacency == f_matrix(1)


@pytest.mark.parametrize("m", range(2, 11))
def test_fe_size_and_edges(m):
    g = fe_full(m)
    side = (m + 1) << (m - 1)
    assert g.n_var == g.n_chk == side
    # each c_w check has degree 3; each base block holds 3 edges
    assert g.n_edges == 3 * (m - 1) * (1 << (m - 1)) + 3 * (1 << (m - 1))


@pytest.mark.parametrize("m", range(1, 9))
def test_sc_size(m):
    g = fe_sc_full(m)
    assert g.n_var == g.n_chk == m << m


def test_staged_size_values():
    assert staged_size(2, 1) == 6
    assert staged_size(3, 1) == 12
    assert staged_size(3, 2) == 16
    assert staged_size(3, 2) == fe_full(3).n_var
    for bad in [(1, 1), (3, 0), (3, 3)]:
        with pytest.raises(ValueError):
            staged_size(*bad)


@pytest.mark.parametrize("m", range(2, 7))
def test_girth_matches_networkx(m):
    assert girth(fe_full(m)) == nx_girth(fe_full(m)) == 8
    assert girth(fe_sc_full(m)) == nx_girth(fe_sc_full(m)) == 12


def test_girth_of_base_graphs():
    assert girth(base_graph(1)) == INFINITE_GIRTH
    assert girth(base_graph(2)) == 4
    assert girth(BitMatrix([[1, 1], [1, 1]])) == 4
    assert girth(BitMatrix([[1, 0], [0, 1]])) == INFINITE_GIRTH


@pytest.mark.parametrize("m", range(2, 5))
def test_fe_has_no_short_cycles_by_row_scan(m):
    a = fe_full(m).biadjacency.to_numpy()
    assert not has_4cycle(a)
    assert not has_6cycle(a)
    assert has_4cycle(f_matrix(m).to_numpy())


def test_row_scan_detects_six_cycle():
    hexagon = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
    assert not has_4cycle(hexagon)
    assert has_6cycle(hexagon)


def _solve_hidden(g: LabeledFactorGraph, known_cols, known_vals, internal_cols):
    """Unknown variables are everything not in ``known_cols``; internal checks sum to zero."""
    a = g.biadjacency.to_numpy()
    unknown = [v for v in range(g.n_var) if v not in set(known_cols)]
    rows, rhs = [], []
    for c in internal_cols:
        rows.append([int(a[v, c]) for v in unknown])
        rhs.append(int(sum(a[v, c] * b for v, b in zip(known_cols, known_vals)) % 2))
    y, nullity = gf2_solve(rows, rhs, len(unknown))
    full = np.zeros(g.n_var, dtype=int)
    full[list(known_cols)] = known_vals
    full[unknown] = y
    return full, nullity


@pytest.mark.parametrize("builder", [fe_full, fe_sc_full])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_g_space_graph_realises_polar_transform(builder, m):
    g = builder(m)
    n = 1 << m
    f = np.array(f_dense(m))
    a = g.biadjacency.to_numpy()
    internal = [j for j, r in enumerate(g.chk_roles) if r.kind is RoleKind.INTERNAL_CHECK]
    coord = {r.index: j for j, r in enumerate(g.chk_roles) if r.kind is RoleKind.COORDINATE_CHECK}
    assert sorted(coord) == list(range(n))
    rng = np.random.default_rng(m)
    for _ in range(8):
        u = rng.integers(0, 2, n)
        state, nullity = _solve_hidden(g, list(range(n)), u, internal)
        assert nullity == 0
        x = [int(state @ a[:, coord[j]] % 2) for j in range(n)]
        assert x == (u @ f % 2).tolist()


@pytest.mark.parametrize("m", [2, 3, 4])
def test_h_space_terminal_checks_evaluate_rows_of_ft(m):
    g = he_full(m)
    n = 1 << m
    ft = np.array(f_dense(m)).T
    a = g.biadjacency.to_numpy()
    coord_var = {r.index: v for v, r in enumerate(g.var_roles) if r.kind is RoleKind.COORDINATE_VARIABLE}
    internal = [j for j, r in enumerate(g.chk_roles) if r.kind is RoleKind.INTERNAL_CHECK]
    terminal = {r.index: j for j, r in enumerate(g.chk_roles) if r.kind is RoleKind.TERMINAL_CHECK}
    assert sorted(coord_var) == sorted(terminal) == list(range(n))
    rng = np.random.default_rng(100 + m)
    for _ in range(8):
        x = rng.integers(0, 2, n)
        known = [coord_var[j] for j in range(n)]
        state, nullity = _solve_hidden(g, known, x, internal)
        assert nullity == 0
        got = [int(state @ a[:, terminal[j]] % 2) for j in range(n)]
        assert got == (ft @ x % 2).tolist()


@pytest.mark.parametrize("m", range(1, 9))
def test_he_is_transpose_of_fe(m):
    assert he_full(m).biadjacency == transpose(fe_full(m).biadjacency)


@pytest.mark.parametrize("builder", [fe_full, fe_sc_full, he_full, base_graph])
def test_alist_roundtrip(builder):
    g = builder(3)
    n_var, n_chk, edges = parse_alist(g.to_alist())
    assert (n_var, n_chk) == (g.n_var, g.n_chk)
    assert np.array_equal(edges, g.edges)
    lines = g.to_alist().splitlines()
    assert lines[0] == f"{g.n_var} {g.n_chk}"
    assert lines[1] == f"{g.var_degrees.max()} {g.chk_degrees.max()}"


def test_alist_rejects_inconsistent_lists():
    text = base_graph(1).to_alist().splitlines()
    text[-1] = "1 0"
    with pytest.raises(ValueError):
        parse_alist("\n".join(text))


@pytest.mark.parametrize("builder", [fe_full, fe_sc_full, he_full])
def test_json_roundtrip(builder):
    g = builder(3)
    back = LabeledFactorGraph.from_json(g.to_json())
    assert back.same_edges(g)
    assert back.var_roles == g.var_roles
    assert back.chk_roles == g.chk_roles
    assert (back.kind, back.m) == (g.kind, g.m)


def test_construction_is_deterministic():
    assert fe_full(5).to_json() == fe_full(5).to_json()
    assert fe_sc_full(4).to_alist() == fe_sc_full(4).to_alist()


@pytest.mark.parametrize("m", [0, 21])
def test_bad_exponent(m):
    for b in (fe_full, fe_sc_full, he_full):
        with pytest.raises(ValueError):
            b(m)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(3, 7), st.data())
def test_bit_matrix_girth_matches_networkx(r, c, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=r * c, max_size=r * c))
    a = np.array(bits, dtype=np.uint8).reshape(r, c)
    a[:, 0] |= (~a.any(axis=1)).astype(np.uint8)  # no empty rows
    g = LabeledFactorGraph.from_matrix(BitMatrix(a))
    ref = nx_girth(g)
    assert girth(g) == ref
