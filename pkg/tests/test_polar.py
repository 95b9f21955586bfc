import itertools

import numpy as np
import pytest

from polarfg.gf2 import mul, transpose
from polarfg.polar import (
    DualCode,
    InvalidFrozenSet,
    PolarCodeSpec,
    bhattacharyya_bec,
    dual,
    frozen_bec,
    frozen_rm,
    generator,
    is_codeword,
    new_code,
    parity_check,
    span,
    systematic_partition,
)

from conftest import all_codes
from oracles import gf2_rank, kernel_enum, orthogonal_complement, span_ints


def test_new_code_basics():
    c = new_code(3, [3, 0, 1])
    assert c.frozen == (0, 1, 3)
    assert (c.n, c.k) == (8, 5)
    assert c.info == (2, 4, 5, 6, 7)
    assert c.frozen_mask.tolist() == [1, 1, 0, 1, 0, 0, 0, 0]


@pytest.mark.parametrize("bad", [[4], [-1], [1, 1]])
def test_new_code_rejects_bad_labels(bad):
    with pytest.raises(InvalidFrozenSet):
        new_code(2, bad)


def test_code_json_roundtrip():
    c = new_code(4, frozen_bec(4, 8, 0.5), "bec:0.5")
    assert PolarCodeSpec.from_json(c.to_json()) == c


def test_rm43_generator_and_check(rm43):
    assert generator(rm43).tolist() == [[1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
    assert parity_check(rm43).tolist() == [[1, 1, 1, 1]]


def test_repetition_code(rep4):
    assert generator(rep4).tolist() == [[1, 1, 1, 1]]
    assert span(generator(rep4)) == {(0, 0, 0, 0), (1, 1, 1, 1)}


@pytest.mark.parametrize("m", [2, 3])
def test_parity_check_kernel_is_code(m):
    for code in all_codes(m):
        words = span_ints(generator(code).tolist(), code.n) if code.k else {(0,) * code.n}
        h = parity_check(code).tolist()
        assert kernel_enum(h, code.n) == words


def test_is_codeword(rm43):
    assert is_codeword([1, 1, 1, 1], rm43)
    assert is_codeword([0, 1, 0, 1], rm43)
    assert not is_codeword([1, 0, 0, 0], rm43)


def test_dual_of_rm43(rm43):
    d = dual(rm43)
    assert isinstance(d, DualCode)
    assert d.codewords() == {(0, 0, 0, 0), (1, 1, 1, 1)}


@pytest.mark.parametrize("m", [2, 3])
def test_dual_is_orthogonal_complement(m):
    for code in all_codes(m):
        words = span_ints(generator(code).tolist(), code.n) if code.k else {(0,) * code.n}
        d = dual(code)
        assert d.codewords() == orthogonal_complement(words, code.n)
        assert d.code.k + code.k == code.n
        dd = dual(d)
        assert not dd.reversed
        assert dd.code.frozen == code.frozen


def test_bhattacharyya_values():
    assert bhattacharyya_bec(1, 0.5).tolist() == [0.75, 0.25]
    z = bhattacharyya_bec(2, 0.5)
    assert np.allclose(z, [0.9375, 0.5625, 0.4375, 0.0625])
    assert np.isclose(z.sum(), 4 * 0.5)  # the recursion conserves total erasure


def test_frozen_constructions():
    assert frozen_bec(2, 1, 0.5) == (0, 1, 2)
    assert frozen_bec(3, 4, 0.5) == (0, 1, 2, 4)
    assert frozen_rm(2, 3) == (0,)
    assert frozen_rm(3, 4) == (0, 1, 2, 4)
    assert frozen_rm(3, 0) == tuple(range(8))
    with pytest.raises(ValueError):
        frozen_rm(2, 5)


@pytest.mark.parametrize("m", range(2, 9))
def test_systematic_partition_orthogonality(m):
    rng = np.random.default_rng(m)
    for _ in range(20):
        fz = [i for i in range(1 << m) if rng.random() < 0.5]
        p = systematic_partition(new_code(m, fz))
        assert sorted(p.pi) == list(range(1 << m))
        if p.g_u.rows and p.h_u.rows:
            assert not mul(p.g_u, transpose(p.h_u)).to_numpy().any()


def test_generator_rank_equals_k():
    for code in all_codes(3):
        if code.k:
            assert gf2_rank(generator(code).tolist()) == code.k


def test_span_of_all_sequences():
    c = new_code(3, [])
    assert len(span(generator(c))) == 256
    assert span(generator(c)) == set(itertools.product((0, 1), repeat=8))
