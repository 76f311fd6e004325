import random
from math import comb

import pytest

from qshuffle.cartan import CartanDatum, WeightSpec
from qshuffle.exact.field import CyclotomicField, GenericField
from qshuffle.homology.complex import homology_ranks
from qshuffle.homology.koszul import (
    HomotopyDomainError,
    apply_d,
    block_elements,
    expected_special_dims,
    gr_algebra_for,
    homotopy_defect,
    is_special_block,
    koszul_complex,
    koszul_split_root_of_unity,
    omega_coeffs,
    random_element,
    wambst_homotopy,
)

F = GenericField()
SL2 = CartanDatum.of_type("A", 1)
SL3 = CartanDatum.of_type("A", 2)


@pytest.fixture(scope="module")
def sl3_spec():
    return gr_algebra_for(SL3, WeightSpec((1, 0)), F, (0, 1, 0))


def test_gr_algebra_data(sl3_spec):
    s = sl3_spec
    assert s.rs.order == ((1, 0), (1, 1), (0, 1))
    assert s.N == 3 and s.r == 3
    assert s.Q(0, 1) == F.q and s.Q(0, 2) == F.qpow(-1)
    with pytest.raises(ValueError):
        s.Q(1, 0)
    # F_{beta_2} moves past F_{beta_1}: twist q^-(beta_1, beta_2)
    assert s.act(1, (1, 0, 0)) == (F.qpow(-1), (1, 1, 0))
    assert s.act(0, (0, 0, 0)) == (F.one, (1, 0, 0))


def test_action_truncates_at_root_of_unity():
    s = gr_algebra_for(SL2, WeightSpec((1,)), CyclotomicField(3))
    assert s.act(0, (2,))[0].is_zero()
    assert s.act(0, (1,))[0] == s.field.one


def test_omega_examples(sl3_spec):
    s = sl3_spec
    assert omega_coeffs(s, (0, 0, 0), (1, 0, 0), 0) == (F.one, F.zero)
    assert omega_coeffs(s, (1, 0, 0), (0, 1, 0), 1)[0] == F.qpow(-1)
    # sign from the exterior generator passed over
    assert omega_coeffs(s, (0, 0, 0), (1, 1, 0), 1)[0] == -F.one
    # omega vanishes when there is no polynomial factor to move
    assert omega_coeffs(s, (0, 0, 0), (0, 1, 0), 1)[1].is_zero()


def test_d_on_two_generators(sl3_spec):
    x = {((0, 0, 0), (1, 1, 0), 0): F.one}
    assert apply_d(sl3_spec, x) == {((1, 0, 0), (0, 1, 0), 0): F.q, ((0, 1, 0), (1, 0, 0), 0): -F.one}


def test_d_on_one_generator():
    s = gr_algebra_for(SL2, WeightSpec((1,)), F)
    assert apply_d(s, {((0,), (1,), 0): F.one}) == {((1,), (0,), 0): F.one}


@pytest.mark.parametrize("kind,rank,c,pbw", [("A", 1, (1,), 4), ("A", 2, (1, 0), 3), ("B", 2, (1, 0), 3)])
def test_koszul_square_zero_and_generic_homology(kind, rank, c, pbw):
    datum = CartanDatum.of_type(kind, rank)
    spec = gr_algebra_for(datum, WeightSpec(c), F)
    cx = koszul_complex(spec, pbw)
    assert cx.check_square_zero() == []
    rep = homology_ranks(cx)
    assert rep.total(0) == spec.r
    assert all(rep.total(k) == 0 for k in range(1, spec.N + 1))


def test_convex_order_does_not_change_homology():
    out = []
    for word in ((0, 1, 0), (1, 0, 1)):
        spec = gr_algebra_for(SL3, WeightSpec((1, 0)), F, word)
        rep = homology_ranks(koszul_complex(spec, 3))
        out.append([rep.total(k) for k in range(4)])
    assert out[0] == out[1] == [3, 0, 0, 0]


def test_homotopy_exhaustive_sl2():
    spec = gr_algebra_for(SL2, WeightSpec((1,)), F)
    cx = koszul_complex(spec, 4)
    n = 0
    for blk in cx.blocks.values():
        if not spec.norm(blk.key[0]):
            continue
        for x in block_elements(spec, blk):
            assert homotopy_defect(spec, x) == {}
            n += 1
    assert n > 0


def test_homotopy_random_sl3(sl3_spec):
    rng = random.Random(0)
    for _ in range(25):
        assert homotopy_defect(sl3_spec, random_element(sl3_spec, rng, 3)) == {}


def test_homotopy_domain_error(sl3_spec):
    with pytest.raises(HomotopyDomainError):
        wambst_homotopy(sl3_spec, {((0, 0, 0), (0, 0, 0), 0): F.one})


@pytest.mark.parametrize("c,l", [((1,), 3), ((2,), 5)])
def test_root_of_unity_split_sl2(c, l):
    spec = gr_algebra_for(SL2, WeightSpec(c), CyclotomicField(l))
    S, R = koszul_split_root_of_unity(spec)
    assert all(is_special_block(spec, key[0]) for key in S.blocks)
    assert not any(is_special_block(spec, key[0]) for key in R.blocks)
    rs, rr = homology_ranks(S), homology_ranks(R)
    assert {k: rs.total(k) for k in range(spec.N + 1)} == expected_special_dims(spec)
    assert all(rr.total(k) == 0 for k in range(spec.N + 1))
    for blk in R.blocks.values():
        for x in block_elements(spec, blk):
            assert homotopy_defect(spec, x) == {}


def test_root_of_unity_split_sl3():
    spec = gr_algebra_for(SL3, WeightSpec((1, 0)), CyclotomicField(3))
    S, R = koszul_split_root_of_unity(spec)
    rs, rr = homology_ranks(S), homology_ranks(R)
    assert [rs.total(k) for k in range(4)] == [3 * comb(3, k) for k in range(4)]
    assert [rr.total(k) for k in range(4)] == [0, 0, 0, 0]


def test_split_needs_root_of_unity():
    with pytest.raises(ValueError):
        koszul_split_root_of_unity(gr_algebra_for(SL2, WeightSpec((1,)), F))
