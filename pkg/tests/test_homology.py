import pytest

from qshuffle.bimodule import ShuffleBimodule
from qshuffle.braidwords import Content
from qshuffle.cartan import CartanDatum, WeightSpec, weyl_character
from qshuffle.exact.field import CyclotomicField, GenericField
from qshuffle.exact.linalg import SparseMatrix
from qshuffle.homology.cohochschild import (
    bar_complex,
    bar_homology,
    cohochschild_complex,
    cohochschild_homology,
)
from qshuffle.homology.complex import ComplexBlock, GradedComplex, TensorSpace, homology_ranks

F = GenericField()


def _model(kind, rank, c, field=F):
    return ShuffleBimodule(CartanDatum.of_type(kind, rank), field, WeightSpec(c))


def test_tensor_space_indexing():
    dims = {"a": 2, "b": 0, "c": 3}
    sp = TensorSpace([("a", "c"), ("b",), ("c",)], dims.get)
    assert sp.dim == 2 * 3 + 3
    labels = sp.labels()
    assert len(labels) == sp.dim
    assert [sp.index(t, i) for t, i in labels] == list(range(sp.dim))


def test_zero_differentials_give_term_dims():
    blk = ComplexBlock("x", {0: 2, 1: 3, 2: 1},
                       {0: SparseMatrix(3, 2, F), 1: SparseMatrix(1, 3, F)})
    cx = GradedComplex("toy", +1, F, (0, 1, 2), {"x": blk})
    rep = homology_ranks(cx)
    assert [rep.total(n) for n in range(3)] == [2, 3, 1]
    assert rep.all_certified()


def test_exact_sequence_is_acyclic():
    # 0 -> k --(q)--> k -> 0
    D = SparseMatrix.from_dense(F, [[F.q]])
    cx = GradedComplex("toy", +1, F, (0, 1), {"x": ComplexBlock("x", {0: 1, 1: 1}, {0: D})})
    rep = homology_ranks(cx)
    assert rep.total(0) == rep.total(1) == 0


def test_square_zero_detector():
    D = SparseMatrix.from_dense(F, [[F.one]])
    cx = GradedComplex("toy", +1, F, (0, 1, 2), {"x": ComplexBlock("x", {0: 1, 1: 1, 2: 1}, {0: D, 1: D})})
    assert cx.check_square_zero() == [("x", 0)]
    assert homology_ranks(cx).square_zero_failures == [("x", 0)]


@pytest.mark.parametrize("kind,rank,c,t", [("A", 1, (1,), 4), ("A", 1, (2,), 4), ("A", 2, (1, 0), 3),
                                            ("B", 2, (1, 0), 3)])
def test_differentials_square_to_zero(kind, rank, c, t):
    model = _model(kind, rank, c)
    for k in (1, 2):
        assert cohochschild_complex(model, k, t, 2).check_square_zero() == []
        assert cohochschild_complex(model, k, t, 2, reduced=False).check_square_zero() == []
        assert bar_complex(model, k, t, 2).check_square_zero() == []


def test_square_zero_at_root_of_unity():
    model = _model("A", 1, (1,), CyclotomicField(3))
    assert cohochschild_complex(model, 1, 5, 2).check_square_zero() == []
    assert bar_complex(model, 1, 5, 2).check_square_zero() == []


def test_degree_zero_is_coinvariants():
    model = _model("A", 2, (1, 0))
    rep = cohochschild_homology(model, 1, 3, 1)
    assert rep.by_degree(0) == model.coinvariant_dims(1, 3)


def test_sl2_double_weight_vanishing():
    model = _model("A", 1, (2,))
    rep = cohochschild_homology(model, 1, 4, 2)
    assert [rep.total(n) for n in range(3)] == [3, 0, 0]
    ch = weyl_character(model.datum, model.lam)
    assert {X.c: d for X, d in rep.by_degree(0).items() if d} == ch
    assert rep.all_certified()


@pytest.mark.parametrize("kind,rank,c,t", [("A", 1, (1,), 4), ("A", 2, (1, 0), 3)])
def test_bar_and_cobar_dims_agree(kind, rank, c, t):
    model = _model(kind, rank, c)
    bar = bar_homology(model, 1, t, 2)
    co = cohochschild_homology(model, 1, t, 2)
    assert bar.dims == co.dims


def test_unreduced_complex_has_the_same_homology():
    model = _model("A", 1, (1,))
    red = homology_ranks(cohochschild_complex(model, 1, 3, 2))
    unred = homology_ranks(cohochschild_complex(model, 1, 3, 2, reduced=False))
    assert [red.total(n) for n in range(3)] == [unred.total(n) for n in range(3)] == [2, 0, 0]


def test_exact_and_modular_ranks_agree():
    model = _model("A", 2, (1, 0))
    cx = cohochschild_complex(model, 1, 3, 2)
    assert homology_ranks(cx, "exact").dims == homology_ranks(cx, "auto").dims


def test_jobs_do_not_change_results():
    model = _model("A", 2, (1, 0))
    serial = cohochschild_homology(model, 2, 3, 1, jobs=1)
    parallel = cohochschild_homology(_model("A", 2, (1, 0)), 2, 3, 1, jobs=2)
    assert serial.dims == parallel.dims
    assert serial.certified == parallel.certified
    assert serial.incomplete == parallel.incomplete


def test_incomplete_blocks_are_flagged():
    model = _model("A", 1, (1,))
    rep = cohochschild_homology(model, 1, 4, 1)
    # reduced blocks of F-length t have terms up to n = t, so n_max = 1 covers t <= 2
    assert sorted(X.f_length for X in rep.incomplete) == [3, 4]
    assert Content((2,), 1) not in rep.incomplete
