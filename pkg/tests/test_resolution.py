import numpy as np
import pytest

from overdet import catalog, randgen
from overdet.charvar import char_variety
from overdet.groebner import ModuleOrder, buchberger, is_zero_vec, normal_form
from overdet.poly import GaussPoly
from overdet.resolution import (HomologyEntry, build_resolution, degree_window,
                                degreewise_homology, dualize, ext_vanishing)
from overdet.symbol import ShiftError, ShiftedMatrix, matrix_of, principal_part

from _util import P, column


def pp(name):
    return principal_part(matrix_of(catalog.system(name)))


def test_koszul_r3():
    R = build_resolution(pp("grad3"))
    assert R.ranks == [1, 3, 3, 1]
    assert R.length == 3
    assert R.shifts == [(0,), (1, 1, 1), (2, 2, 2), (3,)]
    assert R.products_zero()
    assert all(R.exactness_certificates())
    assert not R.truncated


def test_cr_resolution():
    R = build_resolution(pp("cr2"))
    assert R.ranks == [1, 2, 1]
    assert R.length == 2
    P0, P1 = R.steps
    assert P0.mat == ((P("d1 + i*d2", 4),), (P("d3 + i*d4", 4),))
    assert (P1 @ P0).is_zero()
    assert P1.row_shifts == (2,)
    assert all(R.exactness_certificates())


def test_unit_matrix_length_zero():
    M = ShiftedMatrix.build([[GaussPoly.one(2)]], [0], [0], 2)
    R = build_resolution(M)
    assert R.length == 0
    assert R.coker_zero
    D = dualize(R)
    assert D.nterms == 2  # 0 -> A^{-rho0} -> A^{-rho1}


def test_zero_presentation():
    M = ShiftedMatrix.build([[GaussPoly.zero(2)]], [1], [0], 2)
    R = build_resolution(M)
    assert R.steps == [] and R.length == 0 and not R.coker_zero


def test_non_homogeneous_rejected():
    M = ShiftedMatrix.build([[P("d1^2 + d1", 2)]], [2], [0], 2)
    with pytest.raises(ShiftError):
        build_resolution(M)


def test_max_len_truncation():
    R = build_resolution(pp("grad3"), max_len=1)
    assert R.truncated
    assert R.ranks == [1, 3]
    D = dualize(R)
    H = ext_vanishing(D, 3)
    assert H.status(0) == "trivial"
    assert H.status(1) == "unknown"
    assert H.status(3) == "unknown"
    with pytest.raises(ValueError):
        build_resolution(pp("grad3"), max_len=0)


def test_dual_koszul_self_dual_ranks():
    D = dualize(build_resolution(pp("grad3")))
    assert [len(s) for s in D.term_shifts] == [1, 3, 3, 1]
    assert D.term_shifts[0] == (0,) and D.term_shifts[3] == (-3,)
    assert D.products_zero()


def test_dual_cr():
    D = dualize(build_resolution(pp("cr2")))
    assert [len(s) for s in D.term_shifts] == [1, 2, 1]


def test_ext_koszul():
    D = dualize(build_resolution(pp("grad3")))
    H = ext_vanishing(D, 3)
    assert H.table() == {0: "trivial", 1: "trivial", 2: "trivial", 3: "nontrivial"}
    e = H.entries[3]
    assert e.verify(D)
    # the witness generates the top term modulo the image: a unit vector
    assert e.witness == (GaussPoly.one(3),)


def test_ext_cr_and_laplace():
    D = dualize(build_resolution(pp("cr2")))
    H = ext_vanishing(D, 2)
    assert H.table() == {0: "trivial", 1: "trivial", 2: "nontrivial"}
    assert H.entries[2].verify(D)
    D = dualize(build_resolution(pp("laplace2")))
    H = ext_vanishing(D, 1)
    assert H.table() == {0: "trivial", 1: "nontrivial"}


def test_witness_verification_rejects_boundary():
    D = dualize(build_resolution(pp("grad3")))
    # d1 * e is a boundary at the last term
    fake = HomologyEntry(3, "nontrivial", (P("d1", 3),))
    assert not fake.verify(D)


def test_lemma_on_catalog():
    for name in catalog.names():
        P0 = pp(name)
        m = P0.nvars - char_variety(P0).dim
        D = dualize(build_resolution(P0))
        H = ext_vanishing(D, m)
        assert H.trivial_below(m), name
        for e in H.entries.values():
            assert e.verify(D)


def test_length_bounded_by_n_on_catalog():
    for name in catalog.names():
        R = build_resolution(pp(name))
        assert R.length <= R.nvars
        assert not R.truncated


def test_length_bound_random():
    rng = np.random.default_rng(31)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        M = randgen.shifted_matrix(rng, n, int(rng.integers(1, 4)), int(rng.integers(1, 3)))
        R = build_resolution(M)
        assert R.length <= n and not R.truncated
        assert R.products_zero()
        assert all(R.exactness_certificates())


def test_degreewise_agrees_with_groebner_koszul():
    D = dualize(build_resolution(pp("grad3")))
    H = ext_vanishing(D, 3)
    for k in range(3):
        dims = [degreewise_homology(D, k, d) for d in degree_window(D, k)]
        assert all(x == 0 for x in dims)
        assert H.status(k) == "trivial"
    # top term: homology is C in degree -3 only
    assert degreewise_homology(D, 3, -3) == 1
    assert degreewise_homology(D, 3, -2) == 0


def test_degreewise_agrees_on_catalog():
    for name in ("cr1", "cr2", "grad2", "laplace2", "example2_n3d1"):
        P0 = pp(name)
        D = dualize(build_resolution(P0))
        H = ext_vanishing(D, min(2, D.nterms - 1))
        for k in range(min(3, D.nterms)):
            if k not in H.entries:
                continue
            dims = [degreewise_homology(D, k, d) for d in degree_window(D, k)]
            if H.status(k) == "trivial":
                assert all(x == 0 for x in dims), (name, k)
            else:
                w = H.entries[k]
                d = w.witness_degree
                assert degreewise_homology(D, k, d) > 0, (name, k)


def test_image_basis_membership_roundtrip():
    # cycles of the Koszul dual at k=1 are boundaries
    D = dualize(build_resolution(pp("grad3")))
    step0 = D.steps[0]
    G = buchberger(step0.mat, ModuleOrder("grevlex", D.term_shifts[1]), nvars=3, rank=3)
    b = tuple(P("d1^2", 3) * x for x in step0.mat[0])
    assert is_zero_vec(normal_form(b, G))


def test_column_helper_shapes():
    M = column(["d1", "d2"], 2)
    assert M.shape == (2, 1)


def test_redundant_rows_dropped():
    # third row is d1 * first row; zero row is dropped too
    M = ShiftedMatrix.build([[P("d1", 2)], [P("d2", 2)], [P("d1^2", 2)], [GaussPoly.zero(2)]],
                            [1, 1, 2, 0], [0], 2)
    R = build_resolution(M)
    assert R.dropped_rows == (2, 3)
    assert R.ranks == [1, 2, 1]
    assert R.length == 2


def test_unit_entry_with_zero_rows():
    M = ShiftedMatrix.build([[GaussPoly.constant(-5, 1)], [GaussPoly.zero(1)],
                             [GaussPoly.zero(1)]], [0, 0, 1], [0], 1)
    R = build_resolution(M)
    assert R.length == 0 and R.coker_zero and not R.truncated
