from fractions import Fraction

import numpy as np
import pytest

from overdet import catalog, randgen
from overdet.linalg import rank
from overdet.poly import GaussPoly
from overdet.symbol import (DegenerateRowError, ShiftError, ShiftedMatrix, adjoint_symbol,
                            ellipticity_check, eval_complex, exact_at, hermitian_adjoint,
                            infer_shifts, matrix_of, principal_part, resolve_shifts,
                            sample_directions, small_directions)
from overdet.sysparse import parse

from _util import G, P, column, point


def cr2():
    return principal_part(matrix_of(catalog.system("cr2")))


def test_infer_shifts_examples():
    assert infer_shifts(catalog.system("cr2")) == ((1, 1), (0,))
    assert infer_shifts(catalog.system("example2_n3d1")) == ((2, 1), (0,))
    assert infer_shifts(catalog.system("laplace2")) == ((2,), (0,))


def test_infer_shifts_zero_row():
    spec = parse("vars 2; unknowns 1; eq d1; eq 0;")
    with pytest.raises(DegenerateRowError):
        infer_shifts(spec)


def test_resolve_shifts_partial():
    spec = parse("vars 2; unknowns 2; shifts rho = [0, 1]; eq d1^2, d2;")
    assert resolve_shifts(spec) == ((2,), (0, 1))
    spec = parse("vars 2; unknowns 1; shifts sigma = [3]; eq d1^2;")
    assert resolve_shifts(spec) == ((3,), (0,))


def test_shifted_matrix_invariant():
    with pytest.raises(ShiftError):
        ShiftedMatrix.build([[P("d1^2", 2)]], [1], [0], 2)


def test_principal_part_examples():
    m = ShiftedMatrix.build([[P("d1^2 + d1", 2)]], [2], [0], 2)
    assert principal_part(m).mat[0][0] == P("d1^2", 2)
    assert principal_part(cr2()) == cr2()
    m = ShiftedMatrix.build([[P("d1^2 + d2", 2), P("d2", 2)]], [2], [0, 1], 2)
    assert principal_part(m).mat[0] == (P("d1^2", 2), P("d2", 2))


def test_principal_part_entries_homogeneous_random():
    rng = np.random.default_rng(4)
    for _ in range(50):
        spec = randgen.system_spec(rng)
        try:
            M = matrix_of(spec)
        except DegenerateRowError:
            continue
        pp = principal_part(M)
        assert pp.is_homogeneous()
        for i, row in enumerate(pp.mat):
            for j, p in enumerate(row):
                assert p.homogeneous_component(max(pp.entry_order(i, j), 0)) == p or p.is_zero()


def test_shift_translation_invariance():
    spec = catalog.system("example2_n3d1")
    a = principal_part(matrix_of(spec, (2, 1), (0,)))
    b = principal_part(matrix_of(spec, (5, 4), (3,)))
    assert a.mat == b.mat


def test_scaling_covariance():
    pp = principal_part(matrix_of(catalog.system("example2_n3d1")))
    xi = point(1, -2, Fraction(1, 3))
    t = Fraction(-3, 2)
    scaled = tuple(G(t) * x for x in xi)
    a, b = pp.evaluate(xi), pp.evaluate(scaled)
    for i in range(pp.nrows):
        assert b[i][0] == a[i][0] * G(t) ** pp.entry_order(i, 0)


def test_adjoint_examples():
    adj = adjoint_symbol(cr2())
    assert adj.mat == ((P("-d1 + i*d2", 4), P("-d3 + i*d4", 4)),)
    assert adj.row_shifts == (0,) and adj.col_shifts == (-1, -1)
    assert adjoint_symbol(adj) == cr2()
    sq = ShiftedMatrix.build([[P("d1^2", 1)]], [2], [0], 1)
    assert adjoint_symbol(sq) == ShiftedMatrix.build([[P("d1^2", 1)]], [0], [-2], 1)


def test_adjoint_needs_homogeneous():
    m = ShiftedMatrix.build([[P("d1^2 + d1", 2)]], [2], [0], 2)
    with pytest.raises(ShiftError):
        adjoint_symbol(m)


def test_adjoint_reverses_products():
    rng = np.random.default_rng(8)
    checked = 0
    for _ in range(100):
        A = randgen.shifted_matrix(rng, 2, 2, 2)
        B_rows = int(rng.integers(1, 3))
        # B chains into A: B's column shifts are A's row shifts
        sig = [s + int(rng.integers(0, 2)) for s in [max(A.row_shifts)] * B_rows]
        rows = [[randgen.homogeneous(rng, 2, sig[i] - A.row_shifts[j]) for j in range(A.nrows)]
                for i in range(B_rows)]
        B = ShiftedMatrix.build(rows, sig, A.row_shifts, 2)
        BA = B @ A
        assert adjoint_symbol(BA) == adjoint_symbol(A) @ adjoint_symbol(B)
        assert hermitian_adjoint(BA) == hermitian_adjoint(A) @ hermitian_adjoint(B)
        checked += 1
    assert checked == 100


def test_eval_complex_cr_pair():
    P0 = cr2()
    Q = ShiftedMatrix.build([[P("d3 + i*d4", 4), P("-d1 - i*d2", 4)]], [2], [1, 1], 4)
    p_val, q_val = eval_complex([P0, Q], point(1, 0, 0, 0))
    assert p_val == [[G(1)], [G(0)]]
    assert q_val == [[G(0), G(-1)]]


def test_eval_complex_at_origin_and_characteristic_point():
    P0 = cr2()
    assert eval_complex([P0], point(0, 0, 0, 0)) == [[[G(0)], [G(0)]]]
    lap = principal_part(matrix_of(catalog.system("laplace2")))
    assert eval_complex([lap], point(1, G(0, 1))) == [[[G(0)]]]


def test_eval_complex_chain_mismatch():
    P0 = cr2()
    bad = ShiftedMatrix.build([[P("d1", 4)]], [2], [1], 4)
    with pytest.raises(ShiftError):
        eval_complex([P0, bad], point(1, 0, 0, 0))


def test_ellipticity_wave():
    wave = principal_part(matrix_of(catalog.system("wave2")))
    rep = ellipticity_check([wave])
    assert rep.status == "NotElliptic"
    assert rep.witness == (1, 1)
    assert rank(wave.evaluate(rep.witness)) < wave.ncols


def test_ellipticity_laplace_certificate():
    lap = principal_part(matrix_of(catalog.system("laplace2")))
    rep = ellipticity_check([lap])
    assert rep.status == "EllipticCertified"
    assert rep.certificate_str() == "1*xi1^2 + 1*xi2^2"


def test_ellipticity_cr2_certificate_is_minor_norm():
    rep = ellipticity_check([cr2()], resolution=True)
    assert rep.status == "EllipticCertified"
    assert rep.defect[0] == P("d1^2 + d2^2 + d3^2 + d4^2", 4)
    assert rep.certificate_str() == "1*xi1^2 + 1*xi2^2 + 1*xi3^2 + 1*xi4^2"


def test_ellipticity_sampled_tier():
    rep = ellipticity_check([cr2()], tier="sampled", samples=200, seed=3, resolution=True)
    assert rep.status == "EllipticSampled"
    assert rep.samples == 200 and rep.seed == 3
    assert rep.min_singular > 0 and rep.near_degenerate == 0


def test_ellipticity_sampled_is_deterministic():
    a = ellipticity_check([cr2()], tier="sampled", samples=50, seed=9, resolution=True)
    b = ellipticity_check([cr2()], tier="sampled", samples=50, seed=9, resolution=True)
    assert a.min_singular == b.min_singular and a.min_defect == b.min_defect


def test_ellipticity_sampled_finds_nonsmall_witness():
    # characteristic direction (3, 7) is outside the small search box; the
    # sampled tier may or may not hit it, but never certifies
    m = ShiftedMatrix.build([[P("(7*d1 - 3*d2)^2", 2)]], [2], [0], 2)
    rep = ellipticity_check([m], samples=300)
    assert rep.status in ("EllipticSampled", "NotElliptic")
    assert rep.status != "EllipticCertified"
    assert rep.near_degenerate > 0 or rep.status == "NotElliptic"


def test_ellipticity_full_chain_koszul():
    # P0 = (d1, d2)^t, P1 = (d2, -d1): exact symbol complex off the origin
    P0 = column(["d1", "d2"], 2)
    P1 = ShiftedMatrix.build([[P("d2", 2), P("-d1", 2)]], [2], [1, 1], 2)
    rep = ellipticity_check([P0, P1])
    assert rep.elliptic
    assert exact_at([P0, P1], point(1, 0)) is None


def test_ellipticity_requires_principal_part():
    m = ShiftedMatrix.build([[P("d1^2 + d2", 2)]], [2], [0], 2)
    with pytest.raises(ShiftError):
        ellipticity_check([m])


def test_not_elliptic_witness_is_real_rational_nonzero():
    for name in catalog.names():
        pp = principal_part(matrix_of(catalog.system(name)))
        rep = ellipticity_check([pp], resolution=True, samples=50)
        if rep.status == "NotElliptic":
            assert any(rep.witness)
            assert all(isinstance(x, Fraction) for x in rep.witness)
            assert exact_at([pp], rep.witness, complete=False) is not None


def test_sample_directions_normalized():
    for xi in sample_directions(3, 100, seed=1):
        assert max(abs(x) for x in xi) == 1
    assert sample_directions(3, 5, seed=1) == sample_directions(3, 5, seed=1)
    assert sample_directions(3, 5, seed=1, stream=0) != sample_directions(3, 5, seed=1, stream=1)


def test_small_directions_order():
    dirs = list(small_directions(2))
    assert dirs.index((1, 1)) < dirs.index((1, -1))
    assert all(next(x for x in d if x) > 0 for d in dirs)


def test_dual_negates_shifts():
    d = cr2().dual()
    assert d.shape == (1, 2)
    assert d.row_shifts == (0,) and d.col_shifts == (-1, -1)
    assert d.dual() == cr2()
    assert isinstance(d.mat[0][0], GaussPoly)
