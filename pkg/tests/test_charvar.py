import numpy as np
import pytest

from overdet import catalog
from overdet.charvar import (NOT_GUARANTEED, REMOVABLE, SHARP, Verdict, char_variety, classify,
                             removability_query)
from overdet.groebner import Ideal, krull_dim
from overdet.poly import GaussPoly
from overdet.symbol import (EllipticityReport, ShiftError, ShiftedMatrix, ellipticity_check,
                            matrix_of, principal_part, sample_directions)

from _util import P


def pp(name):
    return principal_part(matrix_of(catalog.system(name)))


def verdict(name):
    P0 = pp(name)
    return classify(char_variety(P0), ellipticity_check([P0], resolution=True))


def test_gradient_variety_is_origin():
    V = char_variety(pp("grad3"))
    assert V.dim == 0
    assert sorted(map(str, V.minors_ideal.generators)) == ["d1", "d2", "d3"]


def test_cr_variety():
    V = char_variety(pp("cr2"))
    assert V.dim == 2
    assert V.minors_ideal.generators == [P("d1 + i*d2", 4), P("d3 + i*d4", 4)]
    assert V.is_cone


def test_example2_variety():
    V = char_variety(pp("example2_n3d1"))
    assert V.dim == 1
    assert V.minors_ideal.generators == [P("d2^2 + d3^2", 3), P("d1", 3)]


def test_product_family_dims():
    for name, (n, d) in catalog.PRODUCT_FAMILY.items():
        assert char_variety(pp(name)).dim == n - d - 1


def test_fewer_equations_than_unknowns():
    M = ShiftedMatrix.build([[P("d1", 2), P("d2", 2)]], [1], [0, 0], 2)
    V = char_variety(M)
    assert V.dim == 2
    assert classify(V, EllipticityReport("EllipticSampled")).classification == "underdetermined"


def test_zero_presentation_is_underdetermined():
    M = ShiftedMatrix.build([[GaussPoly.zero(2)]], [1], [0], 2)
    assert char_variety(M).dim == 2


def test_unit_minors_finite_type():
    M = ShiftedMatrix.build([[GaussPoly.one(2)]], [0], [0], 2)
    V = char_variety(M)
    assert V.dim == -1
    v = classify(V, EllipticityReport("EllipticCertified"))
    assert v.classification == "finite-type"
    assert v.m == 3


def test_char_variety_needs_homogeneous():
    M = ShiftedMatrix.build([[P("d1^2 + d1", 2)]], [2], [0], 2)
    with pytest.raises(ShiftError):
        char_variety(M)


def test_classify_cr():
    v = verdict("cr2")
    assert (v.classification, v.m, v.compact_removable, v.max_removable_submanifold_dim) == \
        ("overdetermined", 2, True, 0)


def test_classify_laplace():
    v = verdict("laplace2")
    assert (v.classification, v.m, v.compact_removable, v.max_removable_submanifold_dim) == \
        ("determined", 1, False, -1)


def test_classify_wave_gate():
    v = verdict("wave2")
    assert v.elliptic == "NotElliptic"
    assert v.classification == "determined"
    assert not v.compact_removable


def test_removability_examples():
    assert removability_query(verdict("cr2"), 0) == REMOVABLE
    assert removability_query(verdict("example2_n3d1"), 1) == SHARP
    assert removability_query(verdict("grad3"), 1) == REMOVABLE
    assert removability_query(verdict("grad3"), 2) == SHARP
    assert removability_query(verdict("cr3"), 2) == SHARP
    assert removability_query(verdict("cr3"), 1) == REMOVABLE


def test_removability_not_guaranteed():
    assert removability_query(verdict("cr2"), 3) == NOT_GUARANTEED
    assert removability_query(verdict("wave2"), 0) == NOT_GUARANTEED


def test_removability_range():
    with pytest.raises(ValueError):
        removability_query(verdict("cr2"), 4)
    with pytest.raises(ValueError):
        removability_query(verdict("cr2"), -1)


def test_verdict_check_catches_inconsistency():
    v = verdict("cr2")
    bad = Verdict(**{**v.__dict__, "m": 3})
    with pytest.raises(AssertionError):
        bad.check()


def test_ellipticity_consistency_with_variety():
    # no sampled real point of V besides 0 for systems that pass ellipticity
    for name in catalog.names():
        P0 = pp(name)
        ell = ellipticity_check([P0], resolution=True, samples=100)
        if not ell.elliptic:
            continue
        V = char_variety(P0)
        for xi in sample_directions(P0.nvars, 200, seed=5):
            assert any(g.eval(xi) for g in V.minors_ideal.nonzero()), name


def test_appending_rows_never_increases_dim():
    rng = np.random.default_rng(2)
    base = pp("example2_n4d1")
    dim0 = char_variety(base).dim
    for _ in range(10):
        coeffs = [int(x) for x in rng.integers(-3, 4, size=4)]
        row = GaussPoly.zero(4)
        for k, c in enumerate(coeffs):
            row = row + GaussPoly.var(k, 4).scale(c)
        if not row:
            continue
        M = ShiftedMatrix.build(list(base.mat) + [[row]], list(base.row_shifts) + [1], [0], 4)
        assert char_variety(M).dim <= dim0


def test_lex_and_grevlex_agree_on_variety():
    for name in catalog.names():
        P0 = pp(name)
        assert char_variety(P0, "lex").dim == char_variety(P0, "grevlex").dim
        assert krull_dim(Ideal(char_variety(P0).minors_ideal.generators, P0.nvars), "lex") == \
            char_variety(P0).dim
