"""Characteristic variety, the determinacy trichotomy, and removability
thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .groebner import GBasis, Ideal, krull_dim_monomial
from .linalg import poly_minors
from .symbol import EllipticityReport, ShiftError, ShiftedMatrix

UNDERDETERMINED_NOTE = (
    "underdetermined is read as dim V = n (the variety is all of C^n)"
)
SHARPNESS_NOTE = (
    "at dimension n - dim V - 1 removability fails in general: for the module "
    "D/(p0, d/dx_1, ..., d/dx_d) with p0 elliptic in the remaining variables, "
    "dim V = n - d - 1 and a fundamental solution of p0 is singular along the "
    "d-dimensional coordinate plane"
)


@dataclass
class CharVariety:
    minors_ideal: Ideal
    gb: Optional[GBasis]
    dim: int
    n: int

    @property
    def is_cone(self) -> bool:
        return self.minors_ideal.is_homogeneous()


def char_variety(P0: ShiftedMatrix, base: str = "grevlex") -> CharVariety:
    """Support of coker P0 via its maximal (r x r) minors."""
    if not P0.is_homogeneous():
        raise ShiftError("char_variety needs a homogeneous presentation")
    n, s, r = P0.nvars, P0.nrows, P0.ncols
    if s < r:
        return CharVariety(Ideal([], n), None, n, n)
    ideal = Ideal(poly_minors(P0.mat, r, n), n)
    if not ideal.is_homogeneous():
        raise AssertionError("minors of a homogeneous matrix must be homogeneous")
    gens = ideal.nonzero()
    if not gens:
        return CharVariety(ideal, None, n, n)
    G = ideal.groebner(base)
    return CharVariety(ideal, G, krull_dim_monomial(G.leading_monomials(), n), n)


@dataclass
class Verdict:
    elliptic: str
    dimV: int
    n: int
    m: int
    classification: str
    compact_removable: bool
    max_removable_submanifold_dim: int
    sharpness_note: str = ""
    notes: List[str] = field(default_factory=list)

    def check(self) -> None:
        """Re-derive every threshold from (n, dimV, elliptic) and compare."""
        assert self.m == self.n - self.dimV
        assert self.classification == _classification(self.n, self.dimV)
        assert self.compact_removable == (self.classification == "overdetermined"
                                          and self.elliptic != "NotElliptic")
        assert self.max_removable_submanifold_dim == max(self.n - self.dimV - 2, -1)
        if self.compact_removable:
            assert self.classification == "overdetermined"


def _classification(n: int, dimV: int) -> str:
    if dimV < 0:
        return "finite-type"
    if dimV == n:
        return "underdetermined"
    if dimV == n - 1:
        return "determined"
    return "overdetermined"


def classify(V: CharVariety, ell: EllipticityReport) -> Verdict:
    n, d = V.n, V.dim
    cls = _classification(n, d)
    notes = [UNDERDETERMINED_NOTE]
    if cls == "finite-type":
        notes.append("the minors generate the unit ideal: the symbol map is onto at "
                     "every xi, so the module has finite type and no singular set matters")
    v = Verdict(
        elliptic=ell.status,
        dimV=d,
        n=n,
        m=n - d,
        classification=cls,
        compact_removable=(cls == "overdetermined" and ell.status != "NotElliptic"),
        max_removable_submanifold_dim=max(n - d - 2, -1),
        sharpness_note=SHARPNESS_NOTE,
        notes=notes,
    )
    v.check()
    return v


REMOVABLE = "removable"
NOT_GUARANTEED = "not-guaranteed"
SHARP = "sharp-counterexample"


def removability_query(v: Verdict, s_dim: int) -> str:
    """Is a closed submanifold of dimension ``s_dim`` removable?"""
    if not 0 <= s_dim < v.n:
        raise ValueError(f"submanifold dimension must be in 0..{v.n - 1}")
    if v.elliptic == "NotElliptic":
        return NOT_GUARANTEED
    bound = v.n - v.dimV - 2
    if s_dim <= bound:
        return REMOVABLE
    if s_dim == bound + 1:
        return SHARP
    return NOT_GUARANTEED
