"""Seeded random polynomials, matrices, and systems for property checks."""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .poly import GaussPoly, GaussRational, monomials_of_degree
from .symbol import ShiftedMatrix
from .sysparse import SystemSpec


def coeff(rng, big: int = 5, complex_: bool = True) -> GaussRational:
    re = Fraction(int(rng.integers(-big, big + 1)), int(rng.integers(1, 4)))
    im = Fraction(int(rng.integers(-big, big + 1)), int(rng.integers(1, 4))) if complex_ else 0
    return GaussRational(re, im)


def poly(rng, nvars: int, max_terms: int = 6, max_deg: int = 5, complex_: bool = True) -> GaussPoly:
    terms = {}
    for _ in range(int(rng.integers(0, max_terms + 1))):
        mono = [0] * nvars
        for _ in range(int(rng.integers(0, max_deg + 1))):
            mono[int(rng.integers(0, nvars))] += 1
        terms[tuple(mono)] = coeff(rng, complex_=complex_)
    return GaussPoly(nvars, terms)


def homogeneous(rng, nvars: int, deg: int, max_terms: int = 3, complex_: bool = True,
                nonzero: bool = False) -> GaussPoly:
    if deg < 0:
        return GaussPoly.zero(nvars)
    monos = monomials_of_degree(nvars, deg)
    while True:
        terms = {}
        for _ in range(int(rng.integers(1, max_terms + 1))):
            terms[monos[int(rng.integers(0, len(monos)))]] = coeff(rng, complex_=complex_)
        p = GaussPoly(nvars, terms)
        if p or not nonzero:
            return p


def shifted_matrix(rng, nvars: int, nrows: int, ncols: int, max_deg: int = 2,
                   density: float = 0.7, complex_: bool = True) -> ShiftedMatrix:
    """Homogeneous matrix with random shifts rho in 0..1 and sigma chosen so
    entry degrees lie in 0..max_deg."""
    rho = [int(rng.integers(0, 2)) for _ in range(ncols)]
    sigma = [max(rho) + int(rng.integers(0, max_deg)) for _ in range(nrows)]
    rows = []
    for i in range(nrows):
        row = []
        for j in range(ncols):
            deg = sigma[i] - rho[j]
            if rng.random() < density:
                row.append(homogeneous(rng, nvars, deg, max_terms=2, complex_=complex_))
            else:
                row.append(GaussPoly.zero(nvars))
        rows.append(row)
    return ShiftedMatrix.build(rows, sigma, rho, nvars)


def ideal_generators(rng, nvars: int, count: int, max_deg: int = 2,
                     complex_: bool = False) -> List[GaussPoly]:
    out = []
    for _ in range(count):
        out.append(homogeneous(rng, nvars, int(rng.integers(1, max_deg + 1)), max_terms=3,
                               complex_=complex_, nonzero=True))
    return out


def system_spec(rng, with_shifts: bool = False) -> SystemSpec:
    n = int(rng.integers(1, 5))
    r = int(rng.integers(1, 3))
    s = int(rng.integers(1, 4))
    rows = tuple(tuple(poly(rng, n, max_terms=4, max_deg=3) for _ in range(r)) for _ in range(s))
    sigma = rho = None
    if with_shifts:
        rho = tuple(int(rng.integers(-1, 2)) for _ in range(r))
        sigma = tuple(int(max((rows[i][j].total_degree() + rho[j] for j in range(r)),
                              default=0) if any(rows[i]) else 0) + int(rng.integers(0, 2))
                      for i in range(s))
    name = f"random{int(rng.integers(0, 10 ** 6))}" if rng.random() < 0.5 else None
    return SystemSpec(n, r, rows, sigma, rho, name)
