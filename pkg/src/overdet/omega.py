"""The Laplace-like operator Omega = P R^(t+rho) P* + R^sigma Q* R^(t-tau) Q R^sigma
at symbol level, where R = xi_1^2 + ... + xi_n^2 is the symbol of -Laplacian.

Matrices act on columns here: P is s x r, Q is t' x s with Q P = 0, and
Omega is s x s.  The adjoint is the conjugate transpose, so at real xi

    v^H Omega v = sum_k R^(t+rho_k) |(P^H v)_k|^2 + sum_j R^(t-tau_j) |(Q R^sigma v)_j|^2,

with only integer powers of R.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linalg import nullspace, poly_det, rank
from .poly import ZERO, GaussPoly, GaussRational
from .symbol import (ShiftError, ShiftedMatrix, hermitian_adjoint, rng_for, sample_directions,
                     small_directions)


class OmegaError(ValueError):
    pass


def laplace_symbol(nvars: int) -> GaussPoly:
    out = GaussPoly.zero(nvars)
    for k in range(nvars):
        out = out + GaussPoly.var(k, nvars) ** 2
    return out


def _matmul(a, b, nvars):
    z = GaussPoly.zero(nvars)
    out = []
    for row in a:
        new = []
        for j in range(len(b[0]) if b else 0):
            acc = z
            for k, x in enumerate(row):
                y = b[k][j]
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def _scale_rows(mat, powers):
    return [[p * w for p in row] for row, w in zip(mat, powers)]


def _scale_cols(mat, powers):
    return [[p * powers[j] for j, p in enumerate(row)] for row in mat]


@dataclass
class OmegaSymbol:
    matrix: ShiftedMatrix
    shift: Tuple[int, ...]
    t: int
    P: ShiftedMatrix
    Q: Optional[ShiftedMatrix]

    @property
    def nvars(self) -> int:
        return self.P.nvars

    @property
    def size(self) -> int:
        return self.matrix.nrows

    def is_hermitian(self) -> bool:
        m = self.matrix.mat
        return all(m[i][j] == m[j][i].conj() for i in range(self.size) for j in range(self.size))

    def degree_bound_ok(self) -> bool:
        sig = self.P.row_shifts
        return all(self.matrix.mat[i][j].total_degree() <= sig[i] + sig[j] + 2 * self.t
                   for i in range(self.size) for j in range(self.size))

    def form(self, xi: Sequence, v: Sequence) -> GaussRational:
        """v^H Omega(xi) v."""
        vals = self.matrix.evaluate(xi)
        acc = ZERO
        for i in range(self.size):
            if not v[i]:
                continue
            row = ZERO
            for j in range(self.size):
                if v[j]:
                    row = row + vals[i][j] * v[j]
            acc = acc + v[i].conj() * row
        return acc

    def split_form(self, xi: Sequence, v: Sequence) -> Tuple[Fraction, Fraction]:
        """The two squared norms on the right-hand side, with R^(a/2) squared out."""
        pts = [GaussRational.coerce(x) for x in xi]
        if any(x.im for x in pts):
            raise OmegaError("the norm identity holds at real covectors only")
        R = sum((x.re ** 2 for x in pts), Fraction(0))
        P = self.P.evaluate(xi)
        s, r = self.P.nrows, self.P.ncols
        first = Fraction(0)
        for k in range(r):
            w = ZERO
            for i in range(s):
                if v[i]:
                    w = w + P[i][k].conj() * v[i]
            first += R ** (self.t + self.P.col_shifts[k]) * w.abs2()
        second = Fraction(0)
        if self.Q is not None:
            Q = self.Q.evaluate(xi)
            sig = self.P.row_shifts
            for j in range(self.Q.nrows):
                w = ZERO
                for i in range(s):
                    if v[i]:
                        w = w + Q[j][i] * v[i] * GaussRational(R ** sig[i])
                second += R ** (self.t - self.Q.row_shifts[j]) * w.abs2()
        return first, second

    def det(self) -> GaussPoly:
        return poly_det(self.matrix.mat, self.nvars)


def build_omega(P: ShiftedMatrix, Q: Optional[ShiftedMatrix] = None) -> OmegaSymbol:
    """Assemble Omega from the presentation P (rows sigma, columns rho) and
    its first syzygy matrix Q (rows tau, columns sigma)."""
    n = P.nvars
    if not P.is_homogeneous():
        raise ShiftError("build_omega needs a homogeneous P")
    if Q is not None and Q.nrows == 0:
        Q = None
    if Q is not None:
        if not Q.is_homogeneous():
            raise ShiftError("build_omega needs a homogeneous Q")
        if Q.col_shifts != P.row_shifts or Q.ncols != P.nrows:
            raise ShiftError("Q does not chain onto P")
        if not (Q @ P).is_zero():
            raise OmegaError("Q P is not zero")
    t = max(Q.row_shifts) if Q is not None else 0
    R = laplace_symbol(n)

    def rpow(e: int) -> GaussPoly:
        if e < 0:
            raise OmegaError(f"negative power {e} of the Laplace symbol: shifts are inconsistent")
        return R ** e

    PH = hermitian_adjoint(P).mat
    first = _matmul(P.mat, _scale_rows(PH, [rpow(t + rho) for rho in P.col_shifts]), n)
    total = first
    if Q is not None:
        Rs = [rpow(sg) for sg in P.row_shifts]
        QRs = _scale_cols(Q.mat, Rs)
        QH = hermitian_adjoint(Q).mat
        mid = _matmul(_scale_cols(_scale_rows(QH, Rs), [rpow(t - tau) for tau in Q.row_shifts]),
                      QRs, n)
        total = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(first, mid)]
    sig = P.row_shifts
    mat = ShiftedMatrix.build(total, [sg + t for sg in sig], [-sg - t for sg in sig], n)
    return OmegaSymbol(mat, tuple(2 * t + 2 * sg for sg in sig), t, P, Q)


def random_vector(rng, size: int) -> List[GaussRational]:
    out = []
    for _ in range(size):
        re = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20)))
        im = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20)))
        out.append(GaussRational(re, im))
    return out


@dataclass
class PositivityReport:
    identity_checks: int = 0
    identity_failures: int = 0
    samples: int = 0
    min_ratio: Optional[Fraction] = None
    degenerate: Optional[Tuple[Tuple[Fraction, ...], List[GaussRational]]] = None
    zero_vector_form: Optional[GaussRational] = None
    hermitian: bool = True
    degree_bound: bool = True
    seed: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def definite(self) -> bool:
        return self.degenerate is None and self.min_ratio is not None and self.min_ratio > 0

    @property
    def identity_holds(self) -> bool:
        return self.identity_failures == 0


def _degenerate_at(om: OmegaSymbol, xi) -> Optional[List[GaussRational]]:
    vals = om.matrix.evaluate(xi)
    if rank(vals) == om.size:
        return None
    return nullspace(vals)[0]


def omega_positivity(om: OmegaSymbol, pairs: int = 500, samples: int = 1000, seed: int = 0,
                     search_small: bool = True) -> PositivityReport:
    """Exact identity on random pairs, then a search for a degenerate pair
    (xi != 0 real, v != 0 with v^H Omega(xi) v = 0)."""
    n, s = om.nvars, om.size
    rep = PositivityReport(seed=seed, hermitian=om.is_hermitian(), degree_bound=om.degree_bound_ok())
    rng_v = rng_for(seed, 11)
    for xi in sample_directions(n, pairs, seed, stream=10):
        v = random_vector(rng_v, s)
        lhs = om.form(xi, v)
        a, b = om.split_form(xi, v)
        rep.identity_checks += 1
        if lhs != GaussRational(a + b):
            rep.identity_failures += 1
            if len(rep.failures) < 5:
                rep.failures.append(f"xi={xi} v={v}: {lhs} != {a + b}")
    zero = [GaussRational(0)] * s
    rep.zero_vector_form = om.form(next(iter(sample_directions(n, 1, seed, stream=12))), zero)

    if search_small:
        for xi in small_directions(n):
            v = _degenerate_at(om, xi)
            if v is not None:
                rep.degenerate = (xi, v)
                return rep
    rng_w = rng_for(seed, 14)
    for xi in sample_directions(n, samples, seed, stream=13):
        rep.samples += 1
        v = _degenerate_at(om, xi)
        if v is not None:
            rep.degenerate = (xi, v)
            return rep
        w = random_vector(rng_w, s)
        norm = sum((x.abs2() for x in w), Fraction(0))
        if norm:
            ratio = om.form(xi, w).re / norm
            rep.min_ratio = ratio if rep.min_ratio is None else min(rep.min_ratio, ratio)
    return rep
