"""Shifted polynomial matrices, Douglis-Nirenberg principal parts, symbol
complexes evaluated at covectors, and the tiered ellipticity check."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .linalg import poly_minors, rank
from .poly import NEG_INF, GaussPoly, GaussRational
from .sysparse import SystemSpec

CONVENTION_NOTE = (
    "ellipticity is exactness of the symbol complex including surjectivity onto C^r "
    "(rank P(xi) = r, the module-support convention); the alternative rank = s reading "
    "is not attainable when s > r and is not used"
)


class ShiftError(ValueError):
    """Shift vectors are inconsistent with the matrix they filter."""


class DegenerateRowError(ShiftError):
    """A row of the system is identically zero, so no row shift can be inferred."""


@dataclass(frozen=True)
class ShiftedMatrix:
    """Polynomial matrix ``mat`` (rows x cols) with row shifts sigma and column
    shifts rho, satisfying ``deg mat[i][j] <= sigma[i] - rho[j]``.

    Rows act on the right: a row vector ``a`` maps to ``a @ mat``.
    """

    mat: Tuple[Tuple[GaussPoly, ...], ...]
    row_shifts: Tuple[int, ...]
    col_shifts: Tuple[int, ...]
    nvars: int

    def __post_init__(self):
        object.__setattr__(self, "mat", tuple(tuple(r) for r in self.mat))
        object.__setattr__(self, "row_shifts", tuple(int(x) for x in self.row_shifts))
        object.__setattr__(self, "col_shifts", tuple(int(x) for x in self.col_shifts))
        if len(self.mat) != len(self.row_shifts):
            raise ShiftError(f"{len(self.mat)} rows but {len(self.row_shifts)} row shifts")
        for i, row in enumerate(self.mat):
            if len(row) != len(self.col_shifts):
                raise ShiftError(f"row {i} has {len(row)} entries, expected {len(self.col_shifts)}")
            for j, p in enumerate(row):
                if p.nvars != self.nvars:
                    raise ShiftError(f"entry ({i}, {j}) has {p.nvars} variables, expected {self.nvars}")
                if p.total_degree() > self.row_shifts[i] - self.col_shifts[j]:
                    raise ShiftError(
                        f"entry ({i}, {j}) of degree {p.total_degree()} exceeds "
                        f"{self.row_shifts[i]} - {self.col_shifts[j]}")

    @classmethod
    def build(cls, rows, row_shifts, col_shifts, nvars: int) -> "ShiftedMatrix":
        return cls(tuple(tuple(r) for r in rows), tuple(row_shifts), tuple(col_shifts), nvars)

    @property
    def nrows(self) -> int:
        return len(self.row_shifts)

    @property
    def ncols(self) -> int:
        return len(self.col_shifts)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def entry_order(self, i: int, j: int) -> int:
        return self.row_shifts[i] - self.col_shifts[j]

    def is_homogeneous(self) -> bool:
        """Every nonzero entry is homogeneous of degree exactly sigma_i - rho_j."""
        for i, row in enumerate(self.mat):
            for j, p in enumerate(row):
                if p and p.degrees() != {self.entry_order(i, j)}:
                    return False
        return True

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.mat for p in row)

    def dual(self) -> "ShiftedMatrix":
        """Transpose with negated shifts: the column action of the dual complex."""
        rows = [[self.mat[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return ShiftedMatrix.build(rows, [-c for c in self.col_shifts],
                                   [-r for r in self.row_shifts], self.nvars)

    def __matmul__(self, other: "ShiftedMatrix") -> "ShiftedMatrix":
        if self.ncols != other.nrows:
            raise ShiftError(f"cannot multiply {self.shape} by {other.shape}")
        z = GaussPoly.zero(self.nvars)
        rows = []
        for i in range(self.nrows):
            row = []
            for k in range(other.ncols):
                acc = z
                for j in range(self.ncols):
                    a, b = self.mat[i][j], other.mat[j][k]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return ShiftedMatrix.build(rows, self.row_shifts, other.col_shifts, self.nvars)

    def evaluate(self, point: Sequence) -> List[List[GaussRational]]:
        return [[p.eval(point) for p in row] for row in self.mat]

    def max_degree(self):
        return max((p.total_degree() for row in self.mat for p in row), default=NEG_INF)

    def __str__(self):
        body = "; ".join(", ".join(str(p) for p in row) for row in self.mat)
        return f"[{body}] sigma={list(self.row_shifts)} rho={list(self.col_shifts)}"


def matrix_of(spec: SystemSpec, sigma=None, rho=None) -> ShiftedMatrix:
    if sigma is None or rho is None:
        sigma, rho = resolve_shifts(spec)
    return ShiftedMatrix.build(spec.entries, sigma, rho, spec.nvars)


def infer_shifts(spec: SystemSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Default shifts: rho = 0 and sigma_i the largest degree in row i."""
    sigma = []
    for i, row in enumerate(spec.entries):
        d = max(p.total_degree() for p in row)
        if d == NEG_INF:
            raise DegenerateRowError(f"row {i + 1} is identically zero")
        sigma.append(int(d))
    return tuple(sigma), (0,) * spec.nunknowns


def resolve_shifts(spec: SystemSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """User shifts if declared; a missing half is completed, both missing inferred."""
    if spec.sigma is not None and spec.rho is not None:
        return spec.sigma, spec.rho
    if spec.sigma is None and spec.rho is None:
        return infer_shifts(spec)
    if spec.rho is None:
        return spec.sigma, (0,) * spec.nunknowns
    sigma = []
    for i, row in enumerate(spec.entries):
        d = max((p.total_degree() + spec.rho[j] for j, p in enumerate(row)), default=NEG_INF)
        if d == NEG_INF:
            raise DegenerateRowError(f"row {i + 1} is identically zero")
        sigma.append(int(d))
    return tuple(sigma), spec.rho


def principal_part(m: ShiftedMatrix) -> ShiftedMatrix:
    """Keep in entry (i, j) only the terms of degree sigma_i - rho_j."""
    rows = []
    for i, row in enumerate(m.mat):
        out = []
        for j, p in enumerate(row):
            k = m.entry_order(i, j)
            out.append(p.homogeneous_component(k) if k >= 0 else GaussPoly.zero(m.nvars))
        rows.append(out)
    return ShiftedMatrix.build(rows, m.row_shifts, m.col_shifts, m.nvars)


def adjoint_symbol(m: ShiftedMatrix) -> ShiftedMatrix:
    """Symbol of the formal adjoint under xi_k <-> d/dx_k.

    Entry (j, i) of the result is (-1)^(sigma_i - rho_j) conj(p_ij); shifts are
    swapped and negated.  Requires homogeneous entries.
    """
    if not m.is_homogeneous():
        raise ShiftError("adjoint_symbol needs homogeneous entries; apply principal_part first")
    rows = []
    for j in range(m.ncols):
        row = []
        for i in range(m.nrows):
            p = m.mat[i][j].conj()
            row.append(-p if m.entry_order(i, j) % 2 else p)
        rows.append(row)
    return ShiftedMatrix.build(rows, [-c for c in m.col_shifts], [-r for r in m.row_shifts], m.nvars)


def hermitian_adjoint(m: ShiftedMatrix) -> ShiftedMatrix:
    """Plain conjugate transpose.

    This is the adjoint symbol in the Fourier convention d/dx_k <-> i xi_k,
    where P*(xi) is the Hermitian adjoint of P(xi) at real xi.  It differs from
    :func:`adjoint_symbol` only by diagonal +-1 factors.
    """
    rows = [[m.mat[i][j].conj() for i in range(m.nrows)] for j in range(m.ncols)]
    return ShiftedMatrix.build(rows, [-c for c in m.col_shifts], [-r for r in m.row_shifts], m.nvars)


def check_chain(mats: Sequence[ShiftedMatrix]) -> None:
    """Matrices in resolution order P0, P1, ...: P_{k+1} @ P_k must be defined."""
    for k in range(len(mats) - 1):
        a, b = mats[k], mats[k + 1]
        if b.ncols != a.nrows or b.col_shifts != a.row_shifts:
            raise ShiftError(
                f"step {k + 1} does not chain onto step {k}: columns {b.ncols} / "
                f"shifts {list(b.col_shifts)} vs rows {a.nrows} / shifts {list(a.row_shifts)}")


def eval_complex(mats: Sequence[ShiftedMatrix], xi: Sequence) -> List[List[List[GaussRational]]]:
    """Evaluate each matrix of the chain at the covector ``xi``."""
    check_chain(mats)
    return [m.evaluate(xi) for m in mats]


# ellipticity


@dataclass
class EllipticityReport:
    status: str  # "NotElliptic" | "EllipticSampled" | "EllipticCertified"
    witness: Optional[Tuple[Fraction, ...]] = None
    failing_position: Optional[int] = None
    certificate: Optional[List[Tuple[Fraction, Tuple[int, ...]]]] = None
    defect: Optional[List[GaussPoly]] = None
    samples: int = 0
    seed: Optional[int] = None
    min_defect: Optional[float] = None
    min_singular: Optional[float] = None
    near_degenerate: int = 0
    note: str = CONVENTION_NOTE

    @property
    def elliptic(self) -> bool:
        return self.status != "NotElliptic"

    def certificate_str(self) -> str:
        if not self.certificate:
            return ""
        parts = []
        for c, mono in self.certificate:
            vars_ = "*".join(f"xi{k + 1}^{e}" for k, e in enumerate(mono) if e)
            parts.append(f"{c}*{vars_}")
        return " + ".join(parts)


def positive_even_certificate(d: GaussPoly):
    """Terms of ``d`` if they prove d > 0 on R^n minus 0, else None.

    Accepted: every coefficient a positive rational, every exponent even, and a
    pure power xi_k^(2e) present for each variable.
    """
    if d.is_zero():
        return None
    pure = set()
    terms = []
    for mono, c in d.sorted_terms():
        if c.im or c.re <= 0 or any(e % 2 for e in mono):
            return None
        support = [k for k, e in enumerate(mono) if e]
        if len(support) == 1:
            pure.add(support[0])
        elif not support:
            pure.update(range(d.nvars))
        terms.append((c.re, mono))
    if pure != set(range(d.nvars)):
        return None
    return terms


def norm_square_sum(polys: Sequence[GaussPoly], nvars: int) -> GaussPoly:
    """Sum of p * conj(p): equals sum |p(xi)|^2 at real xi."""
    out = GaussPoly.zero(nvars)
    for p in polys:
        if p:
            out = out + p * p.conj()
    return out


def expected_ranks(mats: Sequence[ShiftedMatrix]) -> Optional[List[int]]:
    """Ranks an exact symbol complex must have at every point, or None."""
    g = []
    prev = None
    for k, m in enumerate(mats):
        want = m.ncols if k == 0 else mats[k - 1].nrows - prev
        if want < 0 or want > min(m.nrows, m.ncols):
            return None
        g.append(want)
        prev = want
    return g


def exact_at(mats: Sequence[ShiftedMatrix], xi: Sequence, complete: bool = True) -> Optional[int]:
    """Position where the evaluated complex fails to be exact, else None.

    Position 0 is the target C^r of P0; position k is the source of P_{k-1}.
    """
    if not mats:
        return None
    ranks = [rank(m.evaluate(xi)) if m.nrows and m.ncols else 0 for m in mats]
    if ranks[0] != mats[0].ncols:
        return 0
    for k in range(1, len(mats)):
        if ranks[k - 1] + ranks[k] != mats[k - 1].nrows:
            return k
    if complete and ranks[-1] != mats[-1].nrows:
        return len(mats)
    return None


def rng_for(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for one consumer of a run seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def sample_directions(nvars: int, count: int, seed: int, stream: int = 0):
    """Integer draws from [-1000, 1000]^n minus 0, scaled to max-norm 1 exactly."""
    rng = rng_for(seed, stream)
    out = []
    while len(out) < count:
        v = rng.integers(-1000, 1001, size=nvars)
        mx = int(np.abs(v).max())
        if mx == 0:
            continue
        out.append(tuple(Fraction(int(x), mx) for x in v))
    return out


def small_bound(nvars: int) -> int:
    # 5^n directions at bound 2 is cheap up to n = 4; beyond that stay at 1
    return 2 if nvars <= 4 else 1


def small_directions(nvars: int, bound: int | None = None):
    """Primitive-ish small integer covectors, first nonzero coordinate positive."""
    if bound is None:
        bound = small_bound(nvars)
    for norm in range(1, bound + 1):
        values = [0]
        for v in range(1, norm + 1):
            values += [v, -v]
        for xi in product(values, repeat=nvars):
            if max(abs(x) for x in xi) != norm:
                continue
            first = next(x for x in xi if x)
            if first < 0:
                continue
            yield tuple(Fraction(x) for x in xi)


def _step_certificate(minors, defect):
    # one minor positive on its own already proves the step; prefer it as the
    # shorter certificate, fall back to the sum of squared moduli
    for m in minors:
        cert = positive_even_certificate(m)
        if cert is not None:
            return cert
    return positive_even_certificate(defect)


def _min_singular(mats, xi, g) -> float:
    vals = []
    for m, gk in zip(mats, g or [None] * len(mats)):
        if not m.nrows or not m.ncols or not gk:
            continue
        a = np.array([[complex(p.eval(xi)) for p in row] for row in m.mat], dtype=complex)
        s = np.linalg.svd(a, compute_uv=False)
        vals.append(float(s[gk - 1]))
    return min(vals) if vals else float("inf")


def ellipticity_check(mats: Sequence[ShiftedMatrix], samples: int = 1000, seed: int = 0,
                      tier: str = "exact", resolution: bool = False,
                      complete: bool = True, tol: float = 1e-9) -> EllipticityReport:
    """Decide exactness of the symbol complex at real covectors xi != 0.

    Chain order is P0, P1, ... (the order of a resolution).  With
    ``resolution=True`` the chain is known to be an exact free resolution of
    coker P0, so exactness at xi reduces to rank P0(xi) = r and the
    certificate only involves the maximal minors of P0.
    """
    if tier not in ("exact", "sampled"):
        raise ValueError("tier must be 'exact' or 'sampled'")
    mats = list(mats)
    check_chain(mats)
    if not mats:
        raise ValueError("empty chain")
    n = mats[0].nvars
    for m in mats:
        if not m.is_homogeneous():
            raise ShiftError("ellipticity_check needs principal parts (homogeneous entries)")

    g = expected_ranks(mats)
    if resolution:
        minors = [poly_minors(mats[0].mat, mats[0].ncols, n)]
    elif g is not None:
        minors = [poly_minors(m.mat, gk, n) for m, gk in zip(mats, g)]
    else:
        minors = None
    defect = None if minors is None else [norm_square_sum(ms, n) for ms in minors]

    def fails(xi):
        if resolution:
            return exact_at(mats[:1], xi, complete=False)
        return exact_at(mats, xi, complete=complete)

    report = EllipticityReport(status="EllipticSampled", defect=defect, seed=seed)

    if tier == "exact":
        for xi in small_directions(n):
            pos = fails(xi)
            if pos is not None:
                report.status = "NotElliptic"
                report.witness = xi
                report.failing_position = pos
                return report
        if defect is not None and (resolution or (g is not None and g[-1] == mats[-1].nrows or not complete)):
            certs = [_step_certificate(ms, d) for ms, d in zip(minors, defect)]
            if all(c is not None for c in certs):
                report.status = "EllipticCertified"
                report.certificate = certs[0] if len(certs) == 1 else [t for c in certs for t in c]
                return report

    min_def = None
    min_sv = float("inf")
    for xi in sample_directions(n, samples, seed, stream=0):
        pos = fails(xi)
        if pos is not None:
            report.status = "NotElliptic"
            report.witness = xi
            report.failing_position = pos
            report.samples += 1
            return report
        report.samples += 1
        if defect is not None:
            val = min(float(d.eval(xi).re) for d in defect)
            min_def = val if min_def is None else min(min_def, val)
            if val < tol:
                report.near_degenerate += 1
        min_sv = min(min_sv, _min_singular(mats[:1] if resolution else mats, xi,
                                           [mats[0].ncols] if resolution else g))
    report.min_defect = min_def
    report.min_singular = min_sv
    return report
