"""Graded free resolutions by iterated syzygies, their duals, and homology of
the dual complex."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .groebner import (ModuleOrder, buchberger, is_zero_vec, normal_form, syzygies,
                       syzygy_basis)
from .linalg import sparse_rank
from .poly import GaussPoly, monomials_of_degree
from .symbol import ShiftError, ShiftedMatrix


@dataclass
class Resolution:
    """Chain ... -> A^{rho_2} -> A^{rho_1} -> A^{rho_0} of row actions.

    ``steps[k]`` maps A^{rho_{k+1}} to A^{rho_k}: its rows are indexed by
    rho_{k+1} and its columns by rho_k.
    """

    steps: List[ShiftedMatrix]
    rho0: Tuple[int, ...]
    nvars: int
    truncated: bool = False
    max_len: int = 0
    coker_zero: bool = False
    dropped_rows: Tuple[int, ...] = ()

    @property
    def shifts(self) -> List[Tuple[int, ...]]:
        return [self.rho0] + [s.row_shifts for s in self.steps]

    @property
    def ranks(self) -> List[int]:
        return [len(s) for s in self.shifts]

    @property
    def length(self) -> int:
        """Number of maps, or 0 when the presented module is zero."""
        return 0 if self.coker_zero else len(self.steps)

    def products_zero(self) -> bool:
        return all((self.steps[k + 1] @ self.steps[k]).is_zero() for k in range(len(self.steps) - 1))

    def exactness_certificates(self) -> List[bool]:
        """For every interior term: syzygies of steps[k] lie in the row module
        of steps[k+1]."""
        out = []
        for k in range(len(self.steps)):
            m = self.steps[k]
            syz, _ = syzygy_basis(m.mat, m.nvars, m.ncols, m.row_shifts, m.col_shifts)
            if k + 1 < len(self.steps):
                nxt = self.steps[k + 1]
                G = buchberger(nxt.mat, ModuleOrder("grevlex", m.row_shifts), nvars=m.nvars,
                               rank=m.nrows)
                out.append(all(is_zero_vec(normal_form(q, G)) for q in syz))
            else:
                out.append(not syz if not self.truncated else True)
        return out


def _redundant_rows(M: ShiftedMatrix) -> List[int]:
    """Indices of rows lying in the module generated by the other kept rows,
    scanning by increasing degree so the kept rows generate minimally."""
    order = ModuleOrder("grevlex", M.col_shifts)
    idx = sorted(range(M.nrows), key=lambda i: M.row_shifts[i])
    kept: List[int] = []
    dropped = []
    for i in idx:
        row = M.mat[i]
        if is_zero_vec(row):
            dropped.append(i)
            continue
        if kept:
            G = buchberger([M.mat[k] for k in kept], order, nvars=M.nvars, rank=M.ncols)
            if is_zero_vec(normal_form(row, G)):
                dropped.append(i)
                continue
        kept.append(i)
    return sorted(dropped)


def build_resolution(M: ShiftedMatrix, max_len: Optional[int] = None) -> Resolution:
    """Resolve coker(v -> v @ M) by minimal syzygy generators.

    Redundant rows of M are dropped first (recorded in ``dropped_rows``), so
    every later step is minimal and the length respects the Hilbert bound.
    Stops when a kernel is zero or after ``max_len`` maps (default n); in
    the second case the result is flagged truncated.
    """
    if not M.is_homogeneous():
        raise ShiftError("build_resolution needs a homogeneous presentation")
    n = M.nvars
    max_len = n if max_len is None else max_len
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if M.is_zero():
        # the module is free: nothing to resolve
        return Resolution([], M.col_shifts, n, False, max_len)
    dropped = _redundant_rows(M)
    if dropped:
        keep = [i for i in range(M.nrows) if i not in dropped]
        M = ShiftedMatrix.build([M.mat[i] for i in keep], [M.row_shifts[i] for i in keep],
                                M.col_shifts, n)
    steps = [M]
    truncated = False
    while True:
        Q = syzygies(steps[-1])
        if Q.nrows == 0:
            break
        if len(steps) >= max_len:
            truncated = True
            break
        steps.append(Q)
    G = buchberger(M.mat, ModuleOrder("grevlex", M.col_shifts), nvars=n, rank=M.ncols)
    return Resolution(steps, M.col_shifts, n, truncated, max_len, coker_zero=G.is_unit(),
                      dropped_rows=tuple(dropped))


@dataclass
class DualComplex:
    """0 -> A^{-rho_0} -> A^{-rho_1} -> ... with column action of the steps.

    Stored as row actions: ``steps[k]`` is the transpose of the k-th
    resolution map, rows indexed by -rho_k and columns by -rho_{k+1}.
    """

    steps: List[ShiftedMatrix]
    term_shifts: List[Tuple[int, ...]]
    nvars: int
    truncated: bool = False

    @property
    def nterms(self) -> int:
        return len(self.term_shifts)

    def products_zero(self) -> bool:
        return all((self.steps[k] @ self.steps[k + 1]).is_zero() for k in range(len(self.steps) - 1))


def dualize(R: Resolution) -> DualComplex:
    steps = [m.dual() for m in R.steps]
    shifts = [tuple(-x for x in s) for s in R.shifts]
    D = DualComplex(steps, shifts, R.nvars, R.truncated)
    if not D.products_zero():
        raise ShiftError("dual complex has a nonzero composite")
    return D


@dataclass
class HomologyEntry:
    k: int
    status: str  # "trivial" | "nontrivial" | "unknown"
    witness: Optional[Tuple[GaussPoly, ...]] = None
    witness_nf: Optional[Tuple[GaussPoly, ...]] = None
    witness_degree: Optional[int] = None

    def verify(self, D: DualComplex) -> bool:
        """Re-check a witness: it is a cycle and not a boundary."""
        if self.status != "nontrivial":
            return True
        w = self.witness
        if self.k < len(D.steps):
            step = D.steps[self.k]
            for j in range(step.ncols):
                acc = GaussPoly.zero(D.nvars)
                for i in range(step.nrows):
                    if w[i] and step.mat[i][j]:
                        acc = acc + w[i] * step.mat[i][j]
                if acc:
                    return False
        G = _image_basis(D, self.k)
        return not is_zero_vec(normal_form(w, G))


@dataclass
class HomologyReport:
    entries: Dict[int, HomologyEntry] = field(default_factory=dict)

    def status(self, k: int) -> str:
        return self.entries[k].status

    def trivial_below(self, m: int) -> bool:
        return all(self.entries[k].status == "trivial" for k in range(m) if k in self.entries)

    def table(self) -> Dict[int, str]:
        return {k: e.status for k, e in sorted(self.entries.items())}


def _image_basis(D: DualComplex, k: int):
    rank = len(D.term_shifts[k])
    order = ModuleOrder("grevlex", D.term_shifts[k])
    if k == 0:
        return buchberger([], order, nvars=D.nvars, rank=rank)
    prev = D.steps[k - 1]
    return buchberger(prev.mat, order, nvars=D.nvars, rank=rank)


def _shifted_degree(v, shifts) -> int:
    return int(max(p.total_degree() + shifts[i] for i, p in enumerate(v) if p))


def ext_vanishing(D: DualComplex, upto: int) -> HomologyReport:
    """Homology of the dual complex at terms k = 0..upto.

    Trivial iff every kernel generator reduces to zero modulo the image.
    Terms past a truncated resolution are reported unknown.
    """
    report = HomologyReport()
    n = D.nvars
    for k in range(upto + 1):
        if k >= D.nterms:
            status = "unknown" if D.truncated else "trivial"
            report.entries[k] = HomologyEntry(k, status)
            continue
        if D.truncated and k >= len(D.steps):
            report.entries[k] = HomologyEntry(k, "unknown")
            continue
        shifts = D.term_shifts[k]
        rank = len(shifts)
        if k < len(D.steps):
            step = D.steps[k]
            kernel, _ = syzygy_basis(step.mat, n, step.ncols, step.row_shifts, step.col_shifts)
        else:
            one, zero = GaussPoly.one(n), GaussPoly.zero(n)
            kernel = [tuple(one if j == i else zero for j in range(rank)) for i in range(rank)]
        G = _image_basis(D, k)
        entry = HomologyEntry(k, "trivial")
        for w in sorted(kernel, key=lambda v: _shifted_degree(v, shifts)):
            nf = normal_form(w, G)
            if not is_zero_vec(nf):
                entry = HomologyEntry(k, "nontrivial", tuple(w), nf, _shifted_degree(w, shifts))
                break
        report.entries[k] = entry
    return report


# brute-force graded slices


def _slice_basis(shifts, d: int, nvars: int):
    basis = []
    for pos, w in enumerate(shifts):
        k = d - w
        if k < 0:
            continue
        for mono in monomials_of_degree(nvars, k):
            basis.append((pos, mono))
    return basis


def _slice_matrix(step: ShiftedMatrix, d: int):
    """Matrix of v -> v @ step from degree-d slice of the row term to the
    degree-d slice of the column term (rows = source basis)."""
    src = _slice_basis(step.row_shifts, d, step.nvars)
    dst = _slice_basis(step.col_shifts, d, step.nvars)
    index = {t: i for i, t in enumerate(dst)}
    rows = []
    for pos, mono in src:
        row = {}
        for j, p in enumerate(step.mat[pos]):
            for m, c in p.items():
                col = index[(j, tuple(a + b for a, b in zip(mono, m)))]
                row[col] = row[col] + c if col in row else c
        rows.append(row)
    return rows, len(src), len(dst)


def degreewise_homology(D: DualComplex, k: int, d: int) -> int:
    """dim_C of the degree-d slice of homology at term k, by linear algebra."""
    shifts = D.term_shifts[k]
    dim_term = len(_slice_basis(shifts, d, D.nvars))
    if k < len(D.steps):
        rows, nsrc, ndst = _slice_matrix(D.steps[k], d)
        rk_out = sparse_rank(rows) if nsrc and ndst else 0
    else:
        rk_out = 0
    kernel_dim = dim_term - rk_out
    if k > 0:
        rows, nsrc, ndst = _slice_matrix(D.steps[k - 1], d)
        rk_in = sparse_rank(rows) if nsrc and ndst else 0
    else:
        rk_in = 0
    return kernel_dim - rk_in


def degree_window(D: DualComplex, k: int, span: int = 5) -> range:
    """Shifted degrees whose slices contain monomials of degree <= span."""
    shifts = D.term_shifts[k]
    if not shifts:
        return range(0)
    return range(min(shifts), max(shifts) + span + 1)
