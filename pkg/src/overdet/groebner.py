"""Groebner bases of submodules of A^r, A = Q(i)[xi_1..xi_n].

Module elements are vectors of GaussPoly.  Internally they are stored as
dicts keyed by (position, monomial).  The module order compares shifted
degree ``deg(mono) + shift[pos]`` first, then position (lower index is
larger), then the base monomial order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import NEG_INF, ONE, GaussPoly, GaussRational

Term = Tuple[int, Tuple[int, ...]]


def _grevlex_key(mono):
    return tuple(-e for e in reversed(mono))


def _lex_key(mono):
    return mono


@dataclass(frozen=True)
class ModuleOrder:
    base: str = "grevlex"
    shifts: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.base not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.base!r}")
        if self.shifts is not None:
            object.__setattr__(self, "shifts", tuple(int(x) for x in self.shifts))
        object.__setattr__(self, "_memo", {})

    def shift(self, pos: int) -> int:
        return self.shifts[pos] if self.shifts is not None else 0

    def key(self, term: Term):
        k = self._memo.get(term)
        if k is None:
            pos, mono = term
            base = _grevlex_key(mono) if self.base == "grevlex" else _lex_key(mono)
            k = (sum(mono) + self.shift(pos), -pos, base)
            self._memo[term] = k
        return k

    def with_shifts(self, shifts) -> "ModuleOrder":
        return ModuleOrder(self.base, tuple(shifts))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class _Elt:
    """Sparse module element with cached leading term and optional cofactors."""

    __slots__ = ("terms", "lead", "lc", "cof")

    def __init__(self, terms: Dict[Term, GaussRational], order: ModuleOrder, cof=None):
        self.terms = terms
        self.cof = cof
        if terms:
            self.lead = max(terms, key=order.key)
            self.lc = terms[self.lead]
        else:
            self.lead = None
            self.lc = None


def _to_terms(vec: Sequence[GaussPoly]) -> Dict[Term, GaussRational]:
    out = {}
    for pos, p in enumerate(vec):
        for mono, c in p.items():
            out[(pos, mono)] = c
    return out


def _from_terms(terms: Dict[Term, GaussRational], rank: int, nvars: int) -> Tuple[GaussPoly, ...]:
    parts: List[Dict] = [dict() for _ in range(rank)]
    for (pos, mono), c in terms.items():
        parts[pos][mono] = c
    return tuple(GaussPoly._raw(nvars, d) for d in parts)


def _axpy(dst: Dict[Term, GaussRational], src: Dict[Term, GaussRational], c: GaussRational, mono):
    """dst -= c * mono * src, in place."""
    for (pos, m), v in src.items():
        key = (pos, _mono_mul(m, mono))
        new = dst.get(key)
        prod = c * v
        if new is None:
            dst[key] = -prod
        else:
            new = new - prod
            if new:
                dst[key] = new
            else:
                del dst[key]


def _cof_axpy(dst: List[GaussPoly], src: List[GaussPoly], c: GaussRational, mono):
    for k, p in enumerate(src):
        if p:
            dst[k] = dst[k] - p.mul_term(mono, c)


@dataclass
class GBasis:
    """Groebner basis of a submodule of A^rank."""

    generators: List[Tuple[GaussPoly, ...]]
    order: ModuleOrder
    rank: int
    nvars: int
    reduced: bool = False
    certificates: Optional[List[List[GaussPoly]]] = None
    inputs: Optional[List[Tuple[GaussPoly, ...]]] = None
    _elts: List[_Elt] = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.generators)

    def leading_terms(self) -> List[Term]:
        return [e.lead for e in self._elts]

    def leading_monomials(self) -> List[Tuple[int, ...]]:
        return [e.lead[1] for e in self._elts]

    def is_unit(self) -> bool:
        """True when the basis generates the whole free module."""
        found = set()
        for pos, mono in self.leading_terms():
            if not any(mono):
                found.add(pos)
        return len(found) == self.rank


def _reduce(f: _Elt, basis: List[_Elt], order: ModuleOrder, full: bool = True,
            track: Optional[List[GaussPoly]] = None, quotients: Optional[List[GaussPoly]] = None):
    """Reduce ``f`` by ``basis``.  Returns the remainder terms.

    ``track`` accumulates cofactors over the original inputs (using each basis
    element's ``cof``); ``quotients`` accumulates the multiplier of each basis
    element.
    """
    terms = dict(f.terms)
    rem: Dict[Term, GaussRational] = {}
    nv = None
    key = order.key
    # lazy max-heap over the live terms; stale entries are skipped on pop
    heap = [(_Rev(key(t)), t) for t in terms]
    heapq.heapify(heap)
    queued = set(terms)
    while heap:
        _, lead = heapq.heappop(heap)
        queued.discard(lead)
        c = terms.get(lead)
        if c is None:
            continue
        pos, mono = lead
        for idx, g in enumerate(basis):
            gp, gm = g.lead
            if gp == pos and _divides(gm, mono):
                q = _mono_div(mono, gm)
                factor = c / g.lc
                _axpy(terms, g.terms, factor, q)
                for (sp, sm) in g.terms:
                    t = (sp, _mono_mul(sm, q))
                    if t not in queued and t in terms:
                        queued.add(t)
                        heapq.heappush(heap, (_Rev(key(t)), t))
                if track is not None and g.cof is not None:
                    _cof_axpy(track, g.cof, factor, q)
                if quotients is not None:
                    nv = len(mono)
                    quotients[idx] = quotients[idx] + GaussPoly._raw(nv, {q: factor})
                break
        else:
            if not full:
                rem.update(terms)
                return rem
            rem[lead] = c
            del terms[lead]
    return rem


class _Rev:
    """Reverses comparison so heapq pops the largest key first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _spair(a: _Elt, b: _Elt, order: ModuleOrder, track: bool):
    lcm = _lcm(a.lead[1], b.lead[1])
    qa, qb = _mono_div(lcm, a.lead[1]), _mono_div(lcm, b.lead[1])
    terms: Dict[Term, GaussRational] = {}
    _axpy(terms, a.terms, -a.lc.inverse(), qa)
    _axpy(terms, b.terms, b.lc.inverse(), qb)
    cof = None
    if track:
        nvars = len(lcm)
        cof = [GaussPoly.zero(nvars) for _ in a.cof]
        _cof_axpy(cof, a.cof, -a.lc.inverse(), qa)
        _cof_axpy(cof, b.cof, b.lc.inverse(), qb)
    return terms, cof


def _pair_degree(a: _Elt, b: _Elt, order: ModuleOrder) -> int:
    return sum(_lcm(a.lead[1], b.lead[1])) + order.shift(a.lead[0])


def buchberger(gens: Sequence[Sequence[GaussPoly]], order: Optional[ModuleOrder] = None,
               nvars: Optional[int] = None, rank: Optional[int] = None,
               track: bool = False, reduce: bool = True) -> GBasis:
    """Groebner basis of the submodule generated by ``gens``.

    Pairs are processed by smallest shifted lcm degree (normal strategy).  The
    product criterion is used for ideals and the chain criterion for all
    ranks.  With ``track=True`` every basis element carries its expression in
    the input generators.
    """
    order = order or ModuleOrder()
    gens = [tuple(g) for g in gens]
    if gens:
        rank = len(gens[0]) if rank is None else rank
        nvars = gens[0][0].nvars if nvars is None else nvars
    if rank is None or nvars is None:
        raise ValueError("empty generator list needs explicit rank and nvars")
    for g in gens:
        if len(g) != rank:
            raise ValueError("generators of different rank")
    ninp = len(gens)

    def unit_cof(k):
        return [GaussPoly.one(nvars) if j == k else GaussPoly.zero(nvars) for j in range(ninp)]

    basis: List[_Elt] = []
    pairs: List[Tuple[int, int]] = []
    done = set()

    def add(e: _Elt):
        # normalize to monic
        inv = e.lc.inverse()
        e.terms = {k: v * inv for k, v in e.terms.items()}
        if e.cof is not None:
            e.cof = [p.scale(inv) for p in e.cof]
        e.lc = ONE
        idx = len(basis)
        basis.append(e)
        for j in range(idx):
            if basis[j].lead[0] == e.lead[0]:
                pairs.append((j, idx))

    for k, g in enumerate(gens):
        e = _Elt(_to_terms(g), order, unit_cof(k) if track else None)
        if not e.terms:
            continue
        cof = list(e.cof) if track else None
        rem = _reduce(e, basis, order, full=True, track=cof)
        if rem:
            add(_Elt(rem, order, cof))

    while pairs:
        pairs.sort(key=lambda p: (_pair_degree(basis[p[0]], basis[p[1]], order), p))
        i, j = pairs.pop(0)
        a, b = basis[i], basis[j]
        lcm = _lcm(a.lead[1], b.lead[1])
        if rank == 1 and all(x == 0 or y == 0 for x, y in zip(a.lead[1], b.lead[1])):
            done.add((i, j))  # product criterion: coprime leading monomials
            continue
        if _chain_skip(i, j, lcm, basis, done):
            continue
        done.add((i, j))
        terms, cof = _spair(a, b, order, track)
        if not terms:
            continue
        rem = _reduce(_Elt(terms, order), basis, order, full=True, track=cof)
        if rem:
            add(_Elt(rem, order, cof))

    if reduce:
        basis = _interreduce(basis, order, track)
    out = GBasis(
        generators=[_from_terms(e.terms, rank, nvars) for e in basis],
        order=order, rank=rank, nvars=nvars, reduced=reduce,
        certificates=[list(e.cof) for e in basis] if track else None,
        inputs=gens, _elts=basis)
    return out


def _chain_skip(i, j, lcm, basis, done) -> bool:
    """Chain criterion: some k with lead_k | lcm(i, j) whose pairs with i and j
    were both reduced already."""
    pos = basis[i].lead[0]
    for k, e in enumerate(basis):
        if k in (i, j) or e.lead[0] != pos:
            continue
        if not _divides(e.lead[1], lcm):
            continue
        if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
            return True
    return False


def _interreduce(basis: List[_Elt], order: ModuleOrder, track: bool) -> List[_Elt]:
    # drop elements whose leading term is divisible by another's
    keep = []
    for k, e in enumerate(basis):
        redundant = False
        for j, f in enumerate(basis):
            if j == k or f.lead[0] != e.lead[0] or not _divides(f.lead[1], e.lead[1]):
                continue
            if f.lead[1] != e.lead[1] or j < k:
                redundant = True
                break
        if not redundant:
            keep.append(e)
    out = []
    for k, e in enumerate(keep):
        others = keep[:k] + keep[k + 1:]
        cof = list(e.cof) if track else None
        head = {e.lead: e.terms[e.lead]}
        tail = _Elt({t: c for t, c in e.terms.items() if t != e.lead}, order)
        rem = _reduce(tail, others, order, full=True, track=cof) if tail.terms else {}
        head.update(rem)
        new = _Elt(head, order, cof)
        out.append(new)
    out.sort(key=lambda e: order.key(e.lead))
    return out


def normal_form(v: Sequence[GaussPoly], G: GBasis, with_quotients: bool = False):
    """Remainder of ``v`` modulo ``G``.

    With ``with_quotients=True`` returns (remainder, quotients) where
    ``v - remainder = sum quotients[k] * G.generators[k]``.
    """
    v = tuple(v)
    if len(v) != G.rank:
        raise ValueError(f"vector of length {len(v)} against a rank-{G.rank} basis")
    quotients = [GaussPoly.zero(G.nvars) for _ in G._elts] if with_quotients else None
    rem = _reduce(_Elt(_to_terms(v), G.order), G._elts, G.order, full=True, quotients=quotients)
    out = _from_terms(rem, G.rank, G.nvars)
    if with_quotients:
        return out, quotients
    return out


def is_zero_vec(v) -> bool:
    return all(p.is_zero() for p in v)


def member(v: Sequence[GaussPoly], G: GBasis) -> bool:
    return is_zero_vec(normal_form(v, G))


def reduces_to_zero_all(G: GBasis) -> bool:
    """Every S-pair of the basis reduces to zero (Buchberger's criterion)."""
    elts = G._elts
    for i, j in combinations(range(len(elts)), 2):
        if elts[i].lead[0] != elts[j].lead[0]:
            continue
        terms, _ = _spair(elts[i], elts[j], G.order, False)
        if terms and _reduce(_Elt(terms, G.order), elts, G.order):
            return False
    return True


# ideals


@dataclass
class Ideal:
    generators: List[GaussPoly]
    nvars: int

    @classmethod
    def of(cls, polys: Sequence[GaussPoly], nvars: Optional[int] = None) -> "Ideal":
        polys = list(polys)
        if nvars is None:
            if not polys:
                raise ValueError("empty ideal needs nvars")
            nvars = polys[0].nvars
        return cls(polys, nvars)

    def nonzero(self) -> List[GaussPoly]:
        return [p for p in self.generators if p]

    def is_homogeneous(self) -> bool:
        return all(p.is_homogeneous() for p in self.nonzero())

    def groebner(self, base: str = "grevlex", track: bool = False) -> GBasis:
        return buchberger([(p,) for p in self.nonzero()], ModuleOrder(base), nvars=self.nvars,
                          rank=1, track=track)


def krull_dim_monomial(leads: Sequence[Tuple[int, ...]], nvars: int) -> int:
    """Dimension of A / (monomials): the largest variable set S such that no
    monomial has its support inside S."""
    if any(not any(m) for m in leads):
        return -1
    supports = [frozenset(k for k, e in enumerate(m) if e) for m in leads]
    for size in range(nvars, -1, -1):
        for S in combinations(range(nvars), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def krull_dim(I: Ideal, base: str = "grevlex") -> int:
    """Krull dimension of A/I; n for the zero ideal, -1 for the unit ideal."""
    gens = I.nonzero()
    if not gens:
        return I.nvars
    G = I.groebner(base)
    return krull_dim_monomial(G.leading_monomials(), I.nvars)


# matrices


def row_vectors(mat) -> List[Tuple[GaussPoly, ...]]:
    return [tuple(r) for r in mat]


def syzygy_basis(rows: Sequence[Sequence[GaussPoly]], nvars: int, rank: int,
                 row_shifts: Sequence[int], col_shifts: Sequence[int],
                 base: str = "grevlex") -> Tuple[List[Tuple[GaussPoly, ...]], GBasis]:
    """Generators of {a : sum a_i rows_i = 0} via the augmented module.

    Each row m_i is extended to (m_i | e_i).  With column weights rho and
    weight sigma_i on e_i the augmented rows are homogeneous, and the first
    ``rank`` positions dominate, so basis elements with vanishing left block
    generate the syzygies.  Returns (syzygies, groebner basis of the rows).
    """
    s = len(rows)
    if s == 0:
        return [], buchberger([], ModuleOrder(base, tuple(col_shifts)), nvars=nvars, rank=rank)
    zero = GaussPoly.zero(nvars)
    one = GaussPoly.one(nvars)
    aug = []
    for i, row in enumerate(rows):
        aug.append(tuple(row) + tuple(one if k == i else zero for k in range(s)))
    order = ModuleOrder(base, tuple(col_shifts) + tuple(row_shifts))
    G = buchberger(aug, order, nvars=nvars, rank=rank + s)
    syz = []
    images = []
    for g in G.generators:
        if is_zero_vec(g[:rank]):
            syz.append(tuple(g[rank:]))
        else:
            images.append(tuple(g[:rank]))
    img_basis = buchberger(images, ModuleOrder(base, tuple(col_shifts)), nvars=nvars, rank=rank,
                           reduce=True)
    return syz, img_basis


def minimal_subset(vectors: Sequence[Tuple[GaussPoly, ...]], nvars: int, rank: int,
                   order: ModuleOrder) -> List[Tuple[GaussPoly, ...]]:
    """Drop generators lying in the module generated by the others.

    Processes in increasing shifted degree, so in the graded case the result
    is a minimal generating set.
    """
    def deg(v):
        ds = [p.total_degree() + order.shift(k) for k, p in enumerate(v) if p]
        return max(ds) if ds else NEG_INF

    vecs = sorted((v for v in vectors if not is_zero_vec(v)), key=deg)
    kept: List[Tuple[GaussPoly, ...]] = []
    for v in vecs:
        if kept:
            G = buchberger(kept, order, nvars=nvars, rank=rank)
            if member(v, G):
                continue
        kept.append(v)
    return kept


def syzygies(M, base: str = "grevlex", minimal: bool = True):
    """Rows generating the kernel of v -> v @ M, as a ShiftedMatrix Q with
    Q @ M = 0.

    Row shift of a syzygy q is its shifted order max_k (deg q_k + sigma_k).
    A zero kernel gives a 0 x s matrix.
    """
    from .symbol import ShiftedMatrix

    syz, _ = syzygy_basis(M.mat, M.nvars, M.ncols, M.row_shifts, M.col_shifts, base)
    order = ModuleOrder(base, M.row_shifts)
    if minimal and syz:
        syz = minimal_subset(syz, M.nvars, M.nrows, order)
    tau = []
    for q in syz:
        tau.append(int(max(p.total_degree() + M.row_shifts[k] for k, p in enumerate(q) if p)))
    return ShiftedMatrix.build(syz, tau, M.row_shifts, M.nvars)
