"""Face lattices, flags, grid partitions of unity, and the exact telescoping
checks behind the cutoff recursion of the extension argument.

Everything lives in a d-dimensional plane with rational coordinates.  The
differential operators of the recursion are replaced by the identity, so
what is checked is support bookkeeping and partition sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .poly import ZERO, GaussRational

Point = Tuple[Fraction, ...]
Face = FrozenSet[int]


class PolytopeError(ValueError):
    pass


class CoverError(ValueError):
    def __init__(self, point, message="grid point not covered by any neighborhood"):
        self.point = point
        super().__init__(f"{message}: {tuple(str(x) for x in point)}")


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _solve(gram, rhs):
    """Solve a small symmetric positive definite system over Q."""
    n = len(rhs)
    m = [list(row) + [r] for row, r in zip(gram, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def dist2_to_simplex(x: Point, verts: Sequence[Point]) -> Fraction:
    """Squared Euclidean distance from x to conv(verts), exactly.

    Minimizes over every face of the simplex the distance to its affine
    hull, keeping only feet with nonnegative barycentric weights.
    """
    best = None
    k = len(verts)
    for size in range(1, k + 1):
        for sub in combinations(verts, size):
            base = sub[0]
            dirs = [_sub(v, base) for v in sub[1:]]
            rel = _sub(x, base)
            if dirs:
                gram = [[_dot(a, b) for b in dirs] for a in dirs]
                lam = _solve(gram, [_dot(a, rel) for a in dirs])
                if any(t < 0 for t in lam) or sum(lam) > 1:
                    continue
                foot = tuple(b + sum((t * d[i] for t, d in zip(lam, dirs)), Fraction(0))
                             for i, b in enumerate(base))
            else:
                foot = base
            diff = _sub(x, foot)
            d2 = _dot(diff, diff)
            if best is None or d2 < best:
                best = d2
    return best


def _in_convex_polygon(x: Point, ring: Sequence[Point]) -> bool:
    sign = 0
    for a, b in zip(ring, list(ring[1:]) + [ring[0]]):
        cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0])
        if cross:
            s = 1 if cross > 0 else -1
            if sign and s != sign:
                return False
            sign = s
    return True


@dataclass
class SimplicialPolytope:
    """Convex polytope whose proper faces are simplices.

    d = 1: two vertices.  d = 2: a convex polygon, vertices in cyclic order.
    d >= 3: ``facets`` lists vertex index tuples; each must be a simplex.
    """

    vertices: List[Point]
    b: Fraction
    facets: Optional[List[Tuple[int, ...]]] = None
    name: str = ""

    def __post_init__(self):
        self.vertices = [tuple(Fraction(c) for c in v) for v in self.vertices]
        self.b = Fraction(self.b)
        if not self.vertices:
            raise PolytopeError("no vertices")
        dims = {len(v) for v in self.vertices}
        if len(dims) != 1:
            raise PolytopeError("vertices of different dimension")
        if self.b <= 0:
            raise PolytopeError("b must be positive")

    @property
    def d(self) -> int:
        return len(self.vertices[0])

    def proper_faces(self) -> Dict[int, List[Face]]:
        d, nv = self.d, len(self.vertices)
        faces: Dict[int, List[Face]] = {k: [] for k in range(d)}
        faces[0] = [frozenset([i]) for i in range(nv)]
        if d == 1:
            if nv != 2:
                raise PolytopeError("a segment has exactly two vertices")
        elif d == 2:
            if nv < 3:
                raise PolytopeError("a polygon needs at least three vertices")
            faces[1] = [frozenset([i, (i + 1) % nv]) for i in range(nv)]
        else:
            if not self.facets:
                raise PolytopeError("facets must be listed for d >= 3")
            for f in self.facets:
                if len(set(f)) != d:
                    raise PolytopeError(f"facet {tuple(f)} is not a simplex")
            seen = set()
            for f in self.facets:
                for k in range(1, d):
                    for sub in combinations(sorted(f), k + 1):
                        if sub not in seen:
                            seen.add(sub)
                            faces[k].append(frozenset(sub))
            for k in faces:
                faces[k].sort(key=sorted)
        return faces

    def validate(self) -> None:
        faces = self.proper_faces()
        if self.d == 2 and not _convex_ring(self.vertices):
            raise PolytopeError("polygon vertices are not in convex cyclic order")
        if self.d >= 2:
            b2 = self.b * self.b
            for e in faces[1]:
                i, j = sorted(e)
                diff = _sub(self.vertices[i], self.vertices[j])
                L2 = _dot(diff, diff)
                if not 4 * b2 <= L2 <= 9 * b2:
                    raise PolytopeError(
                        f"edge {i}-{j} has squared length {L2} outside [4b^2, 9b^2] = [{4 * b2}, {9 * b2}]")

    def face_points(self, face: Face) -> List[Point]:
        return [self.vertices[i] for i in sorted(face)]

    def contains(self, x: Point) -> bool:
        if self.d == 1:
            lo, hi = sorted(v[0] for v in self.vertices)
            return lo <= x[0] <= hi
        if self.d == 2:
            return _in_convex_polygon(x, self.vertices)
        raise NotImplementedError("membership for d >= 3")

    def dist2(self, x: Point, face: Optional[Face] = None) -> Fraction:
        if face is None:
            if self.contains(x):
                return Fraction(0)
            faces = self.proper_faces()[self.d - 1]
            return min(dist2_to_simplex(x, self.face_points(f)) for f in faces)
        return dist2_to_simplex(x, self.face_points(face))


def _convex_ring(ring) -> bool:
    sign = 0
    n = len(ring)
    for k in range(n):
        a, b, c = ring[k], ring[(k + 1) % n], ring[(k + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross == 0:
            return False
        s = 1 if cross > 0 else -1
        if sign and s != sign:
            return False
        sign = s
    return True


TOP = "top"


@dataclass
class FaceLattice:
    polytope: SimplicialPolytope
    faces: Dict[int, List[Face]]

    @property
    def d(self) -> int:
        return self.polytope.d

    def count(self, k: int) -> int:
        return 1 if k == self.d else len(self.faces[k])

    def above(self, k: int, idx: int) -> List[int]:
        """Indices of (k+1)-faces containing face (k, idx); the top cell is 0."""
        if k + 1 == self.d:
            return [0]
        f = self.faces[k][idx]
        return [j for j, g in enumerate(self.faces[k + 1]) if f < g]

    def below(self, k: int, idx: int) -> List[int]:
        """Indices of (k-1)-faces inside face (k, idx)."""
        if k == self.d:
            return list(range(len(self.faces[k - 1])))
        f = self.faces[k][idx]
        return [j for j, g in enumerate(self.faces[k - 1]) if g < f]


def face_lattice(poly: SimplicialPolytope) -> FaceLattice:
    poly.validate()
    return FaceLattice(poly, poly.proper_faces())


Flag = Tuple[int, ...]


def enumerate_flags(lattice: FaceLattice, k: int) -> List[Flag]:
    """All chains (alpha_k, ..., alpha_{d-1}) of faces of consecutive dimension."""
    d = lattice.d
    if not 0 <= k <= d:
        raise ValueError(f"k must be in 0..{d}")
    if k == d:
        return [()]
    out = []
    for tail in enumerate_flags(lattice, k + 1):
        top_dim = k + 1
        top_idx = tail[0] if tail else 0
        for a in lattice.below(top_dim, top_idx):
            out.append((a,) + tail)
    return sorted(out)


def brute_force_flags(lattice: FaceLattice, k: int) -> List[Flag]:
    """Same set by filtering the full product of face lists."""
    d = lattice.d
    pools = [range(len(lattice.faces[j])) for j in range(k, d)]
    out = []
    for combo in product(*pools):
        ok = True
        for j in range(len(combo) - 1):
            if not lattice.faces[k + j][combo[j]] < lattice.faces[k + j + 1][combo[j + 1]]:
                ok = False
                break
        if ok:
            out.append(tuple(combo))
    return sorted(out)


# grid functions


@dataclass
class GridFunction:
    """Finitely supported function on the grid h Z^d with rational values."""

    values: Dict[Point, GaussRational]
    h: Fraction
    face: Optional[Tuple[int, int]] = None  # (dim, index) or None for the whole polytope
    radius: Optional[Fraction] = None

    def __post_init__(self):
        self.values = {p: v for p, v in self.values.items() if v}

    def __call__(self, p: Point) -> GaussRational:
        return self.values.get(p, ZERO)

    @property
    def support(self) -> List[Point]:
        return sorted(self.values)

    def __mul__(self, other: "GridFunction") -> "GridFunction":
        vals = {p: v * other(p) for p, v in self.values.items()}
        return GridFunction(vals, self.h, self.face, self.radius)

    def scale(self, c) -> "GridFunction":
        c = GaussRational.coerce(c)
        return GridFunction({p: v * c for p, v in self.values.items()}, self.h, self.face, self.radius)


def grid(poly: SimplicialPolytope, h: Fraction, margin: Fraction) -> List[Point]:
    """Grid points of spacing h in the box around the polytope widened by margin."""
    d = poly.d
    axes = []
    for i in range(d):
        lo = min(v[i] for v in poly.vertices) - margin
        hi = max(v[i] for v in poly.vertices) + margin
        start = (lo / h).__ceil__()
        stop = (hi / h).__floor__()
        axes.append([h * k for k in range(start, stop + 1)])
    return [tuple(p) for p in product(*axes)]


def _face_dist2(lattice: FaceLattice, k: int, idx: int, x: Point) -> Fraction:
    if k == lattice.d:
        return lattice.polytope.dist2(x)
    return lattice.polytope.dist2(x, lattice.faces[k][idx])


def build_partition(lattice: FaceLattice, k: int, b: Optional[Fraction] = None,
                    h: Optional[Fraction] = None, cover: Optional[Sequence[Point]] = None
                    ) -> Dict[int, GridFunction]:
    """Cutoffs f_alpha for the k-faces: supp f_alpha inside the open
    b-neighborhood of F_alpha and sum f_alpha = 1 on the b-neighborhood of
    the k-skeleton, exactly at grid points.

    Weights are w_alpha = b^2 - dist^2(x, F_alpha) where positive, normalized
    by their sum.  ``cover`` lists extra grid points that must be covered.
    """
    poly = lattice.polytope
    b = poly.b if b is None else Fraction(b)
    h = b / 8 if h is None else Fraction(h)
    if (b / 4) % h != 0:
        raise ValueError(f"grid spacing {h} does not divide b/4 = {b / 4}")
    d = lattice.d
    if not 0 <= k < d:
        raise ValueError(f"k must be in 0..{d - 1}")
    pts = grid(poly, h, 2 * b)
    b2 = b * b
    nf = len(lattice.faces[k])
    raw: Dict[int, Dict[Point, Fraction]] = {a: {} for a in range(nf)}
    total: Dict[Point, Fraction] = {}
    for x in pts:
        for a in range(nf):
            d2 = _face_dist2(lattice, k, a, x)
            if d2 < b2:
                w = b2 - d2
                raw[a][x] = w
                total[x] = total.get(x, Fraction(0)) + w
    for x in cover or []:
        if total.get(x, 0) == 0:
            raise CoverError(x)
    out = {}
    for a in range(nf):
        vals = {x: GaussRational(w / total[x]) for x, w in raw[a].items()}
        out[a] = GridFunction(vals, h, (k, a), b)
    return out


def build_top_cutoff(lattice: FaceLattice, b: Optional[Fraction] = None,
                     h: Optional[Fraction] = None) -> GridFunction:
    """f0: equal to 1 on the polytope, supported in its open b-neighborhood."""
    poly = lattice.polytope
    b = poly.b if b is None else Fraction(b)
    h = b / 8 if h is None else Fraction(h)
    b2 = b * b
    vals = {}
    for x in grid(poly, h, 2 * b):
        d2 = poly.dist2(x)
        if d2 < b2:
            vals[x] = GaussRational(1 - d2 / b2)
    return GridFunction(vals, h, (lattice.d, 0), b)


def random_grid_function(lattice: FaceLattice, rng, h: Optional[Fraction] = None,
                         lo: int = -20, hi: int = 20) -> GridFunction:
    poly = lattice.polytope
    h = poly.b / 8 if h is None else Fraction(h)
    vals = {}
    for x in grid(poly, h, 2 * poly.b):
        num = int(rng.integers(lo, hi + 1))
        den = int(rng.integers(1, 10))
        vals[x] = GaussRational(Fraction(num, den))
    return GridFunction(vals, h)


def constant_grid_function(lattice: FaceLattice, c=1, h: Optional[Fraction] = None) -> GridFunction:
    poly = lattice.polytope
    h = poly.b / 8 if h is None else Fraction(h)
    return GridFunction({x: GaussRational.coerce(c) for x in grid(poly, h, 2 * poly.b)}, h)


def partition_sum_residuals(lattice: FaceLattice, k: int, parts: Dict[int, GridFunction]
                            ) -> List[Point]:
    """Grid points of the b-neighborhood of the k-skeleton where sum f != 1."""
    poly = lattice.polytope
    b2 = poly.b * poly.b
    h = next(iter(parts.values())).h
    bad = []
    for x in grid(poly, h, 2 * poly.b):
        near = any(_face_dist2(lattice, k, a, x) < b2 for a in range(len(lattice.faces[k])))
        if not near:
            continue
        s = sum((f(x) for f in parts.values()), ZERO)
        if s != GaussRational(1):
            bad.append(x)
    return bad


@dataclass
class TelescopeReport:
    support_violations: List[Tuple[int, Flag, Point]] = field(default_factory=list)
    residuals: Dict[Tuple[int, Flag], List[Point]] = field(default_factory=dict)
    partition_failures: Dict[int, List[Point]] = field(default_factory=dict)
    flags_checked: int = 0

    @property
    def supports_ok(self) -> bool:
        return not self.support_violations

    @property
    def residuals_zero(self) -> bool:
        return all(not pts for pts in self.residuals.values())

    def residuals_zero_at(self, k: int) -> bool:
        return all(not pts for (kk, _), pts in self.residuals.items() if kk == k)

    def partitions_ok(self) -> bool:
        return all(not pts for pts in self.partition_failures.values())

    def first_residual(self):
        for key, pts in sorted(self.residuals.items()):
            if pts:
                return key, pts[0]
        return None


def telescope_check(lattice: FaceLattice, partitions: Dict[int, Dict[int, GridFunction]],
                    v0: GridFunction, f0: Optional[GridFunction] = None) -> TelescopeReport:
    """Build v_A = f_{alpha_k} (... f_{alpha_{d-1}} (f0 v0)) for every flag and
    check the support property III and the telescoping property IV.

    IV with identity operators reads: for each (k+1)-flag B, the residual
    sum_{alpha_k in B's first face} f_{alpha_k} v_B - v_B vanishes on supp v_B.
    """
    d = lattice.d
    poly = lattice.polytope
    b2 = poly.b * poly.b
    f0 = f0 or build_top_cutoff(lattice, h=v0.h)
    rep = TelescopeReport()
    for k, parts in partitions.items():
        rep.partition_failures[k] = partition_sum_residuals(lattice, k, parts)
    v: Dict[Flag, GridFunction] = {(): f0 * v0}
    for k in range(d - 1, -1, -1):
        parts = partitions[k]
        new: Dict[Flag, GridFunction] = {}
        for B in enumerate_flags(lattice, k + 1):
            vB = v[B]
            top = B[0] if B else 0
            acc: Dict[Point, GaussRational] = {}
            for a in lattice.below(k + 1, top):
                vA = parts[a] * vB
                A = (a,) + B
                new[A] = vA
                rep.flags_checked += 1
                for x in vA.support:
                    if not poly.dist2(x, lattice.faces[k][a]) < b2:
                        rep.support_violations.append((k, A, x))
                    acc[x] = acc.get(x, ZERO) + vA(x)
            rep.residuals[(k, B)] = [x for x in vB.support if acc.get(x, ZERO) != vB(x)]
        v.update(new)
    return rep


# support-radius constants


@dataclass
class RadiusReport:
    m: int
    c: Fraction
    d: int
    b: Fraction
    lhs: Fraction
    rhs: Fraction
    holds: bool
    cleared_holds: bool
    chain: List[Tuple[str, Fraction]]
    chain_monotone: bool
    first_failing_scale: Optional[Tuple[str, Fraction]]

    @property
    def ok(self) -> bool:
        return self.holds and self.chain_monotone and self.first_failing_scale is None


def radius_chain(m: int, c, d: Optional[int] = None) -> RadiusReport:
    """b = c^(m+1); check 3b + b/(2c) <= b/c and the growing support radii
    b/2c, b/c, b/2c^2, b/c^2, ..., b/c^d against the polytope scale c/2."""
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    if d is None:
        d = max(m - 2, 0)
    b = c ** (m + 1)
    lhs = 3 * b + b / (2 * c)
    rhs = b / c
    holds = lhs <= rhs
    # multiply through by 2c/b > 0: 6c + 1 <= 2
    cleared = 6 * c + 1 <= 2
    if holds != cleared:
        raise AssertionError("cleared form disagrees with the direct inequality")
    chain = []
    for j in range(1, d + 1):
        chain.append((f"b/2c^{j}", b / (2 * c ** j)))
        chain.append((f"b/c^{j}", b / c ** j))
    monotone = all(x[1] < y[1] for x, y in zip(chain, chain[1:]))
    failing = next(((name, r) for name, r in chain if not r < c / 2), None)
    return RadiusReport(m, c, d, b, lhs, rhs, holds, cleared, chain, monotone, failing)
