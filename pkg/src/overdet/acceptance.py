"""The acceptance checks, runnable from tests or ``overdet selftest``.

Each check returns a :class:`Result`; ``run_all`` prints one line per check.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import catalog, randgen
from .charvar import SHARP, REMOVABLE, char_variety, classify, removability_query
from .flagcover import (build_partition, constant_grid_function, enumerate_flags, face_lattice,
                        radius_chain, random_grid_function, telescope_check)
from .groebner import (Ideal, ModuleOrder, buchberger, is_zero_vec, krull_dim, normal_form,
                       reduces_to_zero_all, syzygies)
from .linalg import sparse_rank
from .omega import build_omega, omega_positivity
from .poly import GaussPoly
from .report import AnalyzeOptions, analyze
from .resolution import (_slice_matrix, build_resolution, degree_window,
                         degreewise_homology, dualize, ext_vanishing)
from .symbol import ellipticity_check, exact_at, matrix_of, principal_part
from .sysparse import emit, parse


@dataclass
class Result:
    ident: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    parts: Dict[str, bool] = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.ident}. {self.title}: {self.detail} ({self.seconds:.1f} s)"


def _timed(ident: int, title: str, fn: Callable[[], tuple]) -> Result:
    t0 = time.perf_counter()
    parts, detail = fn()
    dt = time.perf_counter() - t0
    return Result(ident, title, all(parts.values()), detail, dt, parts)


def _principal(name: str):
    return principal_part(matrix_of(catalog.system(name)))


# 1


def check_hartogs(seed: int = 0) -> Result:
    def body():
        parts = {}
        notes = []
        for name, dimV, m, maxdim in (("cr2", 2, 2, 0), ("cr3", 3, 3, 1)):
            t0 = time.perf_counter()
            rep = analyze(catalog.system(name), AnalyzeOptions(seed=seed))
            dt = time.perf_counter() - t0
            v = rep.verdict
            ok = (v["dimV"] == dimV and v["m"] == m and v["classification"] == "overdetermined"
                  and v["compact_removable"] is True and v["max_removable_submanifold_dim"] == maxdim)
            parts[f"{name} values"] = ok
            parts[f"{name} runtime"] = dt < 10
            notes.append(f"{name}: dimV={v['dimV']} m={v['m']} {v['classification']} "
                         f"max dim {v['max_removable_submanifold_dim']} in {dt:.1f}s")
        return parts, "; ".join(notes)
    return _timed(1, "Hartogs baseline", body)


# 2

NONTRIVIAL_AT_M = ("cr1", "cr2", "grad2", "grad3", "laplace2")


def check_ext_vanishing() -> Result:
    def body():
        parts = {}
        notes = []
        t0 = time.perf_counter()
        for name in catalog.names():
            P0 = _principal(name)
            V = char_variety(P0)
            m = P0.nvars - V.dim
            D = dualize(build_resolution(P0))
            H = ext_vanishing(D, m)
            parts[f"{name} trivial below m"] = all(H.status(k) == "trivial" for k in range(m))
            if name in NONTRIVIAL_AT_M:
                e = H.entries[m]
                parts[f"{name} nontrivial at m"] = e.status == "nontrivial" and e.verify(D)
            notes.append(f"{name}:m={m}:" + "".join("0" if H.status(k) == "trivial" else "x"
                                                     for k in range(m + 1)))
        dt = time.perf_counter() - t0
        parts["runtime"] = dt < 60
        return parts, " ".join(notes)
    return _timed(2, "dual complex exact below m", body)


# 3


def check_koszul() -> Result:
    def body():
        R = build_resolution(_principal("grad3"))
        D = dualize(R)
        H = ext_vanishing(D, 3)
        parts = {
            "ranks 1,3,3,1": R.ranks == [1, 3, 3, 1],
            "length 3": R.length == 3,
            "products zero": R.products_zero() and D.products_zero(),
            "exactness certificates": all(R.exactness_certificates()),
        }
        agree = True
        for k in range(3):
            gb_trivial = H.status(k) == "trivial"
            dims = [degreewise_homology(D, k, d) for d in degree_window(D, k)]
            agree &= gb_trivial == all(x == 0 for x in dims)
        parts["brute force agrees at k=0,1,2"] = agree
        return parts, f"ranks {R.ranks}, length {R.length}, homology {H.table()}"
    return _timed(3, "Koszul oracle", body)


# 4


def check_sharpness() -> Result:
    def body():
        parts = {}
        notes = []
        for name, (n, d) in catalog.PRODUCT_FAMILY.items():
            P0 = _principal(name)
            V = char_variety(P0)
            ell = ellipticity_check([P0], resolution=True)
            v = classify(V, ell)
            parts[f"{name} dimV"] = V.dim == n - d - 1
            parts[f"{name} query d"] = removability_query(v, d) == SHARP
            if d - 1 >= 0:
                parts[f"{name} query d-1"] = removability_query(v, d - 1) == REMOVABLE
            notes.append(f"{name}: dimV={V.dim} q({d})={removability_query(v, d)}"
                         + (f" q({d - 1})={removability_query(v, d - 1)}" if d >= 1 else ""))
        return parts, "; ".join(notes)
    return _timed(4, "product-family sharpness", body)


# 5


def check_omega(seed: int = 0) -> Result:
    def body():
        parts = {}
        notes = []
        for name in ("cr2", "grad3"):
            P0 = _principal(name)
            R = build_resolution(P0)
            om = build_omega(P0, R.steps[1] if len(R.steps) > 1 else None)
            rep = omega_positivity(om, pairs=500, samples=1000, seed=seed)
            parts[f"{name} identity"] = rep.identity_checks == 500 and rep.identity_failures == 0
            parts[f"{name} degrees"] = rep.degree_bound and rep.hermitian
            parts[f"{name} definite"] = rep.degenerate is None and rep.samples == 1000 and rep.definite
            notes.append(f"{name}: {rep.identity_checks - rep.identity_failures}/{rep.identity_checks} "
                         f"identities, {rep.samples} samples, no degenerate pair"
                         if rep.degenerate is None else f"{name}: degenerate pair found")
        P0 = _principal("wave2")
        om = build_omega(P0, None)
        rep = omega_positivity(om, pairs=50, samples=10, seed=seed)
        found = rep.degenerate is not None and rep.degenerate[0] == (Fraction(1), Fraction(1))
        parts["wave2 degenerate at (1,1)"] = found
        notes.append(f"wave2: degenerate pair at {tuple(str(x) for x in rep.degenerate[0])}"
                     if rep.degenerate else "wave2: none found")
        return parts, "; ".join(notes)
    return _timed(5, "Omega positivity", body)


# 6


def check_tiers(seed: int = 0) -> Result:
    def body():
        parts = {}
        notes = []
        for name in ("laplace2", "cr1", "cr2"):
            ell = ellipticity_check([_principal(name)], seed=seed, resolution=True)
            parts[name] = ell.status == "EllipticCertified" and bool(ell.certificate)
            notes.append(f"{name}: {ell.status} [{ell.certificate_str()}]")
        P0 = _principal("wave2")
        ell = ellipticity_check([P0], seed=seed, resolution=True)
        witness_ok = (ell.status == "NotElliptic" and ell.witness is not None
                      and any(ell.witness) and exact_at([P0], ell.witness, complete=False) is not None)
        parts["wave2"] = witness_ok
        notes.append(f"wave2: {ell.status} at xi={tuple(str(x) for x in ell.witness or ())}")
        return parts, "; ".join(notes)
    return _timed(6, "ellipticity tiers", body)


# 7


def check_flagcover(seed: int = 0) -> Result:
    def body():
        parts = {}
        notes = []
        t0 = time.perf_counter()
        rng = np.random.default_rng(seed)
        for poly in (catalog.segment(), catalog.triangle()):
            L = face_lattice(poly)
            partitions = {k: build_partition(L, k) for k in range(L.d)}
            for label, v0 in (("const", constant_grid_function(L)),
                              ("random", random_grid_function(L, rng))):
                rep = telescope_check(L, partitions, v0)
                parts[f"{poly.name} {label} partition sums"] = rep.partitions_ok()
                parts[f"{poly.name} {label} supports (III)"] = rep.supports_ok
                for k in range(L.d):
                    parts[f"{poly.name} {label} residuals k={k} (IV)"] = rep.residuals_zero_at(k)
                bad = rep.first_residual()
                if bad:
                    (k, B), x = bad
                    notes.append(f"{poly.name}/{label}: nonzero IV residual at k={k}, "
                                 f"flag {B}, point ({', '.join(map(str, x))})")
            notes.append(f"{poly.name}: flags per k {[len(enumerate_flags(L, k)) for k in range(L.d)]}")
        for c, want in ((Fraction(1, 8), True), (Fraction(1, 16), True), (Fraction(1, 2), False)):
            rc = radius_chain(2 if want else 1, c)
            parts[f"radius c={c}"] = rc.holds == want
            notes.append(f"c={c}: {rc.lhs} <= {rc.rhs} {'holds' if rc.holds else 'fails'}")
        parts["runtime"] = time.perf_counter() - t0 < 10
        return parts, "; ".join(notes)
    return _timed(7, "flag cover identities", body)


# 8


def suite_ring_laws(rng, cases: int = 200) -> int:
    fails = 0
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        a, b, c = (randgen.poly(rng, n) for _ in range(3))
        ok = ((a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
              and a * (b + c) == a * b + a * c and a * b == b * a and a + b == b + a)
        pt = [randgen.coeff(rng) for _ in range(n)]
        ok &= (a * b).eval(pt) == a.eval(pt) * b.eval(pt)
        fails += not ok
    return fails


def suite_groebner(rng, cases: int = 200) -> int:
    fails = 0
    for _ in range(cases):
        n = int(rng.integers(1, 4))
        gens = randgen.ideal_generators(rng, n, int(rng.integers(1, 4)), complex_=rng.random() < 0.5)
        G = buchberger([(g,) for g in gens], ModuleOrder("grevlex"), nvars=n, rank=1, track=True)
        ok = all(is_zero_vec(normal_form((g,), G)) for g in gens)
        for b, cert in zip(G.generators, G.certificates):
            acc = GaussPoly.zero(n)
            for c, g in zip(cert, gens):
                acc = acc + c * g
            ok &= acc == b[0]
        ok &= reduces_to_zero_all(G)
        fails += not ok
    return fails


def suite_syzygy(rng, cases: int = 200) -> int:
    fails = 0
    for _ in range(cases):
        n = int(rng.integers(1, 4))
        M = randgen.shifted_matrix(rng, n, int(rng.integers(1, 4)), int(rng.integers(1, 3)),
                                   complex_=rng.random() < 0.5)
        Q = syzygies(M)
        ok = (Q @ M).is_zero() if Q.nrows else True
        if Q.nrows:
            G = buchberger(Q.mat, ModuleOrder("grevlex", M.row_shifts), nvars=n, rank=M.nrows)
            a = [randgen.homogeneous(rng, n, int(rng.integers(0, 2)), complex_=True)
                 for _ in range(Q.nrows)]
            v = [sum((a[j] * Q.mat[j][i] for j in range(Q.nrows)), GaussPoly.zero(n))
                 for i in range(M.nrows)]
            ok &= is_zero_vec(normal_form(v, G))
        # degreewise, slices up to degree 6: kernel of v -> v M equals the span
        # of multiples of the rows of Q
        lo = min(M.row_shifts)
        for d in range(lo, lo + 7):
            rows, nsrc, ndst = _slice_matrix(M, d)
            ker = nsrc - (sparse_rank(rows) if nsrc and ndst else 0)
            if Q.nrows:
                qrows, qs, qd = _slice_matrix(Q, d)
                img = sparse_rank(qrows) if qs and qd else 0
            else:
                img = 0
            ok &= ker == img
        fails += not ok
    return fails


def suite_dimension(rng, cases: int = 200) -> int:
    fails = 0
    for _ in range(cases):
        n = int(rng.integers(1, 5))
        gens = randgen.ideal_generators(rng, n, int(rng.integers(1, 4)), max_deg=2)
        I = Ideal(gens, n)
        fails += krull_dim(I, "grevlex") != krull_dim(I, "lex")
    for name in catalog.names():
        V = char_variety(_principal(name))
        fails += krull_dim(V.minors_ideal, "grevlex") != krull_dim(V.minors_ideal, "lex")
    return fails


def suite_roundtrip(rng, cases: int = 200) -> int:
    fails = 0
    for k in range(cases):
        spec = randgen.system_spec(rng, with_shifts=k % 2 == 1)
        fails += parse(emit(spec)) != spec
    for name in catalog.names():
        spec = catalog.system(name)
        fails += parse(emit(spec)) != spec
    return fails


SUITES = {
    "ring laws": suite_ring_laws,
    "groebner self-consistency": suite_groebner,
    "syzygy exactness": suite_syzygy,
    "dimension order independence": suite_dimension,
    "parser round-trip": suite_roundtrip,
}


def check_properties(seed: int = 0, cases: int = 200) -> Result:
    def body():
        parts = {}
        notes = []
        t0 = time.perf_counter()
        ss = np.random.SeedSequence(seed)
        for (name, fn), child in zip(SUITES.items(), ss.spawn(len(SUITES))):
            fails = fn(np.random.default_rng(child), cases)
            parts[name] = fails == 0
            notes.append(f"{name} {cases - fails}/{cases}")
        parts["runtime"] = time.perf_counter() - t0 < 120
        return parts, "; ".join(notes)
    return _timed(8, "property suites", body)


CHECKS = [check_hartogs, check_ext_vanishing, check_koszul, check_sharpness, check_omega,
          check_tiers, check_flagcover, check_properties]


def run_all(out=None) -> List[Result]:
    out = out or sys.stdout
    results = []
    for check in CHECKS:
        r = check()
        results.append(r)
        out.write(r.line() + "\n")
        for part, ok in r.parts.items():
            if not ok:
                out.write(f"       failed: {part}\n")
        out.flush()
    return results
