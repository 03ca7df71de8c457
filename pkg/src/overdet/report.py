"""End-to-end analysis of one system and the structured report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import __version__
from .charvar import char_variety, classify, removability_query
from .flagcover import radius_chain
from .omega import OmegaError, build_omega, omega_positivity
from .poly import format_poly
from .resolution import build_resolution, dualize, ext_vanishing
from .symbol import ellipticity_check, matrix_of, principal_part, resolve_shifts
from .sysparse import SystemSpec, emit

SCHEMA = "overdet.report/1"


class AnalysisError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")


@dataclass
class AnalyzeOptions:
    seed: int = 0
    samples: int = 1000
    max_res_len: Optional[int] = None
    query_dims: List[int] = field(default_factory=list)
    omega: bool = True
    omega_pairs: int = 500
    flagcover: bool = True
    radius_c: Fraction = Fraction(1, 8)


@dataclass
class AnalysisReport:
    data: Dict[str, Any]

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        return render_text(self.data)

    @property
    def verdict(self) -> Dict[str, Any]:
        return self.data["verdict"]


def _s(x) -> str:
    return str(x)


def _finite(x):
    return None if x is None or x == float("inf") else x


def _vec(v) -> List[str]:
    return [format_poly(p) for p in v]


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except AnalysisError:
        raise
    except Exception as exc:  # noqa: BLE001 - relabel with the stage
        raise AnalysisError(name, exc) from exc


def analyze(spec: SystemSpec, options: Optional[AnalyzeOptions] = None) -> AnalysisReport:
    opt = options or AnalyzeOptions()
    n = spec.nvars

    sigma, rho = _stage("shifts", resolve_shifts, spec)
    M = _stage("shifts", matrix_of, spec, sigma, rho)
    P0 = principal_part(M)

    R = _stage("resolution", build_resolution, P0, opt.max_res_len)
    if R.length > n:
        raise AnalysisError("resolution", AssertionError(f"length {R.length} exceeds n = {n}"))
    if not R.products_zero():
        raise AnalysisError("resolution", AssertionError("consecutive product is nonzero"))
    exact = R.exactness_certificates()

    ell = _stage("ellipticity", ellipticity_check, [P0], samples=opt.samples, seed=opt.seed,
                 resolution=True)
    V = _stage("char_variety", char_variety, P0)
    if not V.is_cone:
        raise AnalysisError("char_variety", AssertionError("minors ideal is not homogeneous"))
    verdict = classify(V, ell)
    m = verdict.m

    D = _stage("ext", dualize, R)
    upto = min(max(m, D.nterms - 1), n + 1)
    H = _stage("ext", ext_vanishing, D, upto)
    for k in range(min(m, upto + 1)):
        st = H.status(k)
        if st == "nontrivial":
            raise AnalysisError("ext", AssertionError(f"homology at k={k} below m={m}"))
    for e in H.entries.values():
        if not e.verify(D):
            raise AnalysisError("ext", AssertionError(f"witness at k={e.k} does not re-verify"))

    omega_data = None
    if opt.omega:
        try:
            # redundant rows dropped by the resolution are dropped here too
            Q = R.steps[1] if len(R.steps) > 1 else None
            om = build_omega(R.steps[0] if R.steps else P0, Q)
        except (OmegaError, ValueError) as exc:
            omega_data = {"skipped": str(exc)}
        else:
            pos = _stage("omega", omega_positivity, om, opt.omega_pairs, opt.samples, opt.seed)
            if not pos.identity_holds:
                raise AnalysisError("omega", AssertionError("quadratic-form identity failed: "
                                                            + "; ".join(pos.failures)))
            det_nonzero = not om.det().is_zero()
            if ell.elliptic and (pos.degenerate is not None or not det_nonzero):
                raise AnalysisError("omega", AssertionError("elliptic system with degenerate Omega"))
            omega_data = {
                "size": om.size,
                "t": om.t,
                "shift": list(om.shift),
                "hermitian": pos.hermitian,
                "degree_bound": pos.degree_bound,
                "identity_checks": pos.identity_checks,
                "identity_failures": pos.identity_failures,
                "samples": pos.samples,
                "min_ratio": None if pos.min_ratio is None else _s(pos.min_ratio),
                "degenerate_pair": None if pos.degenerate is None else {
                    "xi": [_s(x) for x in pos.degenerate[0]],
                    "v": [_s(x) for x in pos.degenerate[1]],
                },
                "det_nonzero": det_nonzero,
            }

    removability = {}
    for k in opt.query_dims:
        removability[str(k)] = _stage("verdict", removability_query, verdict, k)

    flag_data = None
    if opt.flagcover:
        d = max(0, min(verdict.max_removable_submanifold_dim, m))
        rc = radius_chain(max(m, 1), opt.radius_c, d)
        flag_data = {
            "c": _s(rc.c),
            "m": rc.m,
            "d": rc.d,
            "b": _s(rc.b),
            "inequality": f"{rc.lhs} <= {rc.rhs}",
            "holds": rc.holds,
            "chain": [[name, _s(r)] for name, r in rc.chain],
            "chain_monotone": rc.chain_monotone,
            "first_failing_scale": None if rc.first_failing_scale is None
            else [rc.first_failing_scale[0], _s(rc.first_failing_scale[1])],
        }

    data = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "seed": opt.seed,
        "system": {
            "name": spec.name,
            "nvars": n,
            "nunknowns": spec.nunknowns,
            "neqs": spec.neqs,
            "text": emit(spec),
        },
        "shifts": {
            "sigma": list(sigma),
            "rho": list(rho),
            "inferred": spec.sigma is None or spec.rho is None,
        },
        "principal_part": [_vec(row) for row in P0.mat],
        "ellipticity": {
            "status": ell.status,
            "witness": None if ell.witness is None else [_s(x) for x in ell.witness],
            "certificate": ell.certificate_str() or None,
            "samples": ell.samples,
            "min_singular": _finite(ell.min_singular),
            "min_defect": ell.min_defect,
            "near_degenerate": ell.near_degenerate,
            "convention": ell.note,
        },
        "resolution": {
            "ranks": R.ranks,
            "shifts": [list(s) for s in R.shifts],
            "length": R.length,
            "truncated": R.truncated,
            "max_len": R.max_len,
            "matrices": [[_vec(row) for row in s.mat] for s in R.steps],
            "exactness_certified": exact,
            "dropped_rows": list(R.dropped_rows),
        },
        "char_variety": {
            "minors": [format_poly(p) for p in V.minors_ideal.generators],
            "groebner_basis": [] if V.gb is None else [format_poly(g[0]) for g in V.gb.generators],
            "dim": V.dim,
        },
        "m": m,
        "ext": {
            str(k): {
                "status": e.status,
                "witness": None if e.witness is None else _vec(e.witness),
                "degree": e.witness_degree,
            } for k, e in sorted(H.entries.items())
        },
        "omega": omega_data,
        "verdict": {
            "elliptic": verdict.elliptic,
            "dimV": verdict.dimV,
            "m": verdict.m,
            "classification": verdict.classification,
            "compact_removable": verdict.compact_removable,
            "max_removable_submanifold_dim": verdict.max_removable_submanifold_dim,
            "sharpness_note": verdict.sharpness_note,
            "notes": verdict.notes,
        },
        "removability": removability,
        "flagcover": flag_data,
    }
    _check_consistency(data)
    return AnalysisReport(data)


def _check_consistency(data) -> None:
    v = data["verdict"]
    n = data["system"]["nvars"]
    assert data["m"] == n - data["char_variety"]["dim"] == v["m"]
    assert v["max_removable_submanifold_dim"] == max(n - v["dimV"] - 2, -1)
    if v["compact_removable"]:
        assert v["classification"] == "overdetermined" and v["elliptic"] != "NotElliptic"


def render_text(data) -> str:
    v = data["verdict"]
    e = data["ellipticity"]
    r = data["resolution"]
    lines = [
        f"system        {data['system']['name'] or '(unnamed)'}  n={data['system']['nvars']}"
        f"  r={data['system']['nunknowns']}  s={data['system']['neqs']}",
        f"shifts        sigma={data['shifts']['sigma']} rho={data['shifts']['rho']}"
        + ("  (inferred)" if data["shifts"]["inferred"] else ""),
        f"ellipticity   {e['status']}",
    ]
    if e["witness"]:
        lines.append(f"  witness     xi = ({', '.join(e['witness'])})")
    if e["certificate"]:
        lines.append(f"  certificate {e['certificate']}")
    lines.append(f"resolution    ranks {r['ranks']}  length {r['length']}"
                 + ("  TRUNCATED" if r["truncated"] else ""))
    cv = data["char_variety"]
    lines.append(f"char variety  dim {cv['dim']}  ideal <{', '.join(cv['groebner_basis'])}>")
    lines.append(f"m             {data['m']}")
    ext = ", ".join(f"{k}:{x['status']}" for k, x in data["ext"].items())
    lines.append(f"dual homology {ext}")
    om = data["omega"]
    if om is not None:
        if "skipped" in om:
            lines.append(f"omega         skipped ({om['skipped']})")
        else:
            dp = om["degenerate_pair"]
            lines.append(f"omega         {om['size']}x{om['size']}  t={om['t']}  identity "
                         f"{om['identity_checks'] - om['identity_failures']}/{om['identity_checks']}  "
                         + ("degenerate at xi=(" + ", ".join(dp["xi"]) + ")" if dp else "definite on samples"))
    lines.append(f"verdict       {v['classification']}  compact_removable={v['compact_removable']}"
                 f"  max removable submanifold dim {v['max_removable_submanifold_dim']}")
    for k, ans in data["removability"].items():
        lines.append(f"  dim {k}: {ans}")
        if ans == "sharp-counterexample":
            lines.append(f"    {v['sharpness_note']}")
    fc = data["flagcover"]
    if fc is not None:
        lines.append(f"radius chain  c={fc['c']} b={fc['b']}  {fc['inequality']}: "
                     + ("holds" if fc["holds"] else "FAILS"))
    return "\n".join(lines) + "\n"
