"""Removable singularities for the Cauchy-Riemann system in several variables.

A holomorphic function of two complex variables (n = 4 real variables)
extends across any compact hole: the characteristic variety has dimension
2, so m = 4 - 2 = 2 and compact sets are removable.  In one complex
variable (cr1) m = 1 and an isolated point is not removable (1/z).
"""

from overdet import catalog
from overdet.report import AnalyzeOptions, analyze


def main():
    for name in ("cr1", "cr2", "cr3"):
        rep = analyze(catalog.system(name), AnalyzeOptions(samples=200, omega_pairs=50,
                                                          query_dims=[0]))
        v = rep.verdict
        print(f"{name}: n={rep.data['system']['nvars']} dimV={v['dimV']} m={v['m']} "
              f"{v['classification']}")
        print(f"  compact sets removable: {v['compact_removable']}")
        print(f"  largest removable submanifold dimension: {v['max_removable_submanifold_dim']}")
        print(f"  a point: {rep.data['removability']['0']}")


if __name__ == "__main__":
    main()
