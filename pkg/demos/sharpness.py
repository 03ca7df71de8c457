"""The product family: the removability threshold is sharp.

For the family with an (n - d - 1)-dimensional characteristic variety, a
d-dimensional plane is not removable while any (d - 1)-dimensional
submanifold is.
"""

from overdet import catalog
from overdet.charvar import char_variety, classify, removability_query
from overdet.symbol import ellipticity_check, matrix_of, principal_part


def main():
    for name, (n, d) in catalog.PRODUCT_FAMILY.items():
        P0 = principal_part(matrix_of(catalog.system(name)))
        V = char_variety(P0)
        v = classify(V, ellipticity_check([P0], resolution=True))
        print(f"{name}: n={n} d={d} dimV={V.dim} (n-d-1 = {n - d - 1})")
        for k in range(max(d - 1, 0), d + 1):
            print(f"  dimension {k}: {removability_query(v, k)}")
        print(f"  {v.sharpness_note}")


if __name__ == "__main__":
    main()
