"""Built-in systems and polytopes."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict

from .flagcover import SimplicialPolytope
from .sysparse import SystemSpec, parse

SOURCES: Dict[str, str] = {
    "cr1": """
        name "cr1";
        # Cauchy-Riemann operator in one complex variable
        vars 2; unknowns 1;
        eq d1 + i*d2;
    """,
    "cr2": """
        name "cr2";
        # d-bar in two complex variables
        vars 4; unknowns 1;
        eq d1 + i*d2;
        eq d3 + i*d4;
    """,
    "cr3": """
        name "cr3";
        vars 6; unknowns 1;
        eq d1 + i*d2;
        eq d3 + i*d4;
        eq d5 + i*d6;
    """,
    "grad2": """
        name "grad2";
        vars 2; unknowns 1;
        eq d1; eq d2;
    """,
    "grad3": """
        name "grad3";
        vars 3; unknowns 1;
        eq d1; eq d2; eq d3;
    """,
    "laplace2": """
        name "laplace2";
        vars 2; unknowns 1;
        eq d1^2 + d2^2;
    """,
    "wave2": """
        name "wave2";
        # real characteristic directions: negative control
        vars 2; unknowns 1;
        eq d1^2 - d2^2;
    """,
    "example2_n3d1": """
        name "example2_n3d1";
        # Laplacian in (x2, x3) plus d/dx1
        vars 3; unknowns 1;
        eq d2^2 + d3^2;
        eq d1;
    """,
    "example2_n4d1": """
        name "example2_n4d1";
        vars 4; unknowns 1;
        eq d2^2 + d3^2 + d4^2;
        eq d1;
    """,
    "example2_n4d2": """
        name "example2_n4d2";
        vars 4; unknowns 1;
        eq d3^2 + d4^2;
        eq d1;
        eq d2;
    """,
}

# product-type systems p0(xi_{d+1..n}) with the first d derivatives: (n, d)
PRODUCT_FAMILY = {"example2_n3d1": (3, 1), "example2_n4d1": (4, 1), "example2_n4d2": (4, 2)}


class UnknownCatalogEntry(KeyError):
    pass


def names():
    return list(SOURCES)


def system(name: str) -> SystemSpec:
    try:
        return parse(SOURCES[name])
    except KeyError:
        raise UnknownCatalogEntry(f"no catalog system named {name!r}; try one of {', '.join(SOURCES)}") from None


def segment(b=Fraction(1, 4)) -> SimplicialPolytope:
    """Segment shorter than 2b, so the two vertex neighborhoods cover it."""
    b = Fraction(b)
    return SimplicialPolytope([(Fraction(0),), (3 * b / 2,)], b, name="segment")


def triangle(b=Fraction(1, 4)) -> SimplicialPolytope:
    """Triangle with edges 2b, sqrt(5) b, sqrt(5) b."""
    b = Fraction(b)
    return SimplicialPolytope([(Fraction(0), Fraction(0)), (2 * b, Fraction(0)), (b, 2 * b)], b,
                              name="triangle")


POLYTOPES = {"segment": segment, "triangle": triangle}
