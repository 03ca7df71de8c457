"""Exact multivariate polynomials over the Gaussian rationals Q(i).

Variables are the symbol coordinates xi_1..xi_n (written ``d1..dn`` in system
files, since xi_k stands for the derivative d/dx_k).  Monomials are dense
exponent tuples of fixed length ``nvars``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _gcd
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

NEG_INF = float("-inf")

Monomial = Tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in polynomial rings with different variable counts."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {x!r}")


class GaussRational:
    """An element re + i*im of Q(i), both parts exact Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x, 0)

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self.im and not other.im:
            return GaussRational(self.re * other.re, 0)
        return GaussRational(self.re * other.re - self.im * other.im,
                             self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "GaussRational":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRational(self.re / n, -self.im / n)

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, an exact non-negative rational."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_imag_str(abs(self.im))})"


def _imag_str(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{q}*i"


def _coerce_or_none(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational(x, 0)
    return None


ZERO = GaussRational(0, 0)
ONE = GaussRational(1, 0)
I = GaussRational(0, 1)


class GaussPoly:
    """Immutable polynomial in ``nvars`` variables with Q(i) coefficients.

    ``terms`` maps exponent tuples to nonzero GaussRational coefficients.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean: Dict[Monomial, GaussRational] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != nvars or any(e < 0 for e in mono):
                    raise DimensionError(f"bad monomial {mono} for {nvars} variables")
                c = GaussRational.coerce(c)
                if c:
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Monomial, GaussRational]) -> "GaussPoly":
        # trusted constructor: terms already normalized
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "GaussPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "GaussPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "GaussPoly":
        return cls.constant(1, nvars)

    @classmethod
    def var(cls, k: int, nvars: int) -> "GaussPoly":
        """The coordinate xi_{k+1} (0-based index k)."""
        if not 0 <= k < nvars:
            raise DimensionError(f"variable index {k} out of range for {nvars} variables")
        e = [0] * nvars
        e[k] = 1
        return cls._raw(nvars, {tuple(e): ONE})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "GaussPoly":
        return cls(len(exps), {tuple(exps): coeff})

    # accessors

    @property
    def terms(self) -> Dict[Monomial, GaussRational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, GaussRational]]:
        return iter(self._terms.items())

    def coeff(self, mono: Sequence[int]) -> GaussRational:
        return self._terms.get(tuple(mono), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def _check(self, other: "GaussPoly"):
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "GaussPoly":
        if isinstance(other, GaussPoly):
            self._check(other)
            return other
        c = _coerce_or_none(other)
        if c is None:
            raise TypeError(f"cannot combine GaussPoly with {type(other).__name__}")
        return GaussPoly.constant(c, self.nvars)

    # ring operations

    def __add__(self, other) -> "GaussPoly":
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return GaussPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "GaussPoly":
        return GaussPoly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "GaussPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "GaussPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "GaussPoly":
        if not isinstance(other, GaussPoly):
            return self.scale(other)
        self._check(other)
        out: Dict[Monomial, GaussRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                s = out.get(m)
                out[m] = c if s is None else s + c
        return GaussPoly._raw(self.nvars, {m: c for m, c in out.items() if c})

    def __rmul__(self, other) -> "GaussPoly":
        return self.scale(other)

    def scale(self, c) -> "GaussPoly":
        c = GaussRational.coerce(c)
        if not c:
            return GaussPoly.zero(self.nvars)
        return GaussPoly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mono: Monomial, c: GaussRational) -> "GaussPoly":
        if not c:
            return GaussPoly.zero(self.nvars)
        return GaussPoly._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self._terms.items()},
        )

    def __pow__(self, k: int) -> "GaussPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = GaussPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "GaussPoly":
        """Conjugate every coefficient (variables are treated as real)."""
        return GaussPoly._raw(self.nvars, {m: c.conj() for m, c in self._terms.items()})

    # degree bookkeeping

    def total_degree(self):
        """Largest total degree of a stored monomial; ``NEG_INF`` for zero."""
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def homogeneous_component(self, k: int) -> "GaussPoly":
        if k < 0:
            raise ValueError("degree must be non-negative")
        return GaussPoly._raw(self.nvars, {m: c for m, c in self._terms.items() if sum(m) == k})

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def degrees(self) -> set:
        return {sum(m) for m in self._terms}

    def eval(self, point: Sequence) -> GaussRational:
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [GaussRational.coerce(x) for x in point]
        if not any(x.im for x in pt):
            return self._eval_real([x.re for x in pt])
        # cache powers per variable
        powers: list = [dict() for _ in pt]
        total = ZERO
        for m, c in self._terms.items():
            v = c
            for j, e in enumerate(m):
                if e:
                    pw = powers[j].get(e)
                    if pw is None:
                        pw = pt[j] ** e
                        powers[j][e] = pw
                    v = v * pw
            total = total + v
        return total

    def _eval_real(self, pt: Sequence[Fraction]) -> GaussRational:
        # clear denominators so monomials are integer products, then divide
        # each homogeneous part by L^deg once
        L = 1
        for x in pt:
            L = L * x.denominator // _gcd(L, x.denominator)
        ints = [x.numerator * (L // x.denominator) for x in pt]
        powers: list = [dict() for _ in pt]
        by_deg: Dict[int, list] = {}
        for m, c in self._terms.items():
            v = 1
            for j, e in enumerate(m):
                if e:
                    pw = powers[j].get(e)
                    if pw is None:
                        pw = ints[j] ** e
                        powers[j][e] = pw
                    v *= pw
            acc = by_deg.setdefault(sum(m), [[], []])
            acc[0].append(c.re * v)
            if c.im:
                acc[1].append(c.im * v)
        re = Fraction(0)
        im = Fraction(0)
        for k, (rs, ims) in by_deg.items():
            scale = Fraction(1, L ** k)
            re += sum(rs, Fraction(0)) * scale
            if ims:
                im += sum(ims, Fraction(0)) * scale
        return GaussRational(re, im)

    def substitute_scale(self, t) -> "GaussPoly":
        """p(t*xi) as a polynomial."""
        t = GaussRational.coerce(t)
        return GaussPoly._raw(self.nvars, {m: c * t ** sum(m) for m, c in self._terms.items()})

    # comparisons and display

    def __eq__(self, other):
        if isinstance(other, GaussPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        c = _coerce_or_none(other)
        if c is None:
            return NotImplemented
        return self == GaussPoly.constant(c, self.nvars)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order (display order)."""
        return sorted(self._terms.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"GaussPoly({self.nvars}, {format_poly(self)!r})"


def _mono_str(m: Monomial, var_prefix: str) -> str:
    parts = []
    for j, e in enumerate(m):
        if e == 1:
            parts.append(f"{var_prefix}{j + 1}")
        elif e > 1:
            parts.append(f"{var_prefix}{j + 1}^{e}")
    return "*".join(parts)


def _coeff_str(c: GaussRational) -> str:
    # rendered so that the system-file parser reads it back
    def rat(q: Fraction) -> str:
        return str(q)

    if not c.im:
        return rat(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        return f"{rat(c.im)}*i"
    im = "i" if c.im == 1 else ("-i" if c.im == -1 else f"{rat(c.im)}*i")
    if im.startswith("-"):
        return f"({rat(c.re)} - {im[1:]})"
    return f"({rat(c.re)} + {im})"


def format_poly(p: GaussPoly, var_prefix: str = "d") -> str:
    """Render ``p`` in the grammar accepted by :mod:`overdet.sysparse`."""
    if p.is_zero():
        return "0"
    pieces = []
    for m, c in p.sorted_terms():
        mono = _mono_str(m, var_prefix)
        neg = False
        if not c.im and c.re < 0:
            neg, c = True, -c
        elif not c.re and c.im < 0:
            neg, c = True, -c
        cs = _coeff_str(c)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        pieces.append(("-" if neg else "+", body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def monomials_of_degree(nvars: int, k: int) -> list:
    """All exponent tuples of total degree k, in descending lex order."""
    if k < 0:
        return []
    if nvars == 0:
        return [()] if k == 0 else []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], k, nvars)
    return out


def variables(nvars: int) -> list:
    return [GaussPoly.var(k, nvars) for k in range(nvars)]


def poly_sum(polys: Iterable[GaussPoly], nvars: int) -> GaussPoly:
    out = GaussPoly.zero(nvars)
    for p in polys:
        out = out + p
    return out
