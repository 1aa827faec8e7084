"""Exact polynomials in (x, t) for the free-particle Jordan ladder.

Coefficients live in Q + iQ and are stored as pairs of Fractions, so every
identity checked here holds with zero tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            return cls(Fraction(v.real), Fraction(v.imag))
        return cls(Fraction(v), Fraction(0))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        d = o.re * o.re + o.im * o.im
        return self * GaussianRational(o.re / d, -o.im / d)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


I = GaussianRational(Fraction(0), Fraction(1))


class BivariatePolynomial(Mapping):
    """Immutable map (x-degree, t-degree) -> GaussianRational, zeros dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for (p, q), c in dict(terms or {}).items():
            if p < 0 or q < 0:
                raise ValueError("degrees must be nonnegative")
            c = GaussianRational.of(c)
            if c:
                clean[(int(p), int(q))] = c
        self._terms = clean

    @classmethod
    def monomial(cls, p: int, q: int, coeff=1) -> "BivariatePolynomial":
        return cls({(p, q): coeff})

    def __getitem__(self, key):
        return self._terms[key]

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, BivariatePolynomial):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, GaussianRational()) + c
        return BivariatePolynomial(out)

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BivariatePolynomial":
        c = GaussianRational.of(c)
        return BivariatePolynomial({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return self.scale(other)
        out = {}
        for (p1, q1), c1 in self._terms.items():
            for (p2, q2), c2 in other._terms.items():
                k = (p1 + p2, q1 + q2)
                out[k] = out.get(k, GaussianRational()) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = scale

    @property
    def x_degree(self) -> int:
        return max((p for p, _ in self._terms), default=-1)

    def __call__(self, x, t):
        return sum(complex(c) * x**p * t**q for (p, q), c in self._terms.items())

    def reflect_x(self) -> "BivariatePolynomial":
        """P(-x, t)."""
        return BivariatePolynomial({(p, q): c * (-1) ** p for (p, q), c in self._terms.items()})

    def __repr__(self):
        return f"BivariatePolynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def poly_diff(P: BivariatePolynomial, var: str, order: int = 1) -> BivariatePolynomial:
    """Exact partial derivative of ``P`` in ``var`` ('x' or 't')."""
    if var not in ("x", "t"):
        raise ValueError("var must be 'x' or 't'")
    if order < 1:
        raise ValueError("order must be positive")
    terms = dict(P._terms)
    for _ in range(order):
        nxt = {}
        for (p, q), c in terms.items():
            n = p if var == "x" else q
            if n == 0:
                continue
            k = (p - 1, q) if var == "x" else (p, q - 1)
            nxt[k] = c * n
        terms = nxt
    return BivariatePolynomial(terms)


def poly_integrate(P: BivariatePolynomial, var: str) -> BivariatePolynomial:
    """Antiderivative vanishing at var = 0."""
    out = {}
    for (p, q), c in P._terms.items():
        if var == "x":
            out[(p + 1, q)] = c / (p + 1)
        else:
            out[(p, q + 1)] = c / (q + 1)
    return BivariatePolynomial(out)


def apply_free_hamiltonian(P: BivariatePolynomial) -> BivariatePolynomial:
    """-(1/2) d^2/dx^2 P."""
    return poly_diff(P, "x", 2).scale(Fraction(-1, 2))


def schrodinger_residual(P: BivariatePolynomial) -> BivariatePolynomial:
    """i dP/dt - H P; the zero polynomial iff P solves the free Schroedinger equation."""
    return poly_diff(P, "t").scale(I) - apply_free_hamiltonian(P)


@dataclass(frozen=True)
class LadderSequence:
    members: tuple

    def sector(self, parity: int) -> tuple:
        """Members with x-parity ``parity`` (0 even, 1 odd)."""
        return self.members[parity % 2 :: 2]

    def parity(self, m: int) -> int:
        return m % 2


def build_ladder(m_max: int) -> LadderSequence:
    """Psi_0..Psi_{m_max} with dPsi_m/dt = Psi_{m-2} and d^2Psi_m/dx^2 = -2i Psi_{m-2}.

    Psi_0 = 1, Psi_1 = x.  For m >= 2 the t-antiderivative of Psi_{m-2} is
    completed by the x-only part g(x) fixed by g'' = -2i Psi_{m-2}(x, 0) with
    zero integration constants, which keeps parity m mod 2.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    members = [BivariatePolynomial.monomial(0, 0), BivariatePolynomial.monomial(1, 0)]
    for m in range(2, m_max + 1):
        prev = members[m - 2]
        at_t0 = BivariatePolynomial({(p, q): c for (p, q), c in prev.items() if q == 0})
        g = poly_integrate(poly_integrate(at_t0.scale(GaussianRational(0, -2)), "x"), "x")
        members.append(poly_integrate(prev, "t") + g)
    return LadderSequence(tuple(members[: m_max + 1]))


# ---------------------------------------------------------------------------
# text rendering

_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
MINUS = "−"


def _power(var: str, n: int) -> str:
    if n == 0:
        return ""
    return var if n == 1 else var + str(n).translate(_SUP)


def _monomial(p: int, q: int) -> str:
    # lower exponent first, x before t on ties: "xt", "tx²"
    factors = sorted([(p, 0, "x"), (q, 1, "t")])
    return "".join(_power(v, n) for n, _, v in factors if n)


def _term(c: GaussianRational, p: int, q: int) -> tuple[str, str]:
    """(sign, body) for a coefficient that is purely real or purely imaginary."""
    if c.re and c.im:
        body = f"({c.re}{'+' if c.im > 0 else MINUS}{abs(c.im)}i)" + _monomial(p, q)
        return "+", body
    val, unit = (c.re, "") if c.re else (c.im, "i")
    sign = "-" if val < 0 else "+"
    val = abs(val)
    mono = _monomial(p, q)
    num = "" if (val.numerator == 1 and (unit or mono)) else str(val.numerator)
    body = num + unit + mono
    if val.denominator != 1:
        body += f"/{val.denominator}"
    return sign, body


def format_polynomial(P: BivariatePolynomial) -> str:
    """Canonical text: terms by ascending x-degree, then descending t-degree."""
    if P.is_zero():
        return "0"
    keys = sorted(P, key=lambda k: (k[0], -k[1]))
    out = []
    for idx, (p, q) in enumerate(keys):
        sign, body = _term(P[(p, q)], p, q)
        if idx == 0:
            out.append((MINUS if sign == "-" else "") + body)
        else:
            out.append(f" {MINUS if sign == '-' else '+'} {body}")
    return "".join(out)
