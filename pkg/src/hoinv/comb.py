"""Exact calculus for polynomial-exponential sums and integer-supported delta combs.

A :class:`PolyExpSum` with terms ``{k: p_k}`` stands for the distribution
sum_k p_k(x) exp(2 pi i k x); a :class:`DeltaComb` with terms
``{k: (c_0, ..., c_N)}`` stands for sum_{k,n} c_{k,n} e_{k,n} in the scaled
basis e_{k,n} = (-2 pi i)^(-n) d^n delta_k. With F(f)(x) = int f(y) exp(-2 pi i x y) dy,
F(x^n exp(2 pi i k x)) = e_{k,n}, so the Fourier transform is the identity on
coefficients and everything symbolic stays in Q(i).

Families are finitely supported; the moderate-growth condition on infinite
families is vacuous here. The order of the zero element is 0 by convention,
but :func:`annihilation_order` rejects it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

import numpy as np

from hoinv.errors import DomainError, MalformedInputError
from hoinv.linalg import format_rational, parse_rational


class GaussRational:
    """Exact element a + b i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRational):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @staticmethod
    def coerce(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, complex):
            return GaussRational(Fraction(x.real), Fraction(x.imag))
        return GaussRational(x)

    @classmethod
    def parse(cls, pair) -> "GaussRational":
        """From ``["re", "im"]`` with ``"num/den"`` strings."""
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedInputError(f"coefficient must be a [re, im] pair, got {pair!r}")
        return cls(parse_rational(pair[0]), parse_rational(pair[1]))

    def to_pair(self) -> list[str]:
        return [format_rational(self.re), format_rational(self.im)]

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def __truediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def _coerce_or_none(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational(x)
    return None


ZERO = GaussRational(0)
Poly = tuple[GaussRational, ...]


def _trim(coeffs) -> Poly:
    c = [GaussRational.coerce(x) for x in coeffs]
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _normalize(terms: Mapping[int, Sequence]) -> dict[int, Poly]:
    out = {}
    for k in sorted(terms):
        if isinstance(k, bool) or not isinstance(k, int):
            raise MalformedInputError(f"support index must be an integer, got {k!r}")
        c = _trim(terms[k])
        if c:
            out[k] = c
    return out


class _Family:
    """Finitely supported family k -> coefficient tuple, zero entries dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Sequence] | None = None):
        object.__setattr__(self, "terms", _normalize(terms or {}))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, tuple(self.terms.items())))

    def __repr__(self):
        body = ", ".join(f"{k}: [{', '.join(map(str, c))}]" for k, c in self.terms.items())
        return f"{type(self).__name__}({{{body}}})"

    def __bool__(self):
        return bool(self.terms)

    @property
    def order(self) -> int:
        """Largest degree (or derivative order) present; 0 for the zero element."""
        return max((len(c) - 1 for c in self.terms.values()), default=0)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        out = {}
        for k in keys:
            a, b = self.terms.get(k, ()), other.terms.get(k, ())
            n = max(len(a), len(b))
            out[k] = [(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)]
        return type(self)(out)

    def __neg__(self):
        return type(self)({k: [-x for x in c] for k, c in self.terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "_Family":
        s = GaussRational.coerce(s)
        return type(self)({k: [s * x for x in c] for k, c in self.terms.items()})

    def to_json(self) -> dict[str, list[list[str]]]:
        return {str(k): [x.to_pair() for x in c] for k, c in self.terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence]):
        if not isinstance(data, Mapping):
            raise MalformedInputError("terms must be an object mapping integers to coefficient lists")
        terms = {}
        for key, coeffs in data.items():
            try:
                k = int(key)
            except (TypeError, ValueError) as exc:
                raise MalformedInputError(f"support index {key!r} is not an integer") from exc
            if str(k) != str(key).strip():
                raise MalformedInputError(f"support index {key!r} is not a canonical integer")
            if not isinstance(coeffs, list):
                raise MalformedInputError(f"coefficients at k={key} must be a list")
            terms[k] = [GaussRational.parse(p) for p in coeffs]
        return cls(terms)


class PolyExpSum(_Family):
    """sum_k p_k(x) exp(2 pi i k x); ``terms[k]`` lists p_k's coefficients from x^0 up."""

    __slots__ = ()


class DeltaComb(_Family):
    """sum_{k,n} c_{k,n} (-2 pi i)^(-n) d^n delta_k; ``terms[k]`` lists c_{k,0..N_k}."""

    __slots__ = ()


def _shift_one(p: Poly) -> list[GaussRational]:
    """Coefficients of p(x + 1)."""
    n = len(p)
    return [sum((p[i] * comb(i, j) for i in range(j, n) if p[i]), ZERO) for j in range(n)]


def poly_difference(p: Poly) -> Poly:
    return _trim(a - b for a, b in zip(_shift_one(p), p))


def poly_antidifference(p: Poly) -> Poly:
    """The q with q(x+1) - q(x) = p(x) and q(0) = 0.

    Writing p = sum_j a_j x^j and q = sum_{i=1}^{m+1} b_i x^i (m = deg p),
    matching coefficients of x^j gives a_j = sum_{i=j+1}^{m+1} C(i, j) b_i,
    solved from the top down:
    b_{j+1} = (a_j - sum_{i=j+2}^{m+1} C(i, j) b_i) / (j + 1).
    """
    p = _trim(p)
    if not p:
        return ()
    m = len(p) - 1
    b = [ZERO] * (m + 2)
    for j in range(m, -1, -1):
        acc = p[j]
        for i in range(j + 2, m + 2):
            if b[i]:
                acc = acc - b[i] * comb(i, j)
        b[j + 1] = acc / (j + 1)
    return _trim(b)


def shift_difference(t: PolyExpSum) -> PolyExpSum:
    """T(x+1) - T(x); exp(2 pi i k) = 1, so each p_k is differenced on its own."""
    return PolyExpSum({k: poly_difference(p) for k, p in t.terms.items()})


def antidifference(p: PolyExpSum) -> PolyExpSum:
    return PolyExpSum({k: poly_antidifference(c) for k, c in p.terms.items()})


def annihilation_order(t: PolyExpSum) -> int:
    """Largest degree q of the p_k, witnessed by q+1 differences killing T and q not.

    The zero sum is rejected.
    """
    if not t:
        raise DomainError("annihilation order of the zero distribution is not defined here (ord(0)=0 by convention)")
    q = t.order
    cur = t
    for _ in range(q):
        cur = shift_difference(cur)
    if not cur:
        raise ArithmeticError(f"{q} differences already annihilate {t!r}")
    if shift_difference(cur):
        raise ArithmeticError(f"{q + 1} differences do not annihilate {t!r}")
    return q


def fourier_to_comb(t: PolyExpSum) -> DeltaComb:
    """Fourier transform: x^n exp(2 pi i k x) -> (-2 pi i)^(-n) d^n delta_k, coefficientwise."""
    return DeltaComb(t.terms)


def comb_to_polyexp(c: DeltaComb) -> PolyExpSum:
    return PolyExpSum(c.terms)


@dataclass(frozen=True)
class PairingReport:
    lhs: complex
    rhs: complex
    difference: float
    tolerance: float
    radius: float
    panels: int

    @property
    def passed(self) -> bool:
        return self.difference < self.tolerance


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gaussian(x):
    return np.exp(-np.pi * x * x)


def _integrate(t: PolyExpSum, radius: float, panels: int) -> complex:
    edges = np.linspace(-radius, radius, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    g = _gaussian(x) * w
    total = 0j
    for k, coeffs in t.terms.items():
        c = np.array([complex(a) for a in coeffs])
        vals = np.polynomial.polynomial.polyval(x, c) * np.exp(2j * np.pi * k * x)
        total += complex(np.sum(vals * g))
    return total


def gaussian_derivative(n: int, x: float) -> float:
    """n-th derivative of exp(-pi x^2) via Hermite polynomials.

    d^n/dx^n exp(-pi x^2) = (-sqrt(pi))^n H_n(sqrt(pi) x) exp(-pi x^2).
    """
    s = np.sqrt(np.pi)
    t = s * x
    h_prev, h = 0.0, 1.0
    for m in range(n):
        h_prev, h = h, 2 * t * h - 2 * m * h_prev
    return (-s) ** n * h * np.exp(-np.pi * x * x)


def _comb_side(c: DeltaComb) -> complex:
    total = 0j
    for k, coeffs in c.terms.items():
        for n, a in enumerate(coeffs):
            if a:
                # <d^n delta_k | f> = (-1)^n f^(n)(k)
                total += complex(a) * (-2j * np.pi) ** (-n) * (-1) ** n * gaussian_derivative(n, float(k))
    return total


def gaussian_pairing_check(t: PolyExpSum, tolerance: float = 1e-9, max_panels: int = 1 << 14) -> PairingReport:
    """Compare <T | f> with <F(T) | f> for the self-dual Gaussian f = exp(-pi x^2).

    F^-1(f) = f, so both sides equal the same number. The left side is
    computed by composite Gauss-Legendre on [-R, R], R = max(6, max|k| + 6),
    doubling panels until successive estimates agree to tolerance/10; the
    right side from Hermite-form derivatives of f at the integers.
    """
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    kmax = max((abs(k) for k in t.terms), default=0)
    radius = float(max(6, kmax + 6))
    # panel width <= 1/2 resolves the fastest oscillation before doubling starts
    panels = int(4 * radius)
    prev = _integrate(t, radius, panels)
    while True:
        panels *= 2
        cur = _integrate(t, radius, panels)
        if abs(cur - prev) < tolerance / 10 or panels >= max_panels:
            break
        prev = cur
    rhs = _comb_side(fourier_to_comb(t))
    return PairingReport(cur, rhs, abs(cur - rhs), tolerance, radius, panels)
