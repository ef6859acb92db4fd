"""Numerical checks for weight-2 cusp forms of level 11 and their periods.

Everything complex is double precision; truncated q-expansions are only
evaluated where the tail bound sum_{n>M} n^2 |q|^n (which dominates
sum n d(n) |q|^n) stays below ``TAIL_TOL``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from hoinv.errors import DomainError, MalformedInputError, PrecisionError, SingularityError
from hoinv.invariants import Word, format_word, parse_word

TAIL_TOL = 1e-12
DEFAULT_TRUNCATION = 400


@dataclass(frozen=True)
class QExpansion:
    """Truncated expansion sum_{n=1}^{M} a_n q^n, q = exp(2 pi i z).

    ``constant_term`` must be zero for a cusp form; it is kept only so that
    non-cusp input can be detected and rejected.
    """

    weight: int
    level: int
    coefficients: tuple
    constant_term: complex = 0

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise DomainError("a q-expansion needs at least one coefficient")

    @property
    def truncation(self) -> int:
        return len(self.coefficients)

    @property
    def is_cusp_form(self) -> bool:
        return self.constant_term == 0

    def __getitem__(self, n: int):
        """a_n for n >= 1 (a_0 is the constant term)."""
        if n == 0:
            return self.constant_term
        return self.coefficients[n - 1]

    def __call__(self, z):
        q = np.exp(2j * np.pi * np.asarray(z, dtype=complex))
        return np.polynomial.polynomial.polyval(q, _coefficient_array(self))

    def tail_bound(self, z) -> float:
        return tail_bound(complex(z).imag, self.truncation)

    def check_admissible(self, z, tol: float = TAIL_TOL) -> None:
        y = complex(z).imag
        if not y > 0:
            raise DomainError(f"point {z} is not in the upper half plane")
        if tail_bound(y, self.truncation) >= tol:
            raise PrecisionError(
                f"truncation M={self.truncation} is too short at Im z={y:.4g}; "
                f"use M >= {suggested_truncation(y, tol)}",
                suggested_truncation(y, tol),
            )


@lru_cache(maxsize=32)
def _cached_array(coeffs: tuple, constant: complex) -> np.ndarray:
    return np.array((constant,) + coeffs, dtype=complex)


def _coefficient_array(f: QExpansion) -> np.ndarray:
    return _cached_array(f.coefficients, complex(f.constant_term))


def tail_bound(y: float, truncation: int) -> float:
    """Upper bound for sum_{n>M} n^2 r^n with r = exp(-2 pi y)."""
    if y <= 0:
        return float("inf")
    r = np.exp(-2 * np.pi * y)
    m = truncation
    rho = ((m + 2) / (m + 1)) ** 2 * r
    if rho >= 1:
        return float("inf")
    return float((m + 1) ** 2 * r ** (m + 1) / (1 - rho))


def suggested_truncation(y: float, tol: float = TAIL_TOL) -> int:
    """Smallest M with tail_bound(y, M) < tol."""
    if y <= 0:
        raise DomainError("imaginary part must be positive")
    hi = 16
    while tail_bound(y, hi) >= tol:
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if tail_bound(y, mid) < tol:
            hi = mid
        else:
            lo = mid
    return hi


def _euler_product(m: int, step: int = 1) -> np.ndarray:
    """prod_n (1 - q^{step n}) up to q^m via the pentagonal number theorem."""
    out = np.zeros(m + 1, dtype=np.int64)
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            e = step * (j * (3 * j - 1) // 2)
            if e <= m:
                out[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def eta11_qexp(truncation: int) -> QExpansion:
    """q prod (1-q^n)^2 (1-q^{11n})^2, the weight-2 newform of level 11."""
    if truncation < 1:
        raise DomainError("truncation must be >= 1")
    m = truncation - 1
    e1 = _euler_product(m)
    e11 = _euler_product(m, 11)
    prod = np.convolve(e1, e1)[: m + 1]
    prod = np.convolve(prod, e11)[: m + 1]
    prod = np.convolve(prod, e11)[: m + 1]
    return QExpansion(2, 11, tuple(int(x) for x in prod))


def integral_qexp(g: QExpansion) -> QExpansion:
    """G(z) = sum a_n / (2 pi i n) q^n, so G' = g and G(i infinity) = 0."""
    if not g.is_cusp_form:
        raise DomainError("integral_qexp needs a cusp form (nonzero constant term given)")
    coeffs = tuple(complex(a) / (2j * np.pi * n) for n, a in enumerate(g.coefficients, start=1))
    return QExpansion(0, g.level, coeffs)


@dataclass(frozen=True)
class Mobius:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det <= 0:
            raise MalformedInputError(f"matrix {self.rows} must have positive determinant")

    @classmethod
    def from_rows(cls, rows) -> "Mobius":
        try:
            (a, b), (c, d) = rows
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(f"expected a 2x2 integer matrix, got {rows!r}") from exc
        vals = (a, b, c, d)
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in vals):
            raise MalformedInputError(f"matrix entries must be integers, got {rows!r}")
        return cls(*vals)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        if self.det != 1:
            raise DomainError("integral inverse needs determinant 1")
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Mobius":
        base = self if n >= 0 else self.inverse()
        out = Mobius.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    def automorphy(self, z) -> complex:
        return self.c * z + self.d

    def __call__(self, z):
        j = self.automorphy(z)
        if j == 0:
            raise SingularityError(f"c z + d vanishes at z={z}")
        return (self.a * z + self.b) / j


def default_base_point(gamma: Mobius) -> complex:
    """A point z with Im z and Im(gamma z) both about 1/|c| (or i if c = 0)."""
    if gamma.c == 0:
        return 1j
    return complex(-gamma.d / gamma.c, 1 / abs(gamma.c))


def base_points(gamma: Mobius) -> list[complex]:
    """Three admissible base points used for base-point independence checks."""
    if gamma.c == 0:
        return [1j, complex(0.3, 1.1), complex(-0.2, 0.9)]
    center = -gamma.d / gamma.c
    s = 1 / abs(gamma.c)
    return [complex(center + u * s, v * s) for u, v in ((0.0, 1.0), (0.15, 0.9), (-0.1, 1.1))]


def sample_points(gamma: Mobius, count: int, seed: int = 0) -> list[complex]:
    """Seeded points z with z and gamma z both well inside the upper half plane."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(-0.3, 0.3, count)
    v = rng.uniform(0.8, 1.25, count)
    if gamma.c == 0:
        return [complex(0.5 + x, 0.4 * y) for x, y in zip(u, v)]
    center = -gamma.d / gamma.c
    s = 1 / abs(gamma.c)
    return [complex(center + x * s, y * s) for x, y in zip(u, v)]


def _images(gamma: Mobius, points: Sequence[complex]) -> list[complex]:
    return [complex(gamma(z)) for z in points]


def required_truncation(points: Sequence[complex], tol: float = TAIL_TOL) -> int:
    y = min(complex(z).imag for z in points)
    return suggested_truncation(y, tol)


def period_integral(g: QExpansion, gamma: Mobius, z0: complex = 1j) -> complex:
    """chi_g(gamma) = G(gamma z0) - G(z0), the integral of g from z0 to gamma z0."""
    z0 = complex(z0)
    if not z0.imag > 0:
        raise DomainError("base point must lie in the upper half plane")
    w = complex(gamma(z0))
    g.check_admissible(z0)
    g.check_admissible(w)
    big_g = integral_qexp(g)
    if w == z0:
        return 0j
    return complex(big_g(w) - big_g(z0))


def slash_eval(f: QExpansion, k: int, gamma: Mobius, z: complex) -> complex:
    """(f|_k gamma)(z) = det^{k/2} (cz+d)^{-k} f(gamma z)."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("point must lie in the upper half plane")
    j = gamma.automorphy(z)
    if j == 0:
        raise SingularityError(f"c z + d vanishes at z={z}")
    w = complex(gamma(z))
    f.check_admissible(w)
    return complex(gamma.det ** (k / 2) * j ** (-k) * f(w))


@dataclass(frozen=True)
class ResidualEntry:
    period: complex
    residual: float
    slash_defect: float
    base_point: complex
    samples: int


def second_order_residual(
    f: QExpansion, g: QExpansion, gamma: Mobius, samples: Sequence[complex], z0: complex = 1j
) -> ResidualEntry:
    """max |F|_2(gamma - 1)(z) - chi_g(gamma) f(z)| over samples, F(z) = f(z)(G(z) - G(z0)).

    ``slash_defect`` is max |F|_2 gamma - F|, nonzero whenever chi_g(gamma)
    is, which shows F is not itself invariant.
    """
    z0 = complex(z0)
    g.check_admissible(z0)
    big_g = integral_qexp(g)
    g_z0 = complex(big_g(z0))
    chi = period_integral(g, gamma, default_base_point(gamma))

    def big_f(z):
        return complex(f(z)) * (complex(big_g(z)) - g_z0)

    residual = 0.0
    defect = 0.0
    for z in samples:
        z = complex(z)
        w = complex(gamma(z))
        f.check_admissible(z)
        f.check_admissible(w)
        slashed = gamma.det * gamma.automorphy(z) ** (-2) * big_f(w)
        diff = slashed - big_f(z)
        residual = max(residual, abs(diff - chi * complex(f(z))))
        defect = max(defect, abs(diff))
    return ResidualEntry(chi, residual, defect, z0, len(samples))


def graded_dimension(genus: int, q: int) -> int:
    """d_q with d_0 = g, d_1 = 2g^2 - 1, d_{q+1} = 2g d_q - d_{q-1}.

    g +- sqrt(g^2 - 1) are the roots of x^2 - 2gx + 1, so d_q equals
    ((g + sqrt(g^2-1))^{q+1} + (g - sqrt(g^2-1))^{q+1}) / 2.
    """
    if genus < 1:
        raise DomainError("genus must be >= 1")
    if q < 0:
        raise DomainError("order must be >= 0")
    prev, cur = genus, 2 * genus * genus - 1
    if q == 0:
        return prev
    for _ in range(q - 1):
        prev, cur = cur, 2 * genus * cur - prev
    return cur


def closed_form_dimension(genus: int, q: int, digits: int = 60) -> int:
    """Closed form evaluated in ``digits``-digit decimal arithmetic, rounded."""
    with localcontext() as ctx:
        ctx.prec = digits
        g = Decimal(genus)
        s = (g * g - 1).sqrt()
        val = ((g + s) ** (q + 1) + (g - s) ** (q + 1)) / 2
        return int(val.to_integral_value())


@dataclass(frozen=True)
class ModularFixture:
    level: int
    weight: int
    genus: int
    cusps: int
    coefficients: tuple[int, ...]
    generators: dict[str, Mobius]
    parabolic_words: dict[str, Word]

    def evaluate(self, word: Word) -> Mobius:
        out = Mobius.identity()
        for label, e in word:
            out = out @ (self.generators[label] ** e)
        return out

    def newform(self, truncation: int = DEFAULT_TRUNCATION) -> QExpansion:
        return eta11_qexp(truncation)


def load_fixture(level: int = 11) -> ModularFixture:
    if level != 11:
        raise MalformedInputError(f"no fixture ships for level {level} (only 11)")
    data = json.loads(resources.files("hoinv").joinpath("data/gamma0_11.json").read_text())
    return validate_fixture(data)


def validate_fixture(data: dict) -> ModularFixture:
    """Check generator matrices and stored coefficients; return the fixture."""
    level = data.get("level")
    if not isinstance(level, int) or level < 1:
        raise MalformedInputError("fixture level must be a positive integer")
    gens = {}
    for label, rows in data.get("generators", {}).items():
        m = Mobius.from_rows(rows)
        if m.det != 1:
            raise MalformedInputError(f"generator {label!r} has determinant {m.det}, expected 1")
        if m.c % level:
            raise MalformedInputError(f"generator {label!r} has lower-left entry {m.c} not divisible by {level}")
        gens[label] = m
    if not gens:
        raise MalformedInputError("fixture has no generators")
    words = {name: parse_word(w, list(gens)) for name, w in data.get("parabolic_words", {}).items()}
    coeffs = tuple(data["newform"]["coefficients"])
    if not all(isinstance(a, int) for a in coeffs):
        raise MalformedInputError("newform coefficients must be exact integers")
    if level == 11 and eta11_qexp(len(coeffs)).coefficients != coeffs:
        raise MalformedInputError("stored newform coefficients disagree with the eta product")
    fx = ModularFixture(level, data.get("weight", 2), data.get("genus", 1), data.get("cusps", 0), coeffs, gens, words)
    for name, w in words.items():
        if abs(fx.evaluate(w).trace) != 2:
            raise MalformedInputError(f"parabolic word {name!r} = {format_word(w)} is not parabolic")
    return fx


@dataclass
class PeriodReport:
    truncation: int
    periods: dict[str, complex] = field(default_factory=dict)
    base_point_spread: dict[str, float] = field(default_factory=dict)
    additivity_defects: dict[str, float] = field(default_factory=dict)
    parabolic_periods: dict[str, float] = field(default_factory=dict)
    residuals: dict[str, ResidualEntry] = field(default_factory=dict)


def _series_for(points: Sequence[complex], truncation: int) -> QExpansion:
    return eta11_qexp(max(truncation, required_truncation(points)))


def periods_report(fixture: ModularFixture, truncation: int = DEFAULT_TRUNCATION) -> PeriodReport:
    """Periods of the newform on generators, pair products, and parabolic words.

    The truncation is raised where needed so every evaluation meets
    ``TAIL_TOL``; the largest value used is recorded.
    """
    labels = list(fixture.generators)
    elements: dict[str, Mobius] = dict(fixture.generators)
    for s in labels:
        for t in labels:
            elements[f"{s}*{t}"] = fixture.generators[s] @ fixture.generators[t]
    for n in (1, 2, 3):
        elements[f"T^{n}"] = Mobius(1, n, 0, 1)
    for name, w in fixture.parabolic_words.items():
        elements[f"cusp:{name}"] = fixture.evaluate(w)

    used = truncation
    values: dict[str, list[complex]] = {}
    for name, gamma in elements.items():
        pts = base_points(gamma)
        g = _series_for(pts + _images(gamma, pts), truncation)
        used = max(used, g.truncation)
        values[name] = [period_integral(g, gamma, z) for z in pts]

    rep = PeriodReport(used)
    for name in labels:
        vals = values[name]
        rep.periods[name] = vals[0]
        rep.base_point_spread[name] = max(abs(v - vals[0]) for v in vals)
    for s in labels:
        for t in labels:
            rep.additivity_defects[f"{s}*{t}"] = abs(values[f"{s}*{t}"][0] - values[s][0] - values[t][0])
    for name in elements:
        if name.startswith("T^") or name.startswith("cusp:"):
            rep.parabolic_periods[name] = abs(values[name][0])
    return rep


def residual_report(
    fixture: ModularFixture,
    samples: int = 20,
    seed: int = 0,
    truncation: int = DEFAULT_TRUNCATION,
    base_points_z0: Sequence[complex] = (1j, complex(0.5, 1.0)),
) -> PeriodReport:
    """Second-order transformation residuals for F = f (G - G(z0)) with f = g the newform."""
    rep = PeriodReport(truncation)
    for label, gamma in fixture.generators.items():
        pts = sample_points(gamma, samples, seed)
        needed = pts + _images(gamma, pts) + list(base_points_z0)
        needed += [default_base_point(gamma), complex(gamma(default_base_point(gamma)))]
        f = _series_for(needed, truncation)
        rep.truncation = max(rep.truncation, f.truncation)
        for i, z0 in enumerate(base_points_z0):
            rep.residuals[f"{label}@z0[{i}]"] = second_order_residual(f, f, gamma, pts, z0)
        rep.periods[label] = rep.residuals[f"{label}@z0[0]"].period
    return rep
