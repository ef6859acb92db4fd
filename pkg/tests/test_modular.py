import copy
import json

import numpy as np
import pytest

from conftest import DATA
from hoinv.errors import DomainError, MalformedInputError, PrecisionError, SingularityError
from hoinv.modular import (
    Mobius, QExpansion, base_points, closed_form_dimension, eta11_qexp, graded_dimension, integral_qexp,
    load_fixture, period_integral, residual_report, second_order_residual, slash_eval, suggested_truncation,
    tail_bound, validate_fixture,
)


def naive_eta11(m):
    """Coefficients a_1..a_m of q prod (1-q^n)^2 (1-q^{11n})^2 by plain polynomial multiplication."""
    poly = [0] * m
    poly[0] = 1  # coefficient of q^1 stored at index 0
    for n in range(1, m):
        for step, power in ((n, 2), (11 * n, 2)):
            if step >= m:
                continue
            for _ in range(power):
                for i in range(m - 1, step - 1, -1):
                    poly[i] -= poly[i - step]
    return poly


@pytest.fixture(scope="module")
def fixture():
    return load_fixture(11)


def test_eta_first_coefficients():
    assert eta11_qexp(10).coefficients == (1, -2, -1, 2, 1, 2, -2, 0, -2, -2)


def test_eta_matches_naive_product():
    assert list(eta11_qexp(300).coefficients) == naive_eta11(300)


def test_eta_hecke_multiplicativity():
    a = eta11_qexp(200).coefficients
    for m, n in ((2, 3), (3, 7), (4, 9), (5, 13)):
        assert a[m * n - 1] == a[m - 1] * a[n - 1]
    # a_{p^2} = a_p^2 - p for primes p not dividing 11
    for p in (2, 3, 5, 7, 13):
        assert a[p * p - 1] == a[p - 1] ** 2 - p


def test_integral_derivative_is_the_form():
    f = eta11_qexp(200)
    big = integral_qexp(f)
    z, h = 0.1 + 1j, 1e-5
    deriv = (big(z + h) - big(z - h)) / (2 * h)
    assert abs(deriv - f(z)) < 1e-8


def test_integral_of_single_power():
    g = QExpansion(2, 1, (0, 0, 1))
    assert integral_qexp(g).coefficients[2] == pytest.approx(1 / (2j * np.pi * 3))


def test_integral_is_linear():
    f, g = QExpansion(2, 1, (1, 2, 3)), QExpansion(2, 1, (0, -1, 5))
    s = QExpansion(2, 1, tuple(a + 3 * b for a, b in zip(f.coefficients, g.coefficients)))
    lhs = integral_qexp(s).coefficients
    rhs = [a + 3 * b for a, b in zip(integral_qexp(f).coefficients, integral_qexp(g).coefficients)]
    assert np.allclose(lhs, rhs, atol=1e-15)


def test_integral_rejects_constant_term():
    with pytest.raises(DomainError):
        integral_qexp(QExpansion(2, 1, (1,), constant_term=1))


def test_tail_bound_is_an_upper_bound():
    y, m = 0.3, 40
    r = np.exp(-2 * np.pi * y)
    true_tail = sum(n * n * r**n for n in range(m + 1, 5000))
    assert true_tail <= tail_bound(y, m)
    m2 = suggested_truncation(y)
    assert tail_bound(y, m2) < 1e-12 <= tail_bound(y, m2 - 1)


def test_mobius_group_law():
    a, b = Mobius(7, -2, 11, -3), Mobius(8, -3, 11, -4)
    z = 0.2 + 0.9j
    assert abs((a @ b)(z) - a(b(z))) < 1e-12
    assert a @ a.inverse() == Mobius.identity()
    assert (a ** -2) @ (a ** 2) == Mobius.identity()
    with pytest.raises(MalformedInputError):
        Mobius(1, 0, 0, 0)


def test_period_of_identity_is_zero():
    assert period_integral(eta11_qexp(50), Mobius.identity()) == 0


def test_period_of_translation_vanishes():
    assert abs(period_integral(eta11_qexp(50), Mobius(1, 1, 0, 1))) < 1e-10


def test_period_base_point_independence(fixture):
    f = eta11_qexp(3000)
    for gamma in fixture.generators.values():
        vals = [period_integral(f, gamma, z) for z in base_points(gamma) + [1j, 0.5 + 1j]]
        assert max(abs(v - vals[0]) for v in vals) < 1e-9


def test_period_precision_error_suggests_a_working_truncation(fixture):
    gamma = fixture.generators["A"]
    with pytest.raises(PrecisionError) as info:
        period_integral(eta11_qexp(100), gamma, 1j)
    m = info.value.suggested_truncation
    assert m > 100
    period_integral(eta11_qexp(m), gamma, 1j)


def test_known_period_value(fixture):
    # one generator of the period lattice of X_0(11)
    val = 2j * np.pi * period_integral(eta11_qexp(400), fixture.generators["A"], base_points(fixture.generators["A"])[0])
    assert abs(val - (-0.6346 - 1.4588j)) < 1e-3


def test_slash_identity_and_translation():
    f = eta11_qexp(100)
    z = 0.3 + 0.7j
    assert abs(slash_eval(f, 2, Mobius.identity(), z) - f(z)) < 1e-15
    assert abs(slash_eval(f, 2, Mobius(1, 1, 0, 1), z) - f(z)) < 1e-12


def test_slash_invariance_for_level_11(fixture):
    z = 0.05 + 0.8j
    for gamma in fixture.generators.values():
        w = gamma(z)
        f = eta11_qexp(suggested_truncation(min(z.imag, w.imag)))
        assert abs(slash_eval(f, 2, gamma, z) - f(z)) < 1e-7


def test_slash_singular_point():
    with pytest.raises((SingularityError, DomainError)):
        slash_eval(eta11_qexp(10), 2, Mobius(0, -1, 1, 0), 0j)


def test_residual_identity_exactly_zero():
    f = eta11_qexp(100)
    e = second_order_residual(f, f, Mobius.identity(), [0.1 + 1j, -0.2 + 0.8j])
    assert e.residual == 0 and e.slash_defect == 0 and e.period == 0


def test_residual_translation():
    f = eta11_qexp(200)
    e = second_order_residual(f, f, Mobius(1, 1, 0, 1), [0.1 + 1j, -0.2 + 0.8j, 0.4 + 0.5j])
    assert e.residual < 1e-8


def test_residual_report_generators(fixture):
    rep = residual_report(fixture, samples=20, seed=3)
    for name, e in rep.residuals.items():
        assert e.residual < 1e-6, name
    assert max(e.slash_defect for e in rep.residuals.values()) > 1e-3


@pytest.mark.parametrize("g, q, d", [(2, 1, 7), (1, 0, 1), (1, 5, 1), (2, 2, 26), (3, 0, 3)])
def test_graded_dimension_values(g, q, d):
    assert graded_dimension(g, q) == d
    assert closed_form_dimension(g, q) == d


def test_graded_dimension_domain():
    with pytest.raises(DomainError):
        graded_dimension(0, 1)
    with pytest.raises(DomainError):
        graded_dimension(2, -1)


def test_fixture_validation_errors():
    raw = json.loads((DATA / "gamma0_11.json").read_text())
    validate_fixture(copy.deepcopy(raw))
    bad = copy.deepcopy(raw)
    bad["generators"]["A"] = [[7, -2], [10, -3]]
    with pytest.raises(MalformedInputError):
        validate_fixture(bad)
    bad = copy.deepcopy(raw)
    bad["newform"]["coefficients"][3] += 1
    with pytest.raises(MalformedInputError):
        validate_fixture(bad)
    bad = copy.deepcopy(raw)
    bad["parabolic_words"]["zero"] = "A"
    with pytest.raises(MalformedInputError):
        validate_fixture(bad)
    with pytest.raises(MalformedInputError):
        load_fixture(37)
