import random
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    jordan_action, random_action, random_invertible, schreier_words, swap_action, trivial_action,
)
from hoinv.errors import DomainError, InvalidActionError, MalformedInputError
from hoinv.invariants import (
    ActionSpec, PresentationSpec, dimension_bound_check, free_graded_rank, graded_dimensions, hom_space,
    invariants_filtration, order_lowering_map, parse_word, reduced_words, restriction_check,
)
from hoinv.linalg import RationalMatrix, Subspace


def oracle_dims(action, max_order):
    """dim ker of all products (g1-1)...(g_{q+1}-1) over generators and their inverses, via sympy."""
    d = action.dimension
    eye = sympy.eye(d)
    mats = []
    for l in action.labels:
        m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in action.matrix(l).rows])
        mats += [m - eye, m.inv() - eye]
    dims = []
    for q in range(max_order + 1):
        blocks = []
        for combo in product(mats, repeat=q + 1):
            p = eye
            for x in combo:
                p = p * x
            blocks.append(p)
        dims.append(d - sympy.Matrix.vstack(*blocks).rank())
    return tuple(dims)


# --- invariants_filtration -------------------------------------------------

def test_jordan3_dims():
    f = invariants_filtration(jordan_action(3), 3)
    assert f.dims == (1, 2, 3, 3)
    assert f.stabilized_at == 2


def test_trivial_action_dims():
    f = invariants_filtration(trivial_action(4), 3)
    assert f.dims == (4, 4, 4, 4)
    assert graded_dimensions(f) == [4, 0, 0, 0]


def test_swap_dims():
    f = invariants_filtration(swap_action(), 5)
    assert f.dims == (1,) * 6
    assert f[0] == Subspace.span([(1, 1)], 2)


def test_default_max_order_is_dimension():
    assert invariants_filtration(jordan_action(4)).dims == (1, 2, 3, 4, 4)


def test_graded_dimensions_examples():
    assert graded_dimensions(invariants_filtration(jordan_action(3), 3)) == [1, 1, 1, 0]
    assert graded_dimensions(invariants_filtration(trivial_action(3), 2)) == [3, 0, 0]
    assert graded_dimensions(invariants_filtration(swap_action(), 2)) == [1, 0, 0]


def test_singular_generator_rejected():
    with pytest.raises(InvalidActionError, match="'s'"):
        ActionSpec.build({"t": [[1, 0], [0, 1]], "s": [[1, 1], [1, 1]]})


def test_unknown_label_in_word_rejected():
    with pytest.raises(MalformedInputError):
        ActionSpec.build({"t": [[1, 1], [0, 1]]}, parabolic_words=["u"])


def test_word_parsing():
    assert parse_word("S U^-1 U T^2") == (("S", 1), ("T", 2))
    assert parse_word([["a", 2], "b^{-1}"]) == (("a", 2), ("b", -1))
    assert parse_word("") == ()
    with pytest.raises(MalformedInputError):
        parse_word("a^x")


def test_words_evaluate_right_to_left():
    a = ActionSpec.build({"x": [[1, 1], [0, 1]], "y": [[1, 0], [1, 1]]})
    assert a.evaluate(parse_word("x y")) == a.matrix("x") @ a.matrix("y")
    assert a.evaluate(parse_word("x^-2")) == (a.matrix("x") @ a.matrix("x")).inverse()


def test_reduced_word_count():
    # 1 + 2r + 2r(2r-1) freely reduced words of length <= 2
    assert len(list(reduced_words(["a", "b"], 2))) == 1 + 4 + 12


def test_parabolic_constraint_kills_invariants():
    # Heisenberg-type action: parabolic word pins vectors to be fixed by x
    a = ActionSpec.build({"x": [[1, 1, 0], [0, 1, 0], [0, 0, 1]], "y": [[1, 0, 0], [0, 1, 1], [0, 0, 1]]})
    free = invariants_filtration(a, 3)
    pinned = invariants_filtration(ActionSpec.build(dict(a.generators), ["x"]), 3)
    assert all(free[q].contains(pinned[q]) for q in range(4))
    assert pinned.dims[-1] < free.dims[-1]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_filtration_matches_product_oracle(seed):
    a = random_action(random.Random(seed), max_dim=4, max_gens=2)
    assert invariants_filtration(a, 2).dims == oracle_dims(a, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_nesting_and_stabilization(seed):
    a = random_action(random.Random(seed))
    f = invariants_filtration(a, 8)
    for q in range(1, 9):
        assert f[q].contains(f[q - 1])
    for q in range(8):
        if f.dims[q] == f.dims[q + 1]:
            assert all(f[j] == f[q] for j in range(q, 9))
            break


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_dimensions_invariant_under_change_of_basis(seed):
    rng = random.Random(seed)
    a = random_action(rng)
    c = random_invertible(rng, a.dimension)
    ci = c.inverse()
    b = ActionSpec.build({l: c @ m @ ci for l, m in a.generators})
    assert invariants_filtration(a, 6).dims == invariants_filtration(b, 6).dims


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_closure_depth_only_shrinks(seed):
    rng = random.Random(seed)
    a = random_action(rng, max_dim=4, max_gens=2)
    word = rng.choice(a.labels)
    prev = None
    for depth in range(3):
        f = invariants_filtration(ActionSpec(a.dimension, a.generators, (parse_word(word),), depth), 4)
        if prev is not None:
            assert all(prev[q].contains(f[q]) for q in range(5))
        prev = f


# --- order_lowering_map ----------------------------------------------------

def test_psi_jordan2():
    a = jordan_action(2)
    g = order_lowering_map(a, invariants_filtration(a, 2), 1)
    assert g.matrices["t"] == RationalMatrix.from_rows([[1]])
    assert g.joint_kernel_dimension == 0


def test_psi_trivial_action():
    a = trivial_action(3)
    g = order_lowering_map(a, invariants_filtration(a, 2), 1)
    assert g.source_dimension == 0
    assert all(m.shape == (3, 0) for m in g.matrices.values())
    assert g.joint_kernel_dimension == 0


def test_psi_jordan3_order2():
    a = jordan_action(3)
    g = order_lowering_map(a, invariants_filtration(a, 3), 2)
    assert g.matrices["t"] == RationalMatrix.from_rows([[1]])


def test_psi_order_zero_rejected():
    a = jordan_action(2)
    with pytest.raises(DomainError):
        order_lowering_map(a, invariants_filtration(a, 2), 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_psi_injective_and_additive(seed):
    a = random_action(random.Random(seed))
    f = invariants_filtration(a, 5)
    for q in range(1, 6):
        g = order_lowering_map(a, f, q)
        assert g.joint_kernel_dimension == 0
        assert g.additivity_defect == 0


# --- restriction_check -----------------------------------------------------

def test_restriction_jordan2_square():
    r = restriction_check(jordan_action(2), ["t^2"], 3)
    assert r.group_dims == r.subgroup_dims == (1, 2, 2, 2)
    assert r.passed


def test_restriction_trivial():
    assert restriction_check(trivial_action(2), ["a b", "b^3"], 3).passed


def test_restriction_swap():
    r = restriction_check(swap_action(), ["t^2"], 3)
    assert r.subgroup_dims == (2, 2, 2, 2)
    assert r.group_dims == (1, 1, 1, 1)
    assert r.passed


def test_restriction_needs_words():
    with pytest.raises(MalformedInputError):
        restriction_check(swap_action(), [], 2)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_restriction_random_finite_index(seed):
    rng = random.Random(seed)
    a = random_action(rng, max_dim=5, max_gens=2)
    words = schreier_words(list(a.labels), rng.choice([2, 3]), rng)
    assert restriction_check(a, words, 4).passed


# --- hom_space and the dimension bound --------------------------------------

@pytest.mark.parametrize("r", range(1, 6))
def test_free_group_homs(r):
    labels = [f"x{i}" for i in range(r)]
    assert len(hom_space(PresentationSpec.build(labels))) == r
    assert free_graded_rank(r, 3) == r**3


def test_psl2z_has_no_homs():
    assert hom_space(PresentationSpec.build(["S", "U"], ["S^2", "U^3"])) == []


def test_gamma0_11_homs():
    p = PresentationSpec.build(["T", "A", "B"], [], ["T", "A^-1 B A B^-1 T"])
    assert len(hom_space(p, use_parabolic=False)) == 3
    basis = hom_space(p)
    assert len(basis) == 2
    for v in basis:
        assert v[0] == 0


def test_bound_jordan2():
    b = dimension_bound_check(jordan_action(2), PresentationSpec.build(["t"]), 2)
    assert (b.hom_dimension, b.invariant_dimension) == (1, 1)
    assert b.graded[1] == 1 and b.bounds[1] == 1
    assert b.passed and b.relators_act_trivially


def test_bound_trivial_action():
    b = dimension_bound_check(trivial_action(2), PresentationSpec.build(["a", "b"], ["a b a^-1 b^-1"]), 3)
    assert b.passed


def test_bound_psl2z_trivial_action():
    a = ActionSpec.build({"S": [[1]], "U": [[1]]})
    b = dimension_bound_check(a, PresentationSpec.build(["S", "U"], ["S^2", "U^3"]), 3)
    assert b.hom_dimension == 0
    assert b.bounds == (1, 0, 0, 0)
    assert b.passed


def test_bound_label_mismatch():
    with pytest.raises(MalformedInputError):
        dimension_bound_check(jordan_action(2), PresentationSpec.build(["s"]), 2)
