"""Higher-order invariants of a group acting on Q^d.

For generators s of the group and a finite set P of matrices that must act
trivially, the filtration is built by the recursion

    H_{-1} = 0,
    H_q = {v : (s - 1) v in H_{q-1} for all generators s} ∩ {v : p v = v for p in P},

which for P empty is exactly the space of v killed by the (q+1)-st power of
the augmentation ideal: (s^-1 - 1) = -s^-1 (s - 1), and the ideal is
two-sided, so generators suffice.

P is the conjugation closure of the user's parabolic words by all reduced
generator words of length <= closure_depth. The true parabolic set is
usually infinite, so the computed spaces are supersets of the exact ones and
can only shrink as the depth grows.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from hoinv.errors import DomainError, InvalidActionError, MalformedInputError
from hoinv.kernels import matmul_int, rref_int
from hoinv.linalg import RationalMatrix, Subspace, exact_kernel, kernel_from_rref

Word = tuple[tuple[str, int], ...]

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)(?:\^\{?(-?\d+)\}?)?$")


def parse_word(word, labels: Sequence[str] | None = None) -> Word:
    """Parse a word over generator labels.

    Accepts ``"S U^-1 T^2"``, a list of such tokens, or a list of
    ``[label, exponent]`` pairs. The empty string is the identity.
    """
    if isinstance(word, str):
        tokens = word.replace("*", " ").split()
    elif isinstance(word, (list, tuple)):
        tokens = list(word)
    else:
        raise MalformedInputError(f"cannot parse word {word!r}")
    letters = []
    for tok in tokens:
        if isinstance(tok, (list, tuple)) and len(tok) == 2:
            label, exp = tok
            if not isinstance(label, str) or not isinstance(exp, int) or isinstance(exp, bool):
                raise MalformedInputError(f"bad letter {tok!r} in word {word!r}")
        elif isinstance(tok, str):
            m = _TOKEN.match(tok.strip())
            if m is None:
                raise MalformedInputError(f"bad token {tok!r} in word {word!r}")
            label, exp = m.group(1), int(m.group(2) or 1)
        else:
            raise MalformedInputError(f"bad letter {tok!r} in word {word!r}")
        if labels is not None and label not in labels:
            raise MalformedInputError(f"word {word!r} references unknown generator {label!r}")
        if exp:
            letters.append((label, exp))
    return free_reduce(letters)


def free_reduce(letters) -> Word:
    out: list[tuple[str, int]] = []
    for label, exp in letters:
        if out and out[-1][0] == label:
            e = out[-1][1] + exp
            out.pop()
            if e:
                out.append((label, e))
        elif exp:
            out.append((label, exp))
    return tuple(out)


def invert_word(word: Word) -> Word:
    return tuple((label, -exp) for label, exp in reversed(word))


def format_word(word: Word) -> str:
    return " ".join(label if e == 1 else f"{label}^{e}" for label, e in word)


def reduced_words(labels: Sequence[str], max_length: int):
    """All freely reduced words of length <= max_length, shortest first."""
    letters = [(l, 1) for l in labels] + [(l, -1) for l in labels]
    yield ()
    for n in range(1, max_length + 1):
        for w in product(letters, repeat=n):
            if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(w, w[1:])):
                continue
            yield tuple(w)


@dataclass(frozen=True)
class ActionSpec:
    dimension: int
    generators: tuple[tuple[str, RationalMatrix], ...]
    parabolic_words: tuple[Word, ...] = ()
    closure_depth: int = 2

    def __post_init__(self):
        d = self.dimension
        if not isinstance(d, int) or d < 1:
            raise MalformedInputError(f"dimension must be a positive integer, got {d!r}")
        if self.closure_depth < 0:
            raise MalformedInputError("closure_depth must be >= 0")
        if not self.generators:
            raise MalformedInputError("at least one generator is required")
        labels = [l for l, _ in self.generators]
        if len(set(labels)) != len(labels):
            raise MalformedInputError(f"duplicate generator labels in {labels}")
        for label, m in self.generators:
            if m.shape != (d, d):
                raise MalformedInputError(f"generator {label!r} has shape {m.shape}, expected {(d, d)}")
            if m.determinant() == 0:
                raise InvalidActionError(f"generator {label!r} is not invertible")
        for w in self.parabolic_words:
            for label, _ in w:
                if label not in labels:
                    raise MalformedInputError(f"parabolic word references unknown generator {label!r}")

    @classmethod
    def build(cls, generators, parabolic_words=(), closure_depth: int = 2) -> "ActionSpec":
        """Convenience constructor from ``{label: rows}`` and word strings."""
        items = generators.items() if isinstance(generators, dict) else generators
        gens = tuple((label, m if isinstance(m, RationalMatrix) else RationalMatrix.from_rows(m)) for label, m in items)
        if not gens:
            raise MalformedInputError("at least one generator is required")
        labels = [l for l, _ in gens]
        words = tuple(parse_word(w, labels) for w in parabolic_words)
        return cls(gens[0][1].nrows, gens, words, closure_depth)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.generators)

    @cached_property
    def _matrices(self) -> dict[str, RationalMatrix]:
        return dict(self.generators)

    @cached_property
    def _inverses(self) -> dict[str, RationalMatrix]:
        return {l: m.inverse() for l, m in self.generators}

    def matrix(self, label: str) -> RationalMatrix:
        return self._matrices[label]

    def evaluate(self, word: Word) -> RationalMatrix:
        """Matrix of a word; ``a b`` evaluates to ``A @ B`` (b acts first)."""
        out = RationalMatrix.identity(self.dimension)
        for label, exp in word:
            if label not in self._matrices:
                raise MalformedInputError(f"word references unknown generator {label!r}")
            base = self._matrices[label] if exp > 0 else self._inverses[label]
            for _ in range(abs(exp)):
                out = out @ base
        return out

    def parabolic_closure(self) -> list[RationalMatrix]:
        """Conjugates c p c^-1 of every parabolic word by reduced words of length <= depth."""
        if not self.parabolic_words:
            return []
        seen = set()
        out = []
        conjugators = [self.evaluate(w) for w in reduced_words(sorted(self.labels), self.closure_depth)]
        for pw in self.parabolic_words:
            p = self.evaluate(pw)
            for c in conjugators:
                m = c @ p @ c.inverse()
                if m.rows not in seen:
                    seen.add(m.rows)
                    out.append(m)
        return out


@dataclass(frozen=True)
class Filtration:
    subspaces: tuple[Subspace, ...]
    stabilized_at: int | None = None
    closure_depth: int = 0
    closure_size: int = 0

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(h.rank for h in self.subspaces)

    @property
    def max_order(self) -> int:
        return len(self.subspaces) - 1

    def __getitem__(self, q: int) -> Subspace:
        if q < 0:
            return Subspace.zero(self.subspaces[0].dim)
        return self.subspaces[q]


def _shifted(m: RationalMatrix) -> list[list[int]]:
    """Integer multiple of m - 1 (same kernel, same row space)."""
    return (m - RationalMatrix.identity(m.nrows)).scaled_integer_rows()


def invariants_filtration(action: ActionSpec, max_order: int | None = None) -> Filtration:
    """H_0 ⊆ H_1 ⊆ ... ⊆ H_Q for the action.

    ``max_order`` defaults to the dimension. Once two consecutive terms agree
    the recursion is stationary, so later terms are copied, not recomputed.
    """
    d = action.dimension
    q_max = d if max_order is None else max_order
    if q_max < 0:
        raise DomainError("max_order must be >= 0")
    shifted = [_shifted(action.matrix(l)) for l in sorted(action.labels)]
    closure = action.parabolic_closure()
    fixed_rows = [r for p in closure for r in _shifted(p) if any(r)]
    # rows whose common kernel is H_{q-1}; H_{-1} = 0
    annihilator = [[int(i == j) for j in range(d)] for i in range(d)]
    subspaces: list[Subspace] = []
    stabilized_at = None
    for q in range(q_max + 1):
        if stabilized_at is not None:
            subspaces.append(subspaces[-1])
            continue
        stacked = []
        if annihilator:
            for n in shifted:
                stacked.extend(r for r in matmul_int(annihilator, n, d) if any(r))
        stacked.extend(fixed_rows)
        reduced, pivots = rref_int(stacked, d) if stacked else ([], [])
        h = kernel_from_rref(reduced, pivots, d)
        if subspaces and h == subspaces[-1]:
            stabilized_at = q - 1
        subspaces.append(h)
        annihilator = reduced
    return Filtration(tuple(subspaces), stabilized_at, action.closure_depth, len(closure))


def graded_dimensions(f: Filtration) -> list[int]:
    dims = f.dims
    return [d - (dims[q - 1] if q else 0) for q, d in enumerate(dims)]


def _graded_representatives(upper: Subspace, lower: Subspace) -> Subspace:
    """Canonical lifts of a basis of upper/lower: vectors vanishing on lower's pivots."""
    return Subspace.span([lower.reduce(r) for r in upper.rows if any(lower.reduce(r))], upper.dim)


def _coset_coordinates(v, reps: Subspace, lower: Subspace) -> list[Fraction]:
    y = lower.reduce(v)
    coords = [y[p] for p in reps.pivots]
    # y must be a combination of the representatives
    resid = list(y)
    for c, row in zip(coords, reps.rows):
        if c:
            resid = [a - c * b for a, b in zip(resid, row)]
    if any(resid):
        raise ArithmeticError("vector does not lie in the expected filtration step")
    return coords


@dataclass(frozen=True)
class GradedMapReport:
    order: int
    source_dimension: int
    target_dimension: int
    matrices: dict[str, RationalMatrix] = field(default_factory=dict)
    joint_kernel_dimension: int = 0
    additivity_defect: Fraction = Fraction(0)

    @property
    def injective(self) -> bool:
        return self.joint_kernel_dimension == 0


def order_lowering_map(action: ActionSpec, f: Filtration, q: int) -> GradedMapReport:
    """Matrices of v + H_{q-1} -> (s-1)v + H_{q-2} on canonical coset coordinates.

    Also measures the additivity defect: the largest coordinate of
    (st-1)v - (s-1)v - (t-1)v modulo H_{q-2} over generator pairs and basis
    vectors v of H_q. It is zero because the difference is (s-1)(t-1)v.
    """
    if q < 1:
        raise DomainError("order-lowering map needs q >= 1 (there is no graded piece below order 0)")
    if q > f.max_order:
        raise DomainError(f"order {q} exceeds the filtration's maximum order {f.max_order}")
    hq, hq1, hq2 = f[q], f[q - 1], f[q - 2]
    src = _graded_representatives(hq, hq1)
    tgt = _graded_representatives(hq1, hq2)
    ident = RationalMatrix.identity(action.dimension)
    matrices = {}
    stacked = []
    labels = sorted(action.labels)
    shifted = {l: action.matrix(l) - ident for l in labels}
    for label in labels:
        cols = [_coset_coordinates(shifted[label].apply(w), tgt, hq2) for w in src.rows]
        rows = tuple(tuple(c[i] for c in cols) for i in range(tgt.rank))
        m = RationalMatrix(rows, src.rank)
        matrices[label] = m
        stacked.extend(rows)
    if src.rank == 0:
        joint = 0
    elif not stacked:
        joint = src.rank
    else:
        joint = exact_kernel(RationalMatrix(tuple(stacked), src.rank)).rank
    defect = Fraction(0)
    for s, t in product(labels, repeat=2):
        st = action.matrix(s) @ action.matrix(t) - ident
        for v in hq.rows:
            diff = [a - b - c for a, b, c in zip(st.apply(v), shifted[s].apply(v), shifted[t].apply(v))]
            red = hq2.reduce(diff)
            defect = max([defect] + [abs(x) for x in red])
    return GradedMapReport(q, src.rank, tgt.rank, matrices, joint, defect)


@dataclass(frozen=True)
class RestrictionReport:
    group_dims: tuple[int, ...]
    subgroup_dims: tuple[int, ...]
    contained: tuple[bool, ...]
    graded_injective: tuple[bool, ...]

    @property
    def passed(self) -> bool:
        return all(self.contained) and all(self.graded_injective)


def subgroup_action(action: ActionSpec, subgroup_words: Sequence) -> ActionSpec:
    if not subgroup_words:
        raise MalformedInputError("subgroup needs at least one generating word")
    words = [w if isinstance(w, tuple) and all(isinstance(x, tuple) for x in w) else parse_word(w, action.labels)
             for w in subgroup_words]
    width = len(str(len(words) - 1))
    gens = tuple((f"w{i:0{width}d}", action.evaluate(w)) for i, w in enumerate(words))
    return ActionSpec(action.dimension, gens, (), 0)


def restriction_check(action: ActionSpec, subgroup_words: Sequence, max_order: int) -> RestrictionReport:
    """Check H_q(G) ∩ H_{q-1}(S) = H_{q-1}(G) for q <= max_order.

    This is injectivity of the restriction map on graded pieces for the
    subgroup S generated by ``subgroup_words``. S is given no parabolic
    constraints; vectors of H_q(G) already satisfy G's, so the check is
    unaffected.
    """
    sub = subgroup_action(action, subgroup_words)
    fg = invariants_filtration(action, max_order)
    fs = invariants_filtration(sub, max_order)
    contained = tuple(fs[q].contains(fg[q]) for q in range(max_order + 1))
    injective = tuple(fg[q].intersect(fs[q - 1]) == fg[q - 1] for q in range(max_order + 1))
    return RestrictionReport(fg.dims, fs.dims, contained, injective)


@dataclass(frozen=True)
class PresentationSpec:
    generator_labels: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    parabolic_words: tuple[Word, ...] = ()

    def __post_init__(self):
        if len(set(self.generator_labels)) != len(self.generator_labels):
            raise MalformedInputError("duplicate generator labels")
        for w in self.relators + self.parabolic_words:
            for label, _ in w:
                if label not in self.generator_labels:
                    raise MalformedInputError(f"word references unknown generator {label!r}")

    @classmethod
    def build(cls, labels, relators=(), parabolic_words=()) -> "PresentationSpec":
        labels = tuple(labels)
        return cls(labels, tuple(parse_word(w, labels) for w in relators),
                   tuple(parse_word(w, labels) for w in parabolic_words))


def exponent_sums(word: Word, labels: Sequence[str]) -> list[int]:
    index = {l: i for i, l in enumerate(labels)}
    out = [0] * len(labels)
    for label, e in word:
        out[index[label]] += e
    return out


def hom_space(p: PresentationSpec, use_parabolic: bool = True) -> list[tuple[Fraction, ...]]:
    """Basis of homomorphisms to C killing relators (and parabolic words).

    Each basis vector lists the values on the generators in declared order.
    A homomorphism to an abelian group only sees exponent sums, and the
    system is rational, so a Q-basis also spans the complex solutions.
    """
    words = p.relators + (p.parabolic_words if use_parabolic else ())
    n = len(p.generator_labels)
    if n == 0:
        return []
    rows = [exponent_sums(w, p.generator_labels) for w in words]
    rows = [r for r in rows if any(r)]
    if not rows:
        return list(Subspace.full(n).rows)
    return list(exact_kernel(RationalMatrix.from_rows(rows, n)).rows)


def free_graded_rank(rank: int, q: int) -> int:
    """dim J_q / J_{q+1} for a free group of the given rank with no parabolics.

    The graded pieces of powers of the augmentation ideal of a free group
    are free of rank ``rank**q``. No value is computed for presented groups.
    """
    return rank**q


@dataclass(frozen=True)
class BoundReport:
    hom_dimension: int
    invariant_dimension: int
    graded: tuple[int, ...]
    bounds: tuple[int, ...]
    relators_act_trivially: bool

    @property
    def holds(self) -> tuple[bool, ...]:
        return tuple(g <= b for g, b in zip(self.graded, self.bounds))

    @property
    def passed(self) -> bool:
        return all(self.holds)


def dimension_bound_check(action: ActionSpec, p: PresentationSpec, max_order: int) -> BoundReport:
    """dim Gr_q <= h**q * dim H_0 with h = dim Hom_P(G, C), for q <= max_order."""
    if set(p.generator_labels) != set(action.labels):
        raise MalformedInputError(
            f"presentation generators {sorted(p.generator_labels)} do not match action generators {sorted(action.labels)}"
        )
    h = len(hom_space(p))
    f = invariants_filtration(action, max_order)
    graded = tuple(graded_dimensions(f))
    h0 = f.dims[0]
    ident = RationalMatrix.identity(action.dimension)
    trivial = all(action.evaluate(r) == ident for r in p.relators)
    return BoundReport(h, h0, graded, tuple(h**q * h0 for q in range(max_order + 1)), trivial)
