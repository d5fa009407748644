"""Property tests for the invariants that quantify over inputs."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from heisenleib import linalg
from heisenleib.algebra import (
    Subspace,
    bracket_span,
    change_basis,
    derived_series,
    fingerprint,
    left_annihilator,
    lower_central_series,
    subspace_closure_checks,
)
from heisenleib.catalog import build_entry, catalog_entries, entry_parameter_grid
from heisenleib.certify import (
    commuting_sp2_proportionality,
    matrix_nilpotent,
    nilpotency_power_oracle,
    sp2_nilpotency_locus,
)
from heisenleib.poly import PolyQ
from heisenleib.scalars import Scalar

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def scalars(d):
    return st.builds(lambda a, b: Scalar(a, b, d if b != 0 else None),
                     fractions, fractions)


@pytest.mark.parametrize("d", [-1, 2, 5])
class TestFieldAxioms:
    @given(data=st.data())
    @settings(max_examples=60)
    def test_mul_associative(self, d, data):
        x = data.draw(scalars(d))
        y = data.draw(scalars(d))
        z = data.draw(scalars(d))
        assert (x * y) * z == x * (y * z)

    @given(data=st.data())
    @settings(max_examples=60)
    def test_distributive(self, d, data):
        x = data.draw(scalars(d))
        y = data.draw(scalars(d))
        z = data.draw(scalars(d))
        assert x * (y + z) == x * y + x * z

    @given(data=st.data())
    @settings(max_examples=60)
    def test_inverse(self, d, data):
        x = data.draw(scalars(d))
        if not x.is_zero():
            assert x * x.inv() == Scalar.one()


NAMES = ("u", "v", "w")
polys = st.builds(
    lambda terms: PolyQ(NAMES, terms),
    st.dictionaries(
        st.tuples(*(st.integers(0, 3) for _ in NAMES)),
        st.fractions(min_value=-9, max_value=9, max_denominator=5),
        max_size=5,
    ),
)


class TestPolyProperties:
    @given(p=polys, q=polys)
    @settings(max_examples=80)
    def test_addition_commutes_structurally(self, p, q):
        assert p + q == q + p

    @given(p=polys, q=polys)
    @settings(max_examples=60)
    def test_degree_of_product(self, p, q):
        if not p.is_zero() and not q.is_zero():
            assert (p * q).degree() == p.degree() + q.degree()

    @given(p=polys, q=polys, data=st.data())
    @settings(max_examples=60)
    def test_substitution_then_evaluation(self, p, q, data):
        point = {
            name: Scalar(data.draw(fractions)) for name in NAMES
        }
        lhs = p.substitute({"u": q}).evaluate(point)
        rhs = p.evaluate({**point, "u": q.evaluate(point)})
        assert lhs == rhs


def random_scalar(rng, span=3):
    return Scalar.rational(rng.randint(-span, span), rng.randint(1, span))


def random_vector(rng, dim):
    return [random_scalar(rng) for _ in range(dim)]


def catalog_sample():
    seen = []
    for field in ("C", "R"):
        for entry in catalog_entries(field):
            for point in entry_parameter_grid(entry):
                key = (entry.id, tuple(sorted(point.items())))
                if key not in seen:
                    seen.append(key)
                    yield build_entry(entry.id, point)


class TestAnnihilatorMembership:
    def test_squares_and_symmetrized_products(self):
        rng = random.Random(2024)
        tensors = list(catalog_sample())
        for t in tensors:
            ann = left_annihilator(t)
            for _ in range(40):
                x = random_vector(rng, t.dim)
                y = random_vector(rng, t.dim)
                assert ann.contains(t.bracket(x, x))
                sym = linalg.vec_add(t.bracket(x, y), t.bracket(y, x))
                assert ann.contains(sym)

    def test_annihilator_is_two_sided_ideal(self):
        for t in catalog_sample():
            checks = subspace_closure_checks(t, left_annihilator(t))
            assert checks.is_two_sided_ideal


class TestSeriesContainment:
    def test_derived_inside_lower_central(self):
        for t in catalog_sample():
            derived = derived_series(t)
            lower = lower_central_series(t)
            for i in range(min(len(derived), len(lower))):
                assert derived[i].is_contained_in(lower[i])

    def test_nilpotent_implies_solvable(self):
        for t in catalog_sample():
            fp = fingerprint(t)
            assert (not fp.is_nilpotent) or fp.is_solvable

    def test_series_dims_non_increasing(self):
        for t in catalog_sample():
            fp = fingerprint(t)
            for dims in (fp.derived_dims, fp.lower_central_dims):
                assert all(a >= b for a, b in zip(dims, dims[1:]))


def random_invertible(rng, dim):
    while True:
        m = [[random_scalar(rng, 2) for _ in range(dim)] for _ in range(dim)]
        if not linalg.det(m).is_zero():
            return m


class TestChangeBasisProperties:
    def test_fingerprint_invariance(self):
        rng = random.Random(11)
        t = build_entry("H1a0C-r1")
        fp = fingerprint(t)
        for _ in range(25):
            p = random_invertible(rng, t.dim)
            assert fingerprint(change_basis(t, p)) == fp

    def test_functoriality(self):
        rng = random.Random(12)
        t = build_entry("H2a1R")
        for _ in range(10):
            p = random_invertible(rng, t.dim)
            q = random_invertible(rng, t.dim)
            assert change_basis(change_basis(t, p), q) == change_basis(
                t, linalg.mat_mul(q, p)
            )


class TestNilpotencyAgainstOracle:
    def test_random_small_matrices(self):
        rng = random.Random(13)
        for _ in range(400):
            dim = rng.randint(1, 4)
            m = [
                [Scalar.rational(rng.randint(-2, 2)) for _ in range(dim)]
                for _ in range(dim)
            ]
            assert matrix_nilpotent(m) == nilpotency_power_oracle(m)


class TestCommutingPairsProportional:
    def test_rational_grid(self):
        # commuting nonzero sp(2) pairs are proportional: exhaustive small grid
        vals = (-1, 0, 1)
        mats = [
            linalg.smat([[a, c], [d, -a]])
            for a, c, d in itertools.product(vals, repeat=3)
            if (a, c, d) != (0, 0, 0)
        ]
        commuting = 0
        for x1, x2 in itertools.product(mats, repeat=2):
            result = commuting_sp2_proportionality(x1, x2)
            if result.commute:
                commuting += 1
                assert result.proportional
        assert commuting > 0

    def test_locus_witness_always_verifies(self):
        rng = random.Random(14)
        for _ in range(200):
            x1 = linalg.smat([[rng.randint(-3, 3) for _ in range(2)]])
            a, c = x1[0][0], x1[0][1]
            d = Scalar.rational(rng.randint(-3, 3))
            x1 = [[a, c], [d, -a]]
            a2, c2, d2 = (Scalar.rational(rng.randint(-3, 3)) for _ in range(3))
            x2 = [[a2, c2], [d2, -a2]]
            locus = sp2_nilpotency_locus(x1, x2)
            c1, c2_ = locus.witness
            combo = linalg.mat_add(
                linalg.mat_scale(x1, c1), linalg.mat_scale(x2, c2_)
            )
            assert matrix_nilpotent(combo)


class TestBuiltExtensionInvariants:
    def test_every_catalog_tensor_is_leibniz(self):
        for t in catalog_sample():
            assert t.is_leibniz()

    def test_derived_lands_in_nilradical(self):
        from heisenleib.heisenberg import heisenberg_subspace

        for field in ("C", "R"):
            for entry in catalog_entries(field):
                t = build_entry(entry.id, entry.default_params())
                full = Subspace.full(t.dim)
                nr = heisenberg_subspace(entry.n, entry.f)
                assert bracket_span(t, full, full).is_contained_in(nr)
