import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from aspectlab.distributions import BivariateDistribution, ExperimentQuartet, QuadrivariateDistribution
from aspectlab.ensembles import pr_box_quartet
from aspectlab.inequalities import (
    CorrelationQuad,
    InconsistentQuartetError,
    bchs_all_variants,
    bchs_value,
    bchs_variants,
    bell_lhs,
    finite_ensemble_chsh,
    quartet_bell_lhs,
)
from aspectlab.povm import standard_aspect_quartet

unit = st.floats(-1, 1)
weights16 = arrays(np.float64, 16, elements=st.floats(0, 1)).filter(lambda a: a.sum() > 1e-3)


def uniform_quartet():
    return QuadrivariateDistribution.uniform().quartet()


def test_bell_lhs_arithmetic():
    assert bell_lhs(CorrelationQuad(1, 1, 1, 1)) == -2
    h = math.sqrt(0.5)
    assert bell_lhs(CorrelationQuad(h, -h, -h, -h)) == pytest.approx(2 * math.sqrt(2), abs=1e-15)


def test_quantum_bell_lhs_matches_trace_oracle():
    got = quartet_bell_lhs(standard_aspect_quartet())
    assert got == pytest.approx(oracles.quantum_chsh(oracles.phi_plus()), abs=1e-12)
    assert got == pytest.approx(2.8284271247461903, abs=1e-12)


def test_correlation_quad_range():
    with pytest.raises(ValueError):
        CorrelationQuad(1.5, 0, 0, 0)


def test_bchs_value_examples():
    assert bchs_value(uniform_quartet(), 0.5, 0.5) == pytest.approx(-0.5)
    all_plus = QuadrivariateDistribution.point_mass(1, 1, 1, 1).quartet()
    assert bchs_value(all_plus, 1.0, 1.0) == 0.0
    q = standard_aspect_quartet()
    v = bchs_value(q, 0.5, 0.5)
    tables = {
        p: oracles.bivariate(oracles.phi_plus(), oracles.CHSH_ANGLES[x], oracles.CHSH_ANGLES[y])
        for p, (x, y) in oracles.PAIR_AXES.items()
    }
    assert v == pytest.approx(oracles.bchs_glossary(tables), abs=1e-14)
    # with these setting orientations the base form leaves [-1, 0] through the
    # lower face; its complement -1 - v exceeds 0 by the same amount
    assert v == pytest.approx(-1 - (math.sqrt(2) - 1) / 2, abs=1e-12)
    assert -1 - v > 0


def test_bchs_value_rejects_bad_singles():
    with pytest.raises(ValueError):
        bchs_value(uniform_quartet(), 1.2, 0.5)


def test_orbit_has_eight_distinct_functionals():
    vs = bchs_variants()
    assert len(vs) == 8
    vecs = [tuple(v.atom_vector().ravel()) for v in vs]
    assert len(set(vecs)) == 8
    # complementary pairs f and -1 - f: atom vectors add to -1 everywhere
    for v in vecs:
        assert tuple(-1 - x for x in v) in set(vecs)


def test_variant_atom_values_are_zero_or_minus_one():
    # on every deterministic assignment a variant is 0 or -1, the two faces
    for v in bchs_variants():
        assert set(np.unique(v.atom_vector())) == {-1.0, 0.0}


def test_first_variant_is_the_textbook_form():
    q = standard_aspect_quartet()
    tables = {p: q[p].table for p in oracles.PAIR_AXES}
    assert bchs_variants()[0].evaluate(q) == pytest.approx(oracles.bchs_glossary(tables), abs=1e-14)
    assert bchs_variants()[0].label() == "p(B1+,A2+) + p(B1+,B2+) + p(A1+,B2+) - p(A1+,A2+) - p(B1+) - p(B2+)"


@given(weights16)
def test_variants_agree_on_quad_and_on_its_marginals(w):
    quad = QuadrivariateDistribution.from_atoms(w / w.sum())
    q = quad.quartet()
    for v in bchs_variants():
        assert v.evaluate(q) == pytest.approx(v.evaluate_quad(quad), abs=1e-12)
    assert bchs_all_variants(q).satisfied


def test_uniform_quartet_all_variants_minus_half():
    r = bchs_all_variants(uniform_quartet())
    np.testing.assert_allclose(r.values, -0.5, atol=1e-15)
    assert r.satisfied


def test_quantum_quartet_violates_by_frozen_amount():
    r = bchs_all_variants(standard_aspect_quartet())
    assert not r.satisfied
    # (sqrt(2) - 1) / 2 beyond the faces
    assert r.worst_violation == pytest.approx((math.sqrt(2) - 1) / 2, abs=1e-12)
    assert r.worst_high == pytest.approx((math.sqrt(2) - 1) / 2, abs=1e-12)
    assert r.worst_low == pytest.approx(-1 - (math.sqrt(2) - 1) / 2, abs=1e-12)


def test_pr_box_violation_is_one_half():
    r = bchs_all_variants(pr_box_quartet())
    assert r.worst_violation == pytest.approx(0.5, abs=1e-15)
    assert quartet_bell_lhs(pr_box_quartet()) == pytest.approx(4.0)


def test_inconsistent_quartet_rejected():
    q = ExperimentQuartet.from_mapping(
        {
            "A1A2": BivariateDistribution.from_table([[0.3, 0.3], [0.2, 0.2]]),  # p(a1=+) = 0.6
            "A1B2": BivariateDistribution.from_table([[0.2, 0.2], [0.3, 0.3]]),  # p(a1=+) = 0.4
            "B1A2": BivariateDistribution.uniform(),
            "B1B2": BivariateDistribution.uniform(),
        }
    )
    with pytest.raises(InconsistentQuartetError):
        bchs_all_variants(q)


def test_finite_ensemble_single_rows():
    assert finite_ensemble_chsh([[1, 1, 1, 1]]) == -2
    assert finite_ensemble_chsh([[1, 1, 1, -1]]) == 2


def test_finite_ensemble_all_sixteen_types_bounded():
    values = [finite_ensemble_chsh([q]) for q in itertools.product((1, -1), repeat=4)]
    assert max(values) == 2
    assert min(values) == -2
    # per-quadruple combination is always +-2
    assert set(abs(v) for v in values) == {2}


@pytest.mark.parametrize("bad", [[], [[1, 0, 1, 1]], [[1, 1, 1]]])
def test_finite_ensemble_validation(bad):
    with pytest.raises(ValueError):
        finite_ensemble_chsh(np.array(bad))


@given(st.lists(st.tuples(*[st.sampled_from((1, -1))] * 4), min_size=1, max_size=60))
def test_finite_ensemble_never_exceeds_two(rows):
    assert finite_ensemble_chsh(np.array(rows)) <= 2 + 1e-12


@given(unit, unit, unit, unit)
def test_bell_lhs_absolute_bound_four(a, b, c, d):
    assert bell_lhs(CorrelationQuad(a, b, c, d)) <= 4 + 1e-12
