import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from katohodge.germs.battery import BatteryConfig, BatteryGerm, battery_germs, geometric_decay, neumann_checks, operator_checks
from katohodge.germs.gaussian import ONE, ZERO, GaussianRational, gq
from katohodge.germs.jets import JetForm, PolyGermMap, jet_basis
from katohodge.germs.operator import (
    NotAContraction,
    beta_matrix,
    contraction_report,
    diagonal_eigenvalues,
    gamma_star_matrix,
    iterate_pullback_check,
    neumann_solve,
    random_contraction_germ,
    spectral_radius,
)


def diag_germ(lams):
    n = len(lams)
    return PolyGermMap.linear([[lams[i] if i == j else ZERO for j in range(n)] for i in range(n)])


def z_over(n, k):
    return diag_germ([gq(Fraction(1, k))] * n)


def sample_germ():
    return PolyGermMap.from_polys([
        {(1, 0, 0): gq("1/2"), (0, 2, 0): gq("1/4")},
        {(0, 1, 0): gq("1/3")},
        {(0, 0, 1): gq("1/2")},
    ])


def test_half_on_one_forms_is_diagonal():
    beta, rep = beta_matrix(z_over(3, 2), 1, 1)
    assert rep.consistent and rep.invertible
    for i, row in enumerate(beta):
        assert all(not x for j, x in enumerate(row) if j != i)
        k = sum(jet_basis(3, 1, 1)[i][1])
        assert row[i] == ONE - gq(Fraction(1, 2 ** (1 + k)))


def test_half_on_functions_has_constant_kernel():
    _, rep = beta_matrix(z_over(3, 2), 0, 2)
    assert (rep.jet_dimension, rep.rank, rep.kernel_dim) == (10, 9, 1)
    assert rep.kernel_is_constants and rep.image_is_vanishing_at_zero and rep.consistent


def test_sample_germ_is_invertible_on_one_forms():
    _, rep = beta_matrix(sample_germ(), 1, 3)
    assert rep.invertible and rep.consistent and not rep.determinant_is_zero
    assert rep.block_triangular and rep.diagonal_blocks_linear


lams = st.builds(
    GaussianRational,
    st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=7),
    st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=7),
)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(lams, min_size=n, max_size=n)), st.integers(0, 3), st.data())
def test_diagonal_germ_eigenvalues(ls, d, data):
    p = data.draw(st.integers(0, len(ls)))
    beta, rep = beta_matrix(diag_germ(ls), p, d)
    assert [beta[i][i] for i in range(len(beta))] == diagonal_eigenvalues(ls, p, d)
    assert all(not beta[i][j] for i in range(len(beta)) for j in range(len(beta)) if i != j)
    assert rep.consistent


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 3))
def test_random_germs_are_consistent(seed, n, d):
    gamma = random_contraction_germ(random.Random(seed), n)
    assert spectral_radius(gamma) < 0.5
    for p in range(n + 1):
        _, rep = beta_matrix(gamma, p, d)
        assert rep.consistent and rep.rank_routes_agree


def test_random_germ_coefficient_bounds():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.randint(1, 4)
        g = random_contraction_germ(rng, n)
        for comp in g.components:
            for e, c in comp:
                bound = Fraction(1, 4 * n) if sum(e) == 1 else Fraction(1, 8)
                assert abs(c.re) <= bound and abs(c.im) <= bound


def test_non_contraction_and_caps():
    with pytest.raises(NotAContraction):
        beta_matrix(z_over(2, 1), 1, 1)
    with pytest.raises(ValueError, match="outside"):
        beta_matrix(z_over(2, 2), 3, 1)
    with pytest.raises(ValueError, match="too large"):
        beta_matrix(z_over(2, 2), 1, 6)
    with pytest.raises(ValueError, match="too large"):
        beta_matrix(z_over(5, 2), 1, 1)
    _, rep = beta_matrix(z_over(5, 2), 1, 1, caps=False)
    assert rep.invertible


def test_neumann_on_functions():
    eta = JetForm.from_form(3, 0, 2, {(): {(1, 0, 0): ONE}})
    res = neumann_solve(z_over(3, 2), eta, terms=30)
    assert res.exact == JetForm.from_form(3, 0, 2, {(): {(1, 0, 0): gq(2)}})
    # partial sums are (2 - 2^(1-M)) z_1
    for m, s in enumerate(res.partial_sums, start=1):
        assert s.vector() == JetForm.from_form(3, 0, 2, {(): {(1, 0, 0): gq(2 - Fraction(2, 2**m))}}).vector()
    assert res.error == pytest.approx(2.0 ** -29)
    with pytest.raises(ValueError, match="origin"):
        neumann_solve(z_over(3, 2), JetForm.from_form(3, 0, 2, {(): {(0, 0, 0): ONE}}))


def test_neumann_on_one_forms():
    eta = JetForm.from_form(3, 1, 2, {(0,): {(0, 0, 0): ONE}})
    res = neumann_solve(z_over(3, 2), eta)
    assert res.exact == JetForm.from_form(3, 1, 2, {(0,): {(0, 0, 0): gq(2)}})
    res = neumann_solve(sample_germ(), eta, terms=40)
    expected = JetForm.from_form(3, 1, 2, {(0,): {(0, 0, 0): gq(2)}, (1,): {(0, 1, 0): gq("9/8")}})
    assert res.exact == expected
    assert res.residuals[-1] < 1e-9 and res.error < 1e-9
    assert all(b <= a for a, b in zip(res.residuals, res.residuals[1:]))


def test_contraction_report_sufficient_condition():
    small = contraction_report(z_over(3, 20))
    assert small.sampled_constant == pytest.approx(0.05)
    values = {p: v for p, (v, _) in small.sufficient_condition.items()}
    assert values == pytest.approx({1: 0.3, 2: 0.06, 3: 0.006})
    assert all(ok for _, ok in small.sufficient_condition.values())
    half = contraction_report(z_over(3, 2))
    assert half.sufficient_condition[1] == pytest.approx((3.0, False))
    # the condition is only sufficient: beta is still invertible
    assert beta_matrix(z_over(3, 2), 1, 2)[1].invertible
    assert not contraction_report(z_over(2, 1)).first_order_contraction


def test_contraction_report_linear_entries():
    rep = contraction_report(sample_germ())
    assert rep.spectral_radius == pytest.approx(0.5)
    assert rep.linear_entries_within_constant and rep.sampled_contraction


@pytest.mark.parametrize("r", [1, 2, 3])
def test_iterated_pullback(r):
    assert iterate_pullback_check(sample_germ(), 1, 2, r).passed
    assert iterate_pullback_check(random_contraction_germ(random.Random(r), 2), 0, 3, r).passed
    with pytest.raises(ValueError):
        iterate_pullback_check(sample_germ(), 1, 2, 0)


def test_gamma_star_is_block_triangular_by_degree():
    g = gamma_star_matrix(sample_germ(), 1, 3)
    degs = [sum(e) for _, e in jet_basis(3, 1, 3)]
    assert all(not g[i][j] for i in range(len(g)) for j in range(len(g)) if degs[i] < degs[j])


def test_battery_is_deterministic():
    cfg = BatteryConfig(seed=7, count=6)
    a, b = battery_germs(cfg), battery_germs(cfg)
    assert a == b
    assert battery_germs(BatteryConfig(seed=8, count=6)) != a
    for germ in a:
        n = germ.gamma.n
        assert 1 <= n <= 3 and 1 <= germ.d <= 4 and germ.label.startswith("germ")


def test_battery_checks_pass():
    for germ in battery_germs(BatteryConfig(seed=3, count=4)):
        checks = operator_checks(germ) + neumann_checks(germ)
        assert all(c.passed for c in checks), [c.line() for c in checks if not c.passed]
        assert len(checks) == 2 * (germ.gamma.n + 1)


def test_too_few_terms_fail_the_tolerance():
    germ = BatteryGerm("half", z_over(3, 2), 2)
    by_name = {c.name: c for c in neumann_checks(germ, terms=30)}
    assert not by_name["half/p0_neumann"].passed
    assert all(c.passed for c in neumann_checks(germ, terms=60))


def test_geometric_decay():
    assert geometric_decay(0.5 ** np.arange(60))
    assert geometric_decay(np.r_[0.5 ** np.arange(50), np.full(10, 1e-16)])
    assert not geometric_decay(np.full(40, 0.1))
    assert not geometric_decay(0.99 ** np.arange(60))
