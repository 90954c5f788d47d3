import dataclasses
import itertools
import math

import numpy as np
import pytest

from conftest import normalized_embed
from gmnlcert import (
    certify,
    dense_residual,
    enumerate_bilocal_extremes,
    ghz_state,
    nosignaling_bilocal_vertices,
    random_near_symmetric,
    residual_coeffs,
    sample_bilocal_strategies,
    schmidt_two_qubit,
    verify_pipeline,
)
from gmnlcert.bell import curchod_gap, improved_gap_from_probs
from gmnlcert.hardy import Measurement
from gmnlcert.oracle import kron_probability


def test_dense_residual_ghz():
    b = dense_residual(ghz_state(3), math.pi / 6)
    np.testing.assert_allclose(
        b, [0.6123724356957945, 0, 0, 0.3535533905932738], atol=1e-12
    )


def test_dense_residual_matches_closed_form():
    rng = np.random.default_rng(2)
    for n in range(3, 8):
        for i in range(5):
            state = random_near_symmetric(n, seed=2000 + 10 * n + i)
            alpha = float(rng.uniform(0, math.pi))
            np.testing.assert_allclose(
                dense_residual(state, alpha), residual_coeffs(state, alpha).b, atol=1e-12
            )


def test_dense_residual_at_zero():
    state = random_near_symmetric(5, seed=75)
    b = dense_residual(state, 0.0)
    assert b[0] == pytest.approx(state.h[0], abs=1e-14)
    assert b[2] == pytest.approx(state.h_prime[0], abs=1e-14)


def test_schmidt_bell_pair():
    data = schmidt_two_qubit(np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert data.lambda_max == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert data.lambda_min == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert data.theta == pytest.approx(math.pi / 4, abs=1e-9)


def test_schmidt_product():
    data = schmidt_two_qubit(np.array([1, 0, 0, 0]))
    assert data.lambda_min == pytest.approx(0.0, abs=1e-12)
    assert not data.entangled


def test_schmidt_diagonal():
    theta = 0.3
    data = schmidt_two_qubit(np.array([math.cos(theta), 0, 0, math.sin(theta)]))
    assert data.lambda_max == pytest.approx(math.cos(theta), abs=1e-12)
    assert data.lambda_min == pytest.approx(math.sin(theta), abs=1e-12)


def test_schmidt_rejects_zero():
    with pytest.raises(ValueError):
        schmidt_two_qubit(np.zeros(4))


def test_schmidt_normalization_identity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        data = schmidt_two_qubit(b)
        assert data.lambda_max**2 + data.lambda_min**2 == pytest.approx(1.0, abs=1e-12)


def test_schmidt_entanglement_criterion_equivalence():
    # lambda_min and the normalized determinant bound each other within
    # a factor sqrt(2): det_hat <= lambda_min <= sqrt(2) * det_hat
    rng = np.random.default_rng(4)
    threshold = 1e-10
    for _ in range(200):
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        det_hat = abs(b[0] * b[3] - b[1] * b[2]) / float(np.sum(np.abs(b) ** 2))
        data = schmidt_two_qubit(b)
        if data.lambda_min > threshold * math.sqrt(2):
            assert det_hat > threshold / math.sqrt(2)
        if det_hat > threshold:
            assert data.lambda_min > threshold


def test_enumeration_count():
    strategies = list(enumerate_bilocal_extremes(3))
    assert len(strategies) == 3 * 4 * 4**4 == 3072


def test_enumeration_rejects_large_n():
    with pytest.raises(ValueError):
        list(enumerate_bilocal_extremes(4))


def test_strategy_tables_are_deterministic_distributions():
    strategies = list(enumerate_bilocal_extremes(3))
    for strategy in strategies[:: 512]:
        p = strategy.accessor()
        for settings in itertools.product((0, 1), repeat=3):
            values = [
                p(outcomes, settings) for outcomes in itertools.product((0, 1), repeat=3)
            ]
            assert all(v in (0.0, 1.0) for v in values)
            assert sum(values) == 1.0


def test_general_strategies_can_defeat_the_bound():
    # with unconstrained intra-group coordination some deterministic
    # strategies exceed the summed-expression bound; the inequality is a
    # witness only against internally no-signaling groups
    worst = max(
        improved_gap_from_probs(s.accessor(), 3) for s in enumerate_bilocal_extremes(3)
    )
    assert worst > 0.5


def test_nosignaling_vertices_satisfy_bounds():
    count = 0
    for _, accessor in nosignaling_bilocal_vertices(3):
        count += 1
        assert improved_gap_from_probs(accessor, 3) <= 1e-12
        assert curchod_gap(accessor, 3, "generalized") <= 1e-12
    assert count == 288


def test_nosignaling_vertices_literal_variant_is_weaker():
    # the literal pair scoring is defeated by PR-box vertices even with
    # no-signaling groups
    worst = max(
        curchod_gap(accessor, 3, "literal")
        for _, accessor in nosignaling_bilocal_vertices(3)
    )
    assert worst > 0.1


def test_sampled_strategies_deterministic():
    a = [s.describe() for s in sample_bilocal_strategies(4, 20, seed=5)]
    b = [s.describe() for s in sample_bilocal_strategies(4, 20, seed=5)]
    assert a == b
    assert len(a) == 20


def test_kron_probability_matches_contraction():
    from gmnlcert.bell import joint_probability

    state = random_near_symmetric(3, seed=42)
    report = certify(state)
    psi = normalized_embed(state)
    for settings in itertools.product((0, 1), repeat=3):
        for outcomes in itertools.product((0, 1), repeat=3):
            assert kron_probability(psi, report.assignment, outcomes, settings) == pytest.approx(
                joint_probability(psi, report.assignment, outcomes, settings), abs=1e-13
            )


def test_verify_pipeline_accepts_honest_report():
    state = ghz_state(3)
    assert verify_pipeline(state, certify(state))


def test_verify_pipeline_detects_perturbation():
    state = ghz_state(3)
    report = certify(state)
    tampered_bra = report.assignment.bra(1, 0, 0).copy()
    tampered_bra[0] += 1e-3
    parties = list(report.assignment.parties)
    parties[0] = (
        Measurement(outcome0=tampered_bra, outcome1=report.assignment.bra(1, 0, 1)),
        parties[0][1],
    )
    tampered_assignment = dataclasses.replace(report.assignment, parties=tuple(parties))
    tampered = dataclasses.replace(report, assignment=tampered_assignment)
    assert not verify_pipeline(state, tampered)


def test_verify_pipeline_vacuous_for_negative_reports():
    rng = np.random.default_rng(6)
    hp = rng.normal(size=3) + 1j * rng.normal(size=3)
    from gmnlcert import biseparable_state

    state = biseparable_state(3, 1.2, hp)
    report = certify(state)
    assert report.assignment is None
    assert verify_pipeline(state, report)
