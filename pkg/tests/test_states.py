import itertools
import math

import numpy as np
import pytest

from gmnlcert import (
    NearSymmetricState,
    biseparable_state,
    dicke,
    dicke_split,
    embed,
    ghz_state,
    inner,
    project_party,
    random_near_symmetric,
    state_from_dict,
    state_to_dict,
    w_state,
)
from gmnlcert.gme import gme_check

RT2 = 1.0 / math.sqrt(2.0)


def test_dicke_single_term():
    amp = dicke(3, 0)
    assert amp[0] == 1.0
    assert np.all(amp[1:] == 0)


def test_dicke_two_qubit():
    np.testing.assert_allclose(dicke(2, 1), [0, RT2, RT2, 0], atol=1e-15)


def test_dicke_weight_two_of_three():
    # weight-2 strings of 3 bits are exactly 011, 101, 110
    amp = dicke(3, 2)
    expected = np.zeros(8, dtype=complex)
    expected[[0b011, 0b101, 0b110]] = 1.0 / math.sqrt(3.0)
    np.testing.assert_allclose(amp, expected, atol=1e-15)


def test_dicke_uniform_on_weight_class():
    for n, k in [(4, 2), (5, 3), (6, 1)]:
        amp = dicke(n, k)
        for idx in range(2**n):
            if bin(idx).count("1") == k:
                assert amp[idx] == pytest.approx(1.0 / math.sqrt(math.comb(n, k)))
            else:
                assert amp[idx] == 0


def test_dicke_rejects_bad_weight():
    with pytest.raises(ValueError):
        dicke(3, 4)
    with pytest.raises(ValueError):
        dicke(3, -1)


def test_embed_ghz():
    psi = embed(ghz_state(3))
    expected = np.zeros(8, dtype=complex)
    expected[0] = expected[7] = RT2
    np.testing.assert_allclose(psi, expected, atol=1e-15)


def test_embed_w_like_branch():
    # h_1 = sqrt(2/3), h'_0 = sqrt(1/3) expands to (|001> + |010> + |100>)/sqrt(3)
    state = NearSymmetricState(3, [0, math.sqrt(2 / 3), 0], [math.sqrt(1 / 3), 0, 0])
    expected = np.zeros(8, dtype=complex)
    expected[[1, 2, 4]] = 1.0 / math.sqrt(3.0)
    np.testing.assert_allclose(embed(state), expected, atol=1e-15)


def test_embed_product():
    state = NearSymmetricState(4, [1, 0, 0, 0], [0, 0, 0, 0])
    expected = np.zeros(16, dtype=complex)
    expected[0] = 1.0
    np.testing.assert_allclose(embed(state), expected, atol=1e-15)


def test_embed_symmetric_under_tail_swaps():
    state = random_near_symmetric(4, seed=11)
    psi = embed(state).reshape((2,) * 4)
    for a, b in itertools.combinations(range(1, 4), 2):
        swapped = np.swapaxes(psi, a, b)
        np.testing.assert_allclose(psi, swapped, atol=1e-15)


def test_embed_preserves_norm():
    for seed in range(5):
        state = random_near_symmetric(3 + seed % 3, seed=seed)
        assert np.linalg.norm(embed(state)) == pytest.approx(1.0, abs=1e-12)


def test_project_party_computational():
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1.0  # |00>
    out = project_party(psi, 2, np.array([1, 0]))
    np.testing.assert_allclose(out, [1, 0], atol=1e-15)


def test_project_party_ghz():
    alpha = 0.3
    psi = embed(ghz_state(3))
    out = project_party(psi, 3, np.array([math.cos(alpha), math.sin(alpha)]))
    expected = np.array([math.cos(alpha) * RT2, 0, 0, math.sin(alpha) * RT2])
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_project_party_orthogonal_gives_zero():
    psi = np.zeros(4, dtype=complex)
    psi[2] = 1.0  # |10>, party 1 in |1>
    out = project_party(psi, 1, np.array([1, 0]))
    np.testing.assert_allclose(out, [0, 0], atol=1e-15)


def test_project_party_contraction_order_commutes():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    u = rng.normal(size=2) + 1j * rng.normal(size=2)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    # projecting party 2 first shifts party 4 down to slot 3
    first = project_party(project_party(psi, 2, u), 3, v)
    second = project_party(project_party(psi, 4, v), 2, u)
    np.testing.assert_allclose(first, second, atol=1e-12)


def test_project_party_bad_index():
    with pytest.raises(ValueError):
        project_party(np.ones(4, dtype=complex), 3, np.array([1, 0]))


def test_inner():
    psi = embed(ghz_state(3))
    assert inner(psi, psi) == pytest.approx(1.0, abs=1e-12)
    e01 = np.zeros(4, dtype=complex)
    e01[1] = 1
    e10 = np.zeros(4, dtype=complex)
    e10[2] = 1
    assert inner(e01, e10) == 0
    assert inner(dicke(3, 1), dicke(3, 2)) == 0
    with pytest.raises(ValueError):
        inner(np.ones(4), np.ones(8))


def test_random_near_symmetric_deterministic():
    a = random_near_symmetric(3, seed=42)
    b = random_near_symmetric(3, seed=42)
    np.testing.assert_array_equal(a.h, b.h)
    np.testing.assert_array_equal(a.h_prime, b.h_prime)


def test_random_near_symmetric_normalized_and_entangled():
    for seed in range(4):
        state = random_near_symmetric(4, seed=seed)
        total = np.sum(np.abs(state.h) ** 2 + np.abs(state.h_prime) ** 2)
        assert total == pytest.approx(1.0, abs=1e-12)
        assert gme_check(state)[0]


def test_biseparable_degenerate_lambda():
    rng = np.random.default_rng(0)
    hp = rng.normal(size=4) + 1j * rng.normal(size=4)
    state = biseparable_state(4, 0.0, hp)
    assert np.all(state.h == 0)


def test_biseparable_product_construction():
    state = biseparable_state(3, 1.0, [1, 0, 0])
    psi = embed(state)
    expected = np.kron([RT2, RT2], [1, 0, 0, 0])
    np.testing.assert_allclose(psi, expected, atol=1e-15)


def test_biseparable_rejects_zero():
    with pytest.raises(ValueError):
        biseparable_state(3, 1.0, [0, 0, 0])


def test_state_constructors_normalized():
    for n in range(3, 7):
        for state in (ghz_state(n), w_state(n), dicke_split(n, n // 2)):
            total = np.sum(np.abs(state.h) ** 2 + np.abs(state.h_prime) ** 2)
            assert total == pytest.approx(1.0, abs=1e-12)


def test_state_invariants():
    with pytest.raises(ValueError):
        NearSymmetricState(2, [1, 0], [0, 0])
    with pytest.raises(ValueError):
        NearSymmetricState(3, [1, 0], [0, 0, 0])
    with pytest.raises(ValueError):
        NearSymmetricState(3, [np.nan, 0, 0], [0, 0, 0])
    with pytest.raises(ValueError):
        NearSymmetricState(3, [1, 1, 0], [0, 0, 0])


def test_state_json_round_trip():
    state = random_near_symmetric(4, seed=5)
    again = state_from_dict(state_to_dict(state))
    np.testing.assert_array_equal(state.h, again.h)
    np.testing.assert_array_equal(state.h_prime, again.h_prime)


@pytest.mark.parametrize(
    "doc,fragment",
    [
        ({"h": [[1, 0]], "h_prime": [[0, 0]]}, "n"),
        ({"n": 3, "h": [[1, 0]], "h_prime": [[0, 0], [0, 0], [0, 0]]}, "h"),
        ({"n": 3, "h": [[1, 0], [0, 0], [0]], "h_prime": [[0, 0], [0, 0], [0, 0]]}, "h[2]"),
        (
            {
                "n": 3,
                "h": [[1, 0], [0, 0], [float("inf"), 0]],
                "h_prime": [[0, 0], [0, 0], [0, 0]],
            },
            "h[2]",
        ),
        ({"n": "3", "h": [], "h_prime": []}, "n"),
        ([1, 2], "object"),
    ],
)
def test_state_json_rejections(doc, fragment):
    with pytest.raises(ValueError, match=".*"):
        state_from_dict(doc)
    try:
        state_from_dict(doc)
    except ValueError as exc:
        assert fragment in str(exc)
