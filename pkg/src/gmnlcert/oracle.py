"""Independent brute-force verification paths.

Everything here deliberately avoids the closed-form shortcuts used by the
main pipeline: residuals come from dense tensor contraction, Schmidt data
from an explicit SVD, probabilities from fully expanded 2^n functionals,
and the classical bounds from exhaustive strategy enumeration.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterator

import numpy as np

from .bell import (
    Accessor,
    CertificationReport,
    catalonia_lhs_from_probs,
    curchod_gap,
    improved_gap_from_probs,
)
from .hardy import symmetric_bra
from .states import NearSymmetricState, embed, project_party


def dense_residual(state: NearSymmetricState, alpha: float) -> np.ndarray:
    """Residual amplitudes (b1..b4) by direct state-vector contraction.

    Embeds the state and projects parties n, n-1, ..., 3 onto the
    symmetric direction in sequence; the remaining two-qubit vector is
    returned unnormalized.
    """
    psi = embed(state)
    bra = symmetric_bra(alpha)
    for j in range(state.n, 2, -1):
        psi = project_party(psi, j, bra)
    return psi


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt coefficients of a normalized two-qubit pure state."""

    lambda_max: float
    lambda_min: float

    @property
    def theta(self) -> float:
        return math.acos(min(self.lambda_max, 1.0))

    @property
    def entangled(self) -> bool:
        return self.lambda_min > 0.0

    @property
    def maximal(self) -> bool:
        return self.lambda_max == self.lambda_min


def schmidt_two_qubit(b: np.ndarray) -> SchmidtData:
    """Schmidt decomposition of amplitudes (b1, b2, b3, b4) via SVD."""
    b = np.asarray(b, dtype=complex)
    norm = np.linalg.norm(b)
    if norm == 0.0:
        raise ValueError("cannot decompose the zero vector")
    matrix = (b / norm).reshape(2, 2)
    sing = np.linalg.svd(matrix, compute_uv=False)
    return SchmidtData(lambda_max=float(sing[0]), lambda_min=float(sing[1]))


# --- classical strategy enumeration ---

@dataclass(frozen=True)
class DeterministicBilocalStrategy:
    """Deterministic responses for the two sides of one bipartition.

    ``parties_s`` lists the 1-based parties of group S; each response map
    sends the group's setting tuple to its outcome tuple, with no
    constraint inside a group (group members may coordinate on the
    joint setting).
    """

    n: int
    parties_s: tuple[int, ...]
    response_s: dict[tuple[int, ...], tuple[int, ...]]
    response_rest: dict[tuple[int, ...], tuple[int, ...]]

    def accessor(self) -> Accessor:
        s = [j - 1 for j in self.parties_s]
        rest = [j for j in range(self.n) if j not in set(s)]

        def p(outcomes: tuple[int, ...], settings: tuple[int, ...]) -> float:
            a_s = tuple(outcomes[j] for j in s)
            x_s = tuple(settings[j] for j in s)
            a_r = tuple(outcomes[j] for j in rest)
            x_r = tuple(settings[j] for j in rest)
            return 1.0 if self.response_s[x_s] == a_s and self.response_rest[x_r] == a_r else 0.0

        return p

    def describe(self) -> dict:
        return {
            "n": self.n,
            "group": list(self.parties_s),
            "response_group": {"".join(map(str, k)): "".join(map(str, v)) for k, v in self.response_s.items()},
            "response_rest": {"".join(map(str, k)): "".join(map(str, v)) for k, v in self.response_rest.items()},
        }


def _response_maps(size: int) -> Iterator[dict[tuple[int, ...], tuple[int, ...]]]:
    settings = list(itertools.product((0, 1), repeat=size))
    outcomes = list(itertools.product((0, 1), repeat=size))
    for choice in itertools.product(outcomes, repeat=len(settings)):
        yield dict(zip(settings, choice))


def enumerate_bilocal_extremes(n: int = 3) -> Iterator[DeterministicBilocalStrategy]:
    """All deterministic strategies bilocal with respect to some bipartition.

    Exhaustive only for n = 3, where the three singleton-vs-pair
    bipartitions give 3 * 4 * 256 = 3072 strategies; larger n must use
    sample_bilocal_strategies.
    """
    if n != 3:
        raise ValueError("exhaustive enumeration is only supported for n = 3; sample instead")
    for solo in (1, 2, 3):
        rest = tuple(j for j in (1, 2, 3) if j != solo)
        for resp_solo in _response_maps(1):
            for resp_pair in _response_maps(2):
                yield DeterministicBilocalStrategy(
                    n=3, parties_s=(solo,), response_s=resp_solo, response_rest=resp_pair
                )


def sample_bilocal_strategies(
    n: int, count: int, seed: int
) -> Iterator[DeterministicBilocalStrategy]:
    """Seeded random deterministic bilocal strategies for n > 3."""
    rng = np.random.default_rng(seed)
    parties = list(range(1, n + 1))
    for _ in range(count):
        size = int(rng.integers(1, n))
        chosen = tuple(sorted(rng.choice(parties, size=size, replace=False).tolist()))
        rest_size = n - size
        resp_s = {
            x: tuple(int(v) for v in rng.integers(0, 2, size=size))
            for x in itertools.product((0, 1), repeat=size)
        }
        resp_rest = {
            x: tuple(int(v) for v in rng.integers(0, 2, size=rest_size))
            for x in itertools.product((0, 1), repeat=rest_size)
        }
        yield DeterministicBilocalStrategy(
            n=n, parties_s=chosen, response_s=resp_s, response_rest=resp_rest
        )


def nosignaling_bilocal_vertices(n: int = 3) -> Iterator[tuple[dict, Accessor]]:
    """Vertices of the bilocal set whose groups are internally no-signaling.

    For n = 3 the pair side ranges over the 24 vertices of the two-party
    no-signaling polytope (16 deterministic products and 8 PR-box types),
    giving 3 * 4 * 24 = 288 strategies.  Checking a linear expression on
    all of them bounds it over the whole no-signaling bilocal set.
    """
    if n != 3:
        raise ValueError("vertex enumeration is only supported for n = 3")
    pair_tables: list[tuple[dict, np.ndarray]] = []
    for fa in itertools.product((0, 1), repeat=2):
        for fb in itertools.product((0, 1), repeat=2):
            table = np.zeros((2, 2, 2, 2))
            for xa, xb in itertools.product((0, 1), repeat=2):
                table[xa, xb, fa[xa], fb[xb]] = 1.0
            pair_tables.append(({"type": "deterministic", "fa": list(fa), "fb": list(fb)}, table))
    for bits in itertools.product((0, 1), repeat=3):
        al, be, ga = bits
        table = np.zeros((2, 2, 2, 2))
        for xa, xb, a in itertools.product((0, 1), repeat=3):
            b = a ^ (xa & xb) ^ (al & xa) ^ (be & xb) ^ ga
            table[xa, xb, a, b] = 0.5
        pair_tables.append(({"type": "prbox", "coeffs": list(bits)}, table))

    for solo in (1, 2, 3):
        pair = [j - 1 for j in (1, 2, 3) if j != solo]
        for resp_solo in itertools.product((0, 1), repeat=2):
            for label, table in pair_tables:
                def p(
                    outcomes: tuple[int, ...],
                    settings: tuple[int, ...],
                    solo=solo - 1,
                    pair=tuple(pair),
                    resp=resp_solo,
                    table=table,
                ) -> float:
                    if outcomes[solo] != resp[settings[solo]]:
                        return 0.0
                    return float(
                        table[settings[pair[0]], settings[pair[1]], outcomes[pair[0]], outcomes[pair[1]]]
                    )

                yield (
                    {"group": [solo], "solo_response": list(resp_solo), "pair": label},
                    p,
                )


def classical_gaps(p: Accessor, n: int, variant: str) -> tuple[float, float]:
    """(summed-expression gap, pairwise-expression gap) for one strategy."""
    return improved_gap_from_probs(p, n), curchod_gap(p, n, variant)


# --- report cross-validation ---

def _full_bra(assignment, outcomes, settings) -> np.ndarray:
    bras = [assignment.bra(j, settings[j - 1], outcomes[j - 1]) for j in range(1, assignment.n + 1)]
    return reduce(np.kron, bras)


def kron_probability(psi: np.ndarray, assignment, outcomes, settings) -> float:
    """Probability via one fully expanded 2^n functional (no shortcuts)."""
    amp = _full_bra(assignment, tuple(outcomes), tuple(settings)) @ psi
    return float(abs(amp) ** 2)


def verify_pipeline(
    state: NearSymmetricState, report: CertificationReport, tol: float = 1e-10
) -> bool:
    """Recompute every probability-level figure in a report independently.

    Rebuilds the dense state and evaluates each reported quantity from
    the reported measurement vectors through the kron path; True iff all
    values match within ``tol``.  Reports without an assignment (negative
    verdicts) have nothing to contradict and verify vacuously.
    """
    if report.assignment is None:
        return True
    n = report.n
    psi = embed(state)
    psi = psi / np.linalg.norm(psi)
    p: Accessor = lambda outcomes, settings: kron_probability(psi, report.assignment, outcomes, settings)

    zero = tuple([0] * n)
    e1 = tuple(1 if j == 0 else 0 for j in range(n))
    e2 = tuple(1 if j == 1 else 0 for j in range(n))
    e12 = tuple(1 if j < 2 else 0 for j in range(n))
    recomputed = {
        "r15": p(e1, e1),
        "r16": p(e2, e2),
        "r17": p(zero, e12),
        "p18": p(zero, zero),
        "catalonia": catalonia_lhs_from_probs(p, n),
        "improved": improved_gap_from_probs(p, n),
        "curchod_literal": curchod_gap(p, n, "literal"),
        "curchod_generalized": curchod_gap(p, n, "generalized"),
    }
    reported = {
        "r15": report.hardy_residuals[0],
        "r16": report.hardy_residuals[1],
        "r17": report.hardy_residuals[2],
        "p18": report.hardy_probability,
        "catalonia": report.catalonia_lhs,
        "improved": report.improved_gap,
        "curchod_literal": report.curchod_gap_literal,
        "curchod_generalized": report.curchod_gap_generalized,
    }
    return all(
        reported[key] is not None and abs(recomputed[key] - reported[key]) <= tol
        for key in recomputed
    )
