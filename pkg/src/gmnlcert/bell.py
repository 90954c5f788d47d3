"""Born-rule probabilities, the lifted Bell expressions, and the
end-to-end certification pipeline producing a structured report.

Probability accessors are plain callables ``p(outcomes, settings) -> float``
over equal-length bit tuples, so the same inequality code evaluates both
quantum assignments and classical strategy tables.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .gme import (
    AlphaSelection,
    AlphaSelectionError,
    gme_check,
    margins_at,
    select_alpha,
)
from .hardy import (
    DegenerateGeometryError,
    MeasurementAssignment,
    ResidualCoeffs,
    assemble,
    hardy_vectors,
    residual_coeffs,
)
from .states import NearSymmetricState, embed

Accessor = Callable[[tuple[int, ...], tuple[int, ...]], float]


def joint_probability(
    psi: np.ndarray, assignment: MeasurementAssignment, outcomes, settings
) -> float:
    """Probability of one outcome string under one setting string.

    Computed by contracting the per-party outcome bras against the state
    one qubit at a time (cost O(2^n) per query).
    """
    outcomes = tuple(outcomes)
    settings = tuple(settings)
    n = assignment.n
    if len(outcomes) != n or len(settings) != n:
        raise ValueError(f"outcome/setting strings must have length {n}")
    if psi.shape != (2**n,):
        raise ValueError(f"state has wrong dimension for {n} parties")
    amp = psi
    # contract party n first (least significant bit = last axis)
    for j in range(n, 0, -1):
        amp = amp.reshape(-1, 2) @ assignment.bra(j, settings[j - 1], outcomes[j - 1])
    return float(abs(amp[0]) ** 2)


def quantum_accessor(psi: np.ndarray, assignment: MeasurementAssignment) -> Accessor:
    return lambda outcomes, settings: joint_probability(psi, assignment, outcomes, settings)


def _unit(n: int, *positions: int) -> tuple[int, ...]:
    bits = [0] * n
    for j in positions:
        bits[j - 1] = 1
    return tuple(bits)


def lifted_chsh(p: Accessor, n: int, j: int, i: int = 1) -> float:
    """CHSH expression between parties i and j lifted to n parties.

    The remaining parties are pinned to setting 0 and outcome 0; for
    n = 2 this is exactly the two-party seed expression.
    """
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    zero = _unit(n)
    ei, ej, eij = _unit(n, i), _unit(n, j), _unit(n, i, j)
    return p(zero, zero) - p(ei, ei) - p(ej, ej) - p(zero, eij)


def improved_gap_from_probs(p: Accessor, n: int) -> float:
    """Sum of party-1-anchored lifted CHSH terms minus its bilocal bound.

    Bilocal models whose groups cannot signal internally satisfy
    gap <= 0, so a positive gap witnesses genuine multipartite
    nonlocality.  Unrestricted group strategies can exceed the bound.
    """
    zero = _unit(n)
    total = sum(lifted_chsh(p, n, j) for j in range(2, n + 1))
    return total - (n - 2) * (p(zero, zero) - p(_unit(n, 1), _unit(n, 1)))


def improved_gap(psi: np.ndarray, assignment: MeasurementAssignment) -> float:
    return improved_gap_from_probs(quantum_accessor(psi, assignment), assignment.n)


def catalonia_lhs_from_probs(p: Accessor, n: int) -> float:
    zero = _unit(n)
    return (
        p(zero, zero)
        - p(_unit(n, 1), _unit(n, 1))
        - (n - 1) * p(_unit(n, 2), _unit(n, 2))
        - (n - 1) * p(zero, _unit(n, 1, 2))
    )


def catalonia_lhs(psi: np.ndarray, assignment: MeasurementAssignment) -> float:
    """Symmetric collapse of the summed expression; positive certifies GMNL.

    Valid only for assignments where parties 2..n measure identically,
    which makes every party-1-anchored CHSH term equal.
    """
    if not assignment.symmetric:
        raise ValueError("catalonia_lhs requires a symmetric assignment")
    return catalonia_lhs_from_probs(quantum_accessor(psi, assignment), assignment.n)


def curchod_gap(p: Accessor, n: int, variant: str) -> float:
    """Pairwise-summed lifted CHSH expression minus its bound.

    ``variant`` selects how the pair (i, j) is scored: "literal" uses the
    party-1-anchored term for every pair, "generalized" uses the term
    anchored at i.  The choice is always explicit, never defaulted.
    """
    if variant not in ("literal", "generalized"):
        raise ValueError(f"variant must be 'literal' or 'generalized', got {variant!r}")
    zero = _unit(n)
    total = 0.0
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            total += lifted_chsh(p, n, j) if variant == "literal" else lifted_chsh(p, n, j, i=i)
    return total - (n - 2) * p(zero, zero)


def hardy_residuals(
    psi: np.ndarray, assignment: MeasurementAssignment
) -> tuple[float, float, float, float]:
    """The three probabilities that must vanish and the one that must not.

    Returns (r15, r16, r17, p18) where the first three are the zero
    conditions at settings (1,0,..), (0,1,0,..), (1,1,0,..) and p18 is
    the all-zero Hardy probability.
    """
    n = assignment.n
    p = quantum_accessor(psi, assignment)
    zero = _unit(n)
    r15 = p(_unit(n, 1), _unit(n, 1))
    r16 = p(_unit(n, 2), _unit(n, 2))
    r17 = p(zero, _unit(n, 1, 2))
    p18 = p(zero, zero)
    return r15, r16, r17, p18


@dataclass(frozen=True)
class CertifyOptions:
    tol_residual: float = 1e-10
    tol_purity: float = 1e-9
    eps_ent: float = 1e-8
    eps_max: float = 1e-6
    eps_norm: float = 1e-10
    grid_points: int = 1024
    forced_alpha: float | None = None

    def __post_init__(self):
        if min(self.tol_residual, self.tol_purity, self.eps_ent, self.eps_max, self.eps_norm) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.grid_points < 64:
            raise ValueError("grid_points must be >= 64")

    @property
    def margins(self) -> tuple[float, float, float]:
        return (self.eps_ent, self.eps_max, self.eps_norm)

    @property
    def violation_threshold(self) -> float:
        # 10x the residual tolerance, so numerical noise cannot fabricate
        # a violation verdict.
        return 10.0 * self.tol_residual


@dataclass(frozen=True)
class CertificationReport:
    """Everything the pipeline measured about one input state.

    ``verdict`` is True exactly when the state is entangled across every
    bipartition, all three Hardy residuals are below tolerance, and the
    symmetric Bell expression exceeds the violation threshold.
    """

    state_digest: str
    n: int
    gme: bool
    failing_bipartition: str | None
    selection: AlphaSelection | None
    residual: ResidualCoeffs | None = field(repr=False, default=None)
    assignment: MeasurementAssignment | None = field(repr=False, default=None)
    hardy_residuals: tuple[float, float, float] | None = None
    hardy_probability: float | None = None
    catalonia_lhs: float | None = None
    improved_gap: float | None = None
    curchod_gap_literal: float | None = None
    curchod_gap_generalized: float | None = None
    verdict: bool = False
    failure_reason: str | None = None
    options: CertifyOptions = field(default_factory=CertifyOptions)

    @property
    def alpha(self) -> float | None:
        return self.selection.alpha if self.selection is not None else None

    def to_dict(self) -> dict:
        def pair(z: complex) -> list[float]:
            return [float(np.real(z)), float(np.imag(z))]

        measurements = None
        if self.assignment is not None:
            measurements = {
                f"{j},{x}": [
                    [pair(z) for z in self.assignment.bra(j, x, 0)],
                    [pair(z) for z in self.assignment.bra(j, x, 1)],
                ]
                for j in range(1, self.n + 1)
                for x in (0, 1)
            }
        margins = None
        if self.selection is not None:
            margins = {
                "entanglement": self.selection.entanglement_margin,
                "nonmaximality": self.selection.nonmaximality_margin,
                "residual_norm_sq": self.selection.residual_norm_sq,
            }
        return {
            "state_digest": self.state_digest,
            "n": self.n,
            "gme": self.gme,
            "failing_bipartition": self.failing_bipartition,
            "alpha": self.alpha,
            "margins": margins,
            "b": None if self.residual is None else [pair(z) for z in self.residual.b],
            "measurements": measurements,
            "hardy_residuals": None if self.hardy_residuals is None else list(self.hardy_residuals),
            "hardy_probability": self.hardy_probability,
            "catalonia_lhs": self.catalonia_lhs,
            "improved_gap": self.improved_gap,
            "curchod_gap": {
                "literal": self.curchod_gap_literal,
                "generalized": self.curchod_gap_generalized,
            },
            "verdict": self.verdict,
            "failure_reason": self.failure_reason,
            "tolerances": {
                "residual": self.options.tol_residual,
                "purity": self.options.tol_purity,
                "margins": list(self.options.margins),
                "grid_points": self.options.grid_points,
                "violation_threshold": self.options.violation_threshold,
            },
        }


def state_digest(state: NearSymmetricState) -> str:
    payload = bytearray()
    payload += state.n.to_bytes(4, "little")
    payload += np.ascontiguousarray(state.h, dtype=complex).tobytes()
    payload += np.ascontiguousarray(state.h_prime, dtype=complex).tobytes()
    return hashlib.sha256(bytes(payload)).hexdigest()


def certify(state: NearSymmetricState, options: CertifyOptions | None = None) -> CertificationReport:
    """Run the full pipeline and report the nonlocality verdict.

    A state failing the entanglement test yields a verdict-false report
    naming the failing bipartition class rather than an error, so batch
    runs proceed.
    """
    options = options or CertifyOptions()
    digest = state_digest(state)
    is_gme, failing = gme_check(state, options.tol_purity)
    if not is_gme:
        return CertificationReport(
            state_digest=digest,
            n=state.n,
            gme=False,
            failing_bipartition=failing.label(),
            selection=None,
            failure_reason="not entangled across every bipartition",
            options=options,
        )

    if options.forced_alpha is not None:
        selection = margins_at(state, options.forced_alpha)
    else:
        try:
            selection = select_alpha(state, options.grid_points, options.margins)
        except AlphaSelectionError as exc:
            return CertificationReport(
                state_digest=digest,
                n=state.n,
                gme=True,
                failing_bipartition=None,
                selection=None,
                failure_reason=str(exc),
                options=options,
            )

    r = residual_coeffs(state, selection.alpha)
    try:
        vectors = hardy_vectors(r, eps_norm=options.eps_norm)
    except (DegenerateGeometryError, ValueError) as exc:
        return CertificationReport(
            state_digest=digest,
            n=state.n,
            gme=True,
            failing_bipartition=None,
            selection=selection,
            residual=r,
            failure_reason=f"degenerate measurement geometry: {exc}",
            options=options,
        )
    assignment = assemble(state.n, vectors)

    psi = embed(state)
    psi = psi / np.linalg.norm(psi)
    r15, r16, r17, p18 = hardy_residuals(psi, assignment)
    cat = catalonia_lhs(psi, assignment)
    improved = improved_gap(psi, assignment)
    accessor = quantum_accessor(psi, assignment)
    cur_lit = curchod_gap(accessor, state.n, "literal")
    cur_gen = curchod_gap(accessor, state.n, "generalized")

    verdict = (
        max(r15, r16, r17) < options.tol_residual
        and cat > options.violation_threshold
    )
    return CertificationReport(
        state_digest=digest,
        n=state.n,
        gme=True,
        failing_bipartition=None,
        selection=selection,
        residual=r,
        assignment=assignment,
        hardy_residuals=(r15, r16, r17),
        hardy_probability=p18,
        catalonia_lhs=cat,
        improved_gap=improved,
        curchod_gap_literal=cur_lit,
        curchod_gap_generalized=cur_gen,
        verdict=verdict,
        failure_reason=None if verdict else "Hardy residuals or violation threshold not met",
        options=options,
    )
