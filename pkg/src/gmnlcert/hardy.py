"""Construction of the two-setting measurement assignment realizing the
lifted Hardy paradox between parties 1 and 2.

Single-qubit measurement directions are stored as functionals (bras): an
array ``(beta, gamma)`` holding the coefficients of <0| and <1|, applied
to kets without conjugation.  Every vector produced here is normalized
with its first non-negligible component made real positive, so repeated
runs emit bit-identical reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gme import residual_amplitude_table
from .states import NearSymmetricState


class DegenerateGeometryError(RuntimeError):
    """An intermediate residual vanished; the caller must reselect the angle."""


def _phase_fixed(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    v = v / norm
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    return v * (abs(lead) / lead)


def symmetric_bra(alpha: float) -> np.ndarray:
    """cos(a) <0| + sin(a) <1|."""
    return np.array([math.cos(alpha), math.sin(alpha)], dtype=complex)


def annihilator(w: np.ndarray) -> np.ndarray:
    """The unique-up-to-phase bra vanishing on the ket ``w``.

    Returns (beta, gamma) proportional to (w1, -w0) with beta*w0 +
    gamma*w1 = 0, normalized and phase-fixed.
    """
    w = np.asarray(w, dtype=complex)
    if not np.any(w):
        raise ValueError("cannot annihilate the zero vector")
    return _phase_fixed(np.array([w[1], -w[0]]))


def orthocomplement(v: np.ndarray) -> np.ndarray:
    """The bra whose ket is orthogonal to the ket of ``v``."""
    v = np.asarray(v, dtype=complex)
    if not np.any(v):
        raise ValueError("cannot complement the zero vector")
    return _phase_fixed(np.array([np.conj(v[1]), -np.conj(v[0])]))


@dataclass(frozen=True)
class ResidualCoeffs:
    """Unnormalized residual amplitudes b1..b4 on parties 1 and 2, the
    derived contraction scalars c1, c2, and the angle they came from."""

    b1: complex
    b2: complex
    b3: complex
    b4: complex
    c1: complex
    c2: complex
    alpha: float

    @property
    def b(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3, self.b4])

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as a 2x2 matrix, row = party-1 bit, column = party-2 bit."""
        return np.array([[self.b1, self.b2], [self.b3, self.b4]])


def residual_coeffs(state: NearSymmetricState, alpha: float) -> ResidualCoeffs:
    """Closed-form residual of measuring parties 3..n along (cos a, sin a).

    Each weight-k component of the state contributes a binomially-counted
    mixture of sine and cosine factors; the result agrees with a dense
    contraction of the full state vector to machine precision.
    """
    b1, b2, b3, b4 = (complex(z) for z in residual_amplitude_table(state, alpha)[:, 0])
    c, s = math.cos(alpha), math.sin(alpha)
    c1 = np.conj(b1) * c + np.conj(b2) * s
    c2 = np.conj(b3) * c + np.conj(b4) * s
    return ResidualCoeffs(b1, b2, b3, b4, complex(c1), complex(c2), float(alpha))


@dataclass(frozen=True)
class Measurement:
    """A projective qubit measurement: two orthonormal outcome bras."""

    outcome0: np.ndarray
    outcome1: np.ndarray

    def bra(self, outcome: int) -> np.ndarray:
        return self.outcome0 if outcome == 0 else self.outcome1


@dataclass(frozen=True)
class MeasurementAssignment:
    """Per-party, per-setting measurements for an n-party Bell experiment.

    ``parties[j-1][x]`` is party j's measurement for setting x.  When
    ``symmetric`` is set, parties 2..n hold identical measurements.
    """

    n: int
    parties: tuple[tuple[Measurement, Measurement], ...]
    symmetric: bool = False

    def bra(self, party: int, setting: int, outcome: int) -> np.ndarray:
        return self.parties[party - 1][setting].bra(outcome)


def _measurement_from_outcome1(bra1: np.ndarray) -> Measurement:
    return Measurement(outcome0=orthocomplement(bra1), outcome1=bra1)


def _measurement_from_outcome0(bra0: np.ndarray) -> Measurement:
    return Measurement(outcome0=bra0, outcome1=orthocomplement(bra0))


def hardy_vectors(
    r: ResidualCoeffs, eps_norm: float = 1e-10
) -> tuple[Measurement, Measurement, Measurement, Measurement]:
    """Derive the four measurements (A0, A1, B0, B1) by annihilation.

    Writing M for the residual matrix and m = (cos a, sin a):

    * B0 outcome 0 is the symmetric direction itself;
    * A1 outcome 1 annihilates M @ m, so outcome (1,0,...,0) at settings
      (1,0,...,0) is impossible;
    * B1 outcome 0 annihilates A1_outcome0 @ M, killing the all-zero
      outcome at settings (1,1,0,...,0);
    * A0 outcome 0 annihilates M @ B1_outcome1, killing outcome
      (0,1,0,...,0) at settings (0,1,0,...,0).

    Each zero condition holds by construction rather than by evaluating
    printed component formulas, which pins every sign unambiguously.
    """
    m = symmetric_bra(r.alpha)
    mat = r.matrix
    scale = float(np.linalg.norm(r.b))

    b0 = _measurement_from_outcome0(_phase_fixed(m))

    u = mat @ m
    if np.linalg.norm(u) <= eps_norm * max(scale, 1.0):
        raise DegenerateGeometryError("residual contracted with the symmetric direction vanished")
    a1 = _measurement_from_outcome1(annihilator(u))

    w = a1.outcome0 @ mat
    if np.linalg.norm(w) <= eps_norm * max(scale, 1.0):
        raise DegenerateGeometryError("residual contracted with party 1's first-setting vector vanished")
    b1 = _measurement_from_outcome0(annihilator(w))

    u2 = mat @ b1.outcome1
    if np.linalg.norm(u2) <= eps_norm * max(scale, 1.0):
        raise DegenerateGeometryError("residual contracted with party 2's discard vector vanished")
    a0 = _measurement_from_outcome0(annihilator(u2))

    return a0, a1, b0, b1


def assemble(n: int, vectors: tuple[Measurement, Measurement, Measurement, Measurement]) -> MeasurementAssignment:
    """Assignment giving party 1 (A0, A1) and every other party (B0, B1)."""
    a0, a1, b0, b1 = vectors
    parties = ((a0, a1),) + ((b0, b1),) * (n - 1)
    return MeasurementAssignment(n=n, parties=parties, symmetric=True)
