"""Entanglement analysis: bipartition purity test, the concurrence
polynomial of the post-measurement two-qubit state, linear-dependence
detection of the coefficient families, and measurement-angle selection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import NearSymmetricState, embed


class AlphaSelectionError(RuntimeError):
    """No grid angle achieves all three selection margins."""


@dataclass(frozen=True)
class BipartitionClass:
    """Equivalence class of bipartitions under the 2..n permutation symmetry.

    Every bipartition is represented by the group containing party 1,
    together with ``sym_count`` of the symmetric parties.
    """

    sym_count: int

    def label(self) -> str:
        if self.sym_count == 0:
            return "party 1 alone"
        return f"party 1 + {self.sym_count} symmetric parties"


@dataclass(frozen=True)
class AlphaSelection:
    """A measurement angle together with its robustness margins.

    ``entanglement_margin`` is |b1*b4 - b2*b3| of the normalized residual,
    ``nonmaximality_margin`` the gap between its two Schmidt coefficients,
    and ``residual_norm_sq`` the squared norm of the unnormalized residual.
    """

    alpha: float
    entanglement_margin: float
    nonmaximality_margin: float
    residual_norm_sq: float


def _split_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Contraction of the n-2 measured qubits maps the weight-k symmetric
    # component onto |0> and |1> of party 2 with these combinatorial
    # weights (the normalization of the symmetric basis is folded in).
    a = np.array([math.comb(n - 2, k) / math.sqrt(math.comb(n - 1, k)) for k in range(n - 1)])
    b = np.array([math.comb(n - 2, k) / math.sqrt(math.comb(n - 1, k + 1)) for k in range(n - 1)])
    return a, b


def residual_amplitude_table(state: NearSymmetricState, alphas: np.ndarray) -> np.ndarray:
    """Residual two-qubit amplitudes (b1, b2, b3, b4) for an array of angles.

    Party 2..n measurement direction is (cos a, sin a); returns an array of
    shape (4, len(alphas)) with the unnormalized amplitudes of the state
    left on parties 1 and 2.
    """
    n = state.n
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    cos, sin = np.cos(alphas), np.sin(alphas)
    # powers[k, t] = cos^(n-2-k) * sin^k, k = 0..n-2
    ks = np.arange(n - 1)
    powers = cos[None, :] ** (n - 2 - ks)[:, None] * sin[None, :] ** ks[:, None]
    wa, wb = _split_weights(n)
    b1 = (wa * state.h[: n - 1]) @ powers
    b2 = (wb * state.h[1:]) @ powers
    b3 = (wa * state.h_prime[: n - 1]) @ powers
    b4 = (wb * state.h_prime[1:]) @ powers
    return np.stack([b1, b2, b3, b4])


def concurrence_coefficients(state: NearSymmetricState) -> np.ndarray:
    """Coefficients c_m of the residual concurrence polynomial.

    The entanglement indicator b1*b4 - b2*b3 of the post-measurement state
    equals sum_m c_m sin^m(a) cos^(2n-4-m)(a); the 2n-3 coefficients
    returned here vanish identically exactly when the two coefficient
    families of the state are linearly dependent.
    """
    n = state.n
    norms = np.sqrt([math.comb(n - 1, k) for k in range(n)])
    g = state.h / norms
    gp = state.h_prime / norms
    binom = np.array([math.comb(n - 2, k) for k in range(n - 1)])
    u = binom * g[: n - 1]
    v = binom * gp[1:]
    up = binom * gp[: n - 1]
    vp = binom * g[1:]
    return np.convolve(u, v) - np.convolve(up, vp)


def poly_eval(coeffs: np.ndarray, alpha) -> complex | np.ndarray:
    """Evaluate the concurrence polynomial at angle(s) ``alpha``.

    Uses the sin/cos homogeneous form, which is stable everywhere except
    at the excluded angles pi/2 mod pi where the polynomial representation
    degenerates.
    """
    alphas = np.asarray(alpha, dtype=float)
    if np.any(np.abs(np.mod(alphas, math.pi) - math.pi / 2) < 1e-12):
        raise ValueError("alpha = pi/2 mod pi is outside the polynomial's domain")
    coeffs = np.asarray(coeffs)
    deg = len(coeffs) - 1
    ms = np.arange(deg + 1)
    flat = np.atleast_1d(alphas)
    terms = np.sin(flat)[None, :] ** ms[:, None] * np.cos(flat)[None, :] ** (deg - ms)[:, None]
    out = coeffs @ terms
    return complex(out[0]) if alphas.ndim == 0 else out


def first_party_separability(
    state: NearSymmetricState, tol: float = 1e-10
) -> tuple[bool, complex | None]:
    """Decide whether the state is product across the first-qubit cut.

    True iff every concurrence coefficient is negligible relative to the
    coefficient magnitudes, which holds exactly when h = lam * h' for some
    scalar lam (or one family vanishes).  When separable and h' is
    nonzero, also returns the least-squares estimate of lam, weighted by
    |h'_k|^2.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = concurrence_coefficients(state)
    scale = float(np.max(np.abs(state.h)) * np.max(np.abs(state.h_prime)))
    if scale == 0.0:
        separable = True
    else:
        separable = bool(np.max(np.abs(coeffs)) < tol * scale)
    if not separable:
        return False, None
    weight = np.abs(state.h_prime) ** 2
    denom = float(np.sum(weight * np.abs(state.h_prime) ** 2))
    if denom == 0.0:
        return True, None
    lam = complex(np.sum(weight * np.conj(state.h_prime) * state.h) / denom)
    return True, lam


def gme_check(
    state: NearSymmetricState, tol: float = 1e-9
) -> tuple[bool, BipartitionClass | None]:
    """Test entanglement across every bipartition of the parties.

    The 2..n permutation symmetry reduces the 2^(n-1)-1 bipartitions to
    n-1 classes, each represented by the group {party 1} + j symmetric
    parties; the reduced-state purity is class-invariant.  Returns
    (True, None) if every class has purity <= 1 - tol, otherwise
    (False, first failing class).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    psi = embed(state)
    psi = psi / np.linalg.norm(psi)
    n = state.n
    for j in range(n - 1):
        matrix = psi.reshape(2 ** (j + 1), 2 ** (n - j - 1))
        sing = np.linalg.svd(matrix, compute_uv=False)
        purity = float(np.sum(sing**4))
        if purity > 1.0 - tol:
            return False, BipartitionClass(sym_count=j)
    return True, None


def residual_margins(state: NearSymmetricState, alphas) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Entanglement margin, Schmidt-gap margin and squared norm per angle."""
    b = residual_amplitude_table(state, np.atleast_1d(np.asarray(alphas, dtype=float)))
    norm_sq = np.sum(np.abs(b) ** 2, axis=0)
    det = b[0] * b[3] - b[1] * b[2]
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = np.where(norm_sq > 0, np.abs(det) / norm_sq, 0.0)
    # For a normalized two-qubit state the Schmidt gap satisfies
    # (lmax - lmin)^2 = 1 - 2*lmax*lmin and lmax*lmin = |det|/norm^2.
    nonmax = np.sqrt(np.clip(1.0 - 2.0 * ent, 0.0, None))
    return ent, nonmax, norm_sq


def alpha_grid(grid_points: int) -> np.ndarray:
    """Uniform grid on [0, pi) with the half-step neighborhood of pi/2 removed."""
    if grid_points < 64:
        raise ValueError(f"grid_points must be >= 64, got {grid_points}")
    step = math.pi / grid_points
    alphas = np.arange(grid_points) * step
    return alphas[np.abs(alphas - math.pi / 2) > step / 2]


def select_alpha(
    state: NearSymmetricState,
    grid_points: int = 1024,
    margins: tuple[float, float, float] = (1e-8, 1e-6, 1e-10),
) -> AlphaSelection:
    """Pick the measurement angle with the most robust residual geometry.

    Scans the angle grid, keeps the points where all three margins exceed
    the thresholds (eps_ent, eps_max, eps_norm) and returns the one
    maximizing the smallest margin, smallest angle on ties.

    Raises AlphaSelectionError when no grid point qualifies; that outcome
    is always reported to the caller, never ignored.
    """
    eps_ent, eps_max, eps_norm = margins
    if min(eps_ent, eps_max, eps_norm) <= 0:
        raise ValueError("margins must be positive")
    alphas = alpha_grid(grid_points)
    ent, nonmax, norm_sq = residual_margins(state, alphas)
    valid = (ent > eps_ent) & (nonmax > eps_max) & (norm_sq > eps_norm)
    if not np.any(valid):
        raise AlphaSelectionError(
            "no angle on the grid achieves the required margins "
            f"(best entanglement margin {float(np.max(ent)):.3e})"
        )
    score = np.minimum(np.minimum(ent, nonmax), norm_sq)
    score[~valid] = -1.0
    best = int(np.argmax(score))
    return AlphaSelection(
        alpha=float(alphas[best]),
        entanglement_margin=float(ent[best]),
        nonmaximality_margin=float(nonmax[best]),
        residual_norm_sq=float(norm_sq[best]),
    )


def margins_at(state: NearSymmetricState, alpha: float) -> AlphaSelection:
    """Margins of a caller-supplied angle, in the same shape as select_alpha."""
    ent, nonmax, norm_sq = residual_margins(state, [alpha])
    return AlphaSelection(
        alpha=float(alpha),
        entanglement_margin=float(ent[0]),
        nonmaximality_margin=float(nonmax[0]),
        residual_norm_sq=float(norm_sq[0]),
    )


def sampled_root_count(values: np.ndarray, rel_tol: float = 1e-7) -> int:
    """Count roots of a sampled complex-valued curve.

    A root is either a run of samples with magnitude below ``rel_tol``
    times the curve's peak, or (for an effectively real curve) a sign
    change between adjacent samples outside such runs.
    """
    z = np.asarray(values)
    scale = float(np.max(np.abs(z)))
    if scale == 0.0:
        return 0
    near = np.abs(z) <= rel_tol * scale
    runs = int(np.sum(near[1:] & ~near[:-1])) + int(near[0])
    count = runs
    if float(np.max(np.abs(z.imag))) <= rel_tol * scale:
        x = z.real
        crossing = (x[1:] * x[:-1] < 0) & ~near[1:] & ~near[:-1]
        count += int(np.sum(crossing))
    return count
