"""State representations and elementary state-vector operations.

Two representations are used throughout:

* ``NearSymmetricState`` -- an n-qubit pure state that is invariant under
  permutations of parties 2..n, stored as the 2n complex coefficients
  ``(h_k, h_prime_k)`` of its expansion over the symmetric basis of the
  last n-1 qubits.
* dense state vectors -- plain complex ``numpy`` arrays of length ``2**n``.
  The basis index is read as a bit string with party 1 as the most
  significant bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

NORM_TOL = 1e-12


def _as_complex_vector(values, length: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.shape != (length,):
        raise ValueError(f"{name} must have length {length}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class NearSymmetricState:
    """n-qubit pure state symmetric under permutations of parties 2..n.

    ``h[k]`` multiplies the branch where party 1 is |0> and the remaining
    n-1 qubits carry the normalized weight-k symmetric component;
    ``h_prime[k]`` multiplies the |1> branch.  The coefficients must
    satisfy sum_k |h_k|^2 + |h'_k|^2 = 1 within 1e-12.
    """

    n: int
    h: np.ndarray = field(repr=False)
    h_prime: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        object.__setattr__(self, "h", _as_complex_vector(self.h, self.n, "h"))
        object.__setattr__(self, "h_prime", _as_complex_vector(self.h_prime, self.n, "h_prime"))
        total = float(np.sum(np.abs(self.h) ** 2 + np.abs(self.h_prime) ** 2))
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"coefficients are not normalized: sum of squares = {total!r}")


def state_from_dict(doc: dict) -> NearSymmetricState:
    """Parse the state-file JSON document ``{"n":…, "h":…, "h_prime":…}``."""
    if not isinstance(doc, dict):
        raise ValueError("state document must be a JSON object")
    for key in ("n", "h", "h_prime"):
        if key not in doc:
            raise ValueError(f"state document is missing field '{key}'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError("field 'n' must be an integer")
    coeffs = {}
    for key in ("h", "h_prime"):
        rows = doc[key]
        if not isinstance(rows, list) or len(rows) != n:
            raise ValueError(f"field '{key}' must be a list of {n} [re, im] pairs")
        vals = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 2:
                raise ValueError(f"field '{key}[{i}]' must be an [re, im] pair")
            re, im = row
            if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
                raise ValueError(f"field '{key}[{i}]' must contain numbers")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValueError(f"field '{key}[{i}]' contains a non-finite number")
            vals.append(complex(re, im))
        coeffs[key] = vals
    return NearSymmetricState(n=n, h=coeffs["h"], h_prime=coeffs["h_prime"])


def state_to_dict(state: NearSymmetricState) -> dict:
    return {
        "n": state.n,
        "h": [[z.real, z.imag] for z in state.h],
        "h_prime": [[z.real, z.imag] for z in state.h_prime],
    }


# --- dense state-vector operations ---

def dicke(n: int, k: int) -> np.ndarray:
    """Equal superposition of all weight-k n-bit strings, normalized."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    amp = np.zeros(2**n, dtype=complex)
    value = 1.0 / math.sqrt(math.comb(n, k))
    for ones in combinations(range(n), k):
        amp[sum(1 << b for b in ones)] = value
    return amp


def embed(state: NearSymmetricState) -> np.ndarray:
    """Expand a NearSymmetricState into its dense 2^n amplitude vector."""
    n = state.n
    psi = np.zeros(2**n, dtype=complex)
    for k in range(n):
        branch = np.array([state.h[k], state.h_prime[k]])
        psi += np.kron(branch, dicke(n - 1, k))
    return psi


def project_party(psi: np.ndarray, j: int, bra: np.ndarray) -> np.ndarray:
    """Contract the single-qubit functional ``bra`` against qubit j.

    Returns the unnormalized (n-1)-qubit vector; no renormalization is
    applied.  ``bra`` holds the coefficients of <0| and <1| and is applied
    without conjugation.
    """
    dim = psi.shape[0]
    n = dim.bit_length() - 1
    if dim != 2**n:
        raise ValueError(f"dense state length {dim} is not a power of two")
    if not 1 <= j <= n:
        raise ValueError(f"party index {j} out of range 1..{n}")
    v = np.asarray(bra, dtype=complex)
    if v.shape != (2,):
        raise ValueError("bra must have exactly two components")
    if not np.any(v):
        raise ValueError("bra must be nonzero")
    tensor = psi.reshape((2,) * n)
    return np.tensordot(v, tensor, axes=(0, j - 1)).reshape(-1)


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hermitian inner product <a|b> of two dense states."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


# --- state constructors ---

def ghz_state(n: int) -> NearSymmetricState:
    """(|0...0> + |1...1>)/sqrt(2)."""
    h = np.zeros(n, dtype=complex)
    hp = np.zeros(n, dtype=complex)
    h[0] = 1.0 / math.sqrt(2.0)
    hp[n - 1] = 1.0 / math.sqrt(2.0)
    return NearSymmetricState(n=n, h=h, h_prime=hp)


def w_state(n: int) -> NearSymmetricState:
    """Equal superposition of all weight-1 strings."""
    return dicke_split(n, 1)


def dicke_split(n: int, k: int) -> NearSymmetricState:
    """n-qubit weight-k symmetric state, split over the first qubit.

    The |0> branch keeps weight k on the remaining qubits and the |1>
    branch keeps weight k-1, with branching weights sqrt((n-k)/n) and
    sqrt(k/n).
    """
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    h = np.zeros(n, dtype=complex)
    hp = np.zeros(n, dtype=complex)
    if k < n:
        h[k] = math.sqrt((n - k) / n)
    if k > 0:
        hp[k - 1] = math.sqrt(k / n)
    return NearSymmetricState(n=n, h=h, h_prime=hp)


def biseparable_state(n: int, lam: complex, h_prime) -> NearSymmetricState:
    """Normalized state with h_k = lam * h'_k for every k.

    Such a state is a product of a single-qubit state with a symmetric
    state of the remaining parties, hence separable across the first cut.
    """
    hp = np.asarray(h_prime, dtype=complex)
    if hp.shape != (n,):
        raise ValueError(f"h_prime must have length {n}")
    if not np.any(hp):
        raise ValueError("h_prime must be nonzero")
    h = complex(lam) * hp
    scale = math.sqrt(float(np.sum(np.abs(h) ** 2 + np.abs(hp) ** 2)))
    return NearSymmetricState(n=n, h=h / scale, h_prime=hp / scale)


def random_near_symmetric(n: int, seed: int, purity_tol: float = 1e-9) -> NearSymmetricState:
    """Random state of the class, entangled across every bipartition.

    All 2n coefficients are drawn i.i.d. with independent standard-normal
    real and imaginary parts from ``numpy.random.default_rng`` (PCG64),
    then normalized.  Draws failing the entanglement check are rejected
    and resampled from the same stream, so the output is a deterministic
    function of the seed.
    """
    from .gme import gme_check

    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    rng = np.random.default_rng(seed)
    while True:
        z = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
        z /= np.linalg.norm(z)
        state = NearSymmetricState(n=n, h=z[0], h_prime=z[1])
        if gme_check(state, purity_tol)[0]:
            return state
