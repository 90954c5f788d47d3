import numpy as np
import pytest

from gmnlcert import NearSymmetricState, embed, random_near_symmetric


def reduced_purity(psi: np.ndarray, n: int, keep: tuple[int, ...]) -> float:
    """Purity of the reduced state on 1-based parties ``keep``.

    Independent of the package's implementation: forms the full density
    matrix of the kept parties by explicit index summation.
    """
    axes = tuple(j - 1 for j in keep)
    other = tuple(a for a in range(n) if a not in axes)
    tensor = psi.reshape((2,) * n)
    moved = np.moveaxis(tensor, axes + other, tuple(range(n)))
    matrix = moved.reshape(2 ** len(axes), 2 ** len(other))
    rho = matrix @ matrix.conj().T
    return float(np.real(np.trace(rho @ rho)))


def assert_same_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10):
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    overlap = abs(np.vdot(u, v))
    assert abs(overlap - 1.0) < tol, f"vectors differ beyond a phase (overlap {overlap})"


@pytest.fixture
def ghz3():
    from gmnlcert import ghz_state

    return ghz_state(3)


def random_states(n: int, count: int, base_seed: int):
    return [random_near_symmetric(n, seed=base_seed + i) for i in range(count)]


def normalized_embed(state: NearSymmetricState) -> np.ndarray:
    psi = embed(state)
    return psi / np.linalg.norm(psi)
