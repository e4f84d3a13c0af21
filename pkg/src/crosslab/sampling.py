"""Seeded random matrices: Haar unitaries, involutions, operators."""

from __future__ import annotations

import numpy as np

from .config import Tolerances
from .modular import Involution, involution_from_parts
from .tensor import AntilinearOp, dagger


def rng(seed=None) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def ginibre(n: int, m: int | None = None, seed=None) -> np.ndarray:
    r = rng(seed)
    m = n if m is None else m
    return (r.standard_normal((n, m)) + 1j * r.standard_normal((n, m))) / np.sqrt(2)


def haar_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix, R diagonal made positive."""
    q, r = np.linalg.qr(ginibre(n, seed=seed))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_orthogonal(n: int, seed=None) -> np.ndarray:
    r = rng(seed)
    q, rr = np.linalg.qr(r.standard_normal((n, n)))
    return q * np.sign(np.diagonal(rr))


def random_vector(n: int, seed=None) -> np.ndarray:
    return ginibre(n, 1, seed).reshape(-1)


def random_operator(n: int, seed=None) -> np.ndarray:
    return ginibre(n, seed=seed)


def random_involution(n: int, seed=None, spread: float = 1.0, tol: Tolerances | None = None) -> Involution:
    """Random S = J Delta^{1/2}.

    With W Haar unitary, J = W W^T conj is an antiunitary involution and
    Delta = W exp(iA) W^* for real antisymmetric A satisfies J Delta J = Delta^{-1}.
    ``spread`` scales A and hence how far Delta is from the identity.
    """
    r = rng(seed)
    w = haar_unitary(n, r)
    a = r.standard_normal((n, n))
    a = spread * (a - a.T) / 2
    delta = w @ _expm_i_antisym(a) @ dagger(w)
    delta = (delta + dagger(delta)) / 2
    return involution_from_parts(AntilinearOp(w @ w.T), delta, tol)


def _expm_i_antisym(a: np.ndarray) -> np.ndarray:
    # i*A is Hermitian for real antisymmetric A, so exp(iA) is positive definite
    w, v = np.linalg.eigh(1j * a)
    return (v * np.exp(w)) @ dagger(v)
