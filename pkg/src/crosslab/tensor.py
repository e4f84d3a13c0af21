"""Dense complex linear algebra substrate.

Tensor index convention (used everywhere in the package): the basis vector
e_i (x) e_j of C^n (x) C^m sits at position ``i*m + j``, 0-based, which is what
``numpy.kron`` produces.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import NotHermitian, NotPositiveDefinite, ShapeMismatch


def as_matrix(a: Any, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2d complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-dimensional, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def base_dim(t: np.ndarray) -> int:
    """N for an N^2 x N^2 operator on C^N (x) C^N."""
    n2 = t.shape[0]
    if t.ndim != 2 or t.shape[1] != n2:
        raise ShapeMismatch(f"expected a square operator, got shape {t.shape}")
    n = math.isqrt(n2)
    if n * n != n2:
        raise ShapeMismatch(f"operator size {n2} is not a perfect square")
    return n


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def flip(n: int) -> np.ndarray:
    """The tensor flip F(v (x) w) = w (x) v on C^n (x) C^n."""
    if n < 1:
        raise ValueError("flip needs n >= 1")
    f = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            f[j * n + i, i * n + j] = 1.0
    return f


def basis_vector(n: int, k: int) -> np.ndarray:
    e = np.zeros(n, dtype=complex)
    e[k] = 1.0
    return e


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def rel_residual(a: np.ndarray, b: np.ndarray, scale: float | None = None) -> float:
    """||a - b||_F / max(1, scale), scale defaulting to max(||a||, ||b||)."""
    if scale is None:
        scale = max(frob(a), frob(b))
    return frob(np.asarray(a) - np.asarray(b)) / max(1.0, scale)


def _check_hermitian(h: np.ndarray, tol: Tolerances) -> None:
    scale = max(1.0, frob(h))
    if frob(h - dagger(h)) > tol.hermitian * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")


def herm_eigh(h: Any, tol: Tolerances | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian positive definite matrix."""
    tol = tol or default_tolerances()
    h = as_matrix(h, square=True, name="h")
    _check_hermitian(h, tol)
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w.min() <= tol.pd * max(norm, 1e-300):
        raise NotPositiveDefinite(f"minimum eigenvalue {w.min():.3e} is not positive")
    return w, v


def herm_power(h: Any, z: complex, tol: Tolerances | None = None) -> np.ndarray:
    """h**z through the spectral calculus, principal branch of the logarithm."""
    w, v = herm_eigh(h, tol)
    return (v * np.exp(complex(z) * np.log(w))) @ dagger(v)


def hs_inner(a: Any, b: Any) -> complex:
    """Hilbert-Schmidt inner product Tr(a* b), antilinear in the first slot."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))


def realify(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.concatenate([v.real, v.imag])


def complexify(r: np.ndarray, shape: Sequence[int] | None = None) -> np.ndarray:
    r = np.asarray(r, dtype=float).reshape(-1)
    n = r.size // 2
    v = r[:n] + 1j * r[n:]
    return v.reshape(shape) if shape is not None else v


def real_matrix_of(op: Callable[[np.ndarray], Any], shape: Sequence[int]) -> np.ndarray:
    """Matrix of a real-linear map on complex arrays of ``shape``.

    Input coordinates are (Re vec X, Im vec X); outputs of ``op`` may be an array
    or a sequence of arrays, which are flattened and concatenated.
    """
    shape = tuple(shape)
    n = int(np.prod(shape))
    cols = []
    for part in (1.0, 1j):
        for k in range(n):
            x = np.zeros(n, dtype=complex)
            x[k] = part
            cols.append(realify(_flatten_output(op(x.reshape(shape)))))
    return np.array(cols).T


def _flatten_output(out: Any) -> np.ndarray:
    if isinstance(out, np.ndarray):
        return out.reshape(-1)
    return np.concatenate([np.asarray(o, dtype=complex).reshape(-1) for o in out])


@dataclass(frozen=True)
class Nullspace:
    basis: list[np.ndarray]
    singular_values: np.ndarray
    cutoff: float

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def gap(self) -> tuple[float, float]:
        """(largest singular value treated as zero, smallest kept nonzero)."""
        s = self.singular_values
        zero = s[s <= self.cutoff]
        kept = s[s > self.cutoff]
        return (float(zero.max()) if zero.size else 0.0, float(kept.min()) if kept.size else math.inf)


def real_kernel(op: Callable[[np.ndarray], Any] | np.ndarray, shape: Sequence[int] | None = None,
                tol: Tolerances | None = None) -> Nullspace:
    """Kernel of a real-linear map with its singular spectrum.

    ``op`` is either a callable on complex arrays of ``shape`` or an already
    realified matrix acting on (Re vec X, Im vec X).
    """
    tol = tol or default_tolerances()
    if callable(op):
        if shape is None:
            raise ValueError("shape is required for callable maps")
        r = real_matrix_of(op, shape)
    else:
        r = np.asarray(op, dtype=float)
        if shape is None:
            shape = (r.shape[1] // 2,)
    n_in = r.shape[1]
    _, s, vh = np.linalg.svd(r, full_matrices=True)
    s_full = np.zeros(n_in)
    s_full[: s.size] = s
    smax = float(s.max()) if s.size else 0.0
    cutoff = tol.rank * smax
    rank = int(np.sum(s > cutoff)) if smax > 0 else 0
    basis = [complexify(vh[k], shape) for k in range(rank, n_in)]
    return Nullspace(basis, s_full, cutoff)


def real_nullspace(op: Callable[[np.ndarray], Any] | np.ndarray, shape: Sequence[int] | None = None,
                   tol: Tolerances | None = None) -> list[np.ndarray]:
    """Real-orthonormal basis (w.r.t. Re<.,.>) of the kernel of a real-linear map."""
    return real_kernel(op, shape, tol).basis


class AntilinearOp:
    """The antilinear map x -> mat @ conj(x).

    Composition with ``@`` follows
      A1 @ A2 -> linear matrix  M1 conj(M2)
      A @ L   -> antilinear     M conj(L)
      L @ A   -> antilinear     L M
    and the adjoint is x -> mat.T @ conj(x).
    """

    __array_ufunc__ = None

    def __init__(self, mat: Any):
        self.mat = as_matrix(mat, square=True, name="antilinear matrix")
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __call__(self, x: Any) -> np.ndarray:
        return self.mat @ np.conj(np.asarray(x, dtype=complex))

    def adjoint(self) -> "AntilinearOp":
        return AntilinearOp(self.mat.T)

    @property
    def H(self) -> "AntilinearOp":
        return self.adjoint()

    def __matmul__(self, other: Any):
        if isinstance(other, AntilinearOp):
            return self.mat @ np.conj(other.mat)
        return AntilinearOp(self.mat @ np.conj(as_matrix(other)))

    def __rmatmul__(self, other: Any) -> "AntilinearOp":
        return AntilinearOp(as_matrix(other) @ self.mat)

    def tensor(self, other: "AntilinearOp") -> "AntilinearOp":
        return AntilinearOp(np.kron(self.mat, other.mat))

    @classmethod
    def conjugation(cls, n: int) -> "AntilinearOp":
        return cls(np.eye(n))

    def __repr__(self) -> str:
        return f"AntilinearOp(dim={self.dim})"


def conj_by(a: AntilinearOp, t: np.ndarray, b: AntilinearOp) -> np.ndarray:
    """Linear matrix of the composite a T b for antilinear a, b and linear T."""
    return a.mat @ np.conj(t) @ np.conj(b.mat)


def matrix_to_json(m: Any) -> dict:
    m = as_matrix(m)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed matrix object: {exc}") from exc
    if len(data) != rows * cols:
        raise ShapeMismatch(f"matrix data has {len(data)} entries, expected {rows * cols}")
    vals = np.array([complex(float(re), float(im)) for re, im in data], dtype=complex)
    return as_matrix(vals.reshape(rows, cols))


def vector_to_json(v: Any) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).reshape(-1)]


def vector_from_json(data: list) -> np.ndarray:
    return np.array([complex(float(re), float(im)) for re, im in data], dtype=complex)
