"""Crossing-symmetric operators as families of standard-subspace endomorphisms.

For T on H (x) H and vectors psi1, psi2 the contraction
V(psi1, psi2) = 1/2 (a_L(psi1) T a_R*(psi2) + a_L(psi2) T a_R*(psi1)),
with a_L(psi) = <psi| (x) 1 and a_R*(psi) = 1 (x) |psi>, is an operator on H.
T is crossing symmetric exactly when all of these lie in E(H).
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .crossing import crossing_residual
from .errors import InvariantViolation, NotAResolution, NotEndomorphism, ShapeMismatch
from .modular import Involution, StandardSubspace, is_endomorphism, standard_subspace
from .tensor import as_matrix, base_dim, dagger, flip, frob


def a_left(psi: np.ndarray) -> np.ndarray:
    """a_L(psi) = <psi| (x) 1, an N x N^2 matrix."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.kron(np.conj(psi).reshape(1, -1), np.eye(psi.size))


def a_right_star(psi: np.ndarray) -> np.ndarray:
    """a_R*(psi) = 1 (x) |psi>, an N^2 x N matrix."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.kron(np.eye(psi.size), psi.reshape(-1, 1))


def contraction(t: np.ndarray, psi1: np.ndarray, psi2: np.ndarray) -> np.ndarray:
    """a_L(psi1) T a_R*(psi2), not symmetrized."""
    return a_left(psi1) @ t @ a_right_star(psi2)


def extract_v(t, psi1, psi2=None) -> np.ndarray:
    """Symmetrized contraction V_{psi1,psi2}(T); psi2 defaults to psi1."""
    t = as_matrix(t, square=True, name="T")
    n = base_dim(t)
    psi1 = np.asarray(psi1, dtype=complex).reshape(-1)
    psi2 = psi1 if psi2 is None else np.asarray(psi2, dtype=complex).reshape(-1)
    if psi1.size != n or psi2.size != n:
        raise ShapeMismatch(f"vectors must have length {n}")
    return 0.5 * (contraction(t, psi1, psi2) + contraction(t, psi2, psi1))


@dataclass(frozen=True, eq=False)
class EndoFamily:
    """A real-bilinear symmetric map (psi1, psi2) -> V(psi1, psi2) on C^N.

    Stored on the basis grid: for basis vectors e_a, e_b the four blocks are
    rr[a,b] = V(e_a, e_b), ri[a,b] = V(e_a, i e_b), ir[a,b] = V(i e_a, e_b)
    and ii[a,b] = V(i e_a, i e_b); each block has shape (N, N, N, N).
    """

    rr: np.ndarray
    ri: np.ndarray
    ir: np.ndarray
    ii: np.ndarray

    @property
    def base_dim(self) -> int:
        return self.rr.shape[0]

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray, np.ndarray], np.ndarray], n: int) -> "EndoFamily":
        eye = np.eye(n, dtype=complex)
        blocks = {k: np.zeros((n, n, n, n), dtype=complex) for k in ("rr", "ri", "ir", "ii")}
        for a in range(n):
            for b in range(n):
                ea, eb = eye[:, a], eye[:, b]
                blocks["rr"][a, b] = fn(ea, eb)
                blocks["ri"][a, b] = fn(ea, 1j * eb)
                blocks["ir"][a, b] = fn(1j * ea, eb)
                blocks["ii"][a, b] = fn(1j * ea, 1j * eb)
        return cls(**blocks)

    @classmethod
    def of_operator(cls, t: np.ndarray) -> "EndoFamily":
        t = as_matrix(t, square=True, name="T")
        return cls.from_function(lambda p, q: extract_v(t, p, q), base_dim(t))

    def __call__(self, psi1, psi2) -> np.ndarray:
        p = np.asarray(psi1, dtype=complex).reshape(-1)
        q = np.asarray(psi2, dtype=complex).reshape(-1)
        x1, y1, x2, y2 = p.real, p.imag, q.real, q.imag
        out = np.einsum("a,b,abij->ij", x1, x2, self.rr)
        out = out + np.einsum("a,b,abij->ij", x1, y2, self.ri)
        out = out + np.einsum("a,b,abij->ij", y1, x2, self.ir)
        return out + np.einsum("a,b,abij->ij", y1, y2, self.ii)

    def invariant_residuals(self) -> dict[str, float]:
        scale = max(1.0, frob(self.rr))
        return {
            "bilinear_i_swap": frob(self.ir + self.ri) / scale,
            "bilinear_ii": frob(self.ii - self.rr) / scale,
            "symmetric_rr": frob(self.rr - self.rr.transpose(1, 0, 2, 3)) / scale,
            "symmetric_ri": frob(self.ri - self.ir.transpose(1, 0, 2, 3)) / scale,
        }

    def check(self, tol: float = 1e-9) -> None:
        bad = {k: v for k, v in self.invariant_residuals().items() if v > tol}
        if bad:
            raise InvariantViolation(f"family violates its invariants: {bad}")

    def endomorphism_residual(self, s: Involution, h: StandardSubspace | None = None) -> float:
        """Largest endomorphism-test residual over the stored grid values."""
        h = standard_subspace(s) if h is None else h
        worst = 0.0
        n = self.base_dim
        for block in (self.rr, self.ri):
            for a in range(n):
                for b in range(n):
                    m = is_endomorphism(block[a, b], h, s)
                    worst = max(worst, m.residual, m.algebraic_residual)
        return worst


def reconstruct_t(fam: EndoFamily, tol: float = 1e-9) -> np.ndarray:
    """The operator T whose symmetrized contractions reproduce ``fam``.

    The unsymmetrized contraction is recovered as W(psi1, psi2) =
    V(psi1, psi2) + i V(i psi1, psi2), and T[(a,b),(c,d)] = W(e_a, e_d)[b, c].
    """
    fam.check(tol)
    n = fam.base_dim
    w = fam.rr + 1j * fam.ir  # w[a, d, b, c]
    t = w.transpose(0, 2, 3, 1).reshape(n * n, n * n)
    return t


def spanning_vectors(n: int) -> list[np.ndarray]:
    """e_a, e_a + e_b and e_a + i e_b: a polarization-complete test set."""
    eye = np.eye(n, dtype=complex)
    out = [eye[:, a] for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            out.append(eye[:, a] + eye[:, b])
            out.append(eye[:, a] + 1j * eye[:, b])
    return out


@dataclass(frozen=True)
class Characterization:
    endomorphic: bool
    endo_residual: float
    crossing_symmetric: bool
    crossing_residual: float

    @property
    def consistent(self) -> bool:
        return self.endomorphic == self.crossing_symmetric


def characterize(s: Involution, t, tol: float | None = None,
                 vectors: Sequence[np.ndarray] | None = None) -> Characterization:
    """Compare crossing symmetry of T with V_psi(T) in E(H) over a spanning test set."""
    t = as_matrix(t, square=True, name="T")
    n = s.dim
    tol = s.tol.identity_tol(n) if tol is None else tol
    h = standard_subspace(s)
    vectors = spanning_vectors(n) if vectors is None else vectors
    scale = max(1.0, frob(t))
    worst = 0.0
    for psi in vectors:
        m = is_endomorphism(extract_v(t, psi) / scale, h, s, tol)
        worst = max(worst, m.residual, m.algebraic_residual)
    cr = crossing_residual(s, t)
    return Characterization(worst <= tol, worst, cr <= tol, cr)


def _check_resolution(projs: Sequence[np.ndarray], n: int, tol: float) -> None:
    total = np.zeros((n, n), dtype=complex)
    for k, p in enumerate(projs):
        if p.shape != (n, n):
            raise ShapeMismatch("projection has the wrong shape")
        if frob(p - dagger(p)) > tol or frob(p @ p - p) > tol:
            raise NotAResolution(f"entry {k} is not an orthogonal projection")
        for q in projs[k + 1:]:
            if frob(p @ q) > tol:
                raise NotAResolution("projections are not mutually orthogonal")
        total = total + p
    if frob(total - np.eye(n)) > tol:
        raise NotAResolution("projections do not sum to the identity")


def spectral_sum_twist(projs: Sequence, v_ops: Sequence, s: Involution | None = None,
                       tol: float | None = None) -> np.ndarray:
    """T = (sum_k P_k (x) V_k) F for a resolution of the identity and endomorphisms V_k."""
    projs = [as_matrix(p, square=True, name="projection") for p in projs]
    v_ops = [as_matrix(v, square=True, name="V") for v in v_ops]
    if not projs or len(projs) != len(v_ops):
        raise ShapeMismatch("need one endomorphism per projection")
    n = projs[0].shape[0]
    tol = (s.tol.identity_tol(n) if s is not None else 1e-9 * n) if tol is None else tol
    _check_resolution(projs, n, tol)
    if s is not None:
        h = standard_subspace(s)
        for k, v in enumerate(v_ops):
            if v.shape != (n, n):
                raise ShapeMismatch("endomorphism has the wrong shape")
            if not is_endomorphism(v, h, s, tol).ok:
                raise NotEndomorphism(f"V_{k} does not preserve the standard subspace")
    total = sum(np.kron(p, v) for p, v in zip(projs, v_ops))
    return total @ flip(n)


def symmetrize_endomorphism(s: Involution, v) -> np.ndarray:
    """(V + S V S)/2, which is fixed by the involution V -> S V S and hence lies in E(H)."""
    v = as_matrix(v, square=True, name="V")
    svs = s.s.mat @ np.conj(v) @ np.conj(s.s.mat)
    return (v + svs) / 2
