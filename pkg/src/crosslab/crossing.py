"""The crossing map on operators of H (x) H and its companion identities.

Matrix elements of a bipartite operator are written
T^{jl}_{ik} = <e_j (x) e_l, T (e_i (x) e_k)>, and ``T[(j,l),(i,k)]`` is the
corresponding entry of the N^2 x N^2 matrix.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ShapeMismatch
from .modular import Involution, involution_from_parts, xi_and_ps
from .report import VerificationReport, timed
from .tensor import (
    AntilinearOp,
    as_matrix,
    base_dim,
    dagger,
    flip,
    frob,
    rel_residual,
)


def _operator(s: Involution, t: Any) -> np.ndarray:
    t = as_matrix(t, square=True, name="T")
    n = base_dim(t)
    if n != s.dim:
        raise ShapeMismatch(f"T acts on C^{n} (x) C^{n} but S acts on C^{s.dim}")
    return t


def cross_oracle(s: Involution, t: Any) -> np.ndarray:
    """Reference implementation straight from the defining matrix elements.

    <e_a (x) e_b, Cross(T)(e_c (x) e_d)> = <e_b (x) S* e_d, T (S e_a (x) e_c)>.
    """
    t = _operator(s, t)
    n = s.dim
    ms = s.s.mat
    eye = np.eye(n, dtype=complex)
    out = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        s_ea = ms[:, a]
        for c in range(n):
            image = t @ np.kron(s_ea, eye[:, c])
            for b in range(n):
                for d in range(n):
                    sstar_ed = ms[d, :]
                    bra = np.kron(eye[:, b], sstar_ed)
                    out[a * n + b, c * n + d] = np.vdot(bra, image)
    return out


def _rotate(t: np.ndarray, n: int) -> np.ndarray:
    """Index rotation C^{ij}_{kl} = T^{jl}_{ik} (crossing for plain conjugation)."""
    t4 = t.reshape(n, n, n, n)
    return np.ascontiguousarray(t4.transpose(2, 0, 3, 1)).reshape(n * n, n * n)


def _cross_dressed(basis: np.ndarray, left: np.ndarray | None, right: np.ndarray | None,
                   t: np.ndarray) -> np.ndarray:
    n = basis.shape[0]
    bb = np.kron(basis, basis)
    rotated = bb @ _rotate(dagger(bb) @ t @ bb, n) @ dagger(bb)
    if left is not None:
        rotated = np.kron(left, np.eye(n)) @ rotated @ np.kron(np.eye(n), right)
    return rotated


def cross_fast(s: Involution, t: Any) -> np.ndarray:
    """Cross_S(T) via the J-fixed basis, an index rotation and modular dressing.

    In a basis fixed by J the map Cross_J is a pure permutation of matrix
    entries; Cross_S = (Delta^{1/2} (x) 1) Cross_J(T) (1 (x) Delta^{-1/2}).
    """
    t = _operator(s, t)
    return _cross_dressed(s.j_basis, s.delta_power(0.5), s.delta_power(-0.5), t)


def cross_j(s: Involution, t: Any) -> np.ndarray:
    """Crossing map of the antiunitary part J alone."""
    t = _operator(s, t)
    return _cross_dressed(s.j_basis, None, None, t)


cross = cross_fast


def cross_inverse(s: Involution, t: Any) -> np.ndarray:
    """Cross_S^{-1}(T) = Cross_S(T*)*."""
    t = _operator(s, t)
    return dagger(cross_fast(s, dagger(t)))


def cross_power(s: Involution, t: Any, k: int) -> np.ndarray:
    out = _operator(s, t)
    step = cross_fast if k >= 0 else cross_inverse
    for _ in range(abs(k)):
        out = step(s, out)
    return out


def crossing_residual(s: Involution, t: Any) -> float:
    """||Cross_S(T) - T*||_F / max(1, ||T||_F)."""
    t = _operator(s, t)
    return frob(cross_fast(s, t) - dagger(t)) / max(1.0, frob(t))


def is_crossing_symmetric(s: Involution, t: Any, tol: float | None = None) -> tuple[bool, float]:
    r = crossing_residual(s, t)
    tol = s.tol.identity_tol(s.dim) if tol is None else tol
    return r <= tol, r


# modular actions on operator space


def delta_in(s: Involution, alpha: float, t: np.ndarray) -> np.ndarray:
    """(1 (x) Delta^a) T (Delta^{-a} (x) 1)."""
    n = s.dim
    return np.kron(np.eye(n), s.delta_power(alpha)) @ t @ np.kron(s.delta_power(-alpha), np.eye(n))


def delta_out(s: Involution, alpha: float, t: np.ndarray) -> np.ndarray:
    """(Delta^a (x) 1) T (1 (x) Delta^{-a})."""
    n = s.dim
    return np.kron(s.delta_power(alpha), np.eye(n)) @ t @ np.kron(np.eye(n), s.delta_power(-alpha))


def delta_both(s: Involution, alpha: float, t: np.ndarray) -> np.ndarray:
    """(Delta^a (x) Delta^a) T (Delta^{-a} (x) Delta^{-a}), the composite of the in and out actions."""
    return delta_in(s, alpha, delta_out(s, alpha, t))


def j_flip(s: Involution, t: np.ndarray) -> np.ndarray:
    """F (J (x) J) T (J (x) J) F as a linear matrix."""
    n = s.dim
    f = flip(n)
    jj = s.j.tensor(s.j)
    return f @ jj.mat @ np.conj(t) @ np.conj(jj.mat) @ f


@dataclass(frozen=True)
class HatOperators:
    """S-hat, J-hat and Delta-hat acting on operators of H (x) H.

    S-hat and J-hat are antilinear involutions of operator space; Delta-hat is
    the positive one-parameter family (1 (x) Delta^a) T (Delta^{-a} (x) 1).
    """

    involution: Involution
    j_only: Involution

    def s_hat(self, t: np.ndarray) -> np.ndarray:
        return dagger(cross_fast(self.involution, t))

    def j_hat(self, t: np.ndarray) -> np.ndarray:
        return dagger(cross_fast(self.j_only, t))

    def delta_hat(self, alpha: float, t: np.ndarray) -> np.ndarray:
        return delta_in(self.involution, alpha, t)

    def antilinear_matrix(self, which: str = "s") -> np.ndarray:
        """Matrix M with X(vec T) = M conj(vec T) over the matrix-unit basis."""
        apply = self.s_hat if which == "s" else self.j_hat
        n2 = self.involution.dim ** 2
        cols = []
        for k in range(n2 * n2):
            e = np.zeros(n2 * n2, dtype=complex)
            e[k] = 1.0
            cols.append(apply(e.reshape(n2, n2)).reshape(-1))
        return np.array(cols).T

    def polar_square(self) -> np.ndarray:
        """Linear matrix of S-hat* S-hat with respect to the Hilbert-Schmidt product."""
        m = self.antilinear_matrix("s")
        return m.T @ np.conj(m)


def hat_operators(s: Involution) -> HatOperators:
    j_only = involution_from_parts(s.j, np.eye(s.dim), s.tol)
    return HatOperators(s, j_only)


def delta_in_matrix(s: Involution, alpha: float) -> np.ndarray:
    """Linear matrix of T -> (1 (x) Delta^a) T (Delta^{-a} (x) 1) on vec(T) (row-major)."""
    n = s.dim
    left = np.kron(np.eye(n), s.delta_power(alpha))
    right = np.kron(s.delta_power(-alpha), np.eye(n))
    # vec(L T R) = (L (x) R^T) vec(T) for row-major vectorization
    return np.kron(left, right.T)


def relation_s1_s2(s1: Involution, s2: Involution, t: np.ndarray) -> np.ndarray:
    """Cross_{S1}(T) expressed through Cross_{S2}(T).

    Equals (S1* S2* (x) 1) Cross_{S2}(T) (1 (x) S2* S1*).
    """
    n = s1.dim
    a = s1.s_star @ s2.s_star
    b = s2.s_star @ s1.s_star
    return np.kron(a, np.eye(n)) @ cross_fast(s2, t) @ np.kron(np.eye(n), b)


def cross_square_formula(s: Involution, t: np.ndarray) -> np.ndarray:
    """F (S* (x) S*) T* (S* (x) S*) F, a closed form of Cross^2(T)."""
    n = s.dim
    f = flip(n)
    k = np.kron(s.s.mat.T, s.s.mat.T)
    return f @ k @ t.T @ np.conj(k) @ f


def cross_power_checks(s: Involution, t: Any, alphas: Sequence[float] = (0.3, -0.7),
                       tol: float | None = None) -> VerificationReport:
    """Second/fourth powers, inverse and exchange relations of the crossing map."""
    t = _operator(s, t)
    n = s.dim
    tol = s.tol.identity_tol(n) if tol is None else tol
    rep = VerificationReport("crossing-powers")
    with timed(rep):
        c1 = cross_fast(s, t)
        c2 = cross_fast(s, c1)
        c4 = cross_fast(s, cross_fast(s, c2))
        dd = np.kron(s.delta, s.delta)
        ddi = np.kron(s.delta_power(-1), s.delta_power(-1))
        rep.add("cross4", rel_residual(c4, dd @ t @ ddi), tol)
        rep.add("cross2", rel_residual(c2, cross_square_formula(s, t)), tol)
        rep.add("inverse", rel_residual(cross_inverse(s, c1), t), tol)
        rep.add("inverse_left", rel_residual(cross_fast(s, cross_inverse(s, t)), t), tol)
        for a in alphas:
            rep.add(f"exchange_in_out[{a:+.2f}]",
                    rel_residual(cross_fast(s, delta_in(s, a, t)), delta_out(s, a, c1)), tol, alpha=a)
            rep.add(f"exchange_out_in[{a:+.2f}]",
                    rel_residual(cross_fast(s, delta_out(s, a, t)), delta_in(s, a, c1)), tol, alpha=a)
        rep.add("cross2_jflip", rel_residual(c2, j_flip(s, delta_both(s, -0.5, dagger(t)))), tol)
        rep.add("exchange_jflip",
                rel_residual(cross_fast(s, j_flip(s, t)), delta_both(s, 0.5, dagger(c1))), tol)
        rep.add("exchange_star",
                rel_residual(cross_fast(s, dagger(t)), j_flip(s, delta_both(s, -0.5, c1))), tol)
    return rep


def kms_sides(s: Involution, t: np.ndarray, tt: float, psis: Sequence[np.ndarray],
              crossed: np.ndarray | None = None) -> tuple[complex, complex]:
    """Both sides of the boundary condition at z = t + i/2.

    Left: the analytic continuation
    <psi1 (x) Delta^{1/2 + it} psi2, T (Delta^{-1/2 + it} psi3 (x) psi4)>.
    Right: <J psi3 (x) psi1, (Delta^{-it} (x) 1) Cross_S(T) (1 (x) Delta^{it}) (psi4 (x) J psi2)>.
    """
    p1, p2, p3, p4 = (np.asarray(p, dtype=complex) for p in psis)
    n = s.dim
    lhs = np.vdot(np.kron(p1, s.delta_power(0.5 + 1j * tt) @ p2),
                  t @ np.kron(s.delta_power(-0.5 + 1j * tt) @ p3, p4))
    c = cross_oracle(s, t) if crossed is None else crossed
    op = np.kron(s.delta_power(-1j * tt), np.eye(n)) @ c @ np.kron(np.eye(n), s.delta_power(1j * tt))
    rhs = np.vdot(np.kron(s.j(p3), p1), op @ np.kron(p4, s.j(p2)))
    return complex(lhs), complex(rhs)


def kms_boundary_check(s: Involution, t: Any, ts: Sequence[float], vecs: Sequence[np.ndarray],
                       tol: float = 1e-8) -> VerificationReport:
    """Relative agreement of both sides of the boundary condition for each t."""
    t = _operator(s, t)
    if len(vecs) != 4:
        raise ShapeMismatch("the boundary condition needs four vectors")
    rep = VerificationReport("kms")
    with timed(rep):
        crossed = cross_oracle(s, t)
        scale = frob(t) * np.prod([np.linalg.norm(v) for v in vecs]) * max(
            1.0, float(np.max(s.modular_spectrum)) ** 0.5, float(np.max(1 / s.modular_spectrum)) ** 0.5)
        for tt in ts:
            lhs, rhs = kms_sides(s, t, tt, vecs, crossed)
            rep.add(f"boundary[t={tt:+.3f}]", abs(lhs - rhs) / max(1.0, scale), tol,
                    t=tt, lhs=[lhs.real, lhs.imag], rhs=[rhs.real, rhs.imag])
    return rep


def crossing_basic_checks(s: Involution, t: Any, tol: float | None = None) -> VerificationReport:
    """Oracle agreement, flip fixed point, unit/P_S exchange and crossing symmetry of T."""
    t = _operator(s, t)
    n = s.dim
    tol = s.tol.identity_tol(n) if tol is None else tol
    rep = VerificationReport("crossing-basic")
    with timed(rep):
        f = flip(n)
        _, ps = xi_and_ps(s)
        rep.add("oracle_agreement", rel_residual(cross_fast(s, t), cross_oracle(s, t)), tol)
        rep.add("flip_fixed", rel_residual(cross_fast(s, f), f), tol)
        rep.add("unit_to_ps", rel_residual(cross_fast(s, np.eye(n * n)), ps), tol)
        rep.add("ps_to_unit", rel_residual(cross_fast(s, ps), np.eye(n * n)), tol)
        rep.add("crossing_symmetric", crossing_residual(s, t), tol)
    return rep


__all__ = [
    "AntilinearOp",
    "HatOperators",
    "cross",
    "cross_fast",
    "cross_inverse",
    "cross_j",
    "cross_oracle",
    "cross_power",
    "cross_power_checks",
    "cross_square_formula",
    "crossing_basic_checks",
    "crossing_residual",
    "delta_both",
    "delta_in",
    "delta_in_matrix",
    "delta_out",
    "hat_operators",
    "is_crossing_symmetric",
    "j_flip",
    "kms_boundary_check",
    "kms_sides",
    "relation_s1_s2",
]
