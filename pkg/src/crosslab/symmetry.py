"""Crossing-symmetric operators commuting with a diagonal group action U (x) U."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .crossing import cross_fast, crossing_residual, j_flip
from .endomorphisms import extract_v
from .errors import NotAntiunitary, PreconditionFailed, ShapeMismatch
from .modular import Involution, conjugation, involution_from_parts, xi_and_ps
from .report import VerificationReport, timed
from .sampling import haar_orthogonal, haar_unitary, rng
from .tensor import (
    AntilinearOp,
    Nullspace,
    as_matrix,
    conj_by,
    dagger,
    flip,
    frob,
    real_kernel,
    realify,
    rel_residual,
)


@dataclass(frozen=True, eq=False)
class SymmetryConstraint:
    involution: Involution
    generators: tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        n = self.involution.dim
        gens = []
        for u in self.generators:
            u = as_matrix(u, square=True, name="generator")
            if u.shape[0] != n:
                raise ShapeMismatch("generator acts on the wrong dimension")
            if rel_residual(dagger(u) @ u, np.eye(n)) > self.involution.tol.identity_tol(n):
                raise NotAntiunitary("generator is not unitary")
            gens.append(u)
        object.__setattr__(self, "generators", tuple(gens))

    def constraint_map(self):
        """T -> [Cross_S(T) - T*, [T, U (x) U] for each generator]."""
        s = self.involution
        n = s.dim
        doubled = [np.kron(u, u) for u in self.generators]

        def op(x: np.ndarray) -> list[np.ndarray]:
            t = x.reshape(n * n, n * n)
            out = [cross_fast(s, t) - dagger(t)]
            out.extend(t @ uu - uu @ t for uu in doubled)
            return out

        return op


@dataclass(frozen=True)
class InvariantSpace:
    basis: list[np.ndarray]
    kernel: Nullspace

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def gap(self) -> tuple[float, float]:
        return self.kernel.gap

    def projection_residual(self, x: np.ndarray) -> float:
        """Distance of x from the real span of the basis, relative to |x|."""
        if not self.basis:
            return float(np.linalg.norm(x)) / max(1e-300, float(np.linalg.norm(x)))
        q = np.column_stack([realify(b) for b in self.basis])
        r = realify(x)
        return float(np.linalg.norm(r - q @ (q.T @ r))) / max(1e-300, float(np.linalg.norm(r)))


def invariant_crossing_space(c: SymmetryConstraint) -> InvariantSpace:
    """Real-orthonormal basis of the U-invariant S-crossing-symmetric operators."""
    n = c.involution.dim
    ker = real_kernel(c.constraint_map(), (n * n, n * n), c.involution.tol)
    return InvariantSpace([b.reshape(n * n, n * n) for b in ker.basis], ker)


def basis_residuals(c: SymmetryConstraint, space: InvariantSpace) -> list[dict[str, float]]:
    out = []
    for t in space.basis:
        comm = max((frob(t @ np.kron(u, u) - np.kron(u, u) @ t) for u in c.generators), default=0.0)
        out.append({"crossing": crossing_residual(c.involution, t), "commutator": comm})
    return out


def p_j(j: AntilinearOp) -> np.ndarray:
    """P_J = |xi_J><xi_J| for the antiunitary involution J."""
    _, ps = xi_and_ps(involution_from_parts(j, np.eye(j.dim)))
    return ps


def swap_conjugation(n: int) -> AntilinearOp:
    """J exchanging e_0 and e_1 composed with complex conjugation."""
    p = np.eye(n)
    p[[0, 1]] = p[[1, 0]]
    return AntilinearOp(p)


def o_n_involution(n: int, delta_trivial: bool) -> Involution:
    """S for the orthogonal-group cases: Delta = 1, or Delta = diag(2, 1/2, 1, ...)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if delta_trivial:
        return conjugation(n)
    spectrum = np.ones(n)
    spectrum[:2] = (2.0, 0.5)
    return involution_from_parts(swap_conjugation(n), np.diag(spectrum))


def o_n_expected(n: int, delta_trivial: bool, j: AntilinearOp | None = None) -> tuple[int, list[np.ndarray]]:
    """Expected real dimension and a spanning set of the O(N)-invariant crossing-symmetric space."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if j is None:
        j = o_n_involution(n, delta_trivial).j
    f = flip(n)
    one = np.eye(n * n)
    pj = p_j(j)
    if delta_trivial:
        return 3, [one + pj, 1j * (one - pj), f]
    if n == 2:
        return 2, [f, 1j * (one - pj)]
    return 1, [f]


def o_n_generators(s: Involution, seed=0, rotations: int | None = None) -> list[np.ndarray]:
    """Generators of a dense subgroup of O(N), real in the J-fixed basis of s.

    N = 2 uses the rotation by pi*sqrt(2) plus a reflection; N >= 3 uses
    random rotations plus a reflection.
    """
    n = s.dim
    b = s.j_basis
    r = rng(seed)
    if n == 2:
        th = np.pi * np.sqrt(2)
        real = [np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])]
    else:
        real = []
        for _ in range(2 if rotations is None else rotations):
            o = haar_orthogonal(n, r)
            if np.linalg.det(o) < 0:
                o[:, 0] *= -1
            real.append(o)
    refl = np.eye(n)
    refl[0, 0] = -1
    real.append(refl)
    return [b @ o @ dagger(b) for o in real]


def o_n_case(n: int, delta_trivial: bool, seed=0) -> SymmetryConstraint:
    s = o_n_involution(n, delta_trivial)
    return SymmetryConstraint(s, tuple(o_n_generators(s, seed)))


def unitary_group_case(n: int = 3, count: int = 6, seed=0, s: Involution | None = None) -> SymmetryConstraint:
    """Several Haar unitaries: together they generate a dense subgroup of U(N)."""
    r = rng(seed)
    s = conjugation(n) if s is None else s
    return SymmetryConstraint(s, tuple(haar_unitary(n, r) for _ in range(count)))


def klr_matrix(lam: float = 2.0) -> tuple[np.ndarray, Involution]:
    """T = i(P_J - 1) for N = 2 and Delta = diag(lam, 1/lam), with its involution."""
    s = involution_from_parts(swap_conjugation(2), np.diag([lam, 1 / lam]))
    return 1j * (p_j(s.j) - np.eye(4)), s


def yang_baxter_residual(t: np.ndarray) -> float:
    n2 = t.shape[0]
    n = int(round(np.sqrt(n2)))
    eye = np.eye(n)
    t1, t2 = np.kron(t, eye), np.kron(eye, t)
    return rel_residual(t1 @ t2 @ t1, t2 @ t1 @ t2)


def span_residuals(space: InvariantSpace, predicted: Sequence[np.ndarray]) -> tuple[float, float]:
    """(max residual of predicted operators against the space, max residual of the space against them)."""
    forward = max((space.projection_residual(p) for p in predicted), default=0.0)
    q = np.column_stack([realify(p) for p in predicted]) if predicted else np.zeros((0, 0))
    if predicted:
        q, _ = np.linalg.qr(q)
    backward = 0.0
    for b in space.basis:
        r = realify(b)
        res = r - q @ (q.T @ r) if predicted else r
        backward = max(backward, float(np.linalg.norm(res)) / float(np.linalg.norm(r)))
    return forward, backward


def exchange_lemma_checks(s: Involution, t, u, psi: np.ndarray | None = None,
                          tol: float | None = None) -> VerificationReport:
    """Transfer of a U (x) U symmetry of T to Cross_S(T) and to the contractions V_psi(T)."""
    t = as_matrix(t, square=True, name="T")
    u = as_matrix(u, square=True, name="U")
    n = s.dim
    tol = s.tol.identity_tol(n) if tol is None else tol
    uu = np.kron(u, u)
    scale = max(1.0, frob(t))
    pre = frob(t @ uu - uu @ t) / scale
    if pre > tol:
        raise PreconditionFailed(f"[T, U (x) U] has relative size {pre:.3e}")
    rep = VerificationReport("exchange-lemma")
    with timed(rep):
        eye = np.eye(n)
        c = cross_fast(s, t)
        s_star = s.s_star
        a_left = conj_by(s_star, u, s_star)
        a_right = conj_by(s_star, dagger(u), s_star)
        rep.add("cross_transfer", rel_residual(np.kron(a_left, u) @ c @ np.kron(dagger(u), a_right), c), tol)
        symmetric = crossing_residual(s, t) <= tol
        rep.info["crossing_symmetric"] = symmetric
        if symmetric:
            left = conj_by(s.s, u, s.s) @ dagger(u)
            right = u @ conj_by(s.s, dagger(u), s.s)
            rep.add("twisted_invariance", rel_residual(np.kron(eye, left) @ t @ np.kron(right, eye), t), tol)
            maps_to_complement = rel_residual(u @ s.s.mat @ np.conj(dagger(u)), s_star.mat) <= tol
            rep.info["maps_to_complement"] = maps_to_complement
            if maps_to_complement:
                rep.add("complement_delta", rel_residual(
                    np.kron(eye, s.delta_power(-1)) @ t @ np.kron(s.delta, eye), t), tol)
        dd = np.kron(s.delta, s.delta)
        fixed = rel_residual(c, t) <= tol and rel_residual(t @ dd, dd @ t) <= tol
        rep.info["crossing_fixed_and_modular"] = fixed
        if fixed:
            rep.add("j_flip_invariance", rel_residual(j_flip(s, t), t), tol)
        if psi is not None:
            psi = np.asarray(psi, dtype=complex)
            lam = np.vdot(psi, u @ psi) / np.vdot(psi, psi)
            if np.linalg.norm(u @ psi - lam * psi) <= tol * np.linalg.norm(psi) and symmetric:
                v = extract_v(t, psi)
                rep.add("contraction_commutes", rel_residual(v @ u, u @ v), tol)
    return rep


def invariants_report(c: SymmetryConstraint, expected: tuple[int, list[np.ndarray]] | None = None,
                      case: dict | None = None, span_tol: float = 1e-8) -> VerificationReport:
    """Computed vs expected dimension of the invariant space plus basis and span residuals."""
    n = c.involution.dim
    tol = c.involution.tol.identity_tol(n)
    rep = VerificationReport("invariants")
    with timed(rep):
        space = invariant_crossing_space(c)
        res = basis_residuals(c, space)
        for k, r in enumerate(res):
            rep.add(f"basis[{k}]/crossing", r["crossing"], tol)
            rep.add(f"basis[{k}]/commutator", r["commutator"], tol)
        rep.info.update({"case": case or {}, "dim_found": space.dim, "basis_residuals": res,
                         "gap": list(space.gap)})
        if expected is not None:
            dim, spanning = expected
            rep.info["dim_expected"] = dim
            rep.add("dimension", abs(space.dim - dim), 0.0, found=space.dim, expected=dim)
            fwd, bwd = span_residuals(space, spanning)
            rep.add("span_predicted_in_computed", fwd, span_tol)
            rep.add("span_computed_in_predicted", bwd, span_tol)
    return rep
