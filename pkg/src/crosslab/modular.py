"""Antilinear involutions S = J Delta^{1/2}, standard subspaces and the vector xi_S."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import (
    DimensionMismatch,
    InvalidModularRelation,
    NotAntiunitary,
    NotInvolution,
    ShapeMismatch,
)
from .tensor import (
    AntilinearOp,
    as_matrix,
    conj_by,
    dagger,
    frob,
    herm_eigh,
    matrix_from_json,
    matrix_to_json,
    real_kernel,
    realify,
    rel_residual,
)


@dataclass(frozen=True, eq=False)
class Involution:
    """A validated antilinear involution together with its polar parts.

    ``j_basis`` holds an orthonormal basis fixed by J as its columns, so that in
    that basis J is plain complex conjugation.
    """

    s: AntilinearOp
    j: AntilinearOp
    delta: np.ndarray
    j_basis: np.ndarray
    tol: Tolerances = field(default_factory=default_tolerances, repr=False)
    _eig: tuple[np.ndarray, np.ndarray] = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self._eig is None:
            object.__setattr__(self, "_eig", herm_eigh(self.delta, self.tol))

    @property
    def dim(self) -> int:
        return self.s.dim

    @property
    def s_star(self) -> AntilinearOp:
        return self.s.adjoint()

    @property
    def modular_spectrum(self) -> np.ndarray:
        return self._eig[0]

    def delta_power(self, z: complex) -> np.ndarray:
        """Delta**z, e.g. z = 1/2 or z = i t for the modular group."""
        w, v = self._eig
        return (v * np.exp(complex(z) * np.log(w))) @ dagger(v)

    def modular_group(self, t: float) -> np.ndarray:
        return self.delta_power(1j * t)

    @property
    def is_antiunitary(self) -> bool:
        w = self.modular_spectrum
        return bool(np.all(np.abs(w - 1.0) <= self.tol.identity_tol(self.dim)))

    def residuals(self) -> dict[str, float]:
        n = self.dim
        eye = np.eye(n)
        inv = self.delta_power(-1)
        return {
            "s_squared": rel_residual(self.s @ self.s, eye),
            "modular_relation": rel_residual(conj_by(self.j, self.delta, self.j), inv),
            "polar": rel_residual(self.s.mat, (self.j @ self.delta_power(0.5)).mat),
            "j_unitary": rel_residual(dagger(self.j.mat) @ self.j.mat, eye),
            "j_squared": rel_residual(self.j @ self.j, eye),
        }

    def to_json(self) -> dict:
        return {"kind": "matrix", "s": matrix_to_json(self.s.mat)}


def _as_antilinear(x: Any) -> AntilinearOp:
    return x if isinstance(x, AntilinearOp) else AntilinearOp(x)


def j_fixed_basis(j: AntilinearOp, tol: Tolerances | None = None) -> np.ndarray:
    """Orthonormal basis of J-fixed vectors, as the columns of a unitary matrix.

    Candidates v + Jv and i(v - Jv) over the computational basis are J-fixed;
    Gram-Schmidt is run with the real inner product Re<.,.>, which on J-fixed
    vectors coincides with the complex one.
    """
    tol = tol or default_tolerances()
    n = j.dim
    found: list[np.ndarray] = []
    eye = np.eye(n, dtype=complex)
    for k in range(n):
        v = eye[:, k]
        jv = j(v)
        for g in (v + jv, 1j * (v - jv)):
            for f in found:
                g = g - np.real(np.vdot(f, g)) * f
            norm = np.linalg.norm(g)
            if norm > 1e-6:
                g = g / norm
                # one refinement pass against round-off
                for f in found:
                    g = g - np.real(np.vdot(f, g)) * f
                found.append(g / np.linalg.norm(g))
            if len(found) == n:
                break
        if len(found) == n:
            break
    if len(found) != n:
        raise NotAntiunitary("could not build a J-fixed orthonormal basis")
    return np.column_stack(found)


def _check_antiunitary_involution(j: AntilinearOp, tol: Tolerances) -> None:
    n = j.dim
    eye = np.eye(n)
    if rel_residual(dagger(j.mat) @ j.mat, eye) > tol.identity_tol(n):
        raise NotAntiunitary("J is not antiunitary")
    if rel_residual(j @ j, eye) > tol.identity_tol(n):
        raise NotInvolution("J is not an involution")


def involution_from_parts(j: Any, delta: Any, tol: Tolerances | None = None) -> Involution:
    """Assemble S = J Delta^{1/2} from an antiunitary involution and a modular operator."""
    tol = tol or default_tolerances()
    j = _as_antilinear(j)
    delta = as_matrix(delta, square=True, name="delta")
    if delta.shape[0] != j.dim:
        raise ShapeMismatch("J and Delta act on different dimensions")
    _check_antiunitary_involution(j, tol)
    w, v = herm_eigh(delta, tol)
    inv = (v / w) @ dagger(v)
    if rel_residual(conj_by(j, delta, j), inv) > tol.identity_tol(j.dim):
        raise InvalidModularRelation("J Delta J differs from Delta^{-1}")
    half = (v * np.sqrt(w)) @ dagger(v)
    s = j @ half
    return Involution(s=s, j=j, delta=delta, j_basis=j_fixed_basis(j, tol), tol=tol, _eig=(w, v))


def involution_from_matrix(s: Any, tol: Tolerances | None = None) -> Involution:
    """Polar decomposition of an antilinear involution given by its matrix."""
    tol = tol or default_tolerances()
    s = _as_antilinear(s)
    n = s.dim
    scale = max(1.0, frob(s.mat) ** 2)
    if frob(s @ s - np.eye(n)) / scale > tol.identity_tol(n):
        raise NotInvolution("S o S differs from the identity")
    delta = s.adjoint() @ s
    delta = (delta + dagger(delta)) / 2
    w, v = herm_eigh(delta, tol)
    j = s @ ((v / np.sqrt(w)) @ dagger(v))
    inv = Involution(s=s, j=j, delta=delta, j_basis=j_fixed_basis(j, tol), tol=tol, _eig=(w, v))
    rebuilt = inv.j @ inv.delta_power(0.5)
    if rel_residual(rebuilt.mat, s.mat) > tol.identity_tol(n):
        raise NotInvolution("polar decomposition does not reproduce S")
    return inv


def involution_from_json(obj: dict, tol: Tolerances | None = None) -> Involution:
    kind = obj.get("kind")
    if kind == "parts":
        return involution_from_parts(matrix_from_json(obj["j"]), matrix_from_json(obj["delta"]), tol)
    if kind == "matrix":
        return involution_from_matrix(matrix_from_json(obj["s"]), tol)
    raise ShapeMismatch(f"unknown involution kind {kind!r}")


def involution_parts_json(inv: Involution) -> dict:
    return {"kind": "parts", "j": matrix_to_json(inv.j.mat), "delta": matrix_to_json(inv.delta)}


def conjugation(n: int, tol: Tolerances | None = None) -> Involution:
    """S = J = complex conjugation in the computational basis."""
    return involution_from_parts(AntilinearOp.conjugation(n), np.eye(n), tol)


def paired_involution(spectrum: Any, tol: Tolerances | None = None) -> Involution:
    """S for a diagonal Delta whose spectrum is closed under inversion.

    J is conjugation composed with the permutation pairing each eigenvalue
    lam with 1/lam (eigenvalues equal to 1 are left fixed), so that
    J Delta J = Delta^{-1} holds exactly.
    """
    lam = np.asarray(spectrum, dtype=float)
    n = lam.size
    perm = -np.ones(n, dtype=int)
    for a in range(n):
        if perm[a] >= 0:
            continue
        if abs(lam[a] - 1.0) < 1e-14:
            perm[a] = a
            continue
        match = [b for b in range(n) if perm[b] < 0 and b != a and abs(lam[a] * lam[b] - 1.0) < 1e-12]
        if not match:
            raise InvalidModularRelation(f"eigenvalue {lam[a]} has no inverse partner")
        perm[a], perm[match[0]] = match[0], a
    p = np.zeros((n, n))
    p[perm, np.arange(n)] = 1.0
    return involution_from_parts(AntilinearOp(p), np.diag(lam), tol)


@dataclass(frozen=True, eq=False)
class StandardSubspace:
    """Real span of the columns of ``real_basis`` (N vectors in C^N)."""

    real_basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.real_basis.shape[1]

    def vectors(self) -> list[np.ndarray]:
        return [self.real_basis[:, k] for k in range(self.dim)]

    def tomita(self) -> AntilinearOp:
        """S_H(h1 + i h2) = h1 - i h2, extended through the real basis."""
        h = self.real_basis
        return AntilinearOp(h @ np.conj(np.linalg.inv(h)))

    @property
    def conditioning(self) -> float:
        """Smallest singular value of the basis matrix."""
        return float(np.linalg.svd(self.real_basis, compute_uv=False).min())

    def project(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection (w.r.t. Re<.,.>) of x onto H."""
        hr = np.column_stack([realify(h) for h in self.vectors()])
        q, _ = np.linalg.qr(hr)
        r = q @ (q.T @ realify(x))
        return r[: self.dim] + 1j * r[self.dim :]


def standard_subspace(s: Involution) -> StandardSubspace:
    """H_S = ker(S - 1) as a real vector space."""
    n = s.dim
    ker = real_kernel(lambda x: s.s(x) - x, (n,), s.tol)
    if ker.dim != n:
        raise DimensionMismatch(f"ker(S-1) has real dimension {ker.dim}, expected {n}")
    return StandardSubspace(np.column_stack(ker.basis))


def xi_vector(s: Involution, basis: np.ndarray | None = None) -> np.ndarray:
    """xi_S = sum_n e_n (x) S e_n for the orthonormal basis given as columns."""
    n = s.dim
    basis = np.eye(n, dtype=complex) if basis is None else as_matrix(basis, square=True)
    xi = np.zeros(n * n, dtype=complex)
    for k in range(n):
        e = basis[:, k]
        xi += np.kron(e, s.s(e))
    return xi


def xi_and_ps(s: Involution) -> tuple[np.ndarray, np.ndarray]:
    """The vector xi_S and the rank-one operator P_S = |xi_S><xi_S|."""
    xi = xi_vector(s)
    return xi, np.outer(xi, np.conj(xi))


class Membership(NamedTuple):
    """Outcome of the two endomorphism tests on a single operator."""

    ok: bool
    residual: float
    algebraic_residual: float
    tol: float

    @property
    def agree(self) -> bool:
        """Whether the geometric and algebraic tests reach the same verdict."""
        return (self.residual <= self.tol) == (self.algebraic_residual <= self.tol)


def is_endomorphism(v: Any, h: StandardSubspace, s: Involution, tol: float | None = None) -> Membership:
    """Test V H in H geometrically (projection residual) and algebraically (S V S = V)."""
    v = as_matrix(v, square=True, name="V")
    n = s.dim
    if v.shape[0] != n:
        raise ShapeMismatch("V and S act on different dimensions")
    tol = s.tol.identity_tol(n) if tol is None else tol
    scale = max(1.0, frob(v))
    geo = 0.0
    for vec in h.vectors():
        w = v @ vec
        geo = max(geo, float(np.linalg.norm(w - h.project(w))) / scale)
    alg = rel_residual(conj_by(s.s, v, s.s), v, scale)
    return Membership(geo <= tol and alg <= tol, geo, alg, tol)
