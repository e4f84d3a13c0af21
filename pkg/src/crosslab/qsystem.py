"""Q-systems (special C*-Frobenius algebras) in finite-dimensional Hilbert spaces.

A Q-system on C^N is a multiplication m: C^N (x) C^N -> C^N (an N x N^2 matrix)
and a unit vector iota. From them come ev = iota* m, coev = ev*, an antilinear
involution S with ev(v (x) w) = <S v, w>, and the twist T = m* m.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .config import Tolerances, default_tolerances
from .crossing import crossing_residual, cross_fast
from .errors import (
    CrosslabError,
    InvalidState,
    InvolutionFailure,
    NotSpecial,
    ShapeMismatch,
)
from .groups import FiniteGroup
from .modular import Involution, involution_from_matrix, xi_vector
from .report import VerificationReport, timed
from .tensor import (
    as_matrix,
    dagger,
    flip,
    frob,
    herm_eigh,
    matrix_from_json,
    matrix_to_json,
    rel_residual,
    vector_from_json,
    vector_to_json,
)


@dataclass(frozen=True, eq=False)
class QSystem:
    m: np.ndarray
    iota: np.ndarray
    tol: Tolerances = field(default_factory=default_tolerances, repr=False)
    name: str = ""

    def __post_init__(self) -> None:
        m = as_matrix(self.m, name="m")
        iota = np.asarray(self.iota, dtype=complex).reshape(-1)
        n = m.shape[0]
        if m.shape[1] != n * n:
            raise ShapeMismatch(f"m must be N x N^2, got {m.shape}")
        if iota.size != n:
            raise ShapeMismatch(f"unit has length {iota.size}, expected {n}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "iota", iota)

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    @property
    def twist(self) -> np.ndarray:
        return dagger(self.m) @ self.m

    def to_json(self) -> dict:
        return {"dim": self.dim, "m": matrix_to_json(self.m), "iota": vector_to_json(self.iota)}

    def __repr__(self) -> str:
        return f"QSystem({self.name or 'dim ' + str(self.dim)})"


def qsystem_from_json(obj: dict, tol: Tolerances | None = None) -> QSystem:
    try:
        m = matrix_from_json(obj["m"])
        iota = vector_from_json(obj["iota"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed Q-system object: {exc}") from exc
    if "dim" in obj and int(obj["dim"]) != m.shape[0]:
        raise ShapeMismatch("declared dim does not match m")
    return QSystem(m, iota, tol or default_tolerances())


def trivial() -> QSystem:
    """The one-dimensional Q-system C with m = 1, iota = 1."""
    return QSystem(np.ones((1, 1)), np.ones(1), name="trivial")


# validation


def _scalar_part(a: np.ndarray) -> tuple[float, float]:
    """(d, relative deviation of a from d * 1) for a Hermitian matrix a."""
    n = a.shape[0]
    d = float(np.real(np.trace(a))) / n
    return d, frob(a - d * np.eye(n)) / max(1.0, frob(a))


def unit_multiplicity(q: QSystem, constraints: Sequence[np.ndarray] = ()) -> int:
    """Dimension of the common kernel of the given linear constraints on C^N.

    In finite-dimensional Hilbert spaces Hom(id, X) is X itself, so without
    further structure the multiplicity is N. Extra structure (a group action
    whose fixed vectors are sought, a grading) is passed as matrices C with
    the admissible vectors being those with C v = 0.
    """
    n = q.dim
    if not constraints:
        return n
    stacked = np.vstack([as_matrix(c) for c in constraints])
    s = np.linalg.svd(stacked, compute_uv=False)
    cutoff = q.tol.rank * (s.max() if s.size else 0.0)
    return int(n - np.sum(s > cutoff))


def validate(q: QSystem, require_special: bool = False, constraints: Sequence[np.ndarray] = (),
             tol: float | None = None) -> VerificationReport:
    """Residuals of the Q-system axioms.

    Associativity, unitality, the Frobenius property and normalization are
    checks; specialness is recorded in ``info`` (and becomes a check when
    ``require_special`` is set), together with d and the unit multiplicity.
    """
    n = q.dim
    tol = q.tol.identity_tol(n) if tol is None else tol
    m, iota, eye = q.m, q.iota.reshape(-1, 1), np.eye(n)
    rep = VerificationReport("qsystem-axioms")
    with timed(rep):
        rep.add("associativity", rel_residual(m @ np.kron(m, eye), m @ np.kron(eye, m)), tol)
        rep.add("unit_left", rel_residual(m @ np.kron(iota, eye), eye), tol)
        rep.add("unit_right", rel_residual(m @ np.kron(eye, iota), eye), tol)
        mm = dagger(m) @ m
        rep.add("frobenius_left", rel_residual(np.kron(m, eye) @ np.kron(eye, dagger(m)), mm), tol)
        rep.add("frobenius_right", rel_residual(np.kron(eye, m) @ np.kron(dagger(m), eye), mm), tol)
        rep.add("normalization", abs(np.vdot(q.iota, q.iota) - 1.0), tol)
        d, dev = _scalar_part(m @ dagger(m))
        special = dev <= tol
        if require_special:
            rep.add("special", dev, tol, d=d)
        mult = unit_multiplicity(q, constraints)
        rep.info.update({"d": d if special else None, "special": special, "special_residual": dev,
                         "mm_star_spectrum": np.sort(np.linalg.eigvalsh(m @ dagger(m))),
                         "unit_multiplicity": mult, "irreducible": mult == 1})
    return rep


def is_special(q: QSystem, tol: float | None = None) -> bool:
    tol = q.tol.identity_tol(q.dim) if tol is None else tol
    return _scalar_part(q.m @ dagger(q.m))[1] <= tol


def dimension(q: QSystem) -> float:
    """d with m m* = d 1; raises NotSpecial when m m* is not scalar."""
    d, dev = _scalar_part(q.m @ dagger(q.m))
    if dev > q.tol.identity_tol(q.dim):
        raise NotSpecial(f"m m* deviates from a scalar by {dev:.3e}")
    return d


class DerivedData(NamedTuple):
    ev: np.ndarray
    coev: np.ndarray
    s: Involution
    t: np.ndarray


def evaluation(q: QSystem) -> np.ndarray:
    """ev = iota* m as a 1 x N^2 matrix."""
    return (np.conj(q.iota) @ q.m).reshape(1, -1)


def derived_data(q: QSystem) -> DerivedData:
    """ev, coev, the involution S with ev(v (x) w) = <S v, w>, and T = m* m."""
    n = q.dim
    ev = evaluation(q)
    bilinear = ev.reshape(n, n)  # ev(v (x) w) = v^T B w
    try:
        s = involution_from_matrix(dagger(bilinear), q.tol)
    except CrosslabError as exc:
        raise InvolutionFailure(f"ev does not define an involution: {exc}") from exc
    return DerivedData(ev, dagger(ev), s, q.twist)


def conjugate_equation_residuals(q: QSystem, data: DerivedData | None = None) -> dict[str, float]:
    n = q.dim
    data = derived_data(q) if data is None else data
    eye = np.eye(n)
    return {
        "conjugate_left": rel_residual(np.kron(eye, data.ev) @ np.kron(data.coev, eye), eye),
        "conjugate_right": rel_residual(np.kron(data.ev, eye) @ np.kron(eye, data.coev), eye),
        "coev_is_xi": rel_residual(data.coev.reshape(-1), xi_vector(data.s)),
    }


def twist_certificates(q: QSystem, tol: float | None = None) -> VerificationReport:
    """Crossing symmetry, braid relations, modular invariance and the involution law for T = m* m."""
    n = q.dim
    tol = q.tol.identity_tol(n) if tol is None else tol
    rep = VerificationReport("twist-certificates")
    with timed(rep):
        data = derived_data(q)
        s, t = data.s, data.t
        eye = np.eye(n)
        t1, t2 = np.kron(t, eye), np.kron(eye, t)
        for name, r in conjugate_equation_residuals(q, data).items():
            rep.add(name, r, tol)
        rep.add("crossing_symmetric", crossing_residual(s, t), tol)
        rep.add("self_adjoint", rel_residual(t, dagger(t)), tol)
        rep.add("yang_baxter", rel_residual(t1 @ t2 @ t1, t2 @ t1 @ t2), tol)
        rep.add("exchange", rel_residual(t1 @ t2, t2 @ t1), tol)
        dd = np.kron(s.delta, s.delta)
        rep.add("modular_invariance", rel_residual(t @ dd, dd @ t), tol)
        lhs = s.s.mat @ np.conj(q.m)  # S o m as an antilinear matrix
        rhs = q.m @ flip(n) @ np.kron(s.s.mat, s.s.mat)  # m o F o (S (x) S)
        rep.add("involution_law", rel_residual(lhs, rhs), tol)
        d, dev = _scalar_part(q.m @ dagger(q.m))
        if dev <= tol:
            rep.add("twist_square", rel_residual(t @ t, d * t), tol, d=d)
            norm = float(np.linalg.svd(t, compute_uv=False).max())
            rep.add("twist_norm", abs(norm - d) / max(1.0, d), tol, d=d)
        rep.info["d"] = d if dev <= tol else None
    return rep


def jones_projection(q: QSystem) -> np.ndarray:
    """E = coev ev / d for a special Q-system."""
    d = dimension(q)
    ev = evaluation(q)
    return dagger(ev) @ ev / d


def jones_checks(q: QSystem, tol: float | None = None) -> VerificationReport:
    n = q.dim
    tol = q.tol.identity_tol(n) if tol is None else tol
    rep = VerificationReport("jones-projection")
    with timed(rep):
        e = jones_projection(q)
        d = dimension(q)
        s = derived_data(q).s
        rep.add("idempotent", rel_residual(e @ e, e), tol)
        rep.add("self_adjoint", rel_residual(e, dagger(e)), tol)
        rep.add("cross_unit", rel_residual(cross_fast(s, np.eye(n * n)), d * e), tol)
        rep.info["crossing_residual_of_E"] = crossing_residual(s, e)
        rep.info["d"] = d
    return rep


def normalize_unit(q: QSystem) -> QSystem:
    """Rescale iota -> iota/|iota| and m -> |iota| m, keeping unitality intact."""
    c = float(np.linalg.norm(q.iota))
    return QSystem(q.m * c, q.iota / c, q.tol, q.name)


# group constructions


def qsystem_functions_on_group(g: FiniteGroup, tol: Tolerances | None = None) -> QSystem:
    """Pointwise multiplication on C(G) with the normalized L^2 inner product.

    The orthonormal basis is u_g = |G|^{1/2} delta_g, so that
    m(u_g (x) u_h) = |G|^{1/2} [g = h] u_g and iota = |G|^{-1/2} sum_g u_g.
    """
    n = g.order
    m = np.zeros((n, n * n), dtype=complex)
    for k in range(n):
        m[k, k * n + k] = np.sqrt(n)
    return QSystem(m, np.full(n, 1 / np.sqrt(n), dtype=complex), tol or default_tolerances(),
                   name=f"C({g.name or g.order})")


def functions_delta_scale(order: int, n_in: int, n_out: int) -> float:
    """Factor turning a u-basis matrix of a map X^{(x)n_in} -> X^{(x)n_out} into delta-basis form.

    With delta_g = |G|^{-1/2} u_g the delta-basis matrix is
    |G|^{(n_in - n_out)/2} times the u-basis matrix.
    """
    return float(order) ** ((n_in - n_out) / 2)


def to_delta_basis(mat: np.ndarray, order: int, n_in: int, n_out: int) -> np.ndarray:
    return functions_delta_scale(order, n_in, n_out) * np.asarray(mat)


def vector_to_delta_coordinates(u_coords: np.ndarray, order: int) -> np.ndarray:
    """Coefficients in the delta basis of a vector given in the u basis."""
    return np.sqrt(order) * np.asarray(u_coords)


def translation_unitaries(g: FiniteGroup) -> list[np.ndarray]:
    """Left translations (lambda_g f)(h) = f(g^{-1} h), unitary in the u basis."""
    return [g.left_regular(k) for k in range(g.order)]


def qsystem_group_algebra(g: FiniteGroup, tol: Tolerances | None = None) -> QSystem:
    """Convolution algebra L^1(G): m(delta_g (x) delta_h) = delta_{gh}, iota = delta_e."""
    n = g.order
    m = np.zeros((n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            m[g.cayley[a, b], a * n + b] = 1.0
    iota = np.zeros(n, dtype=complex)
    iota[g.identity] = 1.0
    return QSystem(m, iota, tol or default_tolerances(), name=f"L1({g.name or g.order})")


def grading_constraint(g: FiniteGroup) -> np.ndarray:
    """1 - P_e: vectors of degree e in the G-grading of L^1(G) are its kernel."""
    c = np.eye(g.order)
    c[g.identity, g.identity] = 0.0
    return c


# multi-matrix algebras


@dataclass(frozen=True, eq=False)
class MultiMatrixAlgebra:
    """A = direct sum of M_{n_a}(C) with a faithful state omega = Tr(rho .)."""

    blocks: tuple[int, ...]
    rho: tuple[np.ndarray, ...]
    tol: Tolerances = field(default_factory=default_tolerances, repr=False)

    def __post_init__(self) -> None:
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks or min(blocks) < 1:
            raise InvalidState("block sizes must be positive")
        if len(self.rho) != len(blocks):
            raise InvalidState("one density block is needed per matrix block")
        rho = []
        for n, r in zip(blocks, self.rho):
            r = np.asarray(r, dtype=complex)
            if r.ndim == 0:
                r = r.reshape(1, 1)
            if r.shape != (n, n):
                raise InvalidState(f"density block has shape {r.shape}, expected {(n, n)}")
            try:
                herm_eigh(r, self.tol)
            except CrosslabError as exc:
                raise InvalidState(f"density block is not positive definite: {exc}") from exc
            rho.append((r + dagger(r)) / 2)
        total = sum(np.trace(r).real for r in rho)
        if abs(total - 1.0) > self.tol.identity_tol(1):
            raise InvalidState(f"state is not normalized: total trace {total}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "rho", tuple(rho))

    @classmethod
    def standard(cls, blocks: Sequence[int]) -> "MultiMatrixAlgebra":
        """rho_a = n_a / (sum n^2) * 1, the state with the standard solutions."""
        total = sum(n * n for n in blocks)
        return cls(tuple(blocks), tuple(np.eye(n) * n / total for n in blocks))

    @property
    def dim(self) -> int:
        return sum(n * n for n in self.blocks)

    @property
    def offsets(self) -> list[int]:
        out, k = [], 0
        for n in self.blocks:
            out.append(k)
            k += n * n
        return out

    def _power(self, a: int, p: float) -> np.ndarray:
        w, v = np.linalg.eigh(self.rho[a])
        return (v * w**p) @ dagger(v)

    def embed(self, x: Sequence[np.ndarray]) -> np.ndarray:
        """GNS vector of the algebra element x = (x_a): concatenated vec(x_a rho_a^{1/2})."""
        out = np.zeros(self.dim, dtype=complex)
        for a, (n, off) in enumerate(zip(self.blocks, self.offsets)):
            xa = np.asarray(x[a], dtype=complex).reshape(n, n)
            out[off:off + n * n] = (xa @ self._power(a, 0.5)).reshape(-1)
        return out

    def unembed(self, v: np.ndarray) -> list[np.ndarray]:
        v = np.asarray(v, dtype=complex).reshape(-1)
        return [v[off:off + n * n].reshape(n, n) @ self._power(a, -0.5)
                for a, (n, off) in enumerate(zip(self.blocks, self.offsets))]

    def multiply(self, x: Sequence[np.ndarray], y: Sequence[np.ndarray]) -> list[np.ndarray]:
        return [np.asarray(xa) @ np.asarray(ya) for xa, ya in zip(x, y)]

    def unit(self) -> list[np.ndarray]:
        return [np.eye(n, dtype=complex) for n in self.blocks]

    def random_element(self, rng: np.random.Generator) -> list[np.ndarray]:
        return [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for n in self.blocks]

    def trace_inverse_values(self) -> np.ndarray:
        """Tr(rho_a^{-1}) per block; the Q-system is special iff these coincide."""
        return np.array([np.trace(np.linalg.inv(r)).real for r in self.rho])

    def predicted_special(self, tol: float = 1e-9) -> bool:
        vals = self.trace_inverse_values()
        return bool(np.ptp(vals) <= tol * max(1.0, float(vals.max())))

    def predicted_standard(self, tol: float = 1e-9) -> bool:
        total = sum(n * n for n in self.blocks)
        return all(frob(r - np.eye(n) * n / total) <= tol for n, r in zip(self.blocks, self.rho))

    def to_json(self) -> dict:
        return {"blocks": list(self.blocks), "rho": [matrix_to_json(r) for r in self.rho]}


def multimatrix_from_json(obj: dict, tol: Tolerances | None = None) -> MultiMatrixAlgebra:
    try:
        blocks = [int(b) for b in obj["blocks"]]
        rho = [matrix_from_json(r) if isinstance(r, dict) else np.asarray(r, dtype=complex)
               for r in obj["rho"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidState(f"malformed multi-matrix object: {exc}") from exc
    return MultiMatrixAlgebra(tuple(blocks), tuple(rho), tol or default_tolerances())


def _unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def _block_element(a: MultiMatrixAlgebra, alpha: int, xa: np.ndarray) -> list[np.ndarray]:
    return [xa if b == alpha else np.zeros((n, n), dtype=complex) for b, n in enumerate(a.blocks)]


def from_cstar(a: MultiMatrixAlgebra) -> QSystem:
    """GNS realization of (A, omega): m(x Omega (x) y Omega) = x y Omega, iota = Omega."""
    n = a.dim
    m = np.zeros((n, n * n), dtype=complex)
    basis = np.eye(n, dtype=complex)
    elems = [a.unembed(basis[:, p]) for p in range(n)]
    block_of = np.concatenate([[k] * (nb * nb) for k, nb in enumerate(a.blocks)])
    for p in range(n):
        for q in range(n):
            if block_of[p] != block_of[q]:
                continue
            m[:, p * n + q] = a.embed(a.multiply(elems[p], elems[q]))
    return QSystem(m, a.embed(a.unit()), a.tol, name=f"multimatrix{list(a.blocks)}")


def twist_of_multimatrix(a: MultiMatrixAlgebra) -> np.ndarray:
    """Closed form of m* m: x_a (x) y_b -> [a = b] sum_ij x y E_ij (x) rho_a^{-1} E_ji."""
    n = a.dim
    basis = np.eye(n, dtype=complex)
    block_of = np.concatenate([[k] * (nb * nb) for k, nb in enumerate(a.blocks)])
    t = np.zeros((n * n, n * n), dtype=complex)
    for alpha, nb in enumerate(a.blocks):
        rho_inv = np.linalg.inv(a.rho[alpha])
        left = [[None] * nb for _ in range(nb)]
        for i in range(nb):
            for j in range(nb):
                left[i][j] = a.embed(_block_element(a, alpha, rho_inv @ _unit_matrix(nb, j, i)))
        idx = np.flatnonzero(block_of == alpha)
        for p in idx:
            x = a.unembed(basis[:, p])[alpha]
            for q in idx:
                xy = x @ a.unembed(basis[:, q])[alpha]
                col = np.zeros(n * n, dtype=complex)
                for i in range(nb):
                    for j in range(nb):
                        first = a.embed(_block_element(a, alpha, xy @ _unit_matrix(nb, i, j)))
                        col += np.kron(first, left[i][j])
                t[:, p * n + q] = col
    return t


def tomita_residual(a: MultiMatrixAlgebra, s: Involution, x: Sequence[np.ndarray]) -> float:
    """|S(x Omega) - x^dagger Omega| relative to |x Omega|."""
    v = a.embed(x)
    target = a.embed([dagger(np.asarray(xa)) for xa in x])
    return float(np.linalg.norm(s.s(v) - target)) / max(1.0, float(np.linalg.norm(v)))


def build_from_spec(spec: dict, tol: Tolerances | None = None) -> tuple[QSystem, Any]:
    """Build a Q-system from {"group-functions": G} / {"group-algebra": G} / {"multimatrix": A} / {"raw": Q}.

    Returns the Q-system and the source object (group, algebra or None).
    """
    from .groups import group_from_json

    if not isinstance(spec, dict) or len(spec) != 1:
        raise ShapeMismatch("Q-system spec must have exactly one key")
    (kind, body), = spec.items()
    if kind == "group-functions":
        g = group_from_json(body)
        return qsystem_functions_on_group(g, tol), g
    if kind == "group-algebra":
        g = group_from_json(body)
        return qsystem_group_algebra(g, tol), g
    if kind == "multimatrix":
        a = multimatrix_from_json(body, tol)
        return from_cstar(a), a
    if kind == "raw":
        return qsystem_from_json(body, tol), None
    raise ShapeMismatch(f"unknown Q-system kind {kind!r}")
