import numpy as np
import pytest

from crosslab.crossing import is_crossing_symmetric
from crosslab.errors import NotAntiunitary, PreconditionFailed, ShapeMismatch
from crosslab.groups import cyclic
from crosslab.modular import conjugation, paired_involution
from crosslab.qsystem import derived_data, qsystem_functions_on_group, translation_unitaries
from crosslab.sampling import haar_unitary, random_involution
from crosslab.symmetry import (
    SymmetryConstraint,
    exchange_lemma_checks,
    invariant_crossing_space,
    invariants_report,
    klr_matrix,
    o_n_case,
    o_n_expected,
    o_n_generators,
    o_n_involution,
    p_j,
    span_residuals,
    unitary_group_case,
    yang_baxter_residual,
)
from crosslab.tensor import flip


def test_trivial_group_gives_half_dimension():
    space = invariant_crossing_space(SymmetryConstraint(conjugation(2)))
    assert space.dim == 16
    lo, hi = space.gap
    assert hi > 1e3 * max(lo, 1e-300) or lo == 0


@pytest.mark.parametrize("n,trivial,dim", [(2, True, 3), (2, False, 2), (3, True, 3), (3, False, 1),
                                           (4, True, 3), (4, False, 1)])
def test_orthogonal_classification(n, trivial, dim):
    c = o_n_case(n, trivial, seed=n)
    space = invariant_crossing_space(c)
    assert space.dim == dim
    expected_dim, spanning = o_n_expected(n, trivial)
    assert expected_dim == dim
    fwd, bwd = span_residuals(space, spanning)
    assert fwd <= 1e-8 and bwd <= 1e-8


def test_o2_nontrivial_span():
    c = o_n_case(2, False)
    space = invariant_crossing_space(c)
    pj = p_j(c.involution.j)
    for x, y in [(1.0, 0.0), (0.0, 1.0), (0.3, -2.0)]:
        assert space.projection_residual(x * flip(2) + 1j * y * (np.eye(4) - pj)) <= 1e-8
    assert space.projection_residual(np.eye(4) + pj) > 0.1


def test_o2_trivial_family():
    c = o_n_case(2, True)
    space = invariant_crossing_space(c)
    pj = p_j(c.involution.j)
    z = 0.7 + 0.4j
    assert space.projection_residual(z * np.eye(4) + np.conj(z) * pj - 1.5 * flip(2)) <= 1e-8


def test_generators_are_real_in_j_basis():
    s = o_n_involution(3, False)
    for u in o_n_generators(s, seed=1):
        o = s.j_basis.conj().T @ u @ s.j_basis
        assert np.allclose(o.imag, 0)
        assert np.allclose(o.real @ o.real.T, np.eye(3))
        assert np.allclose(s.j.mat @ np.conj(u), u @ s.j.mat)


def test_o_n_rejects_small_n():
    with pytest.raises(ValueError):
        o_n_expected(1, True)
    with pytest.raises(ValueError):
        o_n_involution(1, True)


def test_unitary_group_collapses_to_flip():
    c = unitary_group_case(3, 6, seed=0)
    rep = invariants_report(c, (1, [flip(3)]))
    assert rep.passed, rep.summary()


def test_unitary_group_with_modular_operator():
    s = paired_involution([2.0, 0.5, 1.0])
    rep = invariants_report(unitary_group_case(3, 6, seed=1, s=s), (1, [flip(3)]))
    assert rep.passed


def test_constraint_validation():
    s = conjugation(2)
    with pytest.raises(ShapeMismatch):
        SymmetryConstraint(s, (np.eye(3),))
    with pytest.raises(NotAntiunitary):
        SymmetryConstraint(s, (2 * np.eye(2),))


def test_klr_matrix_form():
    t, s = klr_matrix(2.0)
    expected = 1j * np.array([[-1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]])
    assert np.allclose(t, expected)
    assert is_crossing_symmetric(s, t)[0]
    assert yang_baxter_residual(t) <= 1e-12


@pytest.mark.parametrize("lam", [1.5, 2.0, 5.0])
def test_klr_other_parameters(lam):
    t, s = klr_matrix(lam)
    assert is_crossing_symmetric(s, t)[0]


def test_report_dimension_mismatch_fails():
    c = o_n_case(2, False)
    rep = invariants_report(c, (3, o_n_expected(2, True)[1]))
    assert not rep.passed
    assert rep.info["dim_found"] == 2 and rep.info["dim_expected"] == 3


@pytest.mark.parametrize("seed", range(3))
def test_exchange_lemma_flip(seed):
    r = np.random.default_rng(seed)
    s = random_involution(3, seed=r)
    u = haar_unitary(3, r)
    rep = exchange_lemma_checks(s, flip(3), u)
    assert rep.passed, rep.summary()
    assert "cross_transfer" in rep.names() and "twisted_invariance" in rep.names()
    assert "j_flip_invariance" in rep.names()


def test_exchange_lemma_flip_with_eigenvector(rng):
    s = random_involution(3, seed=rng)
    w, v = np.linalg.eig(haar_unitary(3, rng))
    u = v @ np.diag(w) @ np.linalg.inv(v)
    rep = exchange_lemma_checks(s, flip(3), u, psi=v[:, 0])
    assert rep.passed and "contraction_commutes" in rep.names()


def test_exchange_lemma_klr():
    t, s = klr_matrix(2.0)
    for u in o_n_generators(s, seed=0):
        rep = exchange_lemma_checks(s, t, u)
        assert rep.passed, rep.summary()
        assert {"cross_transfer", "twisted_invariance"} <= set(rep.names())


def test_exchange_lemma_functions_on_z3():
    q = qsystem_functions_on_group(cyclic(3))
    data = derived_data(q)
    for u in translation_unitaries(cyclic(3)):
        rep = exchange_lemma_checks(data.s, data.t, u, psi=np.ones(3))
        assert rep.passed, rep.summary()
        assert {"cross_transfer", "twisted_invariance", "j_flip_invariance",
                "contraction_commutes"} <= set(rep.names())


def test_exchange_lemma_precondition(rng):
    s = conjugation(2)
    t = np.kron(np.diag([1.0, 2.0]), np.eye(2))
    with pytest.raises(PreconditionFailed):
        exchange_lemma_checks(s, t, haar_unitary(2, rng))


def test_exchange_lemma_complement_branch():
    # a real orthogonal U conjugates S = complex conjugation to itself, and here S* = S
    s = conjugation(2)
    u = np.array([[0.0, 1.0], [1.0, 0.0]])
    rep = exchange_lemma_checks(s, flip(2), u)
    assert rep.info["maps_to_complement"]
    assert rep["complement_delta"].passed
