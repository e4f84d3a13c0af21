import numpy as np
import pytest
from hypothesis import given, strategies as st

from crosslab.crossing import cross_oracle, crossing_residual
from crosslab.errors import InvalidState, InvolutionFailure, NotSpecial, ShapeMismatch
from crosslab.groups import cyclic, symmetric
from crosslab.modular import xi_and_ps
from crosslab.qsystem import (
    MultiMatrixAlgebra,
    QSystem,
    build_from_spec,
    derived_data,
    dimension,
    from_cstar,
    grading_constraint,
    is_special,
    jones_checks,
    jones_projection,
    multimatrix_from_json,
    normalize_unit,
    qsystem_from_json,
    qsystem_functions_on_group,
    qsystem_group_algebra,
    to_delta_basis,
    tomita_residual,
    translation_unitaries,
    trivial,
    twist_certificates,
    twist_of_multimatrix,
    unit_multiplicity,
    validate,
    vector_to_delta_coordinates,
)
from crosslab.tensor import rel_residual

GROUPS = [cyclic(2), cyclic(3), cyclic(4), symmetric(3)]
seeds = st.integers(0, 2**32 - 1)


def random_density(blocks, r, special=False):
    """Random positive blocks with total trace 1; ``special`` equalizes Tr(rho_a^{-1})."""
    rho = []
    for n in blocks:
        g = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
        rho.append(g @ g.conj().T + 0.3 * np.eye(n))
    if special:
        # rescale block a by c_a so that Tr((c_a rho_a)^{-1}) is the same for every block
        inv = np.array([np.trace(np.linalg.inv(x)).real for x in rho])
        rho = [x * v for x, v in zip(rho, inv)]
    total = sum(np.trace(x).real for x in rho)
    return MultiMatrixAlgebra(tuple(blocks), tuple(x / total for x in rho))


def test_trivial():
    q = trivial()
    rep = validate(q, require_special=True)
    assert rep.passed and rep.info["d"] == pytest.approx(1.0)
    data = derived_data(q)
    assert np.allclose(data.t, 1) and np.allclose(data.s.s.mat, 1)
    assert np.allclose(jones_projection(q), 1)
    assert crossing_residual(data.s, jones_projection(q)) < 1e-12


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_group_qsystems_special_with_order(g):
    for q in (qsystem_functions_on_group(g), qsystem_group_algebra(g)):
        rep = validate(q, require_special=True)
        assert rep.passed, rep.summary()
        assert rep.info["d"] == pytest.approx(g.order)
        assert dimension(q) == pytest.approx(g.order)
        cert = twist_certificates_passed(q)
        assert cert.passed, cert.summary()


def twist_certificates_passed(q):
    return twist_certificates(q, tol=1e-10)


def test_functions_z2_twist_in_delta_basis():
    q = qsystem_functions_on_group(cyclic(2))
    t = to_delta_basis(q.twist, 2, 2, 2)
    ee, ea, ae, aa = np.eye(4)
    assert np.allclose(t @ ee, 2 * ee)
    assert np.allclose(t @ ea, 0) and np.allclose(t @ ae, 0)
    assert np.allclose(t @ aa, 2 * aa)


def test_functions_twist_formula():
    g = cyclic(3)
    q = qsystem_functions_on_group(g)
    t = to_delta_basis(q.twist, 3, 2, 2)
    expected = np.zeros((9, 9))
    for k in range(3):
        expected[k * 3 + k, k * 3 + k] = 3
    assert np.allclose(t, expected)


def test_functions_unit_is_constant_one():
    q = qsystem_functions_on_group(cyclic(4))
    assert np.allclose(vector_to_delta_coordinates(q.iota, 4), 1)


def test_functions_z2_involution_is_conjugation():
    s = derived_data(qsystem_functions_on_group(cyclic(2))).s
    assert np.allclose(s.s.mat, np.eye(2))
    assert np.allclose(s.delta, np.eye(2))


def test_functions_ev_is_standard_solution():
    q = qsystem_functions_on_group(cyclic(3))
    data = derived_data(q)
    _, ps = xi_and_ps(data.s)
    assert np.allclose(data.coev @ data.ev, ps)


def test_group_algebra_z2_twist():
    t = qsystem_group_algebra(cyclic(2)).twist
    ee, ea, ae, aa = np.eye(4)
    assert np.allclose(t @ ee, ee + aa)


def test_group_algebra_twist_formula():
    g = symmetric(3)
    t = qsystem_group_algebra(g).twist
    n = g.order
    expected = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            ab = g.mul(a, b)
            for k in range(n):
                expected[k * n + g.mul(g.inverse[k], ab), a * n + b] += 1
    assert np.allclose(t, expected)


def test_group_algebra_involution_is_inversion():
    g = symmetric(3)
    s = derived_data(qsystem_group_algebra(g)).s
    psi = np.arange(6) + 1j * np.arange(6, 12)
    assert np.allclose(s.j(psi), np.conj(psi[g.inverse]))
    assert np.allclose(s.delta, np.eye(6))


def test_group_algebra_z4_norms():
    q = qsystem_group_algebra(cyclic(4))
    assert np.isclose(np.vdot(q.iota, q.iota), 1)
    assert np.allclose(q.m @ q.m.conj().T, 4 * np.eye(4))


def test_unit_multiplicity_with_structure():
    g = cyclic(3)
    qf, qa = qsystem_functions_on_group(g), qsystem_group_algebra(g)
    assert unit_multiplicity(qf) == 3
    fixed = [u - np.eye(3) for u in translation_unitaries(g)]
    rep = validate(qf, constraints=fixed)
    assert rep.info["unit_multiplicity"] == 1 and rep.info["irreducible"]
    assert unit_multiplicity(qa, [grading_constraint(g)]) == 1


def test_perturbed_multiplication_reports_associativity(rng):
    q = qsystem_group_algebra(cyclic(3))
    m = q.m + 1e-3 * rng.standard_normal(q.m.shape)
    rep = validate(QSystem(m, q.iota))
    r = rep["associativity"].residual
    assert 1e-4 < r < 1e-2
    assert not rep.passed


def test_shape_errors():
    with pytest.raises(ShapeMismatch):
        QSystem(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ShapeMismatch):
        QSystem(np.ones((2, 4)), np.ones(3))


def test_involution_failure_for_degenerate_form():
    m = np.zeros((2, 4))
    m[0, 0] = 1
    with pytest.raises(InvolutionFailure):
        derived_data(QSystem(m, np.array([1.0, 0.0])))


def test_normalize_unit():
    q = qsystem_group_algebra(cyclic(2))
    scaled = QSystem(q.m / 2, 2 * q.iota)
    assert not validate(scaled).passed
    back = normalize_unit(scaled)
    assert validate(back).passed
    assert rel_residual(back.m, q.m) < 1e-14


def test_json_round_trip():
    q = qsystem_functions_on_group(cyclic(3))
    back = qsystem_from_json(q.to_json())
    assert np.allclose(back.m, q.m) and np.allclose(back.iota, q.iota)
    with pytest.raises(ShapeMismatch):
        qsystem_from_json({"m": [[1]]})


# multi-matrix algebras


def test_c_plus_c_standard():
    a = MultiMatrixAlgebra((1, 1), (np.array([[0.5]]), np.array([[0.5]])))
    q = from_cstar(a)
    rep = validate(q, require_special=True)
    assert rep.passed and rep.info["d"] == pytest.approx(2)
    assert a.predicted_standard() and a.predicted_special()
    t = twist_of_multimatrix(a)
    assert np.allclose(t, np.diag([2, 0, 0, 2]))


def test_m2_standard_twist_square():
    a = MultiMatrixAlgebra.standard([2])
    q = from_cstar(a)
    assert dimension(q) == pytest.approx(4)
    t = q.twist
    assert rel_residual(t @ t, 4 * t) < 1e-12 and rel_residual(t, t.conj().T) < 1e-12
    assert rel_residual(twist_of_multimatrix(a), t) < 1e-12


def test_single_block_always_special():
    a = MultiMatrixAlgebra((2,), (np.diag([0.75, 0.25]),))
    assert dimension(from_cstar(a)) == pytest.approx(16 / 3)
    assert not a.predicted_standard()


def test_mismatched_blocks_not_special():
    a = MultiMatrixAlgebra((1, 2), (np.array([[0.5]]), np.eye(2) / 4))
    q = from_cstar(a)
    assert np.allclose(a.trace_inverse_values(), [2, 8])
    assert not a.predicted_special() and not is_special(q)
    rep = validate(q)
    assert rep.passed and not rep.info["special"]
    with pytest.raises(NotSpecial):
        jones_projection(q)
    assert twist_certificates_passed(q).passed


def test_different_blocks_multiply_to_zero(rng):
    a = random_density((1, 2), rng)
    t = twist_of_multimatrix(a)
    n = a.dim
    for p in range(1):
        for q in range(1, n):
            col = np.zeros(n * n)
            col[p * n + q] = 1
            assert np.allclose(t @ col, 0)


@given(seeds, st.sampled_from([(1, 1), (2,), (1, 2), (2, 1), (1, 1, 1)]), st.booleans())
def test_specialness_iff_constant_trace_inverse(seed, blocks, special):
    a = random_density(blocks, np.random.default_rng(seed), special)
    q = from_cstar(a)
    assert validate(q).passed
    assert is_special(q) == a.predicted_special()
    if len(blocks) == 1 or special:
        assert is_special(q)
        assert dimension(q) == pytest.approx(a.trace_inverse_values()[0])


@given(seeds, st.sampled_from([(1, 1), (2,), (1, 2)]))
def test_closed_form_twist(seed, blocks):
    a = random_density(blocks, np.random.default_rng(seed))
    assert rel_residual(twist_of_multimatrix(a), from_cstar(a).twist) <= 1e-9


def test_tomita_on_random_elements(rng):
    a = random_density((1, 2), rng)
    s = derived_data(from_cstar(a)).s
    for _ in range(50):
        assert tomita_residual(a, s, a.random_element(rng)) <= 1e-9


def test_invalid_states():
    with pytest.raises(InvalidState):
        MultiMatrixAlgebra((1,), (np.array([[0.7]]),))
    with pytest.raises(InvalidState):
        MultiMatrixAlgebra((2,), (np.diag([1.5, -0.5]),))
    with pytest.raises(InvalidState):
        MultiMatrixAlgebra((2,), (np.eye(3) / 3,))
    with pytest.raises(InvalidState):
        MultiMatrixAlgebra((1, 1), (np.array([[1.0]]),))
    with pytest.raises(InvalidState):
        multimatrix_from_json({"blocks": [1]})


def test_multimatrix_json_round_trip(rng):
    a = random_density((1, 2), rng)
    b = multimatrix_from_json(a.to_json())
    assert all(np.allclose(x, y) for x, y in zip(a.rho, b.rho))


# Jones projection


def test_jones_functions_z2():
    q = qsystem_functions_on_group(cyclic(2))
    e = jones_projection(q)
    xi, ps = xi_and_ps(derived_data(q).s)
    assert np.allclose(e, ps / 2)
    rep = jones_checks(q)
    assert rep.passed and rep.info["crossing_residual_of_E"] > 0.1


def test_jones_cross_unit_group_algebra():
    q = qsystem_group_algebra(cyclic(3))
    s = derived_data(q).s
    assert rel_residual(cross_oracle(s, np.eye(9)), 3 * jones_projection(q)) < 1e-12


@pytest.mark.parametrize("build", [
    lambda: qsystem_functions_on_group(symmetric(3)),
    lambda: qsystem_group_algebra(cyclic(4)),
    lambda: from_cstar(MultiMatrixAlgebra.standard([1, 2])),
])
def test_jones_not_crossing_symmetric(build):
    rep = jones_checks(build())
    assert rep.passed and rep.info["crossing_residual_of_E"] > 0.1


def test_build_from_spec():
    q, g = build_from_spec({"group-functions": "Z3"})
    assert q.dim == 3 and g.order == 3
    q, g = build_from_spec({"group-algebra": {"order": 2, "cayley": [[0, 1], [1, 0]]}})
    assert np.allclose(q.twist, qsystem_group_algebra(cyclic(2)).twist)
    q, a = build_from_spec({"multimatrix": {"blocks": [2], "rho": [[[0.5, 0], [0, 0.5]]]}})
    assert a.predicted_standard()
    q, src = build_from_spec({"raw": trivial().to_json()})
    assert src is None and q.dim == 1
    with pytest.raises(ShapeMismatch):
        build_from_spec({"bogus": 1})
    with pytest.raises(ShapeMismatch):
        build_from_spec({"raw": {}, "group-algebra": "Z2"})

