import numpy as np
import pytest

from helpers import (A0, A1, A2, A3, B0, B1, B2, B3, P4, X4, random_cyclic,
                     random_full_rank_b, weighted_cycle)
from poscon import cones
from poscon.controllability import (
    ALMOST_CONTROLLABLE,
    CONTROLLABLE_FINITE,
    NOT_CONTROLLABLE,
    Tolerances,
    analyze,
    check_target,
    conmat,
    direct_vertex_number,
    limit_residuals,
    make_system,
    polyhedral_fin,
    polyhedral_inf,
    reconstruct_inputs,
    simulate,
    special_case,
    target_horizon,
)
from poscon.errors import LimitGeneratorUsed, RankDeficient, Reducible


def test_conmat_examples():
    s = make_system(A0, B0)
    np.testing.assert_array_equal(conmat(s, 2).generators, [[2, 12], [1, 24]])
    np.testing.assert_array_equal(conmat(s, 1).generators, [[2], [1]])
    s1 = make_system(A1, B1)
    np.testing.assert_allclose(conmat(s1, 3).generators[:, 2], A1 @ A1 @ B1)


def test_reducible_rejected():
    with pytest.raises(Reducible):
        make_system([[1, 0], [1, 1]], [1, 0])


def test_rank_deficient_without_special_case():
    # Ab = A^2 b / 3 = (1, 1, 1): rank 2, and e1 is not a Perron direction
    with pytest.raises(RankDeficient):
        make_system(np.ones((3, 3)), [1.0, 0.0, 0.0])


def test_finite_verdicts():
    v = polyhedral_fin(make_system(A3, B3))
    assert v.polyhedral and v.k_vert == 6
    assert v.vf_contained
    assert cones.a_invariant(v.generators, A3)
    v = polyhedral_fin(make_system(A1, B1))
    assert not v.polyhedral and v.direct_k is None


def test_infinite_verdicts():
    v = polyhedral_inf(make_system(A1, B1))
    assert v.polyhedral and v.k_vert is not None
    v = polyhedral_inf(make_system(A2, B2))
    assert not v.polyhedral and v.failing_condition == "C1"
    v = polyhedral_inf(make_system(A3, B3))
    assert v.polyhedral and v.k_vert <= 6


def test_weighted_cycle_is_simplicial(rng):
    for n in range(2, 7):
        A = weighted_cycle(n, rng)
        b = np.eye(n)[0]
        v = polyhedral_fin(make_system(A, b))
        assert v.polyhedral and v.k_vert == n and v.simplicial


def test_limit_identities(rng):
    for h in (1, 2, 3):
        for _ in range(5):
            A = random_cyclic(int(rng.integers(h, 6)) if h > 1 else 4, h, rng)
            b = random_full_rank_b(A, rng)
            if b is None:
                continue
            s = make_system(A, b)
            lc = s.limit
            scale = s.rho ** h * np.abs(lc.A_f[0]).max()
            assert max(limit_residuals(s)) <= 1e-8 * scale
            assert cones.includes(lc.v_f, lc.C_lim)
            P = lc.projector
            assert np.abs(P @ P - P).max() <= 1e-8 * np.abs(P).max()


def test_special_case_examples():
    s = make_system([[0, 1], [1, 0]], [1, 1])
    C = special_case(s)
    assert C is not None and C.size == 1
    assert special_case(make_system(A1, B1)) is None
    rep = analyze(s)
    assert rep.finite.polyhedral and rep.finite.method == "special_case"


def test_special_case_perron_ray():
    s0 = make_system(A1, B1)
    vf = s0.limit.v_f.generators[:, 0]
    s = make_system(A1, 2.5 * vf)
    C = special_case(s)
    assert C.size == 1
    np.testing.assert_allclose(C.generators[:, 0] / C.generators[:, 0].sum(), vf, atol=1e-9)


def test_worked_example_targets():
    s = make_system(A3, B3)
    res = check_target(s, P4, "polytope", N=6)
    for r, x_ref in zip(res, X4):
        assert r.status == CONTROLLABLE_FINITE
        assert r.residual <= 1e-6
        assert r.objective == pytest.approx(x_ref.sum(), abs=1e-3)
        assert r.replay_error <= s.tol.sim * max(1.0, np.abs(r.point).max())


def test_halfspace_rays_targets():
    s = make_system(A0, B0)
    res = check_target(s, [[3, 2], [2, 3]], "cone", N=2)
    assert [r.status for r in res] == [CONTROLLABLE_FINITE] * 2
    np.testing.assert_allclose(res[0].witness, [4 / 3, 1 / 36], atol=1e-9)
    np.testing.assert_allclose(res[0].inputs, [1 / 36, 4 / 3], atol=1e-9)
    np.testing.assert_allclose(simulate(s, res[0].inputs)[-1], [3, 2], atol=1e-9)


def test_zero_target():
    r = check_target(make_system(A0, B0), [[0, 0]], N=2)[0]
    assert r.status == CONTROLLABLE_FINITE and not np.any(r.inputs)


def test_unreachable_and_almost_controllable():
    s = make_system(A1, B1)
    r = check_target(s, [[1.0, 0.0, 0.0]], N=30)[0]
    assert r.status == NOT_CONTROLLABLE
    vf = s.limit.v_f.generators[:, 0]
    r = check_target(s, [vf], N=5)[0]
    assert r.status == ALMOST_CONTROLLABLE
    assert r.inputs is None


def test_reconstruct_inputs():
    s = make_system(A3, B3)
    u = reconstruct_inputs(s, [1, 0, 0])
    np.testing.assert_array_equal(u, [0, 0, 1])
    np.testing.assert_allclose(simulate(s, [1])[-1], B3)
    w = check_target(s, [P4[0]], N=6)[0].witness
    np.testing.assert_allclose(simulate(s, reconstruct_inputs(s, w))[-1], P4[0], atol=1e-8)
    with pytest.raises(LimitGeneratorUsed):
        reconstruct_inputs(s, [1, 0, 0.5], num_limit=1)


def test_target_horizon():
    rep = analyze(make_system(A3, B3))
    assert target_horizon(rep) == (6, False)
    rep = analyze(make_system(A1, B1))
    assert target_horizon(rep) == (30, True)
    assert target_horizon(rep, 12) == (12, True)


def test_direct_vertex_number_monotone_in_k_max():
    s = make_system(A3, B3)
    assert direct_vertex_number(s, 5) is None
    assert direct_vertex_number(s, 6) == 6


def test_tolerances_are_recorded():
    tol = Tolerances(lp=1e-8)
    assert make_system(A0, B0, tol).tol.lp == 1e-8


def test_exact_and_float_iteration_agree_on_worked_examples():
    for A, b, k in ((A3, B3, 6), (A0, B0, 2)):
        s = make_system(A, b)
        assert direct_vertex_number(s, 20, exact=True) == k
        assert direct_vertex_number(s, 20) == k
    assert direct_vertex_number(make_system(A1, B1), 20, exact=True) is None


def test_exact_iteration_excludes_limit_generators():
    with pytest.raises(ValueError):
        direct_vertex_number(make_system(A3, B3), 6, with_limit=True, exact=True)
