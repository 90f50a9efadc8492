import math

import pytest

import perispec as ps


def test_material_and_scaling_constant():
    m = ps.Material(n=1, delta=1.0, beta=1.0, mu=1.0, lambda_star=1.0)
    assert math.isclose(ps.scaling_constant(m), 2.0, rel_tol=1e-13)
    with pytest.raises(ValueError):
        ps.Material(n=1, delta=1.0, beta=3.0, mu=1.0, lambda_star=1.0)


def test_eigenvalues_and_navier_limit():
    m = ps.Material(n=2, delta=1.0, beta=1.5, mu=1.0, lambda_star=2.0)
    l1, l2, via_quad = ps.eigenvalues(m, [1.0, 0.0])
    assert not via_quad
    assert l1 < 0.0 and l2 < 0.0

    # small-horizon limit approaches the Navier eigenvalues
    small = ps.Material(n=2, delta=1e-3, beta=1.5, mu=1.0, lambda_star=2.0)
    s1, s2, _ = ps.eigenvalues(small, [1.0, 0.0])
    assert math.isclose(s1, -4.0, rel_tol=1e-5)
    assert math.isclose(s2, -1.0, rel_tol=1e-5)

    q1, q2 = ps.eigenvalues_quadrature(m, [1.0, 0.0])
    assert math.isclose(q1, l1, rel_tol=1e-7)
    assert math.isclose(q2, l2, rel_tol=1e-7)


def test_multiplier_matrix_shape():
    m = ps.Material(n=2, delta=1.0, beta=1.5, mu=1.0, lambda_star=2.0)
    M = ps.multiplier_dense(m, [1.0, 0.0])
    assert len(M) == 2 and len(M[0]) == 2
    assert abs(M[0][1]) < 1e-14 and abs(M[1][0]) < 1e-14
    ok, offenders = ps.validate_negativity(m, 4)
    assert ok and offenders == []


def test_equilibrium_round_trip():
    m = ps.Material(n=1, delta=1.0, beta=1.0, mu=1.0, lambda_star=1.0)
    op = ps.Operator.peridynamic(m, 8)
    b = ps.make_random_field(1, 8, seed=7)
    u = ps.solve_equilibrium(op, b)
    back = ps.apply_operator(op, u)
    for k, v in b.modes():
        w = back.mode(k)
        for a, c in zip(v, w):
            assert abs(a - c) < 1e-10


def test_evolution_energy_and_initial_data():
    m = ps.Material(n=1, delta=1.0, beta=1.0, mu=1.0, lambda_star=1.0)
    op = ps.Operator.peridynamic(m, 8)
    f = ps.make_random_field(1, 8, seed=1)
    g = ps.make_random_field(1, 8, seed=2)
    sol = ps.TimeSolution.homogeneous(op, f, g)
    e0 = sol.energy(0.0)
    assert math.isclose(sol.energy(5.0), e0, rel_tol=1e-10)
    u0 = sol.at(0.0)
    for k, v in f.modes():
        assert u0.mode(k) == v


def test_field_json_round_trip_and_norm():
    f = ps.make_decay_field(1, 16, s=1.0, seed=3)
    g = ps.field_from_json(f.to_json())
    assert math.isclose(
        ps.sobolev_norm(f, 1.0), ps.sobolev_norm(g, 1.0), rel_tol=1e-15
    )


def test_regularity_prediction():
    m = ps.Material(n=1, delta=1.0, beta=2.0, mu=1.0, lambda_star=1.0)
    op = ps.Operator.peridynamic(m, 2)
    pred = ps.predicted_regularity(op, "equilibrium", s=0.0)
    assert math.isclose(pred["spatial_index"], 1.0)
    forced = ps.predicted_regularity(op, "forced", S=2.6)
    assert forced["classical_class"] == 5


def test_study_table_dict():
    m = ps.Material(n=1, delta=1.0, beta=1.0, mu=1.0, lambda_star=1.0)
    table = ps.asymptotic_validation(m, [50.0, 100.0])
    assert table["parameter"] == [50.0, 100.0]
    assert "lambda2_rel_err" in table["metrics"]
    assert table["csv"].startswith("# study_kind=asymptotic_validation\n")
