"""Catalog wiring tests.

Structure conditions, Casimir annihilation and dissipation-rate closed
forms are checked over every entry; frozen values were computed by hand
from the formulas (noted inline).
"""

import math

import numpy as np
import pytest

from jhi import jets
from jhi.errors import CapabilityError, ConfigError
from jhi.jacobi import (
    CotangentData,
    poisson_matrix,
    verify_jacobi_conditions,
)
from jhi.models import ModelDefinition, build_model, exact_flow, model_names

ALL_NAMES = (
    "contact",
    "jacobi2d",
    "jacobi3d",
    "jacobi4d",
    "damped",
    "lotka_volterra",
    "rigid_body",
)


@pytest.fixture(params=ALL_NAMES)
def model(request):
    return build_model(request.param)


def test_catalog_is_exactly_the_seven_systems():
    assert set(model_names()) == set(ALL_NAMES)
    assert len(model_names()) == 7


def test_shapes_and_defaults(model):
    assert isinstance(model, ModelDefinition)
    assert len(model.coord_names) == model.dim
    assert len(model.default_x0) == model.dim
    state = model.default_state()
    assert state.dim == model.dim
    assert state.t == model.default_t0 == 1.0
    # stepping must be able to start: zero covector lies in the domain
    rest = CotangentData(state, (0.0,) * model.dim, 0.0)
    assert model.realization.domain_ok(rest)
    assert model.realization.alpha(rest).coords() == pytest.approx(
        state.coords(), abs=1e-14
    )


def test_sampler_stays_in_domain(model):
    rng = np.random.default_rng(7)
    for _ in range(20):
        state = model.sample_state(rng)
        assert state.dim == model.dim
        rest = CotangentData(state, (0.0,) * model.dim, 0.0)
        assert model.realization.domain_ok(rest)


def test_structure_conditions_hold_across_catalog(model):
    rng = np.random.default_rng(11)
    points = [model.sample_state(rng).x for _ in range(20)]
    report = verify_jacobi_conditions(model.structure, points, tol=1e-8)
    assert report.passed, (model.name, report.max_residual)
    assert report.n_points == 20


def test_structure_conditions_hold_for_other_parameters():
    variants = [
        build_model("lotka_volterra", {"a": 0.5, "d": 2.0, "f": 2.0}),
        build_model("lotka_volterra", {"lambda1": 1.0, "lambda2": 1.0}),
        build_model("rigid_body", {"I1": 1.0, "I2": math.pi, "I3": 10.0}),
        build_model("rigid_body", {"a1": 0.5, "a2": -0.3, "a3": -0.2}),
        build_model("damped", {"gamma": 0.3}),
    ]
    rng = np.random.default_rng(13)
    for m in variants:
        points = [m.sample_state(rng).x for _ in range(20)]
        report = verify_jacobi_conditions(m.structure, points, tol=1e-8)
        assert report.passed, (m.params, report.max_residual)


def test_casimirs_annihilate_the_lifted_structure(model):
    rng = np.random.default_rng(3)
    for _ in range(20):
        state = model.sample_state(rng)
        pi = poisson_matrix(model.structure, state)
        for cname, cas in model.casimirs:
            _, grad = jets.evaluate_with_gradient(cas, state.coords())
            residual = np.asarray(grad, dtype=float) @ pi
            assert np.max(np.abs(residual)) <= 1e-9, (model.name, cname)


def test_dissipation_rate_matches_structure(model):
    rng = np.random.default_rng(5)
    for _ in range(30):
        x = model.sample_state(rng).x
        _, grad = model.hamiltonian.gradient(x)
        expected = float(model.structure.e_vector(x) @ grad)
        got = float(model.e_of_h(x))
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-12), model.name


def test_dissipation_rate_frozen_values():
    # contact E = -d/dz and H = q+z: rate is identically -1
    contact = build_model("contact")
    assert contact.e_of_h((0.1, -1.1, 0.09)) == -1.0
    # E = d/dx1 against H = |x|^2 gives 2*x1, so -2 at the default start
    triple = build_model("jacobi3d")
    assert triple.e_of_h((-1.0, 1.0, 1.0)) == -2.0
    # damped oscillator dissipates at the constant rate -gamma
    damped = build_model("damped")
    assert damped.e_of_h((1.0, 0.0, 0.0)) == -0.01
    assert build_model("damped", {"gamma": 0.5}).e_of_h((0.3, 0.2, 0.1)) == -0.5
    # predator-prey rate 2(x - 3) vanishes on the x = 3 line
    lv = build_model("lotka_volterra")
    for y in (1.0, 2.0, 5.0):
        assert lv.e_of_h((3.0, y)) == pytest.approx(0.0, abs=1e-14)
    assert lv.e_of_h((4.0, 2.0)) == pytest.approx(2.0, rel=1e-14)


def test_rigid_body_dissipation_is_tangent_to_spheres():
    model = build_model("rigid_body")
    rng = np.random.default_rng(17)
    for _ in range(100):
        x = rng.uniform(-2.0, 2.0, 3)
        e_vec = model.structure.e_vector(x)
        assert abs(float(e_vec @ x)) <= 1e-12


def test_generating_overrides_present_where_expected():
    assert build_model("jacobi3d").s_overrides.keys() == {3}
    assert build_model("damped").s_overrides.keys() == {3}
    for name in ("contact", "jacobi2d", "jacobi4d", "lotka_volterra", "rigid_body"):
        assert build_model(name).s_overrides is None


def test_generating_override_frozen_values():
    # quartic polynomial at the all-ones point: (3-1+10+10+3+6)/4
    s3_triple = build_model("jacobi3d").s_overrides[3]
    assert s3_triple((1.0, 1.0, 1.0, 1.0)) == pytest.approx(31.0 / 4.0)
    # damped closed form at (q,p,z,t) = (1, 0.5, 2, 1), gamma = 0.01:
    # [0.9999/4 - 1e-6 + 0.25*0.25005 + 0.005] / 6
    s3_damped = build_model("damped").s_overrides[3]
    assert s3_damped((1.0, 0.5, 2.0, 1.0)) == pytest.approx(
        0.3174865 / 6.0, rel=1e-15
    )


def test_overrides_scale_linearly_with_t():
    for name in ("jacobi3d", "damped"):
        s3 = build_model(name).s_overrides[3]
        point = (0.7, -0.4, 1.2)
        assert s3(point + (3.0,)) == pytest.approx(
            3.0 * s3(point + (1.0,)), rel=1e-14
        )


def test_planar_variants():
    quad = build_model("jacobi2d")
    assert quad.variant == "quadratic"
    assert quad.hamiltonian.value((1.0, 1.0)) == 2.0
    assert quad.e_of_h((1.0, 1.0)) == 0.0

    trig = build_model("jacobi2d", {"hamiltonian": "cossin"})
    assert trig.variant == "cossin"
    assert trig.hamiltonian.value((1.0, 1.0)) == pytest.approx(
        math.cos(1.0) * math.sin(1.0)
    )
    # rate formula matches E . grad H by the generic cross-check, but pin
    # one hand value: at (pi/2, 0) the cos(x)cos(y) term dies and
    # sin(pi/2)sin(0) = 0 too
    assert trig.e_of_h((math.pi / 2.0, 0.0)) == pytest.approx(0.0, abs=1e-12)


def test_configuration_errors():
    with pytest.raises(ConfigError):
        build_model("nonexistent")
    with pytest.raises(ConfigError):
        build_model("contact", {"mass": 1.0})
    with pytest.raises(ConfigError):
        build_model("jacobi2d", {"hamiltonian": "cubic"})
    with pytest.raises(ConfigError):
        build_model("rigid_body", {"a1": 0.5})  # breaks a1+a2+a3 = 0
    with pytest.raises(ConfigError):
        build_model("lotka_volterra", {"c": 0.5})
    with pytest.raises(ConfigError):
        build_model("lotka_volterra", {"d": 1.0, "f": 2.0})
    with pytest.raises(ConfigError):
        build_model("lotka_volterra", {"a": 0.0})


# ---------------------------------------------------------------------------
# Closed-form planar flow.  Oracle: plain RK4 on the hand-written field
# (4r^2 y, -4r^2 x), written before the values were frozen.
# ---------------------------------------------------------------------------


def planar_field(x, y):
    r2 = x * x + y * y
    return np.array([4.0 * r2 * y, -4.0 * r2 * x])


def rk4_planar(x0, span, n_steps):
    state = np.asarray(x0, dtype=float)
    h = span / n_steps
    for _ in range(n_steps):
        k1 = planar_field(*state)
        k2 = planar_field(*(state + 0.5 * h * k1))
        k3 = planar_field(*(state + 0.5 * h * k2))
        k4 = planar_field(*(state + h * k3))
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return state


def test_exact_flow_at_zero_time_is_identity():
    x0 = (0.3, -0.8)
    assert exact_flow("jacobi2d", x0, 0.0) == pytest.approx(x0, abs=0.0)


def test_exact_flow_unsupported_models():
    for name in ALL_NAMES:
        if name == "jacobi2d":
            continue
        with pytest.raises(CapabilityError):
            exact_flow(name, (1.0, 1.0), 1.0)


def test_exact_flow_matches_fine_rk4():
    # the rotation rate at r^2 = 2 is 8 rad per unit time, so the oracle
    # grid must be fine: 2^14 steps puts the RK4 error near 1e-12
    x0 = (1.0, 1.0)
    got = exact_flow("jacobi2d", x0, math.pi)
    oracle = rk4_planar(x0, math.pi, 2**14)
    assert got == pytest.approx(oracle, abs=1e-9)
    # the rotation rate is -4 r^2 = -8 here, so [0, pi] is four full
    # revolutions and the flow returns to the start
    assert got == pytest.approx(x0, abs=1e-12)


def test_exact_flow_preserves_radius():
    rng = np.random.default_rng(23)
    for _ in range(50):
        x0 = rng.uniform(-1.5, 1.5, 2)
        if np.hypot(*x0) < 0.1:
            continue
        out = exact_flow("jacobi2d", x0, rng.uniform(0.0, 3.0))
        assert np.hypot(*out) == pytest.approx(np.hypot(*x0), rel=1e-13)
