import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tritrophic import (
    Frame,
    OriginalParams,
    RescaledParams,
    StateVector,
    boundary_equilibria,
    equilibria,
    interior_equilibrium,
    interior_existence_thresholds,
    rescale_params,
    residual,
    unscale_state,
)
from tritrophic.model import ORIGINAL_KEYS
from tritrophic.presets import GLOBALLY_STABLE, STABLE_FOCUS, STABLE_NODE, UNSTABLE_FOCUS


def interior_original(op):
    return unscale_state(op, interior_equilibrium(rescale_params(op)))


@pytest.mark.parametrize(
    "op, expected",
    [
        (STABLE_NODE, (12.20812, 6.315789, 4.005566)),
        (STABLE_FOCUS, (10.76378, 6.315789, 1.481880)),
        (UNSTABLE_FOCUS, (16.86547, 6.315789, 34.44427)),
        (GLOBALLY_STABLE, (11.36233, 6.315789, 0.416199)),
    ],
)
def test_interior_equilibrium_values(op, expected):
    e = interior_original(op)
    np.testing.assert_allclose([e.x, e.y, e.z], expected, rtol=2e-6)


@pytest.mark.parametrize(
    "op, expected",
    [
        (STABLE_NODE, (0.75, 0.626494, 1.065789)),
        (STABLE_FOCUS, (0.6, 0.631174, 0.915789)),
        (UNSTABLE_FOCUS, (0.75, 0.626494, 0.651754)),
        (GLOBALLY_STABLE, (1.5, 0.446657, 1.815789)),
    ],
)
def test_thresholds(op, expected):
    th = interior_existence_thresholds(op)
    np.testing.assert_allclose([th.t1, th.t2, th.t3], expected, atol=1e-6)
    assert th.prey_premise and th.top_premise and th.verdict


def test_threshold_verdict_matches_existence_across_a0():
    # below the largest threshold there is no positive interior point
    for a0 in np.linspace(0.5, 2.5, 81):
        op = STABLE_NODE.replace(a0=float(a0))
        exists = interior_equilibrium(rescale_params(op)) is not None
        assert interior_existence_thresholds(op).verdict == exists, a0


def test_thresholds_without_premises():
    th = interior_existence_thresholds(STABLE_NODE.replace(v1=0.5))
    assert not th.prey_premise and not th.verdict
    th = interior_existence_thresholds(STABLE_NODE.replace(v3=0.5))
    assert th.t2 is None and not th.verdict


def test_boundary_equilibria():
    rp = rescale_params(STABLE_NODE)
    eqs = boundary_equilibria(rp)
    assert eqs.E0.as_array().tolist() == [0, 0, 0]
    assert eqs.E1.as_array().tolist() == [1, 0, 0]
    assert eqs.theta == pytest.approx(rp.a * rp.b / (rp.c - rp.b))
    assert eqs.E2.z == 0.0
    assert residual(rp, eqs.E2) < 1e-12


def test_no_planar_point_when_predator_cannot_grow():
    rp = RescaledParams(a=0.5, b=2.0, c=1.0, d=1.0, p=1.0, q=1.0, r=0.5)
    eqs = equilibria(rp)
    assert eqs.E2 is None and eqs.theta is None and eqs.E_star is None
    assert set(eqs.present()) == {"E0", "E1"}


def test_interior_absent_when_top_predator_cannot_settle():
    rp = RescaledParams(a=0.5, b=0.5, c=1.0, d=1.0, p=1.0, q=0.5, r=1.0)
    assert interior_equilibrium(rp) is None


def test_second_branch_reported():
    # small a puts both roots of the x* quadratic in (0, 1)
    rp = RescaledParams(a=0.05, b=0.1, c=1.0, d=0.5, p=1.0, q=0.3, r=0.1)
    eqs = equilibria(rp)
    assert eqs.E_star is not None and eqs.nonunique
    assert eqs.alternate.x < eqs.E_star.x
    assert residual(rp, eqs.alternate) < 1e-12


@st.composite
def original_params(draw):
    values = {k: draw(st.floats(0.05, 20.0)) for k in ORIGINAL_KEYS}
    values["d1"] = values["d0"]
    return OriginalParams(**values)


@settings(max_examples=300, deadline=None)
@given(original_params())
def test_equilibria_are_fixed_points(op):
    rp = rescale_params(op)
    for name, s in equilibria(rp).present().items():
        assert residual(rp, s) < 1e-10 * max(1.0, s.z, s.y, s.x) ** 2, name
        assert s.frame is Frame.RESCALED


@st.composite
def perturbed_presets(draw):
    base = draw(st.sampled_from([STABLE_NODE, STABLE_FOCUS, UNSTABLE_FOCUS, GLOBALLY_STABLE]))
    factors = {k: draw(st.floats(0.8, 1.25)) for k in ORIGINAL_KEYS if k != "d1"}
    values = {k: getattr(base, k) * f for k, f in factors.items()}
    values["d1"] = values["d0"]
    return OriginalParams(**values)


@settings(max_examples=300, deadline=None)
@given(perturbed_presets())
def test_intermediate_predator_identity(op):
    e = interior_equilibrium(rescale_params(op))
    assume(e is not None)
    Y = unscale_state(op, e).y
    assert Y == pytest.approx(op.v3 / op.c3 - op.d3, rel=1e-9, abs=1e-9)


def test_residual_rejects_original_frame():
    with pytest.raises(ValueError):
        residual(rescale_params(STABLE_NODE), StateVector(1, 1, 1, Frame.ORIGINAL))
