"""Replay every library derivation and check it step by step."""

import itertools

import numpy as np
import pytest

from mbqaoa.core.errors import DerivationError
from mbqaoa.zx.builders import z_rotation
from mbqaoa.zx.derivations import (
    DERIVATIONS,
    DerivationStep,
    check_derivation,
    cnot_to_gadget,
    gadget_to_mbqc,
    qubo_layer_to_mbqc,
    replay_derivation,
    teleport_example,
    x_rotation_to_mbqc,
    z_rotation_to_mbqc,
)
from mbqaoa.zx.diagram import SpiderColor
from mbqaoa.zx.rules import Rule, site

ANGLES = [0.0, 0.37, -1.1, np.pi / 4]
BITS = [0, 1]


def assert_ok(derivation):
    report = check_derivation(derivation)
    assert report.broken_steps == []
    assert report.matches_target, derivation.name
    assert report.ok


@pytest.mark.parametrize("gamma", ANGLES)
def test_cnot_to_gadget(gamma):
    derivation = cnot_to_gadget(gamma)
    assert_ok(derivation)
    final = replay_derivation(derivation.initial, derivation.steps)[-1]
    colors = sorted(s.color.value for s in final.spiders)
    assert colors == ["X", "Z", "Z", "Z"]


@pytest.mark.parametrize("theta, m", itertools.product(ANGLES, BITS))
def test_gadget_to_mbqc(theta, m):
    assert_ok(gadget_to_mbqc(theta, m))


@pytest.mark.parametrize("theta, m", itertools.product(ANGLES, BITS))
def test_z_rotation_to_mbqc(theta, m):
    assert_ok(z_rotation_to_mbqc(theta, m))


@pytest.mark.parametrize("beta, m_v, m_p", itertools.product(ANGLES, BITS, BITS))
def test_x_rotation_to_mbqc(beta, m_v, m_p):
    assert_ok(x_rotation_to_mbqc(beta, m_v, m_p))


@pytest.mark.parametrize("m_e, m_l", itertools.product(BITS, BITS))
def test_qubo_layer_to_mbqc(m_e, m_l):
    derivation = qubo_layer_to_mbqc(
        0.6, coupling=-0.8, field=1.3, edge_outcome=m_e, linear_outcome=m_l
    )
    assert_ok(derivation)


@pytest.mark.parametrize("alpha, m", itertools.product(ANGLES, BITS))
def test_teleport_example(alpha, m):
    assert_ok(teleport_example(alpha, m))


def test_gadget_ancilla_is_cz_attached():
    derivation = gadget_to_mbqc(0.3, 1)
    final = replay_derivation(derivation.initial, derivation.steps)[-1]
    hub = 4
    assert final.spider(hub).color is SpiderColor.Z
    for wire_spider in (2, 3):
        (edge,) = final.edges_between(hub, wire_spider)
        assert edge.hadamard


def test_registry_names():
    assert set(DERIVATIONS) == {
        "cnot_to_gadget",
        "gadget_to_mbqc",
        "z_rotation_to_mbqc",
        "x_rotation_to_mbqc",
        "qubo_layer_to_mbqc",
        "teleport_example",
    }


def test_illegal_step_reports_index():
    steps = [
        DerivationStep(rule=Rule.COLOR_CHANGE, site=site(1)),
        DerivationStep(rule=Rule.FUSION, site=site(1, 2)),
    ]
    with pytest.raises(DerivationError) as info:
        replay_derivation(z_rotation(0.3), steps)
    assert info.value.step == 1


def test_wrong_target_is_caught():
    derivation = z_rotation_to_mbqc(0.4, 0)
    wrong = derivation.model_copy(update={"target": np.eye(2)})
    report = check_derivation(wrong)
    assert report.broken_steps == []
    assert not report.matches_target
    assert not report.ok


def _corrections(derivation):
    final = replay_derivation(derivation.initial, derivation.steps)[-1]
    found = []
    for port in final.outputs:
        (neighbor,) = final.neighbors(port)
        found.append(final.spider(neighbor).phase.is_pi())
    return found


ANCILLA_CHAINS = [
    lambda m: gadget_to_mbqc(0.37, m),
    lambda m: z_rotation_to_mbqc(-1.1, m),
    lambda m: qubo_layer_to_mbqc(0.6, -0.8, 1.3, m, m),
]


@pytest.mark.parametrize("make", ANCILLA_CHAINS)
def test_chains_start_without_byproducts(make):
    derivation = make(1)
    assert not any(s.phase.is_pi() for s in derivation.initial.spiders)
    assert derivation.initial == make(0).initial


@pytest.mark.parametrize("make, m", itertools.product(ANCILLA_CHAINS, BITS))
def test_byproduct_is_pushed_through_the_ancilla(make, m):
    rules = [step.rule for step in make(m).steps]
    assert (Rule.PI_COPY in rules) == bool(m)


@pytest.mark.parametrize("m", BITS)
def test_gadget_leaves_z_on_both_wires(m):
    assert _corrections(gadget_to_mbqc(0.37, m)) == [bool(m), bool(m)]


@pytest.mark.parametrize("m_e, m_l", itertools.product(BITS, BITS))
def test_qubo_layer_corrections_combine_on_shared_wire(m_e, m_l):
    derivation = qubo_layer_to_mbqc(0.6, -0.8, 1.3, m_e, m_l)
    assert _corrections(derivation) == [bool(m_e), bool((m_e + m_l) % 2)]
