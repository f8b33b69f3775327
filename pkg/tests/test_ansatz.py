import json
from pathlib import Path

import numpy as np
import pytest

from qfmkit import gates
from qfmkit.ansatz import (
    CORE_TEMPLATES,
    TEMPLATES,
    AnsatzSpec,
    available,
    build_ansatz,
    describe,
    parameter_count,
    params_per_block,
)
from qfmkit.circuit import TRAINABLE, CircuitIR
from qfmkit.ansatz import _crx, _crz, _Slots

from .conftest import P0, P1, dense_unitary, embed

GOLDEN = Path(__file__).parent / "golden" / "ansatz"


def _count(ir, kinds):
    return sum(op.kind in kinds for op in ir.ops)


def test_hardware_efficient_layout():
    ir = build_ansatz(AnsatzSpec("Hardware_Efficient", 4))
    assert _count(ir, ("RX", "RY", "RZ", "Rot")) == 12
    assert _count(ir, ("CNOT",)) == 4
    assert ir.param_count == 12
    # RY, RZ, RY on each qubit
    assert [op.kind for op in ir.ops[:3]] == ["RY", "RZ", "RY"]


def test_strongly_entangling_layout():
    ir = build_ansatz(AnsatzSpec("Strongly_Entangling", 4))
    assert _count(ir, ("Rot",)) == 8
    assert ir.param_count == 24
    assert _count(ir, ("CNOT",)) == 8


def test_no_entangling_layout():
    ir = build_ansatz(AnsatzSpec("No_Entangling", 3))
    assert _count(ir, ("Rot",)) == 3
    assert all(gates.arity(op.kind) == 1 for op in ir.ops)


@pytest.mark.parametrize(
    "name,n,layers,expected",
    [("Hardware_Efficient", 4, 1, 24), ("No_Entangling", 1, 1, 6), ("Strongly_Entangling", 4, 2, 72)],
)
def test_parameter_count(name, n, layers, expected):
    assert parameter_count(AnsatzSpec(name, n, layers)) == expected


# per-block counts at four qubits for the Sim et al. set
SIM_COUNTS = {
    "Circuit_1": 8, "Circuit_2": 8, "Circuit_3": 11, "Circuit_4": 11, "Circuit_6": 28,
    "Circuit_9": 4, "Circuit_10": 8, "Circuit_15": 8, "Circuit_16": 11, "Circuit_17": 11,
    "Circuit_18": 12, "Circuit_19": 12,
}


@pytest.mark.parametrize("name", sorted(SIM_COUNTS))
def test_sim_parameter_counts(name):
    assert params_per_block(name, 4) == SIM_COUNTS[name]


def test_registry_contents():
    assert set(CORE_TEMPLATES) <= set(available())
    assert "No_Ansatz" in available()


def test_name_is_case_insensitive():
    assert AnsatzSpec("circuit_19", 2).name == "Circuit_19"
    assert AnsatzSpec("HARDWARE-EFFICIENT", 2).name == "Hardware_Efficient"
    with pytest.raises(ValueError):
        AnsatzSpec("nope", 2)


def test_spec_validation():
    with pytest.raises(ValueError):
        AnsatzSpec("Circuit_1", 0)
    with pytest.raises(ValueError):
        AnsatzSpec("Circuit_1", 2, 0)
    with pytest.raises(ValueError):
        build_ansatz(AnsatzSpec("Circuit_19", 1))


@pytest.mark.parametrize("name", sorted(TEMPLATES))
@pytest.mark.parametrize("n", [2, 4])
def test_golden_layout(name, n):
    golden = json.loads((GOLDEN / f"{name.lower()}_n{n}.json").read_text())
    ir = build_ansatz(AnsatzSpec(name, n))
    assert ir.param_count == golden["param_count"]
    assert describe(ir) == golden["ops"]


@pytest.mark.parametrize("name", sorted(TEMPLATES))
def test_layer_offsets_and_slot_usage(name):
    spec = AnsatzSpec(name, 4)
    per = params_per_block(name, 4)
    ir = build_ansatz(spec, layer_index=2)
    used = {s for op in ir.ops if op.tag == TRAINABLE for s in op.slots}
    assert used == set(range(2 * per, 3 * per))


@pytest.mark.parametrize("builder,axis,target_op", [(_crz, "RZ", gates.rz), (_crx, "RX", gates.rx)])
@pytest.mark.parametrize("c,t", [(0, 1), (1, 0)])
@pytest.mark.parametrize("phi", [0.0, 0.7, -2.3, np.pi])
def test_controlled_rotation_decomposition(builder, axis, target_op, c, t, phi):
    ir = CircuitIR(2, tuple(builder(c, t, _Slots())), 1)
    got = dense_unitary(ir.bind([phi]), 2)
    expected = embed(P0, c, 2) + embed(P1, c, 2) @ embed(target_op(phi), t, 2)
    np.testing.assert_allclose(got, expected, atol=1e-12)
