"""
Tests for the hardware cost model (qsgps.resource).

The encoder has four Hadamards and eight CNOTs. Scheduled along its drawn
columns it needs two single-qubit layers and eight two-qubit layers, which
gives 216.4 ns on the superconducting profile and 482.64 us on the
trapped-ion profile.
"""

import pytest

from qsgps import code5, resource
from qsgps.errors import ConfigError
from qsgps.models.circuit import Circuit, Gate
from qsgps.models.hardware import CircuitCost, HardwareProfile


@pytest.fixture
def encoder_cost():
    return resource.circuit_cost(code5.encoding_circuit())


class TestCircuitCost:
    def test_encoder_with_drawn_columns(self, encoder_cost):
        assert encoder_cost == CircuitCost(4, 8, 2, 8)

    def test_encoder_as_soon_as_possible(self):
        cost = resource.circuit_cost(code5.encoding_circuit(), respect_moments=False)
        assert cost.to_dict() == {"n_1q": 4, "n_2q": 8, "d_1q": 2, "d_2q": 7}

    def test_empty_circuit(self):
        assert resource.circuit_cost(Circuit(3)) == CircuitCost(0, 0, 0, 0)

    def test_parallel_single_qubit_gates_share_a_layer(self):
        circuit = Circuit(3, [Gate.h(0), Gate.h(1), Gate.h(2)])
        assert resource.circuit_cost(circuit) == CircuitCost(3, 0, 1, 0)

    def test_chain_of_cnots(self):
        circuit = Circuit(3, [Gate.cnot(0, 1), Gate.cnot(1, 2), Gate.cnot(0, 2)])
        assert resource.circuit_cost(circuit).d_2q == 3

    def test_classes_do_not_share_layers(self):
        circuit = Circuit(4, [Gate.h(0), Gate.cnot(2, 3)])
        cost = resource.circuit_cost(circuit)
        assert (cost.d_1q, cost.d_2q) == (1, 1)


class TestProfiles:
    def test_superconducting(self, encoder_cost):
        profile = resource.get_profile("superconducting")
        assert resource.total_time(profile, encoder_cost) == pytest.approx(216.4e-9, rel=1e-12)
        assert resource.fidelity_bound(profile, encoder_cost) == pytest.approx(0.9840, abs=5e-4)
        assert resource.fidelity_bound(profile, encoder_cost) == pytest.approx(0.99997 ** 4 * 0.998 ** 8, rel=1e-14)

    def test_trapped_ion(self, encoder_cost):
        profile = resource.get_profile("Trapped-ion")
        assert resource.total_time(profile, encoder_cost) == pytest.approx(482.64e-6, rel=1e-12)
        assert resource.fidelity_bound(profile, encoder_cost) == pytest.approx(0.9976, abs=5e-4)

    def test_infidelity_complements_fidelity(self, encoder_cost):
        profile = resource.get_profile("trapped ion")
        assert resource.infidelity(profile, encoder_cost) == pytest.approx(1.0 - resource.fidelity_bound(profile, encoder_cost))

    def test_ideal_profile_is_noiseless(self, encoder_cost):
        profile = resource.get_profile("ideal")
        assert resource.fidelity_bound(profile, encoder_cost) == 1.0
        noise = resource.noise_channels_from_profile(profile)
        assert (noise.p_1q, noise.p_2q) == (0.0, 0.0)

    def test_builtin_rows(self):
        assert [p.name for p in resource.builtin_profiles()] == ["Superconducting", "Trapped-ion"]

    def test_unknown_profile(self):
        with pytest.raises(ConfigError):
            resource.get_profile("photonic")

    def test_noise_rates_follow_infidelities(self):
        noise = resource.noise_channels_from_profile(resource.get_profile("superconducting"))
        assert noise.p_1q == pytest.approx(3e-5)
        assert noise.p_2q == pytest.approx(2e-3)
        assert noise.source == "Superconducting"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"t_1q": 0.0},
            {"t_2q": -1.0},
            {"f_1q": 0.0},
            {"f_2q": 1.5},
        ],
    )
    def test_invalid_profiles(self, kwargs):
        values = {"name": "bad", "t_1q": 1e-9, "t_2q": 1e-8, "f_1q": 0.99, "f_2q": 0.99}
        values.update(kwargs)
        with pytest.raises(ConfigError):
            HardwareProfile(**values)

    def test_profile_dict_keys(self):
        data = resource.get_profile("superconducting").to_dict()
        assert HardwareProfile.from_dict(data).to_dict() == data
        with pytest.raises(ConfigError):
            HardwareProfile.from_dict({**data, "extra": 1})
