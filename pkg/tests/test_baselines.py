import numpy as np
import pytest

from itemc.baselines import (
    BRUTE_FORCE_MAX_QUBITS,
    OptimaReport,
    annealing_schedule,
    brute_force,
    reference_energy,
    simulated_annealing,
)
from itemc.instance import IsingInstance, sample_random_ising

from conftest import enumerate_energies


class TestBruteForce:
    def test_pair_instance(self, pair_instance):
        rep = brute_force(pair_instance, 1)
        assert rep.solutions == (("10", pytest.approx(-1.5)),)
        assert rep.exact and rep.ground_degeneracy == 1

    def test_matches_enumeration(self):
        inst = sample_random_ising(7, "density:0.5", 12)
        table = enumerate_energies(inst)
        ranked = sorted(table.items(), key=lambda kv: (kv[1], int(kv[0][::-1], 2)))
        rep = brute_force(inst, 5)
        assert rep.bitstrings == [b for b, _ in ranked[:5]]
        assert [e for _, e in rep.solutions] == pytest.approx([e for _, e in ranked[:5]], abs=1e-12)

    def test_zero_hamiltonian(self):
        inst = IsingInstance(3, (0.0,) * 3, ())
        rep = brute_force(inst, 3)
        assert rep.bitstrings == ["000", "100", "010"]
        assert rep.fully_degenerate

    def test_k_larger_than_space(self, pair_instance):
        assert len(brute_force(pair_instance, 10).solutions) == 4

    def test_cap(self):
        inst = IsingInstance(BRUTE_FORCE_MAX_QUBITS + 1, (0.0,) * (BRUTE_FORCE_MAX_QUBITS + 1), ())
        with pytest.raises(ValueError, match="simulated_annealing"):
            brute_force(inst)

    def test_report_round_trip(self):
        rep = brute_force(sample_random_ising(5, "complete", 1), 3)
        assert OptimaReport.from_dict(rep.to_dict()) == rep


class TestAnnealing:
    def test_pair_instance(self, pair_instance):
        ss = simulated_annealing(pair_instance, num_reads=100, sweeps=100, seed=0)
        assert ss.best()[1] == pytest.approx(-1.5)
        assert ss.shots == 100

    def test_ferromagnetic_chain(self):
        edges = tuple((i, i + 1, -1.0) for i in range(9))
        inst = IsingInstance(10, (0.0,) * 10, edges)
        ss = simulated_annealing(inst, num_reads=50, sweeps=200, seed=1)
        assert ss.best()[1] == pytest.approx(-9.0)

    def test_deterministic(self):
        inst = sample_random_ising(12, "three_regular", 3)
        a = simulated_annealing(inst, 20, 50, seed=7)
        b = simulated_annealing(inst, 20, 50, seed=7)
        assert a.records() == b.records()

    def test_schedule_is_geometric_and_cooling(self):
        inst = sample_random_ising(8, "complete", 0)
        betas = annealing_schedule(inst, 100)
        assert np.all(np.diff(betas) > 0)
        ratios = betas[1:] / betas[:-1]
        assert np.allclose(ratios, ratios[0])

    def test_energies_bound(self):
        inst = sample_random_ising(9, "complete", 4)
        ss = simulated_annealing(inst, 30, 30, seed=2)
        assert np.allclose(ss.energies, inst.energies(ss.bits))

    def test_rejects_bad_arguments(self, pair_instance):
        with pytest.raises(ValueError):
            simulated_annealing(pair_instance, num_reads=0)

    def test_reference_energy(self, pair_instance):
        assert reference_energy(pair_instance) == (pytest.approx(-1.5), True)
