"""QUBO/Ising optimization with imaginary-time-evolution mimicking circuits."""
from .baselines import OptimaReport, brute_force, simulated_annealing
from .bench import ExperimentConfig, approximation_ratio, best_k_probability, run_experiment
from .instance import (
    GraphSpec,
    IsingInstance,
    QuboMatrix,
    deserialize,
    ising_energy,
    qubo_to_ising,
    sample_random_ising,
    serialize,
)
from .simulator import SampleSet, StateVector
from .solver import (
    Circuit,
    GateOrdering,
    RunRecord,
    SolverConfig,
    build_circuit,
    cvar,
    feedback_angles,
    gate_orderings,
    shot_budget,
    sigma_z_alpha,
    solve,
)

__version__ = "0.1.0"
