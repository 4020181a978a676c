"""Bayesian decision-making on a dense statevector simulator.

Submodules mirror the pipeline: ``bayesnet`` (model data + documents),
``classical`` (exact and sampling oracles), ``qsim`` (statevector kernel),
``encoder`` (network to circuit), ``qinference`` (amplified rejection
sampling), ``qdecision`` (action selection), ``costmodel`` (operation
counts), ``cli``/``report`` (command line and file outputs).
"""

from .bayesnet import (
    BayesianNetwork,
    Cpt,
    DecisionProblem,
    Evidence,
    UtilityTable,
    Variable,
    Violation,
    joint_probability,
    load_model,
    save_model,
    validate,
    validate_problem,
)
from .classical import (
    Distribution,
    EuReport,
    best_action,
    evidence_probability,
    exact_conditional,
    expected_utility,
    full_joint,
    rejection_sample,
)
from .costmodel import (
    CostEstimate,
    chi_square_lower_bound,
    empirical_cost_audit,
    iterations_a,
    iterations_b,
    ratio_bound,
    ratio_check,
    samples_needed,
    total_ops,
)
from .encoder import basis_index, encode, encoding_cost, op_count, rotation_angle
from .errors import (
    CapacityError,
    DegenerateUtilityError,
    DomainError,
    EstimateUnavailableError,
    NoSolutionError,
    ParseError,
    QbdError,
    ValidationError,
    ZeroEvidenceError,
)
from .qdecision import (
    DecisionReport,
    decide_classical,
    decide_process_a,
    decide_process_b,
    process_a_state,
    utility_state,
)
from .qinference import amplified_state, evidence_predicate, iteration_count, q_conditional
from .qsim import (
    CircuitPlan,
    CRy,
    PhaseFlip,
    StateVector,
    apply,
    grover_iterate,
    marginal,
    run,
    sample,
    zero_state,
)

__version__ = "0.1.0"
