//! Bisimulation semimetrics for finite Markov decision processes.
//!
//! The crate computes the least fixed point of
//!
//! ```text
//! F^c(h)(s, s') = max_a ( |r_s^a - r_s'^a| + c · T_K(h)(P_s^a, P_s'^a) )
//! ```
//!
//! where `T_K(h)` is the Kantorovich (optimal transport) distance with
//! ground cost `h`, solved exactly with primal and dual certificates. Around
//! it sit value iteration, exact bisimulation by partition refinement,
//! metric-guided state aggregation, and a discretized interval model with
//! closed-form oracles.
//!
//! ```
//! use bisim_core::{fixed_point_metric, FiniteMdp};
//!
//! // two absorbing states paying 0 and 1
//! let mdp = FiniteMdp::with_default_labels(
//!     vec![vec![0.0], vec![1.0]],
//!     vec![vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]],
//! )
//! .unwrap();
//! let sol = fixed_point_metric(&mdp, 0.5, 1e-9).unwrap();
//! assert!((sol.metric.get(0, 1) - 2.0).abs() <= 1e-9);
//! ```

pub mod aggregation;
pub mod error;
pub mod mdp;
pub mod metric;
pub mod partition;
pub mod random;
pub mod tolerance;
pub mod toy;
pub mod transport;

pub use aggregation::{
    aggregation_report, aggregation_report_with_metric, epsilon_partition, quotient_mdp,
    AggregationReport, BlockReport,
};
pub use error::{Error, Result};
pub use mdp::{
    greedy_policy, reward_span, validate_mdp, value_iteration, FiniteMdp, Policy, ValidationReport,
    ValueSolution, ValueVector, Violation,
};
pub use metric::{
    bisimulation_partition, fixed_point_metric, fixed_point_metric_traced, kernel_check,
    metric_bound, metric_step, perturbation_bound, perturbation_rhs, value_lipschitz_check,
    KernelPair, KernelReport, LipschitzCheck, MetricMatrix, MetricSolution, PairVerdict,
    PerturbationBound,
};
pub use partition::Partition;
pub use tolerance::Tolerances;
pub use toy::{
    block_center, convergence_experiment, convergence_experiment_with, toy_mdp,
    toy_metric_closed_form, toy_value_closed_form, toy_value_exact, ConvergenceRow,
    ExperimentConfig, ToySpec,
};
pub use transport::{
    brute_force_kantorovich, kantorovich, kantorovich_with, quotient_total_variation,
    total_variation, CostMatrix, Distribution, DualPotentials, Transport, TransportPlan,
};
