//! Numerical tolerances shared by the solvers and the invariant checks.

/// Every tolerance used by the crate, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a transition row or distribution from total mass 1.
    pub row_sum: f64,
    /// Allowed marginal error of a transport plan and Lipschitz slack of
    /// dual potentials.
    pub feasibility: f64,
    /// Allowed gap between primal transport cost and dual value.
    pub duality_gap: f64,
    /// Allowed mass mismatch between the two sides of a transport problem.
    pub mass_mismatch: f64,
    /// Slack for triangle inequality and symmetry checks on semimetrics.
    pub triangle: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        row_sum: 1e-12,
        feasibility: 1e-9,
        duality_gap: 1e-9,
        mass_mismatch: 1e-9,
        triangle: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
