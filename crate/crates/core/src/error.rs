//! Error type shared by all geometry computations.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, FinslerError>;

#[derive(Debug, Clone, Error)]
pub enum FinslerError {
    /// Metric evaluated in the zero direction; the norm is smooth only away
    /// from the zero section.
    #[error("metric evaluated at the zero direction y = 0")]
    ZeroDirection,

    /// Metric parameters violate the strong-convexity bounds of the family.
    #[error("invalid metric parameters: {0}")]
    InvalidParams(String),

    /// Evaluation point lies outside the chart of the metric family.
    #[error("point ({x1}, {x2}) outside the chart domain: {reason}")]
    OutsideChart { x1: f64, x2: f64, reason: String },

    /// The fundamental tensor failed the positive-definiteness check.
    #[error("fundamental tensor not positive definite at x=({x1}, {x2}), y=({y1}, {y2}): g11={g11}, det={det}")]
    NotConvex {
        x1: f64,
        x2: f64,
        y1: f64,
        y2: f64,
        g11: f64,
        det: f64,
    },

    /// A computed quantity came out non-finite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Newton iteration for the normal vector did not converge.
    #[error("normal solve did not converge after {iterations} iterations (last residual {residual:.3e})")]
    NewtonNoConvergence { iterations: usize, residual: f64 },

    /// Adaptive quadrature exceeded its refinement budget.
    #[error("quadrature did not converge: estimated error {error:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureNoConvergence { error: f64, tol: f64 },

    /// The ODE integrator could not take an acceptable step.
    #[error("integrator step failure at t={t}: {reason}")]
    StepFailure { t: f64, reason: String },

    /// Finite-difference derivative did not settle under step refinement.
    #[error("finite-difference derivative did not converge (spread {spread:.3e})")]
    FdNoConvergence { spread: f64 },

    /// sigma(t) fell below the degeneracy diagnostic threshold.
    #[error("sigma = {sigma:.3e} below degeneracy threshold at t={t}")]
    DegenerateSigma { sigma: f64, t: f64 },

    /// The flag is degenerate: F(x,y) below tolerance.
    #[error("degenerate flag: F(x,y) = {f:.3e} below tolerance")]
    DegenerateFlag { f: f64 },

    /// A metric failed Landsberg certification where it is required.
    #[error("Landsberg certification failed: {0}")]
    CertificationFailure(String),

    /// Vector-field index rounding was ambiguous.
    #[error("field index ambiguous: winding {winding} is {distance:.3} from the nearest integer")]
    AmbiguousIndex { winding: f64, distance: f64 },

    /// A vector-field zero sits too close to the domain boundary.
    #[error("vector-field zero at ({x1}, {x2}) too close to the boundary (distance {distance:.3e} < {minimum:.3e})")]
    ZeroTooCloseToBoundary {
        x1: f64,
        x2: f64,
        distance: f64,
        minimum: f64,
    },

    /// A curve or sample list is too sparse for the requested derivative.
    #[error("insufficient sampling density: {0}")]
    InsufficientSampling(String),

    /// Domain description is inconsistent (open boundary, empty loop, ...).
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// Experiment preconditions not met.
    #[error("experiment precondition failed: {0}")]
    ExperimentPrecondition(String),
}
