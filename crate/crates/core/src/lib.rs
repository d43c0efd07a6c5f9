//! Numerical Riemann-Finsler surface geometry.
//!
//! The crate evaluates Finsler norms and every pointwise tensor derived from
//! them (fundamental tensor, Cartan tensor, Berwald frame, Chern connection
//! invariants I/J/K), measures Landsberg angles and indicatrix lengths by
//! quadrature, integrates geodesics and N-parallels, and assembles the
//! Gauss-Bonnet identity -- interior, boundary, and corner terms -- against
//! integer Euler characteristics on desk-scale domains.

pub mod connection;
pub mod curves;
pub mod dual;
pub mod error;
pub mod experiments;
pub mod gauss_bonnet;
pub mod geometry;
pub mod indicatrix;
pub mod metric;
pub mod ode;
pub mod parallel;
pub mod quadrature;

pub use error::{FinslerError, Result};
pub use metric::{pt, tg, MetricSpec, Point2, Tangent2};
