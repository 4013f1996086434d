//! Pseudospectral tools for generalized higher-order Camassa-Holm equations
//! on a periodic domain.
//!
//! The equation solved here is
//!
//! ```text
//! (1 - m ∂x²) u_t + a1(t,x,u) u_x + a2(t,x,u,u_x) u_xx + a3(t,x,u) u_xxx
//!                 + a4(t,x) u_xxxx + a5(t,x) u_xxxxx = f(t,x)
//! ```
//!
//! with `m > 0` and a nondegenerate fifth-order coefficient `|a5| >= c1 > 0`.
//! The crate provides:
//!
//! - a periodic spectral operator calculus (derivatives, the multipliers
//!   `Λ^s`, `Λ_m^s`, `Λ_m^0`, Sobolev norms) in [`spectral`],
//! - a tiny expression language for coefficient data in [`expr`],
//! - coefficient validation and the energy weight construction in [`coeffs`],
//! - linearized and direct nonlinear method-of-lines solvers in [`linear`]
//!   and [`picard`],
//! - the weighted energy monitor and Gronwall-rate fit in [`energy`],
//! - scenario files, trace/snapshot formats and the CLI in [`scenario`],
//!   [`io`] and [`cli`].
//!
//! Start with the `examples/` directory: each example is a runnable
//! demonstration of one capability (operator norm bounds, weight
//! construction, dispersive conservation, temporal order, Picard
//! convergence, the Gronwall fit, amplitude sweeps).

pub mod cli;
pub mod coeffs;
pub mod energy;
pub mod error;
pub mod expr;
pub mod field;
pub mod grid;
pub mod io;
pub mod linear;
pub mod picard;
pub mod scenario;
pub mod spectral;
pub mod trajectory;

pub use coeffs::{CoefficientSet, FrozenCoefficients, WeightField, WeightVariant};
pub use energy::EnergyTrace;
pub use error::{Error, Result};
pub use expr::ExprAst;
pub use field::Field;
pub use grid::Grid;
pub use linear::{IntegratorConfig, Scheme};
pub use picard::{PicardConfig, PicardResult};
pub use scenario::Scenario;
pub use trajectory::Trajectory;
