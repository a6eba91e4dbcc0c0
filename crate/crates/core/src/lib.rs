//! Fractional Young's law for nonlocal capillarity in the plane.
//!
//! The contact angle `θ(s, σ)` of a droplet under the kernel `|z|^(-2-s)` is
//! the root in `α` of `f(s, α) = 1 + σ`, where
//! `f(s, α) = sin(α)^s I(1, α, s) / I(1, pi/2, s)` and `I` is the cone
//! interaction integral computed in [`kernel_integrals`].
//!
//! Modules:
//! * [`kernel_integrals`]: `I(1, α, s)`, its derivatives and the radial integral.
//! * [`special_functions`]: `Ξ`, `h`, `H`, and the `s = 0` remainders.
//! * [`angle_solver`]: `f`, its derivatives, and `θ(s, σ)`.
//! * [`asymptotics`]: first-order expansions at `s = 1` and `s = 0`.
//! * [`nonlocal_energy_2d`]: the half-disk functional and planar interaction energies.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle_solver;
pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod kernel_integrals;
pub mod nonlocal_energy_2d;
pub mod quadrature;
pub mod roots;
pub mod special_functions;
pub mod summation;

pub use angle_solver::{AngleQuery, AngleSolution};
pub use asymptotics::{ExpansionCoefficients, Regime};
pub use error::{Error, Result};
pub use geometry::{Point, Region};
pub use kernel_integrals::ConeParams;
pub use nonlocal_energy_2d::{EvalPoint, PlanarScene, RegionSpec, Shape};
pub use quadrature::QuadratureSpec;
