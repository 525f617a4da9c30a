//! Two-branch eigenvalue asymptotics for `u'' + λ²(g(x) − a)u = 0` with
//! period-2π boundary conditions, uniform in `a` across the switch from a
//! sign-definite weight (`a < a₂`) to an indefinite one (`a > a₂`).
//!
//! The crate has two independent halves that the [`harness`] joins:
//!
//! * the asymptotic side ([`potential`], [`actions`], [`specfun`] and
//!   [`asymptotics`]) turns a cosine-series potential into the branch values
//!   `λ±(a, p) = λ⁰ₚ + F(a)⁻¹ H±(b₂(λ⁰ₚ))`;
//! * the [`oracle`] finds the same eigenvalues by brute force: Dirichlet and
//!   Neumann shooting on `(0, π)`, node counting, and the Floquet
//!   discriminant of the full-period monodromy matrix.

pub mod actions;
pub mod asymptotics;
pub mod harness;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod roots;
pub mod specfun;

pub use potential::{Potential, PotentialSpec};
pub use specfun::Branch;
