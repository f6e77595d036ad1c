//! Numerical verification toolkit for the stability of the identity map on
//! quaternion space forms `M^n(c)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`quaternion_frame`] builds the triple `(J1, J2, J3)` on `R^{4n}` and
//!   adapted orthonormal frames `{E_i, J_a E_i}`.
//! * [`curvature`] evaluates the space-form curvature tensor and its
//!   contractions.
//! * [`hessian`] checks the pointwise algebra that reduces the second
//!   variation of the identity map to `Dirichlet - (n+2) c L2`.
//! * [`sphere`] realises `P^1(H)(c)` as the round 4-sphere and integrates the
//!   Hessian on explicit vector fields by seeded Monte Carlo.
//! * [`spectral`] applies the Einstein-manifold eigenvalue criterion and
//!   assembles stability verdicts.
//!
//! All randomness is driven by explicit `u64` seeds; nothing keeps global state.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod curvature;
pub mod error;
pub mod hessian;
pub mod quaternion_frame;
pub mod seeded;
pub mod spectral;
pub mod sphere;

pub use check::{Check, CheckReport, Measure};
pub use curvature::SpaceFormParams;
pub use error::{Error, Result};
pub use hessian::HessianBreakdown;
pub use quaternion_frame::{AdaptedFrame, QuaternionStructure};
pub use spectral::{Classification, SpectralData, StabilityReport, Verdict};
pub use sphere::{FieldSpec, SphereQuadrature, SphereSpec};
