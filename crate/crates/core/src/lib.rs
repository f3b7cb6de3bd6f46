//! Numerical-radius laboratory.
//!
//! Computes the numerical radius `w(A)` and the numerical range `W(A)` of
//! dense complex matrices, evaluates bounds on `w²(A)` built from the
//! Cartesian decomposition `A = Re(A) + i·Im(A)`, and checks the inequality
//! chains and equality characterizations they satisfy.

pub mod bounds;
pub mod equality;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod par;
pub mod range;
pub mod verdict;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, Spectrum};
pub use num_complex::Complex64;
pub use bounds::{full_report, BoundId, BoundReport};
pub use equality::{analyze_equality, check_equality_case, CaseId, EqualityAnalysis, EqualityReport};
pub use range::{crawford_number, numerical_radius, RangePolygon, SweepPolicy, SweepProfile};
pub use verdict::{Slack, Status, Verdict};
