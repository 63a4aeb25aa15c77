//! Exact symbolic model of the Bannai-Ito algebra on superspace.
//!
//! The crate is layered bottom-up:
//!
//! - [`scalars`]: rational functions in the parameters `nu1, nu2, nu3`.
//! - [`superspace`]: `C[x1,x2,x3]<t1,t2,t3>` and the reduced ring `C[u,v]`.
//! - [`superweyl`]: normal-ordered differential operators acting on superspace.
//! - [`osp`]: the osp(1|2) generators, Casimirs and relation checks.
//! - [`kernel`], [`jacobi`], [`eigen`], [`tridiagonal`]: the kernel of the
//!   total lowering operator, its Jacobi-polynomial eigenbases and the
//!   tridiagonal action of `Q(23)`.
//!
//! All arithmetic is exact; identities are checked by reducing differences to
//! canonical form and testing for zero.

pub mod eigen;
pub mod jacobi;
pub mod kernel;
pub mod linalg;
pub mod osp;
pub mod report;
pub mod scalars;
pub mod superspace;
pub mod superweyl;
pub mod tridiagonal;

pub use osp::{CopyIndex, GeneratorKind, Model, SubsetLabel};
pub use report::{CheckOutcome, ParamMode, Status, VerificationReport};
pub use scalars::{ParamPolynomial, ParamScalar, Rational, ScalarError};
pub use superspace::{SuperElement, SuperMonomial, ThetaSet, UVPolynomial};
pub use superweyl::{BracketKind, NormalWord, OperatorElement};
