//! Exact rational toolkit for LLV lattices of hyper-Kähler manifolds of
//! K3^[n] and generalized Kummer type.
//!
//! No floating point is used anywhere: every quantity is a [`Q`].

pub mod arithmetic;
pub mod cohomology;
pub mod error;
pub mod fullsym;
pub mod harmonic;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod lines;
pub mod monodromy;
pub mod rational;
pub mod verify;

pub use arithmetic::{LagrangianData, SearchRow};
pub use cohomology::{CohClass, K32Ring};
pub use error::{Error, Result};
pub use harmonic::{GeneratorContext, ReducedSymElement};
pub use isometry::Isometry;
pub use lattice::{DefType, LLVSpace, LLVVector, Preset, QuadLattice, E8_NEG};
pub use linalg::Mat;
pub use lines::{LLVLine, LineReport, ObjectSpec};
pub use monodromy::{BkrSign, DMonLift};
pub use rational::{fmt_q, parse_q, q, qr, Q};
pub use verify::{run_verify, VerifyReport};
