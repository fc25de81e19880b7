//! Exact engine for cut-and-join operators and their relatives: power-sum
//! symmetric functions, normally ordered differential operators, the
//! symmetric-group class algebra, Gaussian beta-ensemble constraints, Jack
//! bases and the fixed-point basis of the Hilbert scheme of points in the
//! plane.

pub mod basis;
pub mod beta_ensemble;
pub mod class_algebra;
pub mod error;
pub mod hilb;
pub mod jack;
pub mod linalg;
pub mod ops;
pub mod partition;
pub mod rational;
pub mod report;
pub mod symfun;

pub use error::{Error, Result};
pub use ops::{commutator, compose, NOTerm, Operator};
pub use partition::Partition;
pub use rational::Q;
pub use symfun::SymFun;
