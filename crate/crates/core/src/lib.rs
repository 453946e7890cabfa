//! Finite-alphabet information-theory kernel for chosen-secret biometric
//! identification with noisy enrollment.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation:
//!
//! * [`prob`]: distributions, channels, joint composition along the chain
//!   `Z - X - Y - U - V` and base-2 entropy functionals.
//! * [`typical`]: strong typicality for single sequences and tuples.
//! * [`region`]: rate tuples, grid-plus-refinement search over auxiliary
//!   channels, boundary sweeps, the two-way region equivalence check, the
//!   special-case reductions and the cardinality sweep.
//! * [`sim`]: the superposition/binning code with a one-time-pad masking
//!   layer, Monte Carlo trials and exact leakage by enumeration.
//!
//! Parallelism is pluggable through [`exec::Executor`]; the default
//! [`exec::Serial`] executor is what every result is defined against.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod prob;
pub mod region;
pub mod sim;
pub mod simplex;
pub mod typical;

mod math;

pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use prob::{
    AuxiliaryPair, Channel, FiniteDistribution, JointDistribution, SystemModel,
};
pub use region::{MutualInfoSummary, RateTuple, RegionSpec, RegionVariant, SearchConfig};
pub use typical::{SymbolSequence, TypicalityParams};
