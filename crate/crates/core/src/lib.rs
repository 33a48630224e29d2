//! Hypervolume contribution approximation with learned direction vector sets.
//!
//! The crate covers the whole numeric pipeline:
//!
//! * [`objective`]: points, Pareto dominance, solution sets, reference points and
//!   samplers for triangular / inverted-triangular fronts.
//! * [`hypervolume`]: exact hypervolume and hypervolume contributions (WFG-style
//!   slicing recursion) plus a Monte-Carlo estimator used as a test oracle.
//! * [`directions`]: the DAS, UNV, JAS, MSS-D, MSS-U and Kmeans-U direction set
//!   generators.
//! * [`r2hvc`]: the line-based R2-HVC contribution approximator and the
//!   [`LengthMatrix`](r2hvc::LengthMatrix) cache for leave-one-out evaluation.
//! * [`trainer`]: the Pearson objective over a training corpus and the steady-state
//!   learning loop that optimizes a direction set against it.
//! * [`eval`]: correct identification rate, greedy approximated hypervolume subset
//!   selection, the rank-sum test and rank aggregation.
//!
//! ## no_std support
//!
//! The crate is `no_std` and only needs `alloc`. The `std` feature adds
//! `std::error::Error` for [`Error`]; `parallel` pulls in rayon and spreads the
//! independent per-set and per-candidate work over the current thread pool.
//! Results never depend on the schedule: every parallel map is order-preserving and
//! every reduction runs in a fixed order.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;
mod par;

pub mod directions;
pub mod eval;
pub mod hypervolume;
pub mod objective;
pub mod r2hvc;
pub mod trainer;

pub use error::{Error, Result};

pub use directions::{DirectionSet, DirectionVector};
pub use hypervolume::{hvc_all, hvc_exact, hypervolume};
pub use objective::{dominates, FrontShape, FrontSpec, ObjectivePoint, ReferencePoint, SolutionSet};
pub use r2hvc::{r2hvc, LengthMatrix};
pub use trainer::{lta_train, pearson_q, TrainingCorpus, TrainingResult, TrainingSet};
