//! Cumulants of probability distributions computed several independent ways.
//!
//! Cumulants are usually obtained from moments by Möbius inversion over the
//! set-partition lattice. They can equally be read off the distribution
//! function alone: the variance, for instance, is
//! `2 ∬_{t₁<t₂} F(t₁)(1 − F(t₂)) dt₁ dt₂`, and every higher cumulant has an
//! analogous ordered-simplex integral representation in terms of iterated
//! integrals of `F`. This crate implements both worlds and cross-validates
//! them:
//!
//! * [`partitions`] — the exact combinatorics: partition enumeration, Möbius
//!   values, partition types, Faà di Bruno counts, shuffles;
//! * [`momentcalc`] — exact rational moment ↔ cumulant transforms, univariate
//!   and multivariate, with translation and additivity laws;
//! * [`dists`] — CDF models (builtins, empirical samples, sampled grids),
//!   support truncation, mean-residual-life functions;
//! * [`volterra`] — cumulative integration of `F` and the numerical cumulant
//!   routes: truncated moments, the ordered-simplex partition sum, its
//!   factorized form, the mean-residual-life reduction, and a verifier for
//!   the Chen shuffle relations;
//! * [`hoeffding`] — joint CDF models and the multivariate formulas: the
//!   covariance identity and its partition-lattice generalization at small
//!   order;
//! * [`cli`] — the report layer behind the `cumulant-kit` binary.
//!
//! Start with the runnable examples (`cargo run --example route_comparison`)
//! or the [`cli`] module.

pub mod cli;
pub mod dists;
pub mod error;
pub mod hoeffding;
pub mod momentcalc;
pub mod partitions;
pub mod volterra;

pub use error::{Error, Result};

pub use dists::{Builtin, DistributionModel, GridFunction};
pub use hoeffding::{JointDistributionModel, TensorGridSpec};
pub use momentcalc::{CumulantSequence, MomentSequence, MultivariateMomentTable};
pub use partitions::{PartitionType, SetPartition, Shuffle};
pub use volterra::{CumulativeGrid, GridSpec};
