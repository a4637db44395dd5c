//! Linear extensions of the cluster posets attached to non-overlapping
//! consecutive permutation patterns.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: standardization, consecutive occurrences, symmetry operators and
//!   brute-force (strong) c-Wilf evidence.
//! * [`poset`]: the cluster posets `P_n^{m,a,b}` and their boundary-completed
//!   variants `Q_n^{m,a,b}`, plus an order-ideal counter for linear extensions.
//! * [`exactcount`]: exact counts for large `n` through iterated polynomial
//!   integration over the rationals.
//! * [`asym`]: the growth constant `c(m,a,b)`, trigamma concavity checks and
//!   empirical convergence of exact counts to the asymptotic formula.
//! * [`varfun`]: the incomplete-beta profile `g`, its inverse `f`, `f'`, `lambda`
//!   and a solver for the general one-dimensional variational problem.
//! * [`mcmc`]: the lazy adjacent-transposition sampler and the height
//!   concentration experiment.

pub mod asym;
pub mod error;
pub mod exactcount;
pub mod mcmc;
pub mod perm;
pub mod poset;
pub mod quad;
pub mod special;
pub mod varfun;

pub use error::{Error, Result};
pub use exactcount::{CountInteger, ExactRational, RationalPoly, Variant};
pub use perm::PatternPerm;
pub use poset::{ClusterParams, FinitePoset, Label};
