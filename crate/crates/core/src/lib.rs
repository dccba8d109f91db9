//! Alternating multiple harmonic sums (AMHS) over exact rationals and prime-power
//! residue rings, together with a registry of congruence identities and a sweep
//! harness that verifies them prime by prime.
//!
//! The value types are [`Rational`] (arbitrary precision, always reduced) and
//! [`Residue`] (an element of `Z/p^k Z`). Sums are evaluated by [`evaluator`],
//! closed forms are assembled from [`specialnum`], and [`registry`] ties both
//! sides of every identity together.
//!
//! Bernoulli numbers follow the convention `B_1 = -1/2`, so that
//! `sum_{j<n} j^d = sum_r C(d+1, r) B_r n^{d+1-r} / (d+1)` holds as written.

pub mod binomial_sums;
pub mod cli;
pub mod composition;
pub mod error;
pub mod evaluator;
pub mod reduction;
pub mod registry;
pub mod residue;
pub mod specialnum;
pub mod stuffle;

pub use composition::{Composition, Partition};
pub use error::{Error, Result};
pub use evaluator::{Mode, SumFamily, Value};
pub use residue::{Rational, Residue, Valuation};
pub use stuffle::WordSum;
