//! Exact combinatorics for three families of line bundles on the moduli space
//! of stable `n`-pointed rational curves: level-one `sl_r` conformal blocks,
//! GIT polarizations of point configurations, and determinants of cyclic-cover
//! eigenbundles.
//!
//! Every bundle is handled through its degree on the F-curves, which is a
//! complete numerical invariant of its class. Degrees are obtained by
//! restricting along boundary divisors until four marked points remain and
//! then applying a closed-form base case.
//!
//! Marked points are labelled `1..=n` throughout the public API, matching the
//! `1,2/3/4/5,6` partition syntax of the command line.

pub mod bundles;
pub mod cli;
pub mod covers;
mod error;
pub mod invariants;
pub mod strata;
pub mod weights;

pub use error::{Error, Result};
