//! Exact and arbitrary-precision arithmetic for restricted and associated
//! Stirling numbers of the second kind, the incomplete poly-Bernoulli numbers
//! built from them, and a Lambert-W series for the Riemann zeta function.
//!
//! The crate is organised in four layers:
//!
//! * [`stirling`]: memoized integer triangles for the classical, restricted
//!   (block size <= m) and associated (block size >= m) Stirling numbers,
//!   plus a brute-force set-partition counter used as an independent oracle.
//! * [`series`]: truncated formal power series over an arbitrary coefficient
//!   ring, with the exponential partial sums, composition, division, log and
//!   antiderivative needed to realise the generating functions of the
//!   incomplete poly-Bernoulli numbers in exact rational arithmetic.
//! * [`bernoulli`]: the incomplete poly-Bernoulli numbers themselves via
//!   their defining Stirling sums, and the mod-p divisibility scanner.
//! * [`analytic`]: arbitrary-precision complex evaluation (Lambert W,
//!   polylogarithm, a zeta reference, and the zeta partial-sum series).
//!
//! Exact results are `BigInt` / `BigRational`; floating results carry an
//! explicit binary precision. Everything is deterministic: no randomness,
//! and all internal memoization is behind locks and invisible to callers.

pub mod analytic;
pub mod bernoulli;
pub mod series;
pub mod stirling;

mod error;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Re-export of the arbitrary-precision float backend used by [`analytic`].
pub use astro_float;

/// Truncated exponential generating function with exact rational coefficients,
/// the concrete series type used by the generating-function pipelines.
pub type TruncatedEgf = series::TruncatedSeries<BigRational>;

/// Which family of set partitions a Stirling number or Bernoulli sum ranges
/// over: all partitions, block sizes at most `m`, or block sizes at least `m`.
///
/// `m` must be positive; `Restricted(m)` with huge `m` and `Associated(1)`
/// both degenerate to `Classical`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Classical,
    /// Every block has at most `m` elements.
    Restricted(usize),
    /// Every block has at least `m` elements.
    Associated(usize),
}

impl Variant {
    /// Block size window as (min, max), `None` meaning unbounded.
    pub fn block_size_bounds(self) -> (usize, Option<usize>) {
        match self {
            Variant::Classical => (1, None),
            Variant::Restricted(m) => (1, Some(m)),
            Variant::Associated(m) => (m, None),
        }
    }

    pub(crate) fn assert_valid(self) {
        match self {
            Variant::Classical => {}
            Variant::Restricted(m) | Variant::Associated(m) => {
                assert!(m >= 1, "variant block bound m must be positive");
            }
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Classical => write!(f, "classical"),
            Variant::Restricted(m) => write!(f, "restricted({m})"),
            Variant::Associated(m) => write!(f, "associated({m})"),
        }
    }
}
