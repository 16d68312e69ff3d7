//! Arbitrary-precision complex evaluation built on binary floats with
//! explicit precision: Lambert W branches, the numerical polylogarithm, an
//! Euler-Maclaurin zeta reference, incomplete poly-Bernoulli numbers at
//! complex order s, and the Lambert-W partial-sum series for zeta.
//!
//! Every public entry point takes a precision in bits (>= 64) and works
//! internally with guard bits sized to the known cancellation; results are
//! rounded back to the requested precision. Rounding is to-even throughout,
//! so all outputs are deterministic.

mod complex;
mod lambert;
mod polylog;
mod zeta;

pub use complex::{decimal_digits_for_bits, format_decimal, parse_bigfloat, BigComplex};
pub use lambert::{lambert_w, lambert_w_capped, DEFAULT_MAX_ITERS};
pub use polylog::{polylog_numeric, zeta_reference};
pub use zeta::{
    bernoulli_egf_partial_sums, incomplete_bernoulli_numeric, zeta_series, ZetaSeriesRun,
};
