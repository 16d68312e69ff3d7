//! Incomplete poly-Bernoulli numbers at complex order and the Lambert-W
//! partial-sum series whose limit is the Riemann zeta function:
//!
//! ```text
//! ζ(s) = Σ_{n>=0} B_{n,>=2}^{(s)} · W_k(−1)^n / n!,   Re(s) > 1, k ∈ {0, −1}.
//! ```
//!
//! The defining Stirling sum alternates with terms of size ~n! against a
//! result of size O(1), so n bits cancel; the evaluation pads its working
//! precision accordingly and rounds back.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::complex::{bf_from_usize, bigint_to_bigfloat, pow_neg_s, BigComplex};
use super::lambert::lambert_w;
use crate::{stirling, Error, Result, Variant};

/// Σ_{k=0}^n (−1)^{n−k} k! (k+1)^{−s} S(n,k) at the requested precision.
/// Stirling factors are exact integers converted losslessly; the working
/// precision carries n extra bits to absorb the alternating cancellation.
pub fn incomplete_bernoulli_numeric(
    n: usize,
    s: &BigComplex,
    variant: Variant,
    precision: usize,
) -> BigComplex {
    assert!(precision >= 64, "precision must be at least 64 bits");
    variant.assert_valid();
    let p = precision + n + 32;
    let s = s.with_precision(p);
    let table = stirling::table(variant, n);
    let mut kfact = BigInt::one();
    let mut acc = BigComplex::zero(p);
    for k in 0..=n {
        if k > 0 {
            kfact *= BigInt::from(k);
        }
        let sv = table.value(n, k);
        if sv.is_zero() {
            continue;
        }
        let mut base = &kfact * sv;
        if (n - k) % 2 == 1 {
            base = -base;
        }
        let weight = pow_neg_s(k + 1, &s, p);
        acc = acc.add(&weight.scale(&bigint_to_bigfloat(&base, p)));
    }
    acc.with_precision(precision)
}

/// Partial sums P_N = Σ_{n=0}^{N} B_{n,variant}^{(s)} x^n / n! for
/// N = 0..=n_terms, each rounded to the requested precision.
pub fn bernoulli_egf_partial_sums(
    s: &BigComplex,
    variant: Variant,
    x: &BigComplex,
    n_terms: usize,
    precision: usize,
) -> Vec<BigComplex> {
    assert!(precision >= 64, "precision must be at least 64 bits");
    let p = precision + 32;
    let x = x.with_precision(p);
    let mut factor = BigComplex::one(p); // x^n / n!
    let mut acc = BigComplex::zero(p);
    let mut out = Vec::with_capacity(n_terms + 1);
    for n in 0..=n_terms {
        if n > 0 {
            factor = factor.mul(&x).div_scalar(&bf_from_usize(n, p));
        }
        let b = incomplete_bernoulli_numeric(n, s, variant, p);
        acc = acc.add(&b.mul(&factor));
        out.push(acc.with_precision(precision));
    }
    out
}

/// One evaluation of the zeta series: the branch choice, every partial sum,
/// and a last-step error heuristic.
#[derive(Debug, Clone)]
pub struct ZetaSeriesRun {
    pub s: BigComplex,
    pub branch: i64,
    pub precision: usize,
    /// Partial sums P_0..P_N.
    pub partial_sums: Vec<BigComplex>,
    /// |P_N − P_{N−1}|, i.e. the magnitude of the last term taken.
    pub est_error: BigFloat,
}

impl ZetaSeriesRun {
    pub fn final_value(&self) -> &BigComplex {
        self.partial_sums.last().expect("at least one partial sum")
    }
}

/// Evaluates Σ_{n=0}^{N} B_{n,>=2}^{(s)} W_branch(−1)^n / n!, which converges
/// to ζ(s) for Re(s) > 1 on branches 0 and −1.
pub fn zeta_series(
    s: &BigComplex,
    branch: i64,
    n_terms: usize,
    precision: usize,
) -> Result<ZetaSeriesRun> {
    assert!(precision >= 64, "precision must be at least 64 bits");
    if !(branch == 0 || branch == -1) {
        return Err(Error::Domain(
            "the zeta series converges on branches 0 and -1 only".into(),
        ));
    }
    let one = BigFloat::from_u8(1, precision);
    if !(s.re > one) {
        return Err(Error::Domain("the zeta series requires Re(s) > 1".into()));
    }
    let wp = precision + 32;
    let w = lambert_w(branch, &BigComplex::from_f64(-1.0, 0.0, wp), wp)?;
    let partial_sums =
        bernoulli_egf_partial_sums(s, Variant::Associated(2), &w, n_terms, precision);
    let est_error = if n_terms >= 1 {
        partial_sums[n_terms].sub(&partial_sums[n_terms - 1]).abs()
    } else {
        partial_sums[0].abs()
    };
    Ok(ZetaSeriesRun {
        s: s.with_precision(precision),
        branch,
        precision,
        partial_sums,
        est_error,
    })
}
