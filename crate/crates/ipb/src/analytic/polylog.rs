//! Numerical polylogarithm and an Euler-Maclaurin zeta reference.
//!
//! Both functions bound their own truncation error from the requested
//! tolerance before summing: the polylogarithm by a geometric (interior) or
//! p-series (boundary) tail estimate, zeta by the first omitted
//! Euler-Maclaurin correction term.

use astro_float::BigFloat;

use super::complex::{bf_to_f64, pow2, pow_neg_s, BigComplex, RM};
use crate::{Error, Result};

const MAX_TERMS: usize = 20_000_000;

/// Li_s(z) = Σ_{j>=1} z^j / j^s with truncation error below tol.
/// Domain: |z| < 1, or |z| = 1 with Re(s) > 1 (up to a 2^{-p/2} band).
pub fn polylog_numeric(s: &BigComplex, z: &BigComplex, tol: f64) -> Result<BigComplex> {
    assert!(tol > 0.0, "tolerance must be positive");
    let p = s.precision().max(z.precision());
    if z.is_zero() {
        return Ok(BigComplex::zero(p.max(64)));
    }
    let az2 = z.norm_sqr();
    let one = BigFloat::from_u8(1, p);
    let band = pow2(-(p as i64) / 2, p);
    if az2 > one.add(&band, p, RM) {
        return Err(Error::Domain("polylog diverges for |z| > 1".into()));
    }
    let sigma = bf_to_f64(&s.re);
    let on_boundary = az2 >= one.sub(&band, p, RM);
    if on_boundary && sigma <= 1.0 {
        return Err(Error::Domain("polylog on |z| = 1 requires Re(s) > 1".into()));
    }

    if on_boundary {
        // |term_j| = j^{-sigma}; the tail past M-1 is under (M-1)^{1-sigma}/(sigma-1).
        let m = ((sigma - 1.0) * tol / 2.0).powf(-1.0 / (sigma - 1.0)).ceil() + 2.0;
        if !(m.is_finite() && m < MAX_TERMS as f64) {
            return Err(Error::NoConvergence {
                iterations: MAX_TERMS,
            });
        }
        return Ok(sum_terms(s, z, p, |j, _| j >= m as usize));
    }

    // Interior: past j0 the term ratio is at most sqrt(|z|), so stop once the
    // current term is below tol·(1 − sqrt|z|)/2.
    let r = bf_to_f64(&z.abs()).min(1.0);
    let r_hat = r.sqrt();
    let q = -sigma; // polynomial growth exponent of |j^{-s}|
    let j0 = if q > 0.0 {
        (2.0 * q / (1.0 / r).ln()).ceil().max(1.0) as usize
    } else {
        1
    };
    let threshold = tol * (1.0 - r_hat) / 2.0;
    let cutoff_log2 = threshold.log2().floor() as i64;
    Ok(sum_terms(s, z, p, move |j, term_log2| {
        j >= j0 && term_log2 <= cutoff_log2
    }))
}

/// Sums z^j/j^s until `stop(j, log2 bound of |term_j|)` says to quit.
fn sum_terms(
    s: &BigComplex,
    z: &BigComplex,
    p: usize,
    mut stop: impl FnMut(usize, i64) -> bool,
) -> BigComplex {
    let mut acc = BigComplex::zero(p.max(64));
    let mut zp = BigComplex::one(p.max(64));
    for j in 1..=MAX_TERMS {
        zp = zp.mul(z);
        let term = zp.mul(&pow_neg_s(j, s, p));
        acc = acc.add(&term);
        let nsq = term.norm_sqr();
        let term_log2 = if nsq.is_zero() {
            i64::MIN / 2
        } else {
            // |term|^2 < 2^e, so |term| < 2^(e/2 + 1).
            nsq.exponent().unwrap_or(0) as i64 / 2 + 1
        };
        if stop(j, term_log2) {
            break;
        }
    }
    acc
}

/// ζ(s) for Re(s) > 1 within tol: direct sum to M plus the Euler-Maclaurin
/// corrections M^{1−s}/(s−1) + M^{−s}/2, with M sized so the first omitted
/// correction |s|·M^{−σ−1}/12 is under tol/2.
pub fn zeta_reference(s: &BigComplex, tol: f64) -> Result<BigComplex> {
    assert!(tol > 0.0, "tolerance must be positive");
    let sigma = bf_to_f64(&s.re);
    if sigma <= 1.0 {
        return Err(Error::Domain("zeta_reference requires Re(s) > 1".into()));
    }
    let p = s.precision().max(64);
    let s_abs = bf_to_f64(&s.abs());
    let m = (s_abs / (6.0 * tol)).powf(1.0 / (sigma + 1.0)).ceil().max(8.0);
    if !(m.is_finite() && m < MAX_TERMS as f64) {
        return Err(Error::NoConvergence {
            iterations: MAX_TERMS,
        });
    }
    let m = m as usize;
    let mut acc = BigComplex::zero(p);
    for n in 1..m {
        acc = acc.add(&pow_neg_s(n, s, p));
    }
    let m_pow = pow_neg_s(m, s, p); // M^{-s}
    let m_bf = BigComplex::from_f64(m as f64, 0.0, p);
    let one = BigComplex::one(p);
    let tail = m_pow.mul(&m_bf).div(&s.sub(&one)); // M^{1-s}/(s-1)
    let half = m_pow.scale(&BigFloat::from_f64(0.5, p));
    Ok(acc.add(&tail).add(&half))
}
