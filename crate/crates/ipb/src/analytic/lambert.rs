//! Branches of the Lambert W function by Halley iteration.
//!
//! W_k(a) solves w·e^w = a. Convergence is cubic once near a root, so the
//! iteration count stays in the teens even at hundreds of bits; the residual
//! target leaves a wide margin below the contract's 2^{-P/2}·(1+|a|).

use astro_float::BigFloat;

use super::complex::{pow2, with_consts, BigComplex, RM};
use crate::{Error, Result};

pub const DEFAULT_MAX_ITERS: usize = 200;

/// W on the given branch: |w·e^w − a| < 2^{−P/2}·(1+|a|). The only branch
/// points exercised by the zeta series are k ∈ {0, −1} at a = −1, which get
/// dedicated starting values; other inputs start from the asymptotic
/// expansion log a + 2πik − log(log a + 2πik).
pub fn lambert_w(branch: i64, a: &BigComplex, precision: usize) -> Result<BigComplex> {
    lambert_w_capped(branch, a, precision, DEFAULT_MAX_ITERS)
}

pub fn lambert_w_capped(
    branch: i64,
    a: &BigComplex,
    precision: usize,
    max_iters: usize,
) -> Result<BigComplex> {
    assert!(precision >= 64, "precision must be at least 64 bits");
    if a.is_zero() {
        return Err(Error::Domain("lambert_w requires a != 0".into()));
    }
    let p = precision + 32;
    let a = a.with_precision(p);
    let one = BigComplex::one(p);
    let two = BigComplex::from_f64(2.0, 0.0, p);
    let target = BigFloat::from_u8(1, p)
        .add(&a.abs(), p, RM)
        .mul(&pow2(-(precision as i64 / 2 + 8), p), p, RM);
    let mut w = seed(branch, &a, p);
    for _ in 0..max_iters {
        let ew = w.exp();
        let f = w.mul(&ew).sub(&a);
        if f.abs() < target {
            return Ok(w.with_precision(precision));
        }
        let fp = ew.mul(&w.add(&one)); // f' = e^w (1+w)
        let fpp = ew.mul(&w.add(&two)); // f'' = e^w (2+w)
        let denom = fp.sub(&f.mul(&fpp).div(&fp.mul(&two)));
        if denom.is_zero() {
            break;
        }
        w = w.sub(&f.div(&denom));
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
    })
}

fn seed(branch: i64, a: &BigComplex, p: usize) -> BigComplex {
    if *a == BigComplex::from_f64(-1.0, 0.0, p) {
        // Hand seeds either side of the real axis; the iteration stays on
        // the chosen branch and the two results are conjugate.
        if branch == 0 {
            return BigComplex::from_f64(-0.3, 1.3, p);
        }
        if branch == -1 {
            return BigComplex::from_f64(-0.3, -1.3, p);
        }
    }
    let two_pi_k = with_consts(|cc| cc.pi(p, RM)).mul(&BigFloat::from_f64(2.0 * branch as f64, p), p, RM);
    let l = a.ln().add(&BigComplex::new(BigFloat::from_u8(0, p), two_pi_k));
    if l.is_zero() {
        // a = 1 on branch 0: near the omega constant.
        return BigComplex::from_f64(0.5, 0.0, p);
    }
    l.sub(&l.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minus_one(p: usize) -> BigComplex {
        BigComplex::from_f64(-1.0, 0.0, p)
    }

    fn residual(w: &BigComplex, a: &BigComplex) -> BigFloat {
        w.mul(&w.exp()).sub(a).abs()
    }

    #[test]
    fn principal_branch_at_minus_one() {
        let w = lambert_w(0, &minus_one(128), 128).unwrap();
        let (re, im) = w.to_f64_parts();
        assert!((re - (-0.3181315052047641)).abs() < 1e-13);
        assert!((im - 1.3372357014306895).abs() < 1e-13);
    }

    #[test]
    fn residual_meets_contract_across_precisions() {
        for precision in [64usize, 128, 256] {
            for branch in [0, -1] {
                let a = minus_one(precision);
                let w = lambert_w(branch, &a, precision).unwrap();
                let bound = pow2(1 - (precision as i64) / 2, precision);
                assert!(
                    residual(&w, &a) < bound,
                    "branch {branch} at {precision} bits"
                );
            }
        }
    }

    #[test]
    fn branches_are_conjugate_at_minus_one() {
        let p = 192;
        let w0 = lambert_w(0, &minus_one(p), p).unwrap();
        let wm = lambert_w(-1, &minus_one(p), p).unwrap();
        assert!(w0.sub(&wm.conj()).abs() < pow2(16 - p as i64, p));
        // Branch 0 sits in the upper half plane, branch −1 below.
        let (_, im0) = w0.to_f64_parts();
        let (_, imm) = wm.to_f64_parts();
        assert!(im0 > 0.0 && imm < 0.0);
    }

    #[test]
    fn known_point_on_the_real_axis() {
        // W_0(e) = 1.
        let e = BigComplex::one(128).exp();
        let w = lambert_w(0, &e, 128).unwrap();
        assert!(w.sub(&BigComplex::one(128)).abs() < pow2(-56, 128));
    }

    #[test]
    fn nonprincipal_branch_via_asymptotic_seed() {
        // W_1(5): residual contract is the only claim.
        let a = BigComplex::from_f64(5.0, 0.0, 128);
        let w = lambert_w(1, &a, 128).unwrap();
        let bound = BigFloat::from_f64(6.0, 128).mul(&pow2(-64, 128), 128, RM);
        assert!(residual(&w, &a) < bound);
        // Branch 1 lives in the strip π < Im(w) < 3π.
        let (_, im) = w.to_f64_parts();
        assert!(im > std::f64::consts::PI && im < 3.0 * std::f64::consts::PI);
    }

    #[test]
    fn rejects_zero_argument() {
        let err = lambert_w(0, &BigComplex::zero(64), 64).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
