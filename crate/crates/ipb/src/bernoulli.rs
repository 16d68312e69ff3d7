//! Incomplete poly-Bernoulli numbers from their defining Stirling sums,
//!
//! ```text
//! B_n^{(mu)} = sum_{k=0}^{n} (-1)^{n-k} * k!/(k+1)^mu * S(n, k)_variant
//! ```
//!
//! and the mod-p divisibility scanner. mu is an integer here, so every value
//! is an exact rational; for mu <= 0 the weight k!*(k+1)^{|mu|} is a plain
//! integer and so is the sum. Real or complex mu lives in [`crate::analytic`].

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::stirling;
use crate::{Error, Result, Variant};

/// One incomplete poly-Bernoulli number together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliValue {
    pub n: usize,
    pub mu: i64,
    pub variant: Variant,
    pub value: BigRational,
}

/// B_{n, variant}^{(mu)} by the defining alternating sum.
pub fn incomplete_poly_bernoulli(n: usize, mu: i64, variant: Variant) -> BigRational {
    variant.assert_valid();
    let table = stirling::table(variant, n);
    let mut kfact = BigInt::one();
    let mut acc = BigRational::zero();
    for k in 0..=n {
        if k > 0 {
            kfact *= BigInt::from(k);
        }
        let s = table.value(n, k);
        if s.is_zero() {
            continue;
        }
        let base = &kfact * s;
        // (k+1)^mu divides for mu > 0 and multiplies for mu <= 0, keeping
        // the nonpositive case in integer arithmetic throughout.
        let kp1 = BigInt::from(k + 1);
        let term = if mu > 0 {
            BigRational::new(base, kp1.pow(mu as u32))
        } else {
            BigRational::from_integer(base * kp1.pow((-mu) as u32))
        };
        if (n - k) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Classical poly-Bernoulli number B_n^{(mu)}.
pub fn poly_bernoulli(n: usize, mu: i64) -> BigRational {
    incomplete_poly_bernoulli(n, mu, Variant::Classical)
}

/// The values for n = 0..=n_max, bundled with their parameters.
pub fn incomplete_poly_bernoulli_values(
    n_max: usize,
    mu: i64,
    variant: Variant,
) -> Vec<BernoulliValue> {
    (0..=n_max)
        .map(|n| BernoulliValue {
            n,
            mu,
            variant,
            value: incomplete_poly_bernoulli(n, mu, variant),
        })
        .collect()
}

/// Deterministic primality by trial division; inputs here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// B_{p, variant}^{(mu)} mod p for prime p and mu <= 0, where the value is an
/// integer. Computed from the full exact integer; p is desk-sized, so no
/// modular shortcut is needed.
pub fn residue_mod_p(p: u64, mu: i64, variant: Variant) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if mu > 0 {
        return Err(Error::PositiveMu(mu));
    }
    let value = incomplete_poly_bernoulli(p as usize, mu, variant);
    assert!(value.is_integer(), "mu <= 0 values are integers");
    let r = value.numer().mod_floor(&BigInt::from(p));
    Ok(r.to_u64().expect("residue fits in u64"))
}

/// The two incomplete families the divisibility theorem speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Restricted,
    Associated,
}

impl Family {
    pub fn variant(self, m: usize) -> Variant {
        match self {
            Family::Restricted => Variant::Restricted(m),
            Family::Associated => Variant::Associated(m),
        }
    }
}

/// One row of a divisibility scan: computed residue of B_{p}^{(mu)} mod p
/// against the predicted residue (0 for restricted, 2^{|mu|} for associated).
///
/// `within_theorem_range` marks m < p, where the prediction provably holds;
/// rows outside that range are reported, not asserted, and `pass` simply
/// records whether the prediction happened to match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub p: u64,
    pub mu: i64,
    pub m: usize,
    pub family: Family,
    pub residue: u64,
    pub predicted: u64,
    pub within_theorem_range: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct DivisibilityReport {
    pub entries: Vec<ScanEntry>,
}

impl DivisibilityReport {
    /// True when every row inside the theorem's range matches its prediction.
    pub fn all_within_range_pass(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.within_theorem_range)
            .all(|e| e.pass)
    }
}

fn mod_pow2(exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    for _ in 0..exp {
        acc = (acc * 2) % p;
    }
    acc
}

/// Computes the residue of B_{p}^{(mu)} mod p over the full parameter grid
/// and compares against the divisibility predictions. Reports; never asserts.
pub fn divisibility_scan(
    primes: &[u64],
    mu_range: RangeInclusive<i64>,
    m_range: RangeInclusive<usize>,
    families: &[Family],
) -> Result<DivisibilityReport> {
    if *mu_range.end() > 0 {
        return Err(Error::PositiveMu(*mu_range.end()));
    }
    let mut entries = Vec::new();
    for &p in primes {
        for mu in mu_range.clone() {
            for m in m_range.clone() {
                for &family in families {
                    let residue = residue_mod_p(p, mu, family.variant(m))?;
                    let predicted = match family {
                        Family::Restricted => 0,
                        Family::Associated => mod_pow2(mu.unsigned_abs(), p),
                    };
                    entries.push(ScanEntry {
                        p,
                        mu,
                        m,
                        family,
                        residue,
                        predicted,
                        within_theorem_range: m < p as usize,
                        pass: residue == predicted,
                    });
                }
            }
        }
    }
    Ok(DivisibilityReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn defining_sum_examples() {
        assert_eq!(
            incomplete_poly_bernoulli(1, 1, Variant::Classical),
            rat(1, 2)
        );
        assert_eq!(
            incomplete_poly_bernoulli(2, 1, Variant::Associated(2)),
            rat(-1, 2)
        );
        assert_eq!(
            incomplete_poly_bernoulli(2, 1, Variant::Restricted(1)),
            rat(2, 3)
        );
    }

    #[test]
    fn restricted_m1_closed_form() {
        // Only k = n survives: B_{n,<=1}^{(mu)} = n!/(n+1)^mu.
        for n in 0..=8usize {
            for mu in 1..=3 {
                let expect = BigRational::new(
                    stirling::factorial(n),
                    BigInt::from(n as u64 + 1).pow(mu as u32),
                );
                assert_eq!(
                    incomplete_poly_bernoulli(n, mu, Variant::Restricted(1)),
                    expect
                );
            }
        }
    }

    #[test]
    fn small_tables_by_variant() {
        let seq = |mu, v| -> Vec<BigRational> {
            (0..=4).map(|n| incomplete_poly_bernoulli(n, mu, v)).collect()
        };
        assert_eq!(
            seq(1, Variant::Restricted(2)),
            vec![rat(1, 1), rat(1, 2), rat(1, 6), rat(-1, 2), rat(-11, 5)]
        );
        assert_eq!(
            seq(1, Variant::Associated(2)),
            vec![rat(1, 1), rat(0, 1), rat(-1, 2), rat(1, 2), rat(3, 2)]
        );
        assert_eq!(
            seq(2, Variant::Associated(2)),
            vec![rat(1, 1), rat(0, 1), rat(-1, 4), rat(1, 4), rat(5, 12)]
        );
        assert_eq!(
            seq(3, Variant::Associated(2)),
            vec![rat(1, 1), rat(0, 1), rat(-1, 8), rat(1, 8), rat(7, 72)]
        );
        assert_eq!(
            seq(2, Variant::Restricted(2)),
            vec![rat(1, 1), rat(1, 4), rat(-1, 36), rat(-7, 24), rat(-187, 300)]
        );
    }

    #[test]
    fn classical_examples() {
        for mu in -2..=3 {
            assert_eq!(poly_bernoulli(0, mu), rat(1, 1));
        }
        assert_eq!(poly_bernoulli(2, 1), rat(1, 6));
        assert_eq!(poly_bernoulli(1, 2), rat(1, 4));
    }

    #[test]
    fn classical_mu1_matches_its_egf() {
        // x/(1 - e^{-x}) generates the mu = 1 numbers (B_1 = +1/2 convention).
        use crate::series::{egf_coefficients, exp_series, TruncatedSeries};
        let order = 20;
        let num = TruncatedSeries::monomial(BigRational::one(), 1, order + 1);
        let den = &TruncatedSeries::one(order + 1) - &exp_series(-1, order + 1);
        let egf = egf_coefficients(&num.divide(&den).unwrap());
        for (n, c) in egf.iter().enumerate() {
            assert_eq!(&poly_bernoulli(n, 1), c, "n = {n}");
        }
    }

    #[test]
    fn integrality_for_nonpositive_mu() {
        for mu in -3..=0 {
            for n in 0..=25 {
                for variant in [
                    Variant::Classical,
                    Variant::Restricted(2),
                    Variant::Restricted(4),
                    Variant::Associated(2),
                    Variant::Associated(3),
                ] {
                    assert!(
                        incomplete_poly_bernoulli(n, mu, variant).is_integer(),
                        "n = {n}, mu = {mu}, variant = {variant}"
                    );
                }
            }
        }
    }

    #[test]
    fn associated_values_vanish_below_m() {
        for m in 2..=5usize {
            for n in 1..m {
                for mu in -2..=3 {
                    assert!(
                        incomplete_poly_bernoulli(n, mu, Variant::Associated(m)).is_zero(),
                        "n = {n}, mu = {mu}, m = {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn reductions_to_classical() {
        for n in 0..=25usize {
            for mu in [-2, 0, 1, 3] {
                assert_eq!(
                    incomplete_poly_bernoulli(n, mu, Variant::Associated(1)),
                    poly_bernoulli(n, mu)
                );
                if n <= 12 {
                    assert_eq!(
                        incomplete_poly_bernoulli(n, mu, Variant::Restricted(n.max(1))),
                        poly_bernoulli(n, mu)
                    );
                }
            }
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_mod_p(5, -1, Variant::Associated(2)).unwrap(), 2);
        assert_eq!(residue_mod_p(5, 0, Variant::Restricted(2)).unwrap(), 0);
        assert_eq!(residue_mod_p(7, -2, Variant::Associated(3)).unwrap(), 4);
    }

    #[test]
    fn residue_input_validation() {
        assert_eq!(
            residue_mod_p(6, 0, Variant::Classical).unwrap_err(),
            Error::NotPrime(6)
        );
        assert_eq!(
            residue_mod_p(5, 1, Variant::Classical).unwrap_err(),
            Error::PositiveMu(1)
        );
    }

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn scan_reports_in_range_matches() {
        let report = divisibility_scan(
            &[3, 5, 7],
            -2..=0,
            2..=4,
            &[Family::Restricted, Family::Associated],
        )
        .unwrap();
        assert_eq!(report.entries.len(), 3 * 3 * 3 * 2);
        assert!(report.all_within_range_pass());
        for e in &report.entries {
            assert_eq!(e.within_theorem_range, e.m < e.p as usize);
        }
    }

    #[test]
    fn scan_reports_boundary_without_asserting() {
        // Restricted(m >= p) degenerates: at n = p the blocks are unrestricted,
        // so the residue flips to the classical value 2^{|mu|} instead of 0.
        let report = divisibility_scan(&[3], 0..=0, 5..=5, &[Family::Restricted]).unwrap();
        let e = &report.entries[0];
        assert!(!e.within_theorem_range);
        assert_eq!(e.residue, 1);
        assert_eq!(e.predicted, 0);
        assert!(!e.pass);
        // The report as a whole still "passes" because the row is out of range.
        assert!(report.all_within_range_pass());
    }

    #[test]
    fn scan_rejects_positive_mu() {
        let err = divisibility_scan(&[3], -1..=1, 2..=2, &[Family::Associated]).unwrap_err();
        assert_eq!(err, Error::PositiveMu(1));
    }
}
