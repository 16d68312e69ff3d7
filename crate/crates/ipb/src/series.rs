//! Truncated formal power series over an exact coefficient ring.
//!
//! A `TruncatedSeries<T>` holds the coefficients c_0..c_N of Σ c_j t^j known
//! through order N. Invariants:
//!
//! * the coefficient vector is never empty (order 0 means a constant);
//! * binary operations truncate to the smaller operand order, so a
//!   coefficient is only ever produced from fully known inputs;
//! * division cancels a common power of t first and shortens the order by
//!   the denominator's valuation; antidifferentiation extends it by one.
//!
//! The coefficient type is anything ring-like with exact division
//! ([`Coeff`]); the crate-level alias `TruncatedEgf` fixes `BigRational`,
//! which every generating-function pipeline below uses.

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::{Error, Result, Variant};

/// Coefficient ring: exact arithmetic with division and usize embedding.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Div<Output = T>
        + FromPrimitive
{
}

fn embed<T: Coeff>(n: usize) -> T {
    T::from_usize(n).expect("coefficient ring cannot represent a small integer")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> TruncatedSeries<T> {
    /// Series with the given coefficients c_0..c_N; the length fixes N+1.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least order 0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = c;
        TruncatedSeries { coeffs }
    }

    /// c·t^power as a series of the given order.
    pub fn monomial(c: T, power: usize, order: usize) -> Self {
        assert!(power <= order, "monomial power exceeds series order");
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[power] = c;
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &T {
        assert!(j <= self.order(), "coefficient {j} beyond truncation order");
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Index of the lowest nonzero coefficient; `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// The same series viewed at a lower truncation order.
    pub fn truncate_to(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|j| self.coeffs[j].clone() + rhs.coeffs[j].clone())
            .collect();
        TruncatedSeries { coeffs }
    }

    fn sub_impl(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|j| self.coeffs[j].clone() - rhs.coeffs[j].clone())
            .collect();
        TruncatedSeries { coeffs }
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![T::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] =
                    coeffs[i + j].clone() + self.coeffs[i].clone() * rhs.coeffs[j].clone();
            }
        }
        TruncatedSeries { coeffs }
    }

    /// f∘g truncated to the smaller order; g must have zero constant term
    /// (otherwise infinitely many f-coefficients would contribute).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate_to(n);
        // Horner from the top coefficient down.
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for j in (0..n).rev() {
            acc = acc.mul_impl(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[j].clone();
        }
        Ok(acc)
    }

    /// f/g. A denominator valuation v > 0 is cancelled against the numerator
    /// first (requiring valuation(f) >= v), and the result's order drops by v.
    pub fn divide(&self, den: &Self) -> Result<Self> {
        let vd = match den.valuation() {
            Some(v) => v,
            None => return Err(Error::DivisionByZeroSeries),
        };
        let n = self.order().min(den.order());
        if vd > 0 {
            match self.valuation() {
                None => return Ok(Self::zero(n.saturating_sub(vd))),
                Some(vn) if vn < vd => {
                    return Err(Error::ValuationTooLow {
                        numerator: vn,
                        denominator: vd,
                    })
                }
                Some(_) => {}
            }
        }
        let b0 = den.coeffs[vd].clone();
        let mut q: Vec<T> = Vec::with_capacity(n - vd + 1);
        for i in 0..=n - vd {
            let mut acc = self.coeffs[vd + i].clone();
            for j in 1..=i {
                acc = acc - den.coeffs[vd + j].clone() * q[i - j].clone();
            }
            q.push(acc / b0.clone());
        }
        Ok(TruncatedSeries { coeffs: q })
    }

    /// log(1 + u) = Σ_{j>=1} (−1)^{j−1} u^j / j; u must have zero constant term.
    pub fn log1p(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut acc = Self::zero(n);
        let mut pow = Self::one(n);
        for j in 1..=n {
            pow = pow.mul_impl(self);
            let term = pow.map(|c| c.clone() / embed::<T>(j));
            acc = if j % 2 == 1 {
                acc.add_impl(&term)
            } else {
                acc.sub_impl(&term)
            };
        }
        Ok(acc)
    }

    /// The antiderivative vanishing at 0, known one order further.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / embed::<T>(j + 1));
        }
        TruncatedSeries { coeffs }
    }

    /// Termwise derivative, known one order less.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(j, c)| c.clone() * embed::<T>(j + 1))
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<T: Coeff> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        self.add_impl(rhs)
    }
}

impl<T: Coeff> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        self.sub_impl(rhs)
    }
}

impl<T: Coeff> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        self.mul_impl(rhs)
    }
}

impl<T: Coeff> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn neg(self) -> TruncatedSeries<T> {
        self.map(|c| -c.clone())
    }
}

/// Partial exponential sum E_m(sign·t) = Σ_{j=0}^{m} (sign·t)^j / j!.
/// Negative m yields the zero series (the E_{−1} = 0 convention).
pub fn em_series<T: Coeff>(m: i64, sign: i32, order: usize) -> TruncatedSeries<T> {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let mut s = TruncatedSeries::zero(order);
    if m < 0 {
        return s;
    }
    let top = usize::try_from(m).unwrap_or(usize::MAX).min(order);
    let mut c = T::one();
    for j in 0..=top {
        s.coeffs[j] = if sign == -1 && j % 2 == 1 {
            -c.clone()
        } else {
            c.clone()
        };
        c = c / embed::<T>(j + 1);
    }
    s
}

/// exp(sign·t): the m → ∞ limit of [`em_series`].
pub fn exp_series<T: Coeff>(sign: i32, order: usize) -> TruncatedSeries<T> {
    em_series(order as i64, sign, order)
}

/// Li_mu(z) = Σ_{j>=1} z^j / j^mu truncated at the given order, mu >= 1.
pub fn polylog_series<T: Coeff>(mu: u32, order: usize) -> TruncatedSeries<T> {
    assert!(mu >= 1, "polylog order must be positive");
    let mut s = TruncatedSeries::zero(order);
    for j in 1..=order {
        let base: T = embed(j);
        let mut d = T::one();
        for _ in 0..mu {
            d = d * base.clone();
        }
        s.coeffs[j] = T::one() / d;
    }
    s
}

/// Reads a series as an exponential generating function: returns n!·c_n.
pub fn egf_coefficients<T: Coeff>(s: &TruncatedSeries<T>) -> Vec<T> {
    let mut fact = T::one();
    let mut out = Vec::with_capacity(s.coeffs.len());
    for (n, c) in s.coeffs.iter().enumerate() {
        if n > 0 {
            fact = fact * embed::<T>(n);
        }
        out.push(c.clone() * fact.clone());
    }
    out
}

/// The EGF argument g(t) whose composition with Li_mu generates the
/// incomplete poly-Bernoulli numbers.
fn gf_argument(variant: Variant, order: usize) -> TruncatedSeries<BigRational> {
    let one = TruncatedSeries::one(order);
    match variant {
        Variant::Classical => &one - &exp_series(-1, order),
        Variant::Restricted(m) => &one - &em_series(m as i64, -1, order),
        Variant::Associated(m) => &em_series(m as i64 - 1, -1, order) - &exp_series(-1, order),
    }
}

/// Valuation of [`gf_argument`]: the associated g starts at t^m, the others at t.
fn gf_valuation(variant: Variant) -> usize {
    match variant {
        Variant::Associated(m) => m,
        _ => 1,
    }
}

/// Incomplete poly-Bernoulli numbers B_{n}^{(mu)} for n = 0..=order via the
/// generating function Li_mu(g(t))/g(t), expanded in exact rationals.
pub fn gf_incomplete_bernoulli(mu: u32, variant: Variant, order: usize) -> Vec<BigRational> {
    assert!(mu >= 1, "the generating function needs mu >= 1");
    variant.assert_valid();
    // Dividing by g costs valuation(g) orders; work with headroom.
    let w = order + gf_valuation(variant);
    let g = gf_argument(variant, w);
    let li = polylog_series::<BigRational>(mu, w);
    let h = li
        .compose(&g)
        .expect("g has zero constant term by construction");
    let q = h
        .divide(&g)
        .expect("Li_mu(g) inherits the valuation of g");
    debug_assert_eq!(q.order(), order);
    egf_coefficients(&q)
}

/// The same numbers through the iterated-integral representation: starting
/// from A_1 = −log(1 − g(t)·(sign bookkeeping folded in)), multiply by the
/// variant's ratio series and antidifferentiate mu−1 times, then divide by
/// g(t). Must agree with [`gf_incomplete_bernoulli`] coefficient for
/// coefficient; the two routes share no series plumbing beyond the ring ops.
pub fn gf_iterated_integral(mu: u32, variant: Variant, order: usize) -> Vec<BigRational> {
    assert!(mu >= 1, "the iterated integral needs mu >= 1");
    variant.assert_valid();
    // Each multiply/divide/antidifferentiate round trips the order down by
    // valuation(g) − 1 and the final division costs valuation(g) more.
    let (loss_per_round, final_loss) = match variant {
        Variant::Associated(m) => (m - 1, m),
        _ => (0, 1),
    };
    let w = order + (mu as usize - 1) * loss_per_round + final_loss + 1;
    let g = gf_argument(variant, w);
    // A_1 = −log(1 − g): for the restricted family 1 − g = E_m(−t), for the
    // associated family 1 − g = 1 + e^{−t} − E_{m−1}(−t).
    let minus_g = (&g).neg();
    let mut a = (&minus_g.log1p().expect("g vanishes at 0")).neg();
    let ratio_num: TruncatedSeries<BigRational> = match variant {
        Variant::Classical => exp_series(-1, w),
        Variant::Restricted(m) => em_series(m as i64 - 1, -1, w),
        Variant::Associated(m) => &exp_series(-1, w) - &em_series(m as i64 - 2, -1, w),
    };
    for _ in 1..mu {
        a = (&ratio_num * &a)
            .divide(&g)
            .expect("the product keeps valuation >= valuation(g)")
            .antiderivative();
    }
    let q = a
        .divide(&g)
        .expect("every A_j keeps valuation >= valuation(g)");
    egf_coefficients(&q.truncate_to(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Egf = TruncatedSeries<BigRational>;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn series(v: &[(i64, i64)]) -> Egf {
        Egf::from_coeffs(v.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    #[test]
    fn em_series_examples() {
        let e2 = em_series::<BigRational>(2, -1, 4);
        assert_eq!(e2, series(&[(1, 1), (-1, 1), (1, 2), (0, 1), (0, 1)]));
        let e_inf = exp_series::<BigRational>(-1, 3);
        assert_eq!(e_inf, series(&[(1, 1), (-1, 1), (1, 2), (-1, 6)]));
        let e_neg = em_series::<BigRational>(-1, -1, 3);
        assert_eq!(e_neg, Egf::zero(3));
    }

    #[test]
    fn compose_examples() {
        let f = Egf::monomial(rat(1, 1), 2, 4);
        let g = series(&[(0, 1), (1, 1), (1, 1), (0, 1), (0, 1)]);
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg, series(&[(0, 1), (0, 1), (1, 1), (2, 1), (1, 1)]));

        let f = series(&[(3, 1), (-1, 2), (5, 7), (2, 3)]);
        let id = Egf::monomial(rat(1, 1), 1, 3);
        assert_eq!(f.compose(&id).unwrap(), f);

        let f = series(&[(1, 1), (1, 1), (0, 1)]);
        let g = Egf::monomial(rat(1, 2), 2, 2);
        assert_eq!(f.compose(&g).unwrap(), series(&[(1, 1), (0, 1), (1, 2)]));
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        let f = Egf::one(3);
        let g = Egf::one(3);
        assert_eq!(f.compose(&g).unwrap_err(), Error::NonzeroConstantTerm);
    }

    #[test]
    fn divide_examples() {
        let f = series(&[(0, 1), (1, 1), (1, 2), (1, 6)]);
        let g = Egf::monomial(rat(1, 1), 1, 3);
        assert_eq!(f.divide(&g).unwrap(), series(&[(1, 1), (1, 2), (1, 6)]));

        let one = Egf::one(4);
        let g = series(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(
            one.divide(&g).unwrap(),
            series(&[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1)])
        );

        // log(1−t) / (−t) = Σ t^j/(j+1).
        let log = Egf::monomial(rat(-1, 1), 1, 5).log1p().unwrap();
        let mt = Egf::monomial(rat(-1, 1), 1, 5);
        assert_eq!(
            log.divide(&mt).unwrap(),
            series(&[(1, 1), (1, 2), (1, 3), (1, 4), (1, 5)])
        );
    }

    #[test]
    fn divide_errors() {
        let t = Egf::monomial(rat(1, 1), 1, 4);
        let t2 = Egf::monomial(rat(1, 1), 2, 4);
        assert_eq!(
            t.divide(&t2).unwrap_err(),
            Error::ValuationTooLow {
                numerator: 1,
                denominator: 2
            }
        );
        assert_eq!(
            t.divide(&Egf::zero(4)).unwrap_err(),
            Error::DivisionByZeroSeries
        );
        // Zero numerator divides cleanly whatever the valuations.
        assert_eq!(Egf::zero(4).divide(&t2).unwrap(), Egf::zero(2));
    }

    #[test]
    fn log1p_examples() {
        let t = Egf::monomial(rat(1, 1), 1, 4);
        assert_eq!(
            t.log1p().unwrap(),
            series(&[(0, 1), (1, 1), (-1, 2), (1, 3), (-1, 4)])
        );
        assert_eq!(Egf::zero(3).log1p().unwrap(), Egf::zero(3));
        // log(exp(t)) recovers t.
        let u = &exp_series::<BigRational>(1, 6) - &Egf::one(6);
        assert_eq!(u.log1p().unwrap(), Egf::monomial(rat(1, 1), 1, 6));
        assert_eq!(Egf::one(2).log1p().unwrap_err(), Error::NonzeroConstantTerm);
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(
            Egf::one(0).antiderivative(),
            series(&[(0, 1), (1, 1)])
        );
        for n in 0..=5 {
            let f = Egf::monomial(rat(1, 1), n, 5);
            let big = f.antiderivative();
            assert_eq!(big.order(), 6);
            assert_eq!(*big.coeff(n + 1), rat(1, (n + 1) as i64));
        }
        // ∫ 1/(1−t) = −log(1−t).
        let geo = Egf::one(4)
            .divide(&series(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]))
            .unwrap();
        assert_eq!(
            geo.antiderivative(),
            series(&[(0, 1), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5)])
        );
    }

    #[test]
    fn polylog_series_examples() {
        assert_eq!(
            polylog_series::<BigRational>(1, 3),
            series(&[(0, 1), (1, 1), (1, 2), (1, 3)])
        );
        assert_eq!(
            polylog_series::<BigRational>(2, 3),
            series(&[(0, 1), (1, 1), (1, 4), (1, 9)])
        );
        for mu in 1..=6 {
            assert_eq!(*polylog_series::<BigRational>(mu, 2).coeff(1), rat(1, 1));
        }
    }

    #[test]
    fn gf_incomplete_bernoulli_examples() {
        assert_eq!(
            gf_incomplete_bernoulli(1, Variant::Restricted(1), 2),
            vec![rat(1, 1), rat(1, 2), rat(2, 3)]
        );
        assert_eq!(
            gf_incomplete_bernoulli(1, Variant::Associated(2), 2),
            vec![rat(1, 1), rat(0, 1), rat(-1, 2)]
        );
        assert_eq!(
            gf_incomplete_bernoulli(1, Variant::Classical, 1),
            vec![rat(1, 1), rat(1, 2)]
        );
    }

    #[test]
    fn iterated_integral_matches_gf_pipeline() {
        for mu in 1..=3u32 {
            for variant in [
                Variant::Classical,
                Variant::Restricted(1),
                Variant::Restricted(2),
                Variant::Restricted(3),
                Variant::Associated(1),
                Variant::Associated(2),
                Variant::Associated(3),
            ] {
                assert_eq!(
                    gf_iterated_integral(mu, variant, 10),
                    gf_incomplete_bernoulli(mu, variant, 10),
                    "mu = {mu}, variant = {variant}"
                );
            }
        }
    }

    #[test]
    fn single_integration_reduces_to_log_over_g() {
        // With mu = 1 there is no integration: the result is −log(E_m(−t))
        // normalised by 1 − E_m(−t).
        for m in 1..=4 {
            let w = 12;
            let em = em_series::<BigRational>(m, -1, w);
            let g = &Egf::one(w) - &em;
            let num = (&(&em - &Egf::one(w)).log1p().unwrap()).neg();
            let direct = egf_coefficients(&num.divide(&g).unwrap());
            assert_eq!(
                gf_iterated_integral(1, Variant::Restricted(m as usize), w - 1),
                direct[..w].to_vec()
            );
        }
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
    }

    fn arb_series(max_len: usize) -> impl Strategy<Value = Egf> {
        proptest::collection::vec(arb_rat(), 1..=max_len).prop_map(Egf::from_coeffs)
    }

    fn arb_unit_series(max_len: usize) -> impl Strategy<Value = Egf> {
        (
            arb_rat().prop_filter("nonzero constant", |r| !r.is_zero()),
            proptest::collection::vec(arb_rat(), 0..max_len),
        )
            .prop_map(|(head, mut tail)| {
                tail.insert(0, head);
                Egf::from_coeffs(tail)
            })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(13), b in arb_series(13), c in arb_series(13)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn div_mul_round_trip(a in arb_series(13), g in arb_unit_series(13)) {
            let q = (&a * &g).divide(&g).unwrap();
            prop_assert_eq!(q, a.truncate_to(a.order().min(g.order())));
        }

        #[test]
        fn derivative_undoes_antiderivative(a in arb_series(13)) {
            prop_assert_eq!(a.antiderivative().derivative(), a);
        }
    }
}
