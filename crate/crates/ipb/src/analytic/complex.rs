//! Complex arithmetic over astro-float binary floats.
//!
//! Operations follow the max-precision rule: a binary operation computes at
//! the larger of the two operand precisions. Transcendental constants are
//! cached per thread, which keeps the public surface free of context
//! plumbing while staying deterministic and thread-safe.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Exponent, Radix, RoundingMode, Sign};
use num_bigint::BigInt;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Runs `f` with the thread's transcendental-constants cache. Do not nest.
pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// 2^e at precision p.
pub(crate) fn pow2(e: i64, p: usize) -> BigFloat {
    let mut x = BigFloat::from_u8(1, p);
    x.set_exponent((e + 1) as Exponent);
    x
}

/// Exact embedding of a loop index; valid for v < 2^53.
pub(crate) fn bf_from_usize(v: usize, p: usize) -> BigFloat {
    debug_assert!(v < (1usize << 53));
    BigFloat::from_f64(v as f64, p)
}

/// Nearest f64, for coarse bounds and display only.
pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// Exact conversion of a big integer (decimal parse carries full precision).
pub(crate) fn bigint_to_bigfloat(v: &BigInt, p_min: usize) -> BigFloat {
    let p = p_min.max(v.bits() as usize + 8);
    with_consts(|cc| BigFloat::parse(&v.to_string(), Radix::Dec, p, RM, cc))
}

fn is_neg(x: &BigFloat) -> bool {
    x.sign() == Some(Sign::Neg) && !x.is_zero()
}

/// atan2(y, x) with the usual quadrant conventions; arg(0) is taken as 0.
fn atan2(y: &BigFloat, x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    if x.is_zero() {
        if y.is_zero() {
            return BigFloat::from_u8(0, p);
        }
        let mut half_pi = cc.pi(p, RM);
        half_pi.set_exponent(half_pi.exponent().unwrap() - 1);
        return if is_neg(y) { half_pi.neg() } else { half_pi };
    }
    let base = y.div(x, p, RM).atan(p, RM, cc);
    if !is_neg(x) {
        base
    } else if is_neg(y) {
        base.sub(&cc.pi(p, RM), p, RM)
    } else {
        base.add(&cc.pi(p, RM), p, RM)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        assert!(p >= 64, "precision must be at least 64 bits");
        BigComplex {
            re: BigFloat::from_f64(re, p),
            im: BigFloat::from_f64(im, p),
        }
    }

    pub fn zero(p: usize) -> Self {
        Self::from_f64(0.0, 0.0, p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_f64(1.0, 0.0, p)
    }

    /// Working precision: the larger of the two components', floored at the
    /// type's 64-bit minimum (astro-float reports exact zeros as precision 0).
    pub fn precision(&self) -> usize {
        self.re
            .precision()
            .unwrap_or(0)
            .max(self.im.precision().unwrap_or(0))
            .max(64)
    }

    pub fn with_precision(&self, p: usize) -> Self {
        assert!(p >= 64, "precision must be at least 64 bits");
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.set_precision(p, RM).expect("set_precision");
        im.set_precision(p, RM).expect("set_precision");
        BigComplex { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    fn op_prec(&self, rhs: &Self) -> usize {
        self.precision().max(rhs.precision())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.op_prec(rhs);
        BigComplex {
            re: self.re.add(&rhs.re, p, RM),
            im: self.im.add(&rhs.im, p, RM),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.op_prec(rhs);
        BigComplex {
            re: self.re.sub(&rhs.re, p, RM),
            im: self.im.sub(&rhs.im, p, RM),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.op_prec(rhs);
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        BigComplex {
            re: ac.sub(&bd, p, RM),
            im: ad.add(&bc, p, RM),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let p = self.op_prec(rhs);
        let den = rhs.norm_sqr();
        let ac = self.re.mul(&rhs.re, p, RM);
        let bd = self.im.mul(&rhs.im, p, RM);
        let bc = self.im.mul(&rhs.re, p, RM);
        let ad = self.re.mul(&rhs.im, p, RM);
        BigComplex {
            re: ac.add(&bd, p, RM).div(&den, p, RM),
            im: bc.sub(&ad, p, RM).div(&den, p, RM),
        }
    }

    pub fn scale(&self, f: &BigFloat) -> Self {
        let p = self.precision().max(f.precision().unwrap_or(0));
        BigComplex {
            re: self.re.mul(f, p, RM),
            im: self.im.mul(f, p, RM),
        }
    }

    pub fn div_scalar(&self, f: &BigFloat) -> Self {
        let p = self.precision().max(f.precision().unwrap_or(0));
        BigComplex {
            re: self.re.div(f, p, RM),
            im: self.im.div(f, p, RM),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.precision();
        let rr = self.re.mul(&self.re, p, RM);
        let ii = self.im.mul(&self.im, p, RM);
        rr.add(&ii, p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.precision(), RM)
    }

    pub fn arg(&self) -> BigFloat {
        let p = self.precision();
        with_consts(|cc| atan2(&self.im, &self.re, p, cc))
    }

    pub fn exp(&self) -> Self {
        let p = self.precision();
        with_consts(|cc| {
            let ex = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            BigComplex {
                re: ex.mul(&c, p, RM),
                im: ex.mul(&s, p, RM),
            }
        })
    }

    /// Principal branch logarithm; self must be nonzero.
    pub fn ln(&self) -> Self {
        let p = self.precision();
        let nsq = self.norm_sqr();
        with_consts(|cc| {
            let mut half_log = nsq.ln(p, RM, cc);
            if !half_log.is_zero() {
                half_log.set_exponent(half_log.exponent().unwrap() - 1);
            }
            BigComplex {
                re: half_log,
                im: atan2(&self.im, &self.re, p, cc),
            }
        })
    }

    /// self^e = exp(e·ln self) on the principal branch; self must be nonzero.
    pub fn powc(&self, e: &Self) -> Self {
        e.mul(&self.ln()).exp()
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (bf_to_f64(&self.re), bf_to_f64(&self.im))
    }
}

/// x^(-s) for a small positive integer base. Integer real exponents take an
/// exact powering shortcut; everything else goes through exp(-s·ln x).
pub(crate) fn pow_neg_s(base: usize, s: &BigComplex, p: usize) -> BigComplex {
    debug_assert!(base >= 1);
    let b = bf_from_usize(base, p);
    if s.im.is_zero() {
        if let Some(si) = real_small_int(&s.re) {
            let pw = b.powi(si.unsigned_abs() as usize, p, RM);
            let r = if si >= 0 {
                BigFloat::from_u8(1, p).div(&pw, p, RM)
            } else {
                pw
            };
            return BigComplex::new(r, BigFloat::from_u8(0, p));
        }
    }
    let ln_b = with_consts(|cc| b.ln(p, RM, cc));
    s.neg().scale(&ln_b).exp()
}

/// Some(n) when x is exactly a small integer.
fn real_small_int(x: &BigFloat) -> Option<i64> {
    let f = bf_to_f64(x);
    if f.is_finite() && f == f.round() && f.abs() <= 1e6 {
        let p = x.precision().unwrap_or(0).max(64);
        if BigFloat::from_f64(f, p) == *x {
            return Some(f as i64);
        }
    }
    None
}

/// Digits that carry the information content of p bits: ceil(p·log10 2).
pub fn decimal_digits_for_bits(p: usize) -> usize {
    (p as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// Parses a decimal string at the given precision; `None` on malformed input.
pub fn parse_bigfloat(s: &str, p: usize) -> Option<BigFloat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
    if v.is_nan() {
        None
    } else {
        Some(v)
    }
}

/// Renders x as `d.ddd…e±E` with exactly `digits` significant digits,
/// half-up in the last place. Zero renders as "0". Deterministic: the same
/// value and digit count always produce the same string.
pub fn format_decimal(x: &BigFloat, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf() {
        return if is_neg(x) { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let (sign, mut ds, exp) = with_consts(|cc| x.convert_to_radix(Radix::Dec, RM, cc))
        .expect("finite value converts to decimal");
    let mut e10 = exp as i64; // value = 0.d0 d1 … × 10^e10
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    } else {
        ds.resize(digits, 0);
    }
    let mut out = String::with_capacity(digits + 8);
    if sign == Sign::Neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    if digits > 1 {
        out.push('.');
        for &d in &ds[1..] {
            out.push((b'0' + d) as char);
        }
    }
    let e = e10 - 1;
    out.push('e');
    out.push(if e < 0 { '-' } else { '+' });
    out.push_str(&e.abs().to_string());
    out
}
