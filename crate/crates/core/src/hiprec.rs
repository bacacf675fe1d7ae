//! High-precision real arithmetic for quantities far outside `f64` range.
//!
//! Everything here works on natural logarithms: a positive quantity `q` is
//! carried as `ln q`, which stays representable even when `q` itself (for
//! example `n = e^(e^40)`) is not.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in significant decimal digits.
pub const DEFAULT_DIGITS: usize = 50;

/// Natural log above which a quantity is treated as astronomically large:
/// its reciprocal is below every precision this module is used with.
const ASTRONOMICAL_LN: f64 = 1.0e6;

/// Arithmetic context: precision plus the constant cache astro-float needs.
pub struct Hp {
    digits: usize,
    bits: usize,
    cc: Consts,
}

impl std::fmt::Debug for Hp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hp").field("digits", &self.digits).finish()
    }
}

impl Hp {
    pub fn new(digits: usize) -> Self {
        let digits = digits.max(10);
        // log2(10) bits per digit plus guard bits for cancellation.
        let bits =
            ((digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 96).div_ceil(64) * 64;
        Hp {
            digits,
            bits,
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    /// Precision from `REGFREE_PRECISION` if set and valid, else the default.
    pub fn from_env() -> Self {
        let digits = std::env::var("REGFREE_PRECISION")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_DIGITS);
        Hp::new(digits)
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn big_int(&mut self, v: &BigInt) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, self.bits, RM, &mut self.cc)
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let n = self.big_int(r.numer());
        let d = self.big_int(r.denom());
        n.div(&d, self.bits, RM)
    }

    /// Parses a decimal literal such as `"1.1"` or `"2.5e10"`.
    pub fn decimal(&mut self, s: &str) -> Result<BigFloat> {
        let v = BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.cc);
        if v.is_nan() {
            return Err(Error::Parse {
                what: "decimal number",
                input: s.to_string(),
            });
        }
        Ok(v)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn floor(&self, a: &BigFloat) -> BigFloat {
        a.floor()
    }

    pub fn ceil(&self, a: &BigFloat) -> BigFloat {
        a.ceil()
    }

    /// `e^(-ln_z)`, i.e. `1/z` for `z` given by its log; zero once `z` is
    /// astronomically large.
    pub fn recip_from_ln(&mut self, ln_z: &BigFloat) -> BigFloat {
        if self.to_f64(ln_z) > ASTRONOMICAL_LN {
            return self.int(0);
        }
        let neg = ln_z.neg();
        self.exp(&neg)
    }

    pub fn is_astronomical_ln(&self, ln_z: &BigFloat) -> bool {
        self.to_f64(ln_z) > ASTRONOMICAL_LN
    }

    /// Lossy conversion for control decisions and display only.
    pub fn to_f64(&self, a: &BigFloat) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        let s = format!("{a}");
        s.parse::<f64>().unwrap_or(if a.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
    }

    /// Decimal string with `self.digits` significant digits.
    pub fn format(&mut self, a: &BigFloat) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let full = a
            .format(Radix::Dec, RM, &mut self.cc)
            .unwrap_or_else(|_| format!("{a}"));
        truncate_decimal(&full, self.digits)
    }

    /// `|a - b| <= 10^-digits * max(|a|, |b|)`, or both zero.
    pub fn approx_eq(&mut self, a: &BigFloat, b: &BigFloat, digits: usize) -> bool {
        let diff = self.sub(a, b).abs();
        if diff.is_zero() {
            return true;
        }
        let scale = a.abs().max(&b.abs());
        let tol = self.pow10_neg(digits);
        let bound = self.mul(&scale, &tol);
        diff.cmp(&bound).map_or(false, |c| c <= 0)
    }

    pub fn pow10_neg(&mut self, digits: usize) -> BigFloat {
        let ten = self.int(10);
        let p = self.powi(&ten, digits);
        self.div(&self.int(1), &p)
    }

    /// `ln Γ(x)` for `x > 0` small enough to be represented directly.
    pub fn ln_gamma(&mut self, x: &BigFloat) -> BigFloat {
        let shift_to = self.int(self.digits.max(64) as i64);
        let mut x = x.clone();
        let mut correction = self.int(0);
        while x.cmp(&shift_to).map_or(false, |c| c < 0) {
            let l = self.ln(&x);
            correction = self.add(&correction, &l);
            x = self.add(&x, &self.int(1));
        }
        // (x - 1/2) ln x - x + ln(2π)/2 + Σ B_2k / (2k (2k-1) x^(2k-1))
        let half = self.div(&self.int(1), &self.int(2));
        let lnx = self.ln(&x);
        let mut acc = self.mul(&self.sub(&x, &half), &lnx);
        acc = self.sub(&acc, &x);
        let pi = self.pi();
        let two_pi = self.mul(&pi, &self.int(2));
        let l2pi = self.ln(&two_pi);
        acc = self.add(&acc, &self.mul(&half, &l2pi));
        let tail = self.stirling_series(&x);
        acc = self.add(&acc, &tail);
        self.sub(&acc, &correction)
    }

    /// Tail `Σ_k B_2k / (2k(2k-1) z^(2k-1))` of the Stirling expansion,
    /// summed until terms drop below the working precision. Requires `z`
    /// comfortably large (at least 64).
    fn stirling_series(&mut self, z: &BigFloat) -> BigFloat {
        let eps = self.pow10_neg(self.digits + 10);
        let z2 = self.mul(z, z);
        let mut zpow = z.clone();
        let mut sum = self.int(0);
        for (k, b) in bernoulli_even(120).iter().enumerate().skip(1) {
            let k = k as i64;
            let coeff = b / Rational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
            let c = self.rational(&coeff);
            let term = self.div(&c, &zpow);
            sum = self.add(&sum, &term);
            if term.abs().cmp(&eps).map_or(true, |c| c < 0) {
                break;
            }
            zpow = self.mul(&zpow, &z2);
        }
        sum
    }

    /// `ln Γ(z+1) - (z ln z - z + ln(2πz)/2)` for `z > 0` given by `ln z`.
    ///
    /// Vanishes like `1/(12 z)`; returned as exactly zero for astronomical
    /// `z`.
    pub fn stirling_remainder(&mut self, ln_z: &BigFloat) -> BigFloat {
        if self.is_astronomical_ln(ln_z) {
            return self.int(0);
        }
        let z = self.exp(ln_z);
        if z.cmp(&self.int(64)).map_or(false, |c| c >= 0) {
            return self.stirling_series(&z);
        }
        let z1 = self.add(&z, &self.int(1));
        let full = self.ln_gamma(&z1);
        let half = self.div(&self.int(1), &self.int(2));
        let pi = self.pi();
        let two_pi_z = self.mul(&self.mul(&pi, &self.int(2)), &z);
        let l = self.ln(&two_pi_z);
        let main = self.add(&self.sub(&self.mul(&z, ln_z), &z), &self.mul(&half, &l));
        self.sub(&full, &main)
    }
}

fn truncate_decimal(s: &str, digits: usize) -> String {
    // astro-float prints `d.ddddde±x`; keep `digits` significant digits.
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mut out = String::new();
    let mut count = 0;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if count >= digits {
                continue;
            }
            count += 1;
        }
        out.push(ch);
    }
    if out.ends_with('.') {
        out.push('0');
    }
    out.push_str(exponent);
    out
}

/// Even-index Bernoulli numbers `B_0, B_2, …, B_{2(count-1)}` as exact
/// rationals, via the Akiyama–Tanigawa recurrence.
pub fn bernoulli_even(count: usize) -> &'static [Rational] {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<Rational>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let max = 2 * 120;
        let mut a: Vec<Rational> = Vec::with_capacity(max + 1);
        let mut b = Vec::with_capacity(max + 1);
        for m in 0..=max {
            a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * Rational::from_integer(BigInt::from(j));
            }
            b.push(a[0].clone());
        }
        // Akiyama–Tanigawa yields B_1 = +1/2; only even indices are used.
        b.into_iter().step_by(2).collect()
    });
    &all[..count.min(all.len())]
}

/// A nonnegative quantity carried by its natural log; `Zero` has log `-∞`.
#[derive(Clone, Debug)]
pub enum LogValue {
    Zero,
    Ln(BigFloat),
}

impl LogValue {
    pub fn ln(&self) -> Option<&BigFloat> {
        match self {
            LogValue::Zero => None,
            LogValue::Ln(v) => Some(v),
        }
    }

    pub fn cmp(&self, other: &LogValue) -> Ordering {
        match (self, other) {
            (LogValue::Zero, LogValue::Zero) => Ordering::Equal,
            (LogValue::Zero, _) => Ordering::Less,
            (_, LogValue::Zero) => Ordering::Greater,
            (LogValue::Ln(a), LogValue::Ln(b)) => match a.cmp(b) {
                Some(c) if c < 0 => Ordering::Less,
                Some(0) => Ordering::Equal,
                _ => Ordering::Greater,
            },
        }
    }

    pub fn display(&self, hp: &mut Hp) -> String {
        match self {
            LogValue::Zero => "-inf".to_string(),
            LogValue::Ln(v) => hp.format(v),
        }
    }
}

/// Parsed size expression such as `e^e^40`, `2^64`, `1e6` or `e^(e^10)`.
///
/// `^` is right-associative. The value itself may be far too large to
/// represent; [`SizeExpr::ln_value`] only needs the exponent tower below the
/// top to be representable.
#[derive(Clone, Debug, PartialEq)]
pub enum SizeExpr {
    E,
    Number(String),
    Pow(Box<SizeExpr>, Box<SizeExpr>),
}

impl SizeExpr {
    pub fn parse(input: &str) -> Result<SizeExpr> {
        let tokens: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let e = parse_pow(&tokens, &mut pos, input)?;
        if pos != tokens.len() {
            return Err(expr_error(input));
        }
        Ok(e)
    }

    /// The value itself; fails if it overflows the float range.
    pub fn value(&self, hp: &mut Hp) -> Result<BigFloat> {
        let v = match self {
            SizeExpr::E => hp.exp(&hp.int(1)),
            SizeExpr::Number(s) => hp.decimal(s)?,
            SizeExpr::Pow(..) => {
                let l = self.ln_value(hp)?;
                hp.exp(&l)
            }
        };
        if v.is_inf() || v.is_nan() {
            return Err(Error::Domain("expression value overflows".into()));
        }
        Ok(v)
    }

    /// Natural log of the value. The value must be positive.
    pub fn ln_value(&self, hp: &mut Hp) -> Result<BigFloat> {
        match self {
            SizeExpr::E => Ok(hp.int(1)),
            SizeExpr::Number(_) => {
                let v = self.value(hp)?;
                if !v.is_positive() {
                    return Err(Error::Domain("logarithm of a non-positive number".into()));
                }
                Ok(hp.ln(&v))
            }
            SizeExpr::Pow(base, exponent) => {
                let lb = base.ln_value(hp)?;
                let ex = exponent.value(hp)?;
                Ok(hp.mul(&ex, &lb))
            }
        }
    }
}

fn expr_error(input: &str) -> Error {
    Error::Parse {
        what: "size expression",
        input: input.to_string(),
    }
}

fn parse_pow(t: &[char], pos: &mut usize, input: &str) -> Result<SizeExpr> {
    let base = parse_atom(t, pos, input)?;
    if *pos < t.len() && t[*pos] == '^' {
        *pos += 1;
        let exp = parse_pow(t, pos, input)?;
        return Ok(SizeExpr::Pow(Box::new(base), Box::new(exp)));
    }
    Ok(base)
}

fn parse_atom(t: &[char], pos: &mut usize, input: &str) -> Result<SizeExpr> {
    match t.get(*pos) {
        Some('(') => {
            *pos += 1;
            let e = parse_pow(t, pos, input)?;
            if t.get(*pos) != Some(&')') {
                return Err(expr_error(input));
            }
            *pos += 1;
            Ok(e)
        }
        Some('e') => {
            *pos += 1;
            Ok(SizeExpr::E)
        }
        Some(c) if c.is_ascii_digit() || *c == '.' => {
            let start = *pos;
            while *pos < t.len() && (t[*pos].is_ascii_digit() || t[*pos] == '.') {
                *pos += 1;
            }
            // scientific suffix: 1e6, 2.5e-3
            if *pos < t.len() && (t[*pos] == 'e' || t[*pos] == 'E') {
                let mut look = *pos + 1;
                if look < t.len() && (t[look] == '-' || t[look] == '+') {
                    look += 1;
                }
                if look < t.len() && t[look].is_ascii_digit() {
                    *pos = look;
                    while *pos < t.len() && t[*pos].is_ascii_digit() {
                        *pos += 1;
                    }
                }
            }
            Ok(SizeExpr::Number(t[start..*pos].iter().collect()))
        }
        _ => Err(expr_error(input)),
    }
}
