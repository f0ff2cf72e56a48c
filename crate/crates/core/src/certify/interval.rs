//! Outward-rounded interval arithmetic over dyadic rationals `m · 2^e`.
//!
//! Every operation returns an interval containing the exact result of the
//! same operation on any points of the inputs. Endpoints are kept to a fixed
//! number of significant bits; elementary functions are evaluated at a few
//! dozen guard bits above that and rounded outward at the end.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;

const GUARD_BITS: u32 = 48;

/// `mant · 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if m.is_negative() {
        let mag = -m;
        let one = BigInt::one();
        -((mag + ((&one << s) - &one)) >> s)
    } else {
        m >> s
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0xf_ffff_ffff_ffff;
        let (m, e) = if exponent == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), exponent - 1075)
        };
        Dyadic::new(BigInt::from(sign) * BigInt::from(m), e)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `|x| < 2^magnitude` and, if `x ≠ 0`, `|x| ≥ 2^(magnitude-1)`.
    fn magnitude(&self) -> i64 {
        self.bits() as i64 + self.exp
    }

    fn neg(&self) -> Self {
        Dyadic::new(-&self.mant, self.exp)
    }

    fn abs(&self) -> Self {
        Dyadic::new(self.mant.abs(), self.exp)
    }

    fn shift(&self, k: i64) -> Self {
        Dyadic::new(self.mant.clone(), self.exp + k)
    }

    /// Rounds to at most `prec` significant bits, up or down.
    fn round(&self, prec: u32, up: bool) -> Self {
        let b = self.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        let mant = if up {
            -floor_shr(&-&self.mant, s)
        } else {
            floor_shr(&self.mant, s)
        };
        Dyadic::new(mant, self.exp + s as i64)
    }

    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    /// `x / y` rounded to `prec` bits in the given direction.
    fn div(&self, o: &Self, prec: u32, up: bool) -> Self {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let k = (prec as i64 + 2 + o.bits() as i64 - self.bits() as i64).max(0) as u64;
        let num = &self.mant << k;
        let (mut q, r) = num.div_mod_floor(&o.mant);
        if up && !r.is_zero() {
            q += 1;
        }
        Dyadic::new(q, self.exp - o.exp - k as i64).round(prec, up)
    }

    /// `√x` for `x ≥ 0`, rounded to `prec` bits in the given direction.
    fn sqrt(&self, prec: u32, up: bool) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return Self::zero();
        }
        let want = 2 * prec as i64 + 4;
        let mut k = (want - self.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = &self.mant << k as u64;
        let mut s = m.sqrt();
        if up && &s * &s != m {
            s += 1;
        }
        Dyadic::new(s, (self.exp - k) / 2).round(prec, up)
    }

    /// Nearest-ish float; for display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits();
        let s = b.saturating_sub(60);
        let top = (&self.mant >> s).to_f64().unwrap_or(0.0);
        let e = self.exp + s as i64;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Decimal string with `sig` significant digits, rounded up or down.
    pub fn to_decimal(&self, sig: usize, up: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let b = self.bits();
        let s = b.saturating_sub(60);
        let top = (self.mant.abs() >> s).to_f64().unwrap_or(1.0);
        let log2 = top.log2() + (self.exp + s as i64) as f64;
        let e10 = (log2 * std::f64::consts::LOG10_2).floor() as i64;
        let k = sig as i64 - 1 - e10;
        let ten = BigInt::from(10u32);
        let mut num = self.mant.abs();
        let mut den = BigInt::one();
        if k > 0 {
            num *= num_traits::pow(ten.clone(), k as usize);
        } else {
            den *= num_traits::pow(ten.clone(), (-k) as usize);
        }
        if self.exp > 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        let away = up != self.is_negative();
        let (mut n, r) = num.div_rem(&den);
        if away && !r.is_zero() {
            n += 1;
        }
        let digits = n.to_string();
        let exponent = digits.len() as i64 - 1 - k;
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{exponent}")
        } else {
            format!("{sign}{head}.{tail}e{exponent}")
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.sub(o).mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints of at most `prec` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl IntervalReal {
    fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        IntervalReal {
            lo: lo.round(prec, false),
            hi: hi.round(prec, true),
            prec,
        }
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidState("interval endpoints out of order".into()));
        }
        Ok(Self::new(lo, hi, prec))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Self) -> Self {
        Self::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
            self.prec_with(o),
        )
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        Self::new(d.clone(), d, prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::point(Dyadic::from_int(n), prec)
    }

    pub fn from_biguint(n: &BigUint, prec: u32) -> Self {
        Self::point(Dyadic::from_int(BigInt::from(n.clone())), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Self::point(Dyadic::from_f64(x), prec)
    }

    /// Enclosure of `a / b`.
    pub fn from_ratio(a: i64, b: i64, prec: u32) -> Result<Self> {
        Self::from_int(a, prec).div(&Self::from_int(b, prec))
    }

    /// Enclosure of a decimal literal such as `-1.25e-3`.
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Self> {
        let bad = || Error::Validation(format!("invalid decimal literal {s:?}"));
        let s = s.trim();
        let (body, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut m: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            m = -m;
        }
        let k = exp10 - frac.len() as i64;
        let ten = BigInt::from(10u32);
        let (num, den) = if k >= 0 {
            (m * num_traits::pow(ten, k as usize), BigInt::one())
        } else {
            (m, num_traits::pow(ten, (-k) as usize))
        };
        Self::point(Dyadic::from_int(num), prec).div(&Self::point(Dyadic::from_int(den), prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add(&self.hi).shift(-1).to_f64()
    }

    pub fn width_f64(&self) -> f64 {
        self.hi.sub(&self.lo).to_f64()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    /// `self < o` for every choice of points.
    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    /// `self ≤ o` for every choice of points.
    pub fn certainly_le(&self, o: &Self) -> bool {
        self.hi <= o.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Outward-rounded decimal endpoints.
    pub fn lo_string(&self) -> String {
        self.lo.to_decimal(DECIMAL_DIGITS, false)
    }

    pub fn hi_string(&self) -> String {
        self.hi.to_decimal(DECIMAL_DIGITS, true)
    }

    fn prec_with(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.lo.add(&o.lo), self.hi.add(&o.hi), self.prec_with(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.lo.sub(&o.hi), self.hi.sub(&o.lo), self.prec_with(o))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Self::new(lo, hi, self.prec_with(o))
    }

    pub fn scale_pow2(&self, k: i64) -> Self {
        Self::new(self.lo.shift(k), self.hi.shift(k), self.prec)
    }

    pub fn recip(&self) -> Result<Self> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return Err(Error::InvalidState(
                "interval division by a range containing zero".into(),
            ));
        }
        let one = Dyadic::from_int(1);
        let p = self.prec + 2;
        Ok(Self::new(
            one.div(&self.hi, p, false),
            one.div(&self.lo, p, true),
            self.prec,
        ))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.lo == o.hi && o.lo.mant.is_one() {
            return Ok(self.scale_pow2(o.lo.exp));
        }
        if !o.lo.is_positive() && !o.hi.is_negative() {
            return Err(Error::InvalidState(
                "interval division by a range containing zero".into(),
            ));
        }
        let p = self.prec_with(o) + 2;
        let q = [
            self.lo.div(&o.lo, p, false),
            self.lo.div(&o.hi, p, false),
            self.hi.div(&o.lo, p, false),
            self.hi.div(&o.hi, p, false),
        ];
        let r = [
            self.lo.div(&o.lo, p, true),
            self.lo.div(&o.hi, p, true),
            self.hi.div(&o.lo, p, true),
            self.hi.div(&o.hi, p, true),
        ];
        let lo = q.iter().min().expect("four quotients").clone();
        let hi = r.iter().max().expect("four quotients").clone();
        Ok(Self::new(lo, hi, self.prec_with(o)))
    }

    fn div_int(&self, n: u64) -> Self {
        self.div(&Self::from_int(n as i64, self.prec)).expect("nonzero divisor")
    }

    /// `|x|` upper bound as a dyadic.
    fn abs_hi(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    fn widen(&self, r: &Dyadic) -> Self {
        Self::new(self.lo.sub(r), self.hi.add(r), self.prec)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::from_int(1, self.prec);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.hi.is_negative() {
            return Err(Error::InvalidState("square root of a negative interval".into()));
        }
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt(self.prec, false)
        };
        Ok(Self::new(lo, self.hi.sqrt(self.prec, true), self.prec))
    }

    pub fn exp(&self) -> Result<Self> {
        self.monotone(exp_point)
    }

    pub fn expm1(&self) -> Result<Self> {
        self.monotone(expm1_point)
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidState("logarithm of a non-positive interval".into()));
        }
        self.monotone(ln_point)
    }

    pub fn log1p(&self) -> Result<Self> {
        if self.lo <= Dyadic::from_int(-1) {
            return Err(Error::InvalidState("log1p of an interval reaching -1".into()));
        }
        self.monotone(log1p_point)
    }

    fn monotone(&self, f: fn(&Dyadic, u32) -> Result<IntervalReal>) -> Result<Self> {
        let w = self.prec + GUARD_BITS;
        let lo = f(&self.lo, w)?.lo;
        let hi = f(&self.hi, w)?.hi;
        Ok(Self::new(lo, hi, self.prec))
    }
}

const DECIMAL_DIGITS: usize = 20;

fn ival(d: Dyadic, w: u32) -> IntervalReal {
    IntervalReal::point(d, w)
}

/// `exp(x)`: halve the argument below `2^-8`, sum the Taylor series with a
/// remainder term, then square back.
fn exp_point(x: &Dyadic, w: u32) -> Result<IntervalReal> {
    if x.is_zero() {
        return Ok(IntervalReal::from_int(1, w));
    }
    let mag = x.magnitude();
    if mag > 40 {
        return Err(Error::InvalidState("exp argument out of range".into()));
    }
    let k = (mag + 8).max(0);
    let ww = w + k as u32 + 16;
    let r = ival(x.shift(-k), ww);
    let mut term = IntervalReal::from_int(1, ww);
    let mut sum = term.clone();
    let tiny = Dyadic::new(BigInt::one(), -(ww as i64) - 4);
    for i in 1u64.. {
        term = term.mul(&r).div_int(i);
        sum = sum.add(&term);
        // |r| ≤ 2^-8: the tail after term i is at most |term_i|.
        if term.abs_hi() < tiny {
            sum = sum.widen(&term.abs_hi());
            break;
        }
    }
    for _ in 0..k {
        sum = sum.mul(&sum);
    }
    Ok(sum.with_precision(w))
}

/// `exp(x) - 1` without cancellation for small `x`.
fn expm1_point(x: &Dyadic, w: u32) -> Result<IntervalReal> {
    if x.magnitude() > -1 {
        return Ok(exp_point(x, w + 8)?
            .sub(&IntervalReal::from_int(1, w + 8))
            .with_precision(w));
    }
    if x.is_zero() {
        return Ok(IntervalReal::from_int(0, w));
    }
    // |x| < 1/2: tail after term i is at most |term_i|.
    let ww = w + 16;
    let xi = ival(x.clone(), ww);
    let mut term = xi.clone();
    let mut sum = xi.clone();
    let tiny = x.abs().shift(-(ww as i64) - 4);
    for i in 2u64.. {
        term = term.mul(&xi).div_int(i);
        sum = sum.add(&term);
        if term.abs_hi() < tiny {
            sum = sum.widen(&term.abs_hi());
            break;
        }
    }
    Ok(sum.with_precision(w))
}

/// `atanh(z) = Σ z^{2i+1}/(2i+1)` for an interval with `|z| ≤ 1/2`.
fn atanh_series(z: &IntervalReal, ww: u32) -> IntervalReal {
    let z2 = z.mul(z);
    let mut pow = z.clone();
    let mut sum = IntervalReal::from_int(0, ww);
    let scale = z.abs_hi();
    if scale.is_zero() {
        return sum;
    }
    let tiny = scale.shift(-(ww as i64) - 4);
    for i in 0u64.. {
        sum = sum.add(&pow.div_int(2 * i + 1));
        pow = pow.mul(&z2);
        // Tail ≤ |z|^{2i+3} / (1 - z²) ≤ 2 |pow|.
        if pow.abs_hi() < tiny {
            sum = sum.widen(&pow.abs_hi().shift(1));
            break;
        }
    }
    sum
}

/// `ln 2 = 2 atanh(1/3)`, memoized per working precision.
fn ln2(ww: u32) -> IntervalReal {
    static CACHE: OnceLock<Mutex<HashMap<u32, IntervalReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("ln2 cache").get(&ww) {
        return v.clone();
    }
    let third = IntervalReal::from_ratio(1, 3, ww).expect("nonzero");
    let v = atanh_series(&third, ww).scale_pow2(1);
    cache.lock().expect("ln2 cache").insert(ww, v.clone());
    v
}

/// `ln(x) = ln(y) + E ln 2` with `y ∈ [1/√2, √2)`, `ln y = 2 atanh((y-1)/(y+1))`.
fn ln_point(x: &Dyadic, w: u32) -> Result<IntervalReal> {
    if !x.is_positive() {
        return Err(Error::InvalidState("logarithm of a non-positive number".into()));
    }
    let b = x.bits() as i64;
    let mut e = x.exp + b;
    let mut y = Dyadic::new(x.mant.clone(), -b);
    // y ∈ [1/2, 1); move it to [1/√2, √2).
    if y.to_f64() < std::f64::consts::FRAC_1_SQRT_2 {
        y = y.shift(1);
        e -= 1;
    }
    let ebits = 64 - e.unsigned_abs().leading_zeros();
    let ww = w + 16 + ebits;
    let yi = ival(y, ww);
    let one = IntervalReal::from_int(1, ww);
    let z = yi.sub(&one).div(&yi.add(&one))?;
    let ln_y = atanh_series(&z, ww).scale_pow2(1);
    let out = ln_y.add(&ln2(ww).mul(&IntervalReal::from_int(e, ww)));
    Ok(out.with_precision(w))
}

/// `ln(1 + x)`, accurate for tiny `x` via `2 atanh(x / (2 + x))`.
fn log1p_point(x: &Dyadic, w: u32) -> Result<IntervalReal> {
    if x.magnitude() > -1 {
        return ln_point(&x.add(&Dyadic::from_int(1)), w);
    }
    let ww = w + 16;
    let xi = ival(x.clone(), ww);
    let z = xi.div(&xi.add(&IntervalReal::from_int(2, ww)))?;
    Ok(atanh_series(&z, ww).scale_pow2(1).with_precision(w))
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_string(), self.hi_string())
    }
}

impl Serialize for IntervalReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo_string(), self.hi_string()].serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> IntervalReal {
        IntervalReal::from_decimal_str(s, 512).unwrap()
    }

    /// Reference to 40 significant digits, widened by one unit in the last place.
    fn reference(s: &str) -> IntervalReal {
        let v = dec(s);
        v.widen(&Dyadic::from_f64(v.mid_f64().abs() * 1e-39))
    }

    fn overlaps(a: &IntervalReal, b: &IntervalReal) -> bool {
        a.lo <= b.hi && b.lo <= a.hi
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.0, 1.0, -2.5, 1e-300, std::f64::consts::PI, 5e-324] {
            let d = Dyadic::from_f64(x);
            assert_eq!(d.to_f64(), x);
        }
    }

    #[test]
    fn rounding_directions() {
        let third = IntervalReal::from_ratio(1, 3, 64).unwrap();
        assert!(third.lo < third.hi);
        let three = IntervalReal::from_int(3, 64);
        let prod = third.mul(&three);
        assert!(prod.contains(&Dyadic::from_int(1)));
        assert!(third.width_f64() < 1e-18);
    }

    #[test]
    fn elementary_functions_match_references() {
        let cases = [
            (
                "0.3",
                "-1.203972804325935992622746217761838502954",
                "1.349858807576003103983744313328007330378",
                "0.5477225575051661134569697828008021339527",
            ),
            (
                "1.7",
                "0.5306282510621703962315431631887623279871",
                "5.473947391727199760790862663009096700701",
                "1.303840481040529742916594311485836883306",
            ),
        ];
        for (x, ln, exp, sqrt) in cases {
            let xi = IntervalReal::from_decimal_str(x, 256).unwrap();
            assert!(overlaps(&xi.ln().unwrap(), &reference(ln)), "ln {x}");
            assert!(overlaps(&xi.exp().unwrap(), &reference(exp)), "exp {x}");
            assert!(overlaps(&xi.sqrt().unwrap(), &reference(sqrt)), "sqrt {x}");
            assert!(xi.ln().unwrap().width_f64() < 1e-60);
            assert!(xi.exp().unwrap().width_f64() < 1e-60);
        }
        let x = IntervalReal::from_decimal_str("123.456", 256).unwrap();
        assert!(overlaps(
            &x.ln().unwrap(),
            &reference("4.815884817283263883109232105166525577172")
        ));
        assert!(overlaps(
            &x.sqrt().unwrap(),
            &reference("11.11107555549866648462149404118219234119")
        ));
        let x = IntervalReal::from_decimal_str("1e-30", 256).unwrap();
        assert!(overlaps(
            &x.ln().unwrap(),
            &reference("-69.07755278982137052053974364053092622803")
        ));
    }

    #[test]
    fn higher_precision_refines() {
        for x in ["0.001", "0.7", "2", "9.5", "-3.25", "150"] {
            let a = IntervalReal::from_decimal_str(x, 128).unwrap();
            let b = IntervalReal::from_decimal_str(x, 1024).unwrap();
            assert!(overlaps(&a.exp().unwrap(), &b.exp().unwrap()), "exp {x}");
            assert!(overlaps(&a.expm1().unwrap(), &b.expm1().unwrap()), "expm1 {x}");
            if !x.starts_with('-') {
                assert!(overlaps(&a.ln().unwrap(), &b.ln().unwrap()), "ln {x}");
                assert!(overlaps(&a.sqrt().unwrap(), &b.sqrt().unwrap()), "sqrt {x}");
                assert!(overlaps(&a.log1p().unwrap(), &b.log1p().unwrap()), "log1p {x}");
            }
        }
    }

    #[test]
    fn tiny_arguments_keep_relative_accuracy() {
        let x = IntervalReal::from_decimal_str("1e-80", 256).unwrap();
        let e = x.expm1().unwrap();
        let l = x.log1p().unwrap();
        assert!((e.mid_f64() / 1e-80 - 1.0).abs() < 1e-15);
        assert!((l.mid_f64() / 1e-80 - 1.0).abs() < 1e-15);
        assert!(e.width_f64() < 1e-150);
    }

    #[test]
    fn agrees_with_floats() {
        for x in [0.1f64, 0.5, 1.0, 2.0, 10.0, 100.0] {
            let xi = IntervalReal::from_f64(x, 128);
            assert!((xi.ln().unwrap().mid_f64() - x.ln()).abs() <= 4.0 * f64::EPSILON * x.ln().abs().max(1.0));
            assert!((xi.exp().unwrap().mid_f64() / x.exp() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn big_integer_log() {
        let n = num_traits::pow(BigUint::from(10u32), 84);
        let l = IntervalReal::from_biguint(&n, 256).ln().unwrap();
        assert!((l.mid_f64() - 193.41714781149984).abs() < 1e-12);
        assert!(l.width_f64() < 1e-60);
    }

    #[test]
    fn decimal_output_is_outward() {
        let third = IntervalReal::from_ratio(1, 3, 256).unwrap();
        assert_eq!(third.lo_string(), "3.3333333333333333333e-1");
        assert_eq!(third.hi_string(), "3.3333333333333333334e-1");
        let neg = third.neg();
        assert_eq!(neg.lo_string(), "-3.3333333333333333334e-1");
        assert_eq!(IntervalReal::from_int(5, 64).lo_string(), "5e0");
    }

    #[test]
    fn comparisons() {
        let a = IntervalReal::from_ratio(1, 3, 64).unwrap();
        let b = IntervalReal::from_ratio(1, 2, 64).unwrap();
        assert!(a.certainly_lt(&b));
        assert!(!a.certainly_lt(&a));
        assert!(IntervalReal::from_int(0, 64).recip().is_err());
    }
}
