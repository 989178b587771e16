//! Certified real numbers as intervals with dyadic endpoints.
//!
//! Every operation rounds its lower endpoint toward `-inf` and its upper
//! endpoint toward `+inf` at the working precision, so an enclosure can only
//! grow. Exponents are unbounded, which matters when comparing quantities like
//! `(2pi)^(2m)/(2m)!` for `m` in the thousands.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const DEFAULT_PRECISION: u32 = 200;

/// `man * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub man: BigInt,
    pub exp: i64,
}

fn shift_floor(x: &BigInt, k: u64) -> BigInt {
    if x.sign() != Sign::Minus {
        x >> k
    } else {
        let one = BigInt::one() << k;
        -((-x + &one - BigInt::one()) >> k)
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { man: n.into(), exp: 0 }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    fn normalized(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    /// Position just above the leading bit: `|x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    /// Round to at most `prec` mantissa bits, toward `+inf` if `up`.
    pub fn round(&self, prec: u32, up: bool) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        let man = if up { -shift_floor(&-&self.man, k) } else { shift_floor(&self.man, k) };
        Dyadic { man, exp: self.exp + k as i64 }.normalized()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn mul_exact(&self, o: &Dyadic) -> Dyadic {
        Dyadic { man: &self.man * &o.man, exp: self.exp + o.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    fn add_exact(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Dyadic { man: a + b, exp: e }.normalized()
    }

    /// Directed rounding of `self + o` that avoids materialising huge
    /// mantissas when one summand is negligible.
    pub fn add_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        if self.is_zero() {
            return o.round(prec, up);
        }
        if o.is_zero() {
            return self.round(prec, up);
        }
        let (big, small) = if self.top() >= o.top() { (self, o) } else { (o, self) };
        let gap = prec as i64 + 3;
        if big.top() > small.top() + gap {
            let helps = (small.sign() == Sign::Plus) == up;
            let eps = if helps {
                let m = if small.sign() == Sign::Plus { BigInt::one() } else { -BigInt::one() };
                Dyadic { man: m, exp: big.top() - gap }
            } else {
                Dyadic::zero()
            };
            return big.add_exact(&eps).round(prec, up);
        }
        self.add_exact(o).round(prec, up)
    }

    /// Directed rounding of `self / o` with `o != 0`.
    pub fn div_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        assert!(!o.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let s = (prec as i64 + o.man.bits() as i64 - self.man.bits() as i64 + 2).max(0) as u64;
        let num = &self.man << s;
        let q = if up { num.div_ceil(&o.man) } else { num.div_floor(&o.man) };
        Dyadic { man: q, exp: self.exp - o.exp - s as i64 }.round(prec, up)
    }

    /// Directed rounding of the `k`-th root of a non-negative value.
    pub fn root_round(&self, k: u32, prec: u32, up: bool) -> Dyadic {
        assert!(self.sign() != Sign::Minus, "root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let kk = k as i64;
        // Shift so the exponent is divisible by k and the mantissa has
        // at least k*(prec+2) bits.
        let want = kk * (prec as i64 + 2);
        let mut t = (want - self.man.bits() as i64).max(0);
        t += (self.exp - t).rem_euclid(kk);
        let m = &self.man << t as u64;
        let e = (self.exp - t) / kk;
        let r = m.nth_root(k);
        let r = if up && r.pow(k) != m { r + 1 } else { r };
        Dyadic { man: r, exp: e }.normalized().round(prec, up)
    }

    /// Approximate base-2 logarithm of `|x|`.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.man.bits();
        let drop = bits.saturating_sub(60);
        let top = (self.man.abs() >> drop).to_f64().unwrap();
        top.log2() + (self.exp + drop as i64) as f64
    }

    /// Nearest `f64`, saturating to 0 or infinity outside the range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let drop = bits.saturating_sub(60);
        let top = (&self.man >> drop).to_f64().unwrap();
        let e = self.exp + drop as i64;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed rounding of an exact rational.
    pub fn from_rational(q: &BigRational, prec: u32, up: bool) -> Dyadic {
        Dyadic::from_int(q.numer().clone()).div_round(&Dyadic::from_int(q.denom().clone()), prec, up)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (s1, s2) = (self.sign(), o.sign());
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if s1 != s2 {
            return rank(s1).cmp(&rank(s2));
        }
        if s1 == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&o.top()) {
            Ordering::Equal => {
                let e = self.exp.min(o.exp);
                let a = self.man.abs() << (self.exp - e) as u64;
                let b = o.man.abs() << (o.exp - e) as u64;
                a.cmp(&b)
            }
            c => c,
        };
        if s1 == Sign::Plus {
            mag
        } else {
            mag.reverse()
        }
    }
}

/// A certified enclosure `[lo, hi]` of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Real {
    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Real {
        assert!(lo <= hi, "inverted interval");
        Real { lo: lo.round(prec, false), hi: hi.round(prec, true), prec }
    }

    pub fn exact(d: Dyadic, prec: u32) -> Real {
        Real::from_endpoints(d.clone(), d, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Real {
        Real::exact(Dyadic::from_int(n), prec)
    }

    pub fn zero(prec: u32) -> Real {
        Real::from_int(0, prec)
    }

    pub fn one(prec: u32) -> Real {
        Real::from_int(1, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Real {
        Real { lo: Dyadic::from_rational(q, prec, false), hi: Dyadic::from_rational(q, prec, true), prec }
    }

    pub fn from_ratio(n: impl Into<BigInt>, d: impl Into<BigInt>, prec: u32) -> Real {
        Real::from_rational(&BigRational::new(n.into(), d.into()), prec)
    }

    /// Enclosure of an `f64` value treated as exact.
    pub fn from_f64(x: f64, prec: u32) -> Real {
        let q = BigRational::from_float(x).expect("finite float");
        Real::from_rational(&q, prec)
    }

    /// `[-r, r]`.
    pub fn error_ball(r: &Dyadic, prec: u32) -> Real {
        let r = r.abs();
        Real::from_endpoints(r.neg(), r, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Real {
        Real::from_endpoints(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).mul_pow2(-1)
    }

    pub fn radius(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg()).mul_pow2(-1)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.hi.sign() == Sign::Minus
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains(&self, other: &Real) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True if every point of `self` is below every point of `o`.
    pub fn certainly_lt(&self, o: &Real) -> bool {
        self.hi < o.lo
    }

    pub fn overlaps(&self, o: &Real) -> bool {
        !(self.hi < o.lo || o.hi < self.lo)
    }

    pub fn hull(&self, o: &Real) -> Real {
        let p = self.prec.max(o.prec);
        Real::from_endpoints(self.lo.clone().min(o.lo.clone()), self.hi.clone().max(o.hi.clone()), p)
    }

    /// Width relative to magnitude, in bits of agreement; `None` if the
    /// interval straddles zero.
    pub fn rel_accuracy_bits(&self) -> Option<f64> {
        if self.contains_zero() {
            return None;
        }
        if self.is_exact() {
            return Some(f64::INFINITY);
        }
        let w = self.hi.add_exact(&self.lo.neg());
        Some(self.lo.abs().min(self.hi.abs()).log2_abs() - w.log2_abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn log2_mid(&self) -> f64 {
        self.midpoint().log2_abs()
    }

    pub fn abs(&self) -> Real {
        if self.lo.sign() != Sign::Minus {
            self.clone()
        } else if self.hi.sign() != Sign::Plus {
            -self
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            Real { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Real {
        Real { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn recip(&self) -> Real {
        Real::one(self.prec) / self
    }

    pub fn checked_div(&self, o: &Real) -> Option<Real> {
        if o.contains_zero() {
            return None;
        }
        let p = self.prec.max(o.prec);
        let cands_lo = [
            self.lo.div_round(&o.lo, p, false),
            self.lo.div_round(&o.hi, p, false),
            self.hi.div_round(&o.lo, p, false),
            self.hi.div_round(&o.hi, p, false),
        ];
        let cands_hi = [
            self.lo.div_round(&o.lo, p, true),
            self.lo.div_round(&o.hi, p, true),
            self.hi.div_round(&o.lo, p, true),
            self.hi.div_round(&o.hi, p, true),
        ];
        Some(Real {
            lo: cands_lo.into_iter().min().unwrap(),
            hi: cands_hi.into_iter().max().unwrap(),
            prec: p,
        })
    }

    pub fn pow(&self, n: u64) -> Real {
        if n == 0 {
            return Real::one(self.prec);
        }
        if self.lo.sign() != Sign::Minus {
            return Real { lo: pow_dir(&self.lo, n, self.prec, false), hi: pow_dir(&self.hi, n, self.prec, true), prec: self.prec };
        }
        if self.hi.sign() != Sign::Plus {
            let p = (-self).pow(n);
            return if n % 2 == 0 { p } else { -p };
        }
        // Straddles zero.
        let a = Real { lo: Dyadic::zero(), hi: self.lo.abs(), prec: self.prec }.pow(n);
        let b = Real { lo: Dyadic::zero(), hi: self.hi.clone(), prec: self.prec }.pow(n);
        if n % 2 == 0 {
            Real { lo: Dyadic::zero(), hi: a.hi.max(b.hi), prec: self.prec }
        } else {
            Real { lo: a.hi.neg(), hi: b.hi, prec: self.prec }
        }
    }

    pub fn powi(&self, n: i64) -> Real {
        if n >= 0 {
            self.pow(n as u64)
        } else {
            self.pow(n.unsigned_abs()).recip()
        }
    }

    /// `k`-th root of a non-negative enclosure.
    pub fn root(&self, k: u32) -> Real {
        assert!(k >= 1);
        assert!(self.hi.sign() != Sign::Minus, "root of a negative enclosure");
        let lo = if self.lo.sign() == Sign::Minus { Dyadic::zero() } else { self.lo.clone() };
        Real { lo: lo.root_round(k, self.prec, false), hi: self.hi.root_round(k, self.prec, true), prec: self.prec }
    }

    pub fn sqrt(&self) -> Real {
        self.root(2)
    }

    /// `self^(p/q)` for a positive enclosure.
    pub fn pow_ratio(&self, p: i64, q: u32) -> Real {
        self.root(q).powi(p)
    }

    pub fn max(&self, o: &Real) -> Real {
        let p = self.prec.max(o.prec);
        Real { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: p }
    }

    pub fn min(&self, o: &Real) -> Real {
        let p = self.prec.max(o.prec);
        Real { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()), prec: p }
    }

    /// Scientific notation of the midpoint with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        dyadic_to_sci(&self.midpoint(), digits)
    }
}

fn pow_dir(x: &Dyadic, mut n: u64, prec: u32, up: bool) -> Dyadic {
    // x >= 0, so rounding every step in one direction is monotone.
    let mut base = x.clone();
    let mut acc = Dyadic::from_int(1);
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul_exact(&base).round(prec, up);
        }
        n >>= 1;
        if n > 0 {
            base = base.mul_exact(&base).round(prec, up);
        }
    }
    acc
}

/// Formats a dyadic value as `d.ddddde±X`.
pub fn dyadic_to_sci(x: &Dyadic, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let l10 = x.log2_abs() * std::f64::consts::LOG10_2;
    let mut e10 = l10.floor() as i64;
    // Scale exactly by a power of ten to land in [1, 10).
    let scaled = |e10: i64| -> BigRational {
        let q = x.to_rational().abs();
        let t = BigInt::from(10).pow(e10.unsigned_abs() as u32);
        if e10 >= 0 {
            q / BigRational::from_integer(t)
        } else {
            q * BigRational::from_integer(t)
        }
    };
    let mut s = scaled(e10);
    let ten = BigRational::from_integer(BigInt::from(10));
    if s >= ten {
        e10 += 1;
        s = scaled(e10);
    } else if s < BigRational::one() {
        e10 -= 1;
        s = scaled(e10);
    }
    let p = BigInt::from(10).pow((digits - 1) as u32);
    let r = (s * BigRational::from_integer(p.clone())).round().to_integer();
    let (r, e10) = if r >= &p * 10 { (r / 10, e10 + 1) } else { (r, e10) };
    let ds = r.to_string();
    let sign = if x.sign() == Sign::Minus { "-" } else { "" };
    if ds.len() == 1 {
        format!("{sign}{ds}e{e10}")
    } else {
        format!("{sign}{}.{}e{e10}", &ds[..1], &ds[1..])
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {}", self.to_sci(17), dyadic_to_sci(&self.radius(), 3))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, o: &Real) -> Real {
        let p = self.prec.max(o.prec);
        Real { lo: self.lo.add_round(&o.lo, p, false), hi: self.hi.add_round(&o.hi, p, true), prec: p }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        self + &(-o)
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, o: &Real) -> Real {
        let p = self.prec.max(o.prec);
        if self.lo.sign() != Sign::Minus && o.lo.sign() != Sign::Minus {
            return Real {
                lo: self.lo.mul_exact(&o.lo).round(p, false),
                hi: self.hi.mul_exact(&o.hi).round(p, true),
                prec: p,
            };
        }
        let prods = [
            self.lo.mul_exact(&o.lo),
            self.lo.mul_exact(&o.hi),
            self.hi.mul_exact(&o.lo),
            self.hi.mul_exact(&o.hi),
        ];
        let lo = prods.iter().min().unwrap().round(p, false);
        let hi = prods.iter().max().unwrap().round(p, true);
        Real { lo, hi, prec: p }
    }
}

impl Div for &Real {
    type Output = Real;
    fn div(self, o: &Real) -> Real {
        self.checked_div(o).expect("division by an enclosure containing zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$m(o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn atan_inv(k: u64, prec: u32) -> Real {
    // sum_{j>=0} (-1)^j / ((2j+1) k^(2j+1)), alternating with decreasing terms.
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut pow = BigInt::from(k);
    let mut sum = Real::zero(prec);
    let mut j: u64 = 0;
    loop {
        let den = BigInt::from(2 * j + 1) * &pow;
        let term = Real::from_ratio(1, den.clone(), prec);
        sum = if j % 2 == 0 { &sum + &term } else { &sum - &term };
        if den.bits() as u32 > prec + 8 {
            let next = Real::from_ratio(1, BigInt::from(2 * j + 3) * &pow * &k2, prec);
            return &sum + &Real::error_ball(next.hi(), prec);
        }
        pow *= &k2;
        j += 1;
    }
}

static PI_CACHE: OnceLock<Mutex<HashMap<u32, Real>>> = OnceLock::new();

/// Enclosure of pi via Machin's formula with an explicit truncation bound.
pub fn pi(prec: u32) -> Real {
    let cache = PI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let wp = prec + 32;
    let v = (atan_inv(5, wp).mul_pow2(4) - atan_inv(239, wp).mul_pow2(2)).with_prec(prec);
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// Exact `n!`.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

static FACT_CACHE: OnceLock<Mutex<HashMap<u32, Vec<Real>>>> = OnceLock::new();

/// Enclosure of `n!` at `prec` bits, from a per-precision table extended on
/// demand.
pub fn factorial_real(n: u64, prec: u32) -> Real {
    let cache = FACT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    let table = guard.entry(prec).or_insert_with(|| vec![Real::one(prec)]);
    while (table.len() as u64) <= n {
        let k = table.len() as u64;
        let next = &table[table.len() - 1] * &Real::from_int(k, prec);
        table.push(next);
    }
    table[n as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_floor_negative() {
        assert_eq!(shift_floor(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(shift_floor(&BigInt::from(5), 1), BigInt::from(2));
    }

    #[test]
    fn factorial_table_matches_exact() {
        for n in [0u64, 1, 5, 30, 170] {
            let r = factorial_real(n, 120);
            assert!(r.contains_rational(&BigRational::from_integer(factorial(n))));
        }
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        let approx = BigRational::new(
            "314159265358979323846264338327950288419716939937510".parse().unwrap(),
            BigInt::from(10).pow(50),
        );
        let diff = &p - &Real::from_rational(&approx, 200);
        assert!(diff.abs().hi().log2_abs() < -160.0);
        assert!(p.rel_accuracy_bits().unwrap() > 190.0);
    }

    #[test]
    fn third_is_enclosed() {
        let t = Real::from_ratio(1, 3, 64);
        assert!(t.contains_rational(&BigRational::new(1.into(), 3.into())));
        assert!(!t.is_exact());
        let s = &(&t + &t) + &t;
        assert!(s.contains_rational(&BigRational::one()));
    }

    #[test]
    fn sqrt_two() {
        let r = Real::from_int(2, 128).sqrt();
        let sq = &r * &r;
        assert!(sq.contains_rational(&BigRational::from_integer(2.into())));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn negligible_addend_still_enclosed() {
        let one = Real::one(64);
        let tiny = Real::exact(Dyadic { man: BigInt::from(3), exp: -10_000 }, 64);
        let s = &one + &tiny;
        assert!(s.hi() > &Dyadic::from_int(1));
        assert_eq!(s.lo(), &Dyadic::from_int(1));
        let d = &one - &tiny;
        assert!(d.lo() < &Dyadic::from_int(1));
    }

    #[test]
    fn huge_powers() {
        let x = Real::from_ratio(8, 7, 200).pow(5000);
        assert!((x.log2_mid() - 5000.0 * (8.0f64 / 7.0).log2()).abs() < 1e-6);
    }

    #[test]
    fn sci_format() {
        assert_eq!(dyadic_to_sci(&Dyadic::from_int(12345), 3), "1.23e4");
        let r = Real::from_ratio(-1, 1000, 100);
        assert_eq!(r.to_sci(2), "-1.0e-3");
    }
}

impl serde::Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Real", 4)?;
        st.serialize_field("mid", &dyadic_to_sci(&self.midpoint(), 20))?;
        st.serialize_field("rad", &dyadic_to_sci(&self.radius(), 3))?;
        st.serialize_field("lo", &dyadic_to_sci(&self.lo, 20))?;
        st.serialize_field("hi", &dyadic_to_sci(&self.hi, 20))?;
        st.end()
    }
}
