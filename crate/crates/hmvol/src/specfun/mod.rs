//! Bernoulli numbers, zeta and Dirichlet L-values, and finite group orders.

pub mod groups;
pub mod real;

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::qfield::ImaginaryQuadraticField;
pub use groups::{group_order, GroupFamily, GroupOrder};
pub use real::{factorial, factorial_real, pi, Dyadic, Real, DEFAULT_PRECISION};

static BERNOULLI: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let prev = row[(k - 1) as usize].clone();
        row.push(prev * BigInt::from(n - k + 1) / BigInt::from(k));
    }
    row
}

/// Exact Bernoulli number `B_k` (with `B_1 = -1/2`), memoized.
pub fn bernoulli(k: u64) -> BigRational {
    if k > 1 && k % 2 == 1 {
        return BigRational::zero();
    }
    let cache = BERNOULLI.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while (b.len() as u64) <= k {
        let m = b.len() as u64;
        let row = binomial_row(m + 1);
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                s += BigRational::from_integer(row[j].clone()) * bj;
            }
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b[k as usize].clone()
}

/// `coefficient * pi^pi_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactPiPower {
    #[serde(with = "crate::bigser::rat")]
    pub coefficient: BigRational,
    pub pi_exponent: u32,
}

impl ExactPiPower {
    pub fn eval(&self, prec: u32) -> Real {
        Real::from_rational(&self.coefficient, prec + 16) * pi(prec + 16).pow(self.pi_exponent as u64)
    }
}

impl std::fmt::Display for ExactPiPower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})*pi^{}", self.coefficient, self.pi_exponent)
    }
}

/// `zeta(2m) = (2pi)^(2m) |B_2m| / (2 (2m)!)`, exactly.
pub fn zeta_even_exact(m: u64) -> ExactPiPower {
    assert!(m >= 1, "zeta_even needs m >= 1");
    let b = bernoulli(2 * m).abs();
    let two_pow = BigInt::one() << (2 * m);
    let coefficient = b * BigRational::from_integer(two_pow) / BigRational::from_integer(BigInt::from(2) * factorial(2 * m));
    ExactPiPower { coefficient, pi_exponent: (2 * m) as u32 }
}

/// Both forms of `zeta(2m)`.
pub fn zeta_even(m: u64, prec: u32) -> (ExactPiPower, Real) {
    let e = zeta_even_exact(m);
    let v = e.eval(prec).with_prec(prec);
    (e, v)
}

/// Rising factorial `s (s+1) ... (s+r-1)`.
fn rising(s: u64, r: u64) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(s + i))
}

/// Hurwitz zeta `zeta(s, a)` for integer `s >= 2` and rational `a > 0`,
/// either by direct summation (large `s`) or Euler-Maclaurin with a
/// rigorous remainder bound.
pub fn hurwitz_zeta(s: u64, a: &BigRational, prec: u32) -> Real {
    assert!(s >= 2, "hurwitz_zeta needs s >= 2");
    assert!(a.is_positive());
    let wp = prec + 20;
    let target = -(prec as f64) - 10.0;
    // Direct summation when the tail is already negligible.
    let direct_n = {
        let need = (-target) / (s as f64 - 1.0);
        let n = need.exp2().ceil();
        if n < 4000.0 {
            Some((n as u64).max(2))
        } else {
            None
        }
    };
    let pw = |k: u64| -> Real {
        let x = Real::from_rational(&(a + BigRational::from_integer(BigInt::from(k))), wp);
        x.pow(s).recip()
    };
    if let Some(n) = direct_n {
        let mut sum = Real::zero(wp);
        for k in 0..n {
            sum = &sum + &pw(k);
        }
        // sum_{k>=n} (a+k)^-s <= (a+n)^-s + (a+n)^(1-s)/(s-1)
        let an = Real::from_rational(&(a + BigRational::from_integer(BigInt::from(n))), wp);
        let tail = &an.pow(s).recip() + &(an.pow(s - 1).recip() / Real::from_int(s - 1, wp));
        let tail = Real::from_endpoints(Dyadic::zero(), tail.hi().clone(), wp);
        return (&sum + &tail).with_prec(prec);
    }
    let n = (prec as u64 / 3).max(32);
    let mut sum = Real::zero(wp);
    for k in 0..n {
        sum = &sum + &pw(k);
    }
    let an = Real::from_rational(&(a + BigRational::from_integer(BigInt::from(n))), wp);
    let an_inv = an.recip();
    let an_pow = an.pow(s).recip();
    sum = &sum + &(&an_pow * &an) / Real::from_int(s - 1, wp);
    sum = &sum + &an_pow.mul_pow2(-1);
    let an_inv2 = an_inv.pow(2);
    // term_j = B_2j/(2j)! * (s)_{2j-1} * (a+n)^(-s-2j+1)
    let mut pw_j = &an_pow * &an_inv;
    let mut j = 1u64;
    let mut prev = f64::INFINITY;
    loop {
        let coef = bernoulli(2 * j) * BigRational::from_integer(rising(s, 2 * j - 1))
            / BigRational::from_integer(factorial(2 * j));
        sum = &sum + &(Real::from_rational(&coef, wp) * &pw_j);
        // |R_j| <= 4 (s)_{2j} / (2pi)^{2j} * (a+n)^(1-s-2j) / (s+2j-1), with 2pi > 6
        let bound = Real::from_rational(
            &BigRational::new(BigInt::from(4) * rising(s, 2 * j), BigInt::from(6).pow((2 * j) as u32) * BigInt::from(s + 2 * j - 1)),
            64,
        ) * (&pw_j * &an_inv);
        let lb = bound.log2_mid();
        // The remainder bound holds after any number of terms; stop once it
        // is small enough or the asymptotic series starts to diverge.
        if lb < target + sum.log2_mid().min(0.0) || lb > prev {
            return (&sum + &Real::error_ball(bound.hi(), wp)).with_prec(prec);
        }
        prev = lb;
        pw_j = &pw_j * &an_inv2;
        j += 1;
    }
}

/// Riemann zeta at an integer `s >= 2`.
pub fn zeta(s: u64, prec: u32) -> Real {
    if s % 2 == 0 && s <= 120 {
        zeta_even(s / 2, prec).1
    } else {
        hurwitz_zeta(s, &BigRational::one(), prec)
    }
}

/// `L(s, chi_{-D})` by its defining series, truncated after `n` terms with
/// the partial-summation tail bound `D * (n+1)^(-s)`.
pub fn dirichlet_l_series(f: &ImaginaryQuadraticField, s: u64, n: u64, prec: u32) -> Real {
    let wp = prec + 16;
    let mut sum = Real::zero(wp);
    for k in 1..=n {
        let c = f.chi(k);
        if c == 0 {
            continue;
        }
        let t = Real::from_int(k, wp).pow(s).recip();
        sum = if c > 0 { &sum + &t } else { &sum - &t };
    }
    let tail = Real::from_int(f.disc, wp) / Real::from_int(n + 1, wp).pow(s);
    (&sum + &Real::error_ball(tail.hi(), wp)).with_prec(prec)
}

/// `L(s, chi_{-D})` for integer `s >= 2`.
///
/// Uses the series when its tail bound meets the precision target with a
/// modest number of terms, otherwise the Hurwitz decomposition
/// `L = D^-s sum_r chi(r) zeta(s, r/D)`.
pub fn dirichlet_l(f: &ImaginaryQuadraticField, s: u64, prec: u32) -> Real {
    assert!(s >= 2, "dirichlet_l needs s >= 2");
    let dl = (f.disc as f64).log2();
    let need = ((prec as f64 + 12.0 + dl) / s as f64).exp2();
    if need < 20_000.0 {
        return dirichlet_l_series(f, s, need.ceil() as u64, prec);
    }
    let d = f.disc;
    let wp = prec + 16 + (s as f64 * dl) as u32;
    let mut sum = Real::zero(wp);
    for r in 1..d {
        let c = f.chi(r);
        if c == 0 {
            continue;
        }
        let z = hurwitz_zeta(s, &BigRational::new(BigInt::from(r), BigInt::from(d)), wp);
        sum = if c > 0 { &sum + &z } else { &sum - &z };
    }
    (sum / Real::from_int(d, wp).pow(s)).with_prec(prec)
}

/// `zeta(2s)/zeta(s)`, a lower bound for every quadratic `L(s, chi)`.
pub fn l_lower_bound(s: u64, prec: u32) -> Real {
    let wp = prec + 8;
    (zeta(2 * s, wp) / zeta(s, wp)).with_prec(prec)
}
