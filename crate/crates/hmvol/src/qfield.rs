//! Imaginary quadratic fields `Q(sqrt(-d))` and their rings of integers.
//!
//! Elements of `O_F` are stored as coordinate pairs `(a, b)` meaning `a + b*w`,
//! where `w = (1 + sqrt(-d))/2` when `d = 3 mod 4` and `w = sqrt(-d)` otherwise.
//! Arithmetic goes through the field value so the basis convention is never
//! ambiguous.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which integral basis element `w` the field uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaConvention {
    /// `w = (1 + sqrt(-d))/2`, used when `d = 3 mod 4`.
    Half,
    /// `w = sqrt(-d)`.
    Whole,
}

/// Behaviour of a rational prime in `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitClass {
    Split,
    Inert,
    Ramified,
}

/// Coarse classification used by the volume bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldClass {
    Generic,
    /// `Q(sqrt(-1))`
    Gauss,
    /// `Q(sqrt(-3))`
    Eisenstein,
}

impl FieldClass {
    pub const ALL: [FieldClass; 3] = [FieldClass::Generic, FieldClass::Gauss, FieldClass::Eisenstein];

    pub fn name(self) -> &'static str {
        match self {
            FieldClass::Generic => "generic",
            FieldClass::Gauss => "gauss",
            FieldClass::Eisenstein => "eisenstein",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(FieldClass::Generic),
            "gauss" | "Q(i)" => Ok(FieldClass::Gauss),
            "eisenstein" | "Q(sqrt(-3))" => Ok(FieldClass::Eisenstein),
            _ => Err(Error::Input(format!("unknown field class `{s}`"))),
        }
    }
}

/// Discriminants `D` with class number one.
pub const PID_DISCRIMINANTS: [u64; 9] = [3, 4, 7, 8, 11, 19, 43, 67, 163];

/// An element `a + b*w` of `O_F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadInt {
    #[serde(with = "crate::bigser::int")]
    pub a: BigInt,
    #[serde(with = "crate::bigser::int")]
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt { a: a.into(), b: b.into() }
    }

    pub fn int(a: impl Into<BigInt>) -> Self {
        QuadInt { a: a.into(), b: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn neg(&self) -> Self {
        QuadInt { a: -&self.a, b: -&self.b }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt { a: &self.a * k, b: &self.b * k }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

/// `F = Q(sqrt(-d))` with `d` squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImaginaryQuadraticField {
    pub d: u64,
    /// The field discriminant is `-disc`.
    pub disc: u64,
    pub omega: OmegaConvention,
    pub unit_count: u32,
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Builds `Q(sqrt(-d))`.
pub fn make_field(d: i64) -> Result<ImaginaryQuadraticField> {
    if d < 1 {
        return Err(Error::Input(format!("d must be a positive squarefree integer, got {d}")));
    }
    let d = d as u64;
    if !is_squarefree(d) {
        return Err(Error::Input(format!("d = {d} is not squarefree")));
    }
    let (disc, omega) = if d % 4 == 3 { (d, OmegaConvention::Half) } else { (4 * d, OmegaConvention::Whole) };
    let unit_count = match d {
        1 => 4,
        3 => 6,
        _ => 2,
    };
    Ok(ImaginaryQuadraticField { d, disc, omega, unit_count })
}

impl ImaginaryQuadraticField {
    pub fn class(&self) -> FieldClass {
        match self.d {
            1 => FieldClass::Gauss,
            3 => FieldClass::Eisenstein,
            _ => FieldClass::Generic,
        }
    }

    pub fn is_pid(&self) -> bool {
        PID_DISCRIMINANTS.contains(&self.disc)
    }

    /// Trace of `w`.
    pub fn omega_trace(&self) -> BigInt {
        match self.omega {
            OmegaConvention::Half => BigInt::one(),
            OmegaConvention::Whole => BigInt::zero(),
        }
    }

    /// Norm of `w`.
    pub fn omega_norm(&self) -> BigInt {
        match self.omega {
            OmegaConvention::Half => BigInt::from((1 + self.d) / 4),
            OmegaConvention::Whole => BigInt::from(self.d),
        }
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(0, 1)
    }

    pub fn add(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        QuadInt { a: &x.a + &y.a, b: &x.b + &y.b }
    }

    pub fn sub(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        QuadInt { a: &x.a - &y.a, b: &x.b - &y.b }
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        // w^2 = t*w - nrm
        let t = self.omega_trace();
        let nrm = self.omega_norm();
        let bb = &x.b * &y.b;
        QuadInt { a: &x.a * &y.a - &bb * &nrm, b: &x.a * &y.b + &x.b * &y.a + &bb * &t }
    }

    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        QuadInt { a: &x.a + &x.b * self.omega_trace(), b: -&x.b }
    }

    pub fn norm(&self, x: &QuadInt) -> BigInt {
        &x.a * &x.a + &x.a * &x.b * self.omega_trace() + &x.b * &x.b * self.omega_norm()
    }

    /// Twice the real part, `x + conj(x)`, an integer.
    pub fn trace(&self, x: &QuadInt) -> BigInt {
        BigInt::from(2) * &x.a + &x.b * self.omega_trace()
    }

    /// Exact quotient `x / y` if it lies in `O_F`.
    pub fn div_exact(&self, x: &QuadInt, y: &QuadInt) -> Option<QuadInt> {
        if y.is_zero() {
            return None;
        }
        let n = self.norm(y);
        let num = self.mul(x, &self.conj(y));
        if num.a.is_multiple_of(&n) && num.b.is_multiple_of(&n) {
            Some(QuadInt { a: num.a / &n, b: num.b / &n })
        } else {
            None
        }
    }

    pub fn divides(&self, y: &QuadInt, x: &QuadInt) -> bool {
        if y.is_zero() {
            return x.is_zero();
        }
        self.div_exact(x, y).is_some()
    }

    pub fn units(&self) -> Vec<QuadInt> {
        match self.d {
            1 => vec![QuadInt::int(1), QuadInt::int(-1), QuadInt::new(0, 1), QuadInt::new(0, -1)],
            // w^2 = w - 1, so the sixth roots of unity are +-1, +-w, +-(w-1).
            3 => vec![
                QuadInt::int(1),
                QuadInt::int(-1),
                QuadInt::new(0, 1),
                QuadInt::new(0, -1),
                QuadInt::new(-1, 1),
                QuadInt::new(1, -1),
            ],
            _ => vec![QuadInt::int(1), QuadInt::int(-1)],
        }
    }

    pub fn is_unit(&self, x: &QuadInt) -> bool {
        self.norm(x).is_one()
    }

    /// True when `x` and `y` generate the same ideal.
    pub fn associated(&self, x: &QuadInt, y: &QuadInt) -> bool {
        if x.is_zero() || y.is_zero() {
            return x.is_zero() && y.is_zero();
        }
        self.norm(x) == self.norm(y) && self.divides(y, x)
    }

    /// The associate of `x` with positive leading coordinate that is
    /// lexicographically smallest.
    pub fn canonical_associate(&self, x: &QuadInt) -> QuadInt {
        if x.is_zero() {
            return x.clone();
        }
        self.units()
            .iter()
            .map(|u| self.mul(u, x))
            .filter(|y| y.a.is_positive() || (y.a.is_zero() && y.b.is_positive()))
            .min()
            .expect("some associate is positive")
    }

    /// Generator of the ideal spanned by `xs`, as a canonical associate.
    /// Requires class number one; otherwise the ideal may not be principal.
    pub fn gcd(&self, xs: &[QuadInt]) -> Result<QuadInt> {
        let [u, v] = match ideal_basis(self, xs) {
            None => return Ok(QuadInt::zero()),
            Some(basis) => basis,
        };
        let g = shortest_vector(self, u, v);
        let target = ideal_index(self, xs);
        if self.norm(&g) != target {
            return Err(Error::NotPrincipal(format!(
                "ideal of norm {target} in Q(sqrt(-{})) has no generator",
                self.d
            )));
        }
        Ok(self.canonical_associate(&g))
    }

    pub fn gcd2(&self, x: &QuadInt, y: &QuadInt) -> Result<QuadInt> {
        self.gcd(&[x.clone(), y.clone()])
    }

    /// Decomposition type of the rational prime `p`.
    pub fn splitting_type(&self, p: u64) -> Result<SplitClass> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        if self.disc % p == 0 {
            return Ok(SplitClass::Ramified);
        }
        let k = kronecker(-(self.disc as i128), p as i128);
        Ok(if k == 1 { SplitClass::Split } else { SplitClass::Inert })
    }

    /// Value of the character of `F`, i.e. `(-D | k)`.
    pub fn chi(&self, k: u64) -> i32 {
        kronecker(-(self.disc as i128), k as i128)
    }

    /// For `D = 7 mod 8` the two primes above 2 are `(2, w)` and `(2, w - 1)`;
    /// returns 1 or 2 for an ideal of norm 2 generated by `x`.
    pub fn prime_above_two_index(&self, x: &QuadInt) -> Option<u8> {
        if self.norm(x) != BigInt::from(2) {
            return None;
        }
        // x lies in (2, w) iff x = a + b*w with a even.
        Some(if x.a.is_even() { 1 } else { 2 })
    }
}

/// Hermite basis of the Z-module spanned by `xs` and `w*xs`.
fn ideal_basis(f: &ImaginaryQuadraticField, xs: &[QuadInt]) -> Option<[QuadInt; 2]> {
    let w = f.omega();
    let mut rows: Vec<(BigInt, BigInt)> = Vec::new();
    for x in xs {
        rows.push((x.a.clone(), x.b.clone()));
        let y = f.mul(x, &w);
        rows.push((y.a, y.b));
    }
    let (b1, b2) = hnf2(rows)?;
    Some([QuadInt { a: b1.0, b: b1.1 }, QuadInt { a: b2.0, b: b2.1 }])
}

/// Index of the ideal spanned by `xs` in `O_F`, which equals its norm.
fn ideal_index(f: &ImaginaryQuadraticField, xs: &[QuadInt]) -> BigInt {
    match ideal_basis(f, xs) {
        None => BigInt::zero(),
        Some([u, v]) => (&u.a * &v.b - &u.b * &v.a).abs(),
    }
}

/// Row-style Hermite reduction of a rank-2 sublattice of Z^2.
fn hnf2(rows: Vec<(BigInt, BigInt)>) -> Option<((BigInt, BigInt), (BigInt, BigInt))> {
    // Eliminate the second coordinate to a single row, gcd-style.
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut rest_first = BigInt::zero();
    for r in rows {
        match pivot.take() {
            None => {
                if r.1.is_zero() {
                    rest_first = rest_first.gcd(&r.0);
                } else {
                    pivot = Some(r);
                }
            }
            Some(p) => {
                if r.1.is_zero() {
                    rest_first = rest_first.gcd(&r.0);
                    pivot = Some(p);
                    continue;
                }
                let e = p.1.extended_gcd(&r.1);
                let g = e.gcd.clone();
                let new_p = (&e.x * &p.0 + &e.y * &r.0, g.clone());
                // Combination killing the second coordinate.
                let k0 = (&r.1 / &g) * &p.0 - (&p.1 / &g) * &r.0;
                rest_first = rest_first.gcd(&k0);
                pivot = Some(new_p);
            }
        }
    }
    let p = pivot?;
    if rest_first.is_zero() {
        return None;
    }
    Some(((rest_first, BigInt::zero()), p))
}

/// Gauss reduction with respect to the norm form; returns a shortest
/// nonzero vector of the lattice spanned by `u` and `v`.
fn shortest_vector(f: &ImaginaryQuadraticField, mut u: QuadInt, mut v: QuadInt) -> QuadInt {
    // B(x, y) = trace(x conj y)/2 scaled by 2 to stay integral.
    let bil = |x: &QuadInt, y: &QuadInt| f.trace(&f.mul(x, &f.conj(y)));
    loop {
        if f.norm(&u) > f.norm(&v) {
            std::mem::swap(&mut u, &mut v);
        }
        let nu = BigInt::from(2) * f.norm(&u);
        let b = bil(&u, &v);
        // round(b / nu)
        let k = (BigInt::from(2) * &b + &nu).div_floor(&(BigInt::from(2) * &nu));
        if k.is_zero() {
            return u;
        }
        v = f.sub(&v, &u.scale(&k));
        if f.norm(&v) >= f.norm(&u) {
            return u;
        }
    }
}

/// Kronecker symbol `(a | n)` for `n >= 0`.
pub fn kronecker(a: i128, n: i128) -> i32 {
    assert!(n >= 0, "kronecker symbol needs n >= 0");
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut a = a;
    let mut result = 1i32;
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n >>= v;
    }
    // Now n is odd: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `|n|` as `(p, e)` pairs, by trial division with a
/// primality check on the cofactor.
pub fn factorize(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return Err(Error::Input("cannot factor zero".into()));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= 1_000_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        match m.to_u64() {
            Some(r) if is_prime(r) => out.push((r, 1)),
            _ => return Err(Error::Unsupported(format!("cofactor {m} is too large to factor"))),
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        let f = make_field(1).unwrap();
        assert_eq!((f.disc, f.omega, f.unit_count), (4, OmegaConvention::Whole, 4));
        let f = make_field(3).unwrap();
        assert_eq!((f.disc, f.omega, f.unit_count), (3, OmegaConvention::Half, 6));
        let f = make_field(11).unwrap();
        assert_eq!((f.disc, f.omega, f.unit_count), (11, OmegaConvention::Half, 2));
        assert!(make_field(12).is_err());
        assert!(make_field(0).is_err());
    }

    #[test]
    fn gaussian_arith() {
        let f = make_field(1).unwrap();
        let x = QuadInt::new(1, 1);
        let y = QuadInt::new(1, -1);
        assert_eq!(f.mul(&x, &y), QuadInt::int(2));
        let e = make_field(3).unwrap();
        assert_eq!(e.norm(&e.omega()), BigInt::one());
        let z = QuadInt::new(2, 3);
        assert_eq!(e.conj(&e.conj(&z)), z);
    }

    #[test]
    fn units_have_norm_one() {
        for d in [1, 3, 7] {
            let f = make_field(d).unwrap();
            assert_eq!(f.units().len() as u32, f.unit_count);
            assert!(f.units().iter().all(|u| f.is_unit(u)));
        }
    }

    #[test]
    fn splitting() {
        let f = make_field(1).unwrap();
        assert_eq!(f.splitting_type(2).unwrap(), SplitClass::Ramified);
        assert_eq!(f.splitting_type(5).unwrap(), SplitClass::Split);
        assert_eq!(f.splitting_type(3).unwrap(), SplitClass::Inert);
        let g = make_field(11).unwrap();
        assert_eq!(g.splitting_type(2).unwrap(), SplitClass::Inert);
        assert_eq!(g.splitting_type(5).unwrap(), SplitClass::Split);
        let h = make_field(7).unwrap();
        assert_eq!(h.splitting_type(2).unwrap(), SplitClass::Split);
    }

    #[test]
    fn gcd_in_pid_fields() {
        let f = make_field(1).unwrap();
        let g = f.gcd(&[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        assert!(f.associated(&g, &QuadInt::new(1, 1)));
        let h = make_field(19).unwrap();
        let g = h.gcd(&[QuadInt::int(6), QuadInt::int(4)]).unwrap();
        assert_eq!(g, QuadInt::int(2));
        let g = h.gcd(&[QuadInt::int(5), QuadInt::new(0, 1)]).unwrap();
        assert_eq!(h.norm(&g), BigInt::from(5));
    }

    #[test]
    fn non_principal_ideal_is_reported() {
        // Q(sqrt(-5)) has class number 2 and (2, 1 + sqrt(-5)) is not principal.
        let f = make_field(5).unwrap();
        assert!(f.gcd(&[QuadInt::int(2), QuadInt::new(1, 1)]).is_err());
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-11, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn factorization() {
        let v = factorize(&BigInt::from(-360)).unwrap();
        assert_eq!(v, vec![(2, 3), (3, 2), (5, 1)]);
    }
}
