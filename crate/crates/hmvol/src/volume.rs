//! Hirzebruch–Mumford volumes through Prasad's formula, local factors and
//! their ratios, and the explicit bound functions for `V(L,F)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hlattice::HermitianLattice;
use crate::plocal::{check_star, elementary_divisor_profile, jordan_profile, JordanProfile, Verdict};
use crate::qfield::{FieldClass, ImaginaryQuadraticField, SplitClass};
use crate::specfun::groups::{gl_order, o_even_order, sp_order, u_order};
use crate::specfun::{dirichlet_l, factorial_real, l_lower_bound, pi, zeta, Real};

/// Cho's division of ramified `F_2/Q_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChoCase {
    I,
    II,
    NotApplicable,
}

/// Case I when `F_2 = Q_2(sqrt(u))` for a unit `u`, Case II when `F_2 = Q_2(sqrt(2u))`.
pub fn cho_case(f: &ImaginaryQuadraticField) -> ChoCase {
    match f.d % 4 {
        1 => ChoCase::I,
        2 => ChoCase::II,
        _ => ChoCase::NotApplicable,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactor {
    pub prime: u64,
    pub split_class: SplitClass,
    pub value: Real,
    /// Present when the factor is a known rational number.
    #[serde(with = "crate::bigser::opt_rat")]
    pub exact: Option<BigRational>,
}

/// `q^(half_exp/2) * coeff` with `coeff > 0`.
#[derive(Clone, Debug)]
struct QPow {
    half_exp: i64,
    coeff: BigRational,
}

fn rat_pow(q: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), e.unsigned_abs() as usize)
    }
}

impl QPow {
    fn mul(&self, o: &QPow) -> QPow {
        QPow { half_exp: self.half_exp + o.half_exp, coeff: &self.coeff * &o.coeff }
    }

    fn cmp(&self, o: &QPow, q: u64) -> Ordering {
        let a = rat_pow(q, self.half_exp) * &self.coeff * &self.coeff;
        let b = rat_pow(q, o.half_exp) * &o.coeff * &o.coeff;
        a.cmp(&b)
    }

    fn exact(&self, q: u64) -> Option<BigRational> {
        (self.half_exp % 2 == 0).then(|| rat_pow(q, self.half_exp / 2) * &self.coeff)
    }

    fn to_real(&self, q: u64, prec: u32) -> Real {
        let wp = prec + 16;
        let c = Real::from_rational(&self.coeff, wp);
        let r = if self.half_exp % 2 == 0 {
            c * Real::from_rational(&rat_pow(q, self.half_exp / 2), wp)
        } else {
            c * Real::from_int(q, wp).sqrt().powi(self.half_exp)
        };
        r.with_prec(prec)
    }
}

/// A reductive group appearing in a maximal reductive quotient, as
/// `(order, dimension)` over the residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Grp {
    /// `Sp_n`, `n` even.
    Sp(u64),
    /// `O_n`; `Some(plus)` fixes the form type when `n` is even.
    O(u64, Option<bool>),
    SO(u64, Option<bool>),
    U(u64),
    GL(u64),
}

impl Grp {
    fn dim(self) -> u64 {
        match self {
            Grp::Sp(n) => (n / 2) * (n + 1),
            Grp::O(n, _) | Grp::SO(n, _) => n * n.saturating_sub(1) / 2,
            Grp::U(n) | Grp::GL(n) => n * n,
        }
    }

    fn order(self, q: u64) -> BigInt {
        match self {
            Grp::Sp(n) => sp_order(n / 2, q),
            Grp::U(n) => u_order(n, q),
            Grp::GL(n) => gl_order(n, q),
            Grp::O(0, _) | Grp::SO(0, _) => BigInt::one(),
            Grp::O(n, plus) if n % 2 == 0 => o_even_order(n / 2, q, plus.unwrap_or(true)),
            Grp::SO(n, plus) if n % 2 == 0 => o_even_order(n / 2, q, plus.unwrap_or(true)) / 2,
            // In characteristic 2 the odd orthogonal group is isomorphic to Sp_{n-1}.
            Grp::O(n, _) if q % 2 == 0 => sp_order(n / 2, q),
            Grp::O(n, _) => BigInt::from(2) * sp_order(n / 2, q),
            Grp::SO(n, _) => sp_order(n / 2, q),
        }
    }

    /// Expands an unspecified even-orthogonal form type into both choices.
    fn expand(self) -> Vec<Grp> {
        match self {
            Grp::O(n, None) if n % 2 == 0 && n > 0 => vec![Grp::O(n, Some(true)), Grp::O(n, Some(false))],
            Grp::SO(n, None) if n % 2 == 0 && n > 0 => vec![Grp::SO(n, Some(true)), Grp::SO(n, Some(false))],
            g => vec![g],
        }
    }

    /// `q^(dim/2) / |G|`, the per-factor contribution to a local factor.
    fn weight(self, q: u64) -> QPow {
        QPow { half_exp: self.dim() as i64, coeff: BigRational::new(BigInt::one(), self.order(q)) }
    }
}

/// `{x}`: `x` rounded down to even.
fn even_floor(x: u64) -> u64 {
    x - x % 2
}

fn sp_even(x: i64) -> Option<Grp> {
    (x >= 0).then(|| Grp::Sp(even_floor(x as u64)))
}

/// Menu of groups for one block at a ramified prime. Odd `p` follows the
/// assignment the ratio tables are computed with (even scale `Sp`, odd scale
/// orthogonal); `p = 2` follows Cho's Case I/II lists.
fn ramified_menu(scale: u32, rank: u64, case: ChoCase) -> Vec<Grp> {
    let r = rank as i64;
    let even = scale % 2 == 0;
    let base: Vec<Grp> = match case {
        ChoCase::NotApplicable => {
            if even {
                vec![Grp::Sp(even_floor(rank))]
            } else {
                vec![Grp::O(rank, None)]
            }
        }
        ChoCase::I => {
            if even {
                if rank % 2 == 0 {
                    [sp_even(r), sp_even(r - 2)].into_iter().flatten().collect()
                } else {
                    vec![Grp::Sp(rank - 1)]
                }
            } else {
                vec![Grp::O(rank, None), Grp::SO(rank + 1, None)]
            }
        }
        ChoCase::II => {
            if even {
                let mut v = vec![Grp::O(rank, None), Grp::SO(rank + 1, None)];
                if rank % 2 == 1 {
                    v.push(Grp::SO(rank, None));
                } else if rank >= 1 {
                    v.push(Grp::SO(rank - 1, None));
                }
                v
            } else {
                [sp_even(r), sp_even(r - 2)].into_iter().flatten().collect()
            }
        }
    };
    let mut out: Vec<Grp> = base.into_iter().flat_map(Grp::expand).collect();
    out.dedup();
    out
}

fn extremes(menu: &[Grp], q: u64) -> (QPow, QPow) {
    let ws: Vec<QPow> = menu.iter().map(|g| g.weight(q)).collect();
    let lo = ws.iter().min_by(|a, b| a.cmp(b, q)).unwrap().clone();
    let hi = ws.iter().max_by(|a, b| a.cmp(b, q)).unwrap().clone();
    (lo, hi)
}

fn factor_from(prime: u64, class: SplitClass, q: u64, lo: &QPow, hi: &QPow, prec: u32) -> LocalFactor {
    let same = lo.cmp(hi, q) == Ordering::Equal;
    let exact = if same { lo.exact(q) } else { None };
    let value = match &exact {
        Some(v) => Real::from_rational(v, prec),
        None => lo.to_real(q, prec).hull(&hi.to_real(q, prec)),
    };
    LocalFactor { prime, split_class: class, value, exact }
}

/// Exact local factor at an unramified prime.
pub fn lambda_unramified(profile: &JordanProfile, q: u64, prec: u32) -> Result<LocalFactor> {
    let class = profile.split_class;
    let big_n = profile.total_rank() as u64;
    if big_n == 0 {
        return Err(Error::Input("empty Jordan profile".into()));
    }
    let n = big_n - 1;
    let (grp, torus, prod): (fn(u64) -> Grp, BigInt, BigInt) = match class {
        SplitClass::Inert => (
            Grp::U,
            BigInt::from(q + 1),
            (2..=big_n).map(|i| BigInt::from(q).pow(i as u32) - if i % 2 == 0 { 1 } else { -1 }).product(),
        ),
        SplitClass::Split => (Grp::GL, BigInt::from(q - 1), (2..=big_n).map(|i| BigInt::from(q).pow(i as u32) - 1).product()),
        SplitClass::Ramified => return Err(Error::Input("lambda_unramified called at a ramified prime".into())),
    };
    // M is the kernel of a surjective determinant onto a one-dimensional
    // torus: |M| = |G| / |torus| and dim M = dim G - 1.
    let mut w = QPow { half_exp: -(n as i64) - 1, coeff: BigRational::from_integer(torus * prod) };
    for &(_, r) in &profile.blocks {
        w = w.mul(&grp(r as u64).weight(q));
    }
    Ok(factor_from(profile.prime, class, q, &w, &w, prec))
}

/// Envelope of the local factor at a ramified prime over the admissible group
/// menus and, at 2, over the `(Z/2Z)^beta` component with `0 <= beta <= n+1`.
pub fn lambda_ramified_bounds(profile: &JordanProfile, q: u64, case: ChoCase, prec: u32) -> Result<LocalFactor> {
    if profile.split_class != SplitClass::Ramified {
        return Err(Error::Input("lambda_ramified_bounds needs a ramified prime".into()));
    }
    let p_is_2 = profile.prime == 2;
    if p_is_2 == (case == ChoCase::NotApplicable) {
        return Err(Error::Input(format!("Cho case {case:?} does not match p = {}", profile.prime)));
    }
    let big_n = profile.total_rank() as u64;
    let r = (big_n / 2) as i64;
    let prod: BigInt = (1..=r as u32).map(|i| BigInt::from(q).pow(2 * i) - 1).product();
    // The determinant lands in f^1 = {+-1} for odd p; it is trivial at 2.
    let has_o = !p_is_2 && profile.blocks.iter().any(|b| b.0 % 2 == 1 && b.1 > 0);
    let img = if has_o { 2 } else { 1 };
    let base = QPow { half_exp: -r, coeff: BigRational::new(prod, BigInt::from(img)) };
    let (mut lo, mut hi) = (base.clone(), base);
    for &(s, rank) in &profile.blocks {
        let menu = ramified_menu(s, rank as u64, case);
        let (a, b) = extremes(&menu, q);
        lo = lo.mul(&a);
        hi = hi.mul(&b);
    }
    if p_is_2 {
        lo = lo.mul(&QPow { half_exp: 0, coeff: BigRational::new(BigInt::one(), BigInt::from(2).pow(big_n as u32)) });
    }
    Ok(factor_from(profile.prime, SplitClass::Ramified, q, &lo, &hi, prec))
}

#[derive(Clone, Debug, Default)]
pub struct VolumeOptions {
    pub lambda_overrides: BTreeMap<u64, Real>,
    /// Treat every local factor as 1.
    pub all_lambda_one: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub value: Real,
    /// Set when principality could not be confirmed.
    pub conditional: bool,
    pub star: Verdict,
    pub local_factors: Vec<LocalFactor>,
    /// Exponent of `D` as `numerator / 4`.
    pub d_exponent_quarters: u64,
}

/// Local factor of `L` at `p`, exact when unramified and an envelope otherwise.
pub fn local_factor(l: &HermitianLattice, p: u64, prec: u32) -> Result<LocalFactor> {
    match l.field.splitting_type(p)? {
        SplitClass::Ramified => {
            let prof = elementary_divisor_profile(l, p)?;
            lambda_ramified_bounds(&prof, p, cho_case_at(&l.field, p), prec)
        }
        _ => lambda_unramified(&jordan_profile(l, p)?, p, prec),
    }
}

fn cho_case_at(f: &ImaginaryQuadraticField, p: u64) -> ChoCase {
    if p == 2 {
        cho_case(f)
    } else {
        ChoCase::NotApplicable
    }
}

/// `prod_{i=1}^n i!/(2 pi)^(i+1)` times `zeta(2) L(3) zeta(4) ...` up to argument `n+1`.
pub fn archimedean_part(f: &ImaginaryQuadraticField, n: u64, prec: u32) -> Real {
    let wp = prec + 32;
    let two_pi = pi(wp).mul_pow2(1);
    let mut acc = Real::one(wp);
    for i in 1..=n {
        acc = acc * factorial_real(i, wp) / two_pi.pow(i + 1);
    }
    for s in 2..=n + 1 {
        acc = acc * if s % 2 == 0 { zeta(s, wp) } else { dirichlet_l(f, s, wp) };
    }
    acc.with_prec(prec)
}

/// `vol_HM(SU(L))` by Prasad's formula.
pub fn prasad_volume(l: &HermitianLattice, opts: &VolumeOptions, prec: u32) -> Result<VolumeReport> {
    let n = l.n as u64;
    let wp = prec + 32;
    let star = check_star(l)?.overall;
    let quarters = if n % 2 == 0 { n * (n + 3) } else { (n - 1) * (n + 2) };
    let dpow = Real::from_int(l.field.disc, wp).pow_ratio(quarters as i64, 4);
    let mut value = dpow * archimedean_part(&l.field, n, wp);
    let mut local = Vec::new();
    if !opts.all_lambda_one {
        for p in l.bad_primes()? {
            let lf = match opts.lambda_overrides.get(&p) {
                Some(v) => LocalFactor {
                    prime: p,
                    split_class: l.field.splitting_type(p)?,
                    value: v.clone(),
                    exact: None,
                },
                None => local_factor(l, p, wp)?,
            };
            value = value * &lf.value;
            local.push(lf);
        }
    }
    Ok(VolumeReport {
        value: value.with_prec(prec),
        conditional: star != Verdict::True,
        star,
        local_factors: local,
        d_exponent_quarters: quarters,
    })
}

/// Which ratio table applies to a reflective vector at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioCase {
    pub class: SplitClass,
    /// Parity of the scale `nu` carrying `h(l,l)`; required exactly when ramified.
    pub nu_even: Option<bool>,
    pub p_is_2: bool,
    pub cho: ChoCase,
}

/// Upper bound for `lambda^{K_l} / lambda^L`, one expression per table row.
pub fn lambda_ratio_upper(case: RatioCase, q: u64, n: u64, n_nu: u64, prec: u32) -> Result<Real> {
    if n_nu == 0 || n_nu > n + 1 {
        return Err(Error::Input(format!("n_nu = {n_nu} outside 1..={}", n + 1)));
    }
    if q < 2 {
        return Err(Error::Input(format!("bad residue field size {q}")));
    }
    let wp = prec + 16;
    let big_n = n + 1;
    let odd_rank = big_n % 2 == 1;
    let r = n_nu;
    let qr = |e: u64| Real::from_int(BigInt::from(q).pow(e as u32), wp);
    let int = |x: i64| Real::from_int(x, wp);
    let sq = |k: i64| Real::from_int(q, wp).sqrt().powi(k);
    let denom_m1 = qr(big_n) - int(1);
    let out = match case.class {
        SplitClass::Inert | SplitClass::Split => {
            if case.nu_even.is_some() {
                return Err(Error::Input("unramified rows do not depend on the parity of nu".into()));
            }
            if case.class == SplitClass::Inert {
                let sgn = |e: u64| if e % 2 == 0 { int(1) } else { int(-1) };
                (qr(r) - sgn(r)) / (qr(big_n) - sgn(big_n))
            } else {
                (qr(r) - int(1)) / denom_m1
            }
        }
        SplitClass::Ramified => {
            let nu_even = case.nu_even.ok_or_else(|| Error::Input("ramified rows need the parity of nu".into()))?;
            let r_even = r % 2 == 0;
            if !case.p_is_2 {
                if case.cho != ChoCase::NotApplicable {
                    return Err(Error::Input("Cho cases only apply at 2".into()));
                }
                match (nu_even, r_even, odd_rank) {
                    (true, true, true) => sq(-1) * (qr(r) - int(1)),
                    (true, true, false) => (qr(r) - int(1)) / denom_m1,
                    (true, false, true) => int(1),
                    (true, false, false) => sq(1) / denom_m1,
                    (false, true, true) => sq(-1) * (qr(r / 2) + int(1)),
                    (false, true, false) => (qr(r / 2) + int(1)) / denom_m1,
                    (false, false, true) => qr((r - 1) / 2) + int(1),
                    (false, false, false) => sq(1) * (qr((r - 1) / 2) + int(1)) / denom_m1,
                }
            } else {
                if q != 2 {
                    return Err(Error::Input("the ramified prime 2 has residue field F_2".into()));
                }
                let two = |k: i64| Real::from_int(2, wp).sqrt().powi(k);
                let a = qr(r) - int(1);
                let bb = || (qr(r.div_ceil(2)) + int(1)) * (qr((r - 1) / 2) + int(1));
                match case.cho {
                    ChoCase::I => match (nu_even, r_even, odd_rank) {
                        (true, _, true) => two(1) * a,
                        (true, _, false) => int(2) * a / denom_m1,
                        (false, true, true) => int(6) * a,
                        (false, true, false) => int(3) * two(3) * a / denom_m1,
                        (false, false, true) => two(1) * bb(),
                        (false, false, false) => int(2) * bb() / denom_m1,
                    },
                    ChoCase::II => {
                        let c = || {
                            let t = if r >= 2 { qr(r - 2) - int(1) } else { Real::from_ratio(1, 2, wp) - int(1) };
                            &a * &t
                        };
                        match (nu_even, r_even, odd_rank) {
                            (true, true, true) => int(12) * a,
                            (true, true, false) => int(3) * two(5) * a / denom_m1,
                            (true, false, true) => two(3) * bb(),
                            (true, false, false) => int(12) * bb() / denom_m1,
                            (false, true, true) => two(3) * c(),
                            (false, true, false) => int(4) * c() / denom_m1,
                            (false, false, true) => two(3) * a,
                            (false, false, false) => int(4) * a / denom_m1,
                        }
                    }
                    ChoCase::NotApplicable => return Err(Error::Input("the ramified prime 2 needs a Cho case".into())),
                }
            }
        }
    };
    Ok(out.with_prec(prec))
}

/// All values of `lambda^{K_l} / lambda^L` obtained from group orders for the
/// block carrying `h(l,l)`, over the admissible menu choices. Blocks away
/// from `nu` cancel. Not available at 2, where the `beta` component is only
/// bounded.
pub fn ratio_exact_candidates(case: RatioCase, q: u64, n: u64, n_nu: u64, prec: u32) -> Result<Vec<Real>> {
    if n_nu == 0 || n_nu > n + 1 {
        return Err(Error::Input(format!("n_nu = {n_nu} outside 1..={}", n + 1)));
    }
    let big_n = n + 1;
    let r = n_nu;
    let (menu_l, menu_k, base) = match case.class {
        SplitClass::Inert | SplitClass::Split => {
            let inert = case.class == SplitClass::Inert;
            let g = |x| if inert { Grp::U(x) } else { Grp::GL(x) };
            let top = BigInt::from(q).pow(big_n as u32) - if inert && big_n % 2 == 1 { -1 } else { 1 };
            // exponent shift: (-(n-1)) - (-n) = 1
            (vec![g(r)], vec![g(r - 1)], QPow { half_exp: 1, coeff: BigRational::new(BigInt::one(), top) })
        }
        SplitClass::Ramified => {
            if case.p_is_2 {
                return Err(Error::Unsupported("exact ratios at the ramified prime 2".into()));
            }
            let nu_even = case.nu_even.ok_or_else(|| Error::Input("ramified rows need the parity of nu".into()))?;
            let scale = if nu_even { 0 } else { 1 };
            let rl = (big_n / 2) as i64;
            let rk = (n / 2) as i64;
            let prod_ratio = if rl > rk {
                BigRational::new(BigInt::one(), BigInt::from(q).pow(2 * rl as u32) - 1)
            } else {
                BigRational::one()
            };
            (
                ramified_menu(scale, r, ChoCase::NotApplicable),
                ramified_menu(scale, r - 1, ChoCase::NotApplicable),
                QPow { half_exp: rl - rk, coeff: prod_ratio },
            )
        }
    };
    let mut out = Vec::new();
    for gl in &menu_l {
        for gk in &menu_k {
            // lambda^K / lambda^L = base * w(H_K) / w(H_L)
            let wl = gl.weight(q);
            let inv = QPow { half_exp: -wl.half_exp, coeff: wl.coeff.recip() };
            out.push(base.mul(&gk.weight(q)).mul(&inv).to_real(q, prec));
        }
    }
    Ok(out)
}

/// `n = 2m` gives the odd-rank case `OddDim`; `n = 2m - 1` gives `EvenDim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    OddDim,
    EvenDim,
}

impl Parity {
    pub fn of_n(n: u64) -> (Parity, u64) {
        if n % 2 == 0 {
            (Parity::OddDim, n / 2)
        } else {
            (Parity::EvenDim, n.div_ceil(2))
        }
    }

    pub fn n_of(self, m: u64) -> u64 {
        match self {
            Parity::OddDim => 2 * m,
            Parity::EvenDim => 2 * m - 1,
        }
    }

    pub fn parse(s: &str) -> Result<Parity> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "odd" | "odd_dim" => Ok(Parity::OddDim),
            "even" | "even_dim" => Ok(Parity::EvenDim),
            _ => Err(Error::Input(format!("unknown parity '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::OddDim => "odd_dim",
            Parity::EvenDim => "even_dim",
        }
    }
}

fn p2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Field-class polynomial factor of the bound functions.
pub fn class_polynomial(class: FieldClass, m: u64, parity: Parity) -> BigInt {
    let three = |k: u64| BigInt::from(3).pow(k as u32);
    match parity {
        Parity::OddDim => match class {
            FieldClass::Generic => 1 + p2(4 * m + 1) + p2(8 * m + 2),
            FieldClass::Gauss => 2 * (3 + 3 * p2(4 * m + 1) + p2(8 * m + 2)),
            FieldClass::Eisenstein => 3 * (5 + 2 * three(4 * m + 1) + p2(8 * m + 2)),
        },
        Parity::EvenDim => match class {
            FieldClass::Generic => 1 + p2(4 * m - 1) + p2(8 * m - 2),
            FieldClass::Gauss => 3 + 3 * p2(4 * m - 1) + p2(8 * m - 2),
            FieldClass::Eisenstein => 5 + 2 * three(4 * m - 1) + p2(8 * m - 2),
        },
    }
}

/// The bound functions `f_F^odd(m)` and `f_F^even(m)`. For `OddDim` the
/// supplied `L(2m+1)` (or a lower bound for it) is used; by default the
/// field-uniform lower bound `zeta(4m+2)/zeta(2m+1)`.
pub fn f_bound(class: FieldClass, m: u64, parity: Parity, l_value: Option<&Real>, prec: u32) -> Result<Real> {
    if m <= 1 {
        return Err(Error::Input(format!("m must exceed 1, got {m}")));
    }
    let wp = prec + 32;
    let two_pi = pi(wp).mul_pow2(1);
    let poly = Real::from_int(class_polynomial(class, m, parity), wp);
    let v = match parity {
        Parity::OddDim => {
            let lv = match l_value {
                Some(v) => v.with_prec(wp),
                None => l_lower_bound(2 * m + 1, wp),
            };
            if !lv.is_positive() {
                return Err(Error::Precision("L value enclosure not positive".into()));
            }
            Real::from_int(96, wp) * two_pi.pow(2 * m + 1) / (factorial_real(2 * m, wp) * lv) * poly
        }
        Parity::EvenDim => {
            let pre = Real::from_int(3, wp).mul_pow2(2 * m as i64 + 2) * Real::from_int(2, wp).sqrt();
            pre * two_pi.pow(2 * m) / (factorial_real(2 * m - 1, wp) * zeta(2 * m, wp)) * poly
        }
    };
    Ok(v.with_prec(prec))
}

/// Inputs of the `V(L,F)` upper bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VBoundParams {
    pub field_class: FieldClass,
    pub n: u64,
    #[serde(with = "crate::bigser::int")]
    pub theta: BigInt,
    /// `alpha` as `(numerator, denominator)`; used together with `d_l`.
    pub alpha: Option<(u64, u64)>,
    /// Exponent `D(L)` of the discriminant group.
    #[serde(with = "crate::bigser::opt_int")]
    pub d_l: Option<BigInt>,
    /// Use the unramified square-free display instead of `f/theta`.
    pub sharp: bool,
    /// Field discriminant `D`; needed by the sharp display when `n` is even.
    pub disc: Option<u64>,
    /// Value or lower bound for `L(2m+1)`; default `zeta(4m+2)/zeta(2m+1)`.
    #[serde(skip)]
    pub l_value: Option<Real>,
}

impl VBoundParams {
    pub fn new(field_class: FieldClass, n: u64) -> Self {
        VBoundParams {
            field_class,
            n,
            theta: BigInt::one(),
            alpha: None,
            d_l: None,
            sharp: false,
            disc: None,
            l_value: None,
        }
    }

    pub fn parity(&self) -> Parity {
        Parity::of_n(self.n).0
    }

    pub fn m(&self) -> u64 {
        Parity::of_n(self.n).1
    }
}

fn dl_root(params: &VBoundParams, wp: u32) -> Result<Option<Real>> {
    let Some(dl) = &params.d_l else { return Ok(None) };
    if !dl.is_positive() {
        return Err(Error::Input("D(L) must be positive".into()));
    }
    let (a, b) = params.alpha.unwrap_or((1, 1));
    if a == 0 || b == 0 {
        return Err(Error::Input("alpha must be positive".into()));
    }
    // D(L)^(1/alpha) = D(L)^(b/a)
    Ok(Some(Real::from_int(dl.clone(), wp).pow_ratio(b as i64, a as u32)))
}

/// Upper bound for `V(L,F)`.
pub fn v_upper_bound(params: &VBoundParams, prec: u32) -> Result<Real> {
    let (parity, m) = Parity::of_n(params.n);
    if m <= 1 {
        return Err(Error::Input(format!("m = {m} must exceed 1 (n = {})", params.n)));
    }
    if !params.theta.is_positive() {
        return Err(Error::Input("theta must be positive".into()));
    }
    let wp = prec + 32;
    let dl = dl_root(params, wp)?;
    let mut v = if params.sharp {
        if params.field_class != FieldClass::Generic {
            return Err(Error::Input("the unramified square-free bound excludes Q(sqrt(-1)) and Q(sqrt(-3))".into()));
        }
        let two_pi = pi(wp).mul_pow2(1);
        let poly = Real::from_int(class_polynomial(FieldClass::Generic, m, Parity::OddDim), wp);
        match parity {
            Parity::OddDim => {
                let d = params.disc.ok_or_else(|| Error::Input("sharp bound for even n needs the field discriminant".into()))?;
                let lv = match &params.l_value {
                    Some(v) => v.with_prec(wp),
                    None => l_lower_bound(2 * m + 1, wp),
                };
                // D^(2m + 1/2) = (D^(4m+1))^(1/2)
                let dpow = Real::from_int(d, wp).pow(4 * m + 1).sqrt();
                poly * two_pi.pow(2 * m + 1).mul_pow2(1) / (dpow * factorial_real(2 * m, wp) * lv)
            }
            Parity::EvenDim => poly * two_pi.pow(2 * m) / (factorial_real(2 * m - 1, wp) * zeta(2 * m, wp)),
        }
    } else {
        f_bound(params.field_class, m, parity, params.l_value.as_ref(), wp)? / Real::from_int(params.theta.clone(), wp)
    };
    if let Some(r) = dl {
        v = v / r;
    }
    Ok(v.with_prec(prec))
}

/// Multiplier `c` with `vol_HM(U(L)) <= c * vol_HM(SU(L))`.
pub fn u_su_index_bound(class: FieldClass, n: u64) -> u32 {
    match class {
        FieldClass::Generic => {
            if n % 2 == 0 {
                1
            } else {
                2
            }
        }
        FieldClass::Gauss => match n % 4 {
            1 => 2,
            3 => 4,
            _ => 1,
        },
        FieldClass::Eisenstein => match n % 6 {
            0 | 4 => 1,
            1 | 3 => 2,
            2 => 3,
            _ => 6,
        },
    }
}
