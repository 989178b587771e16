//! Local Jordan profiles and the structural conditions built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hlattice::HermitianLattice;
use crate::linalg::smith_invariants;
use crate::qfield::{factorize, FieldClass, ImaginaryQuadraticField, QuadInt, SplitClass};

/// Jordan blocks of `L ⊗ Z_p` as `(scale, rank)` pairs; the scale is measured
/// in powers of a uniformizer of `F_v` (`p` itself when unramified).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanProfile {
    pub prime: u64,
    pub split_class: SplitClass,
    pub blocks: Vec<(u32, usize)>,
}

impl JordanProfile {
    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn rank_at(&self, scale: u32) -> usize {
        self.blocks.iter().find(|b| b.0 == scale).map_or(0, |b| b.1)
    }
}

/// Three-valued outcome for checks that can be out of scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub per_prime: BTreeMap<u64, Verdict>,
    pub profiles: Vec<JordanProfile>,
    /// Reasons for `Unknown` entries.
    pub notes: Vec<String>,
    pub overall: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFlags {
    pub unimodular: bool,
    pub unramified_square_free: bool,
    pub primitive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeartReport {
    pub split_sublattice: Verdict,
    pub complement: Verdict,
    pub holds: Verdict,
}

fn vp(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let bp = BigInt::from(p);
    let mut y = x.abs();
    let mut e = 0;
    while y.is_multiple_of(&bp) {
        y /= &bp;
        e += 1;
    }
    e
}

fn vp_rat(x: &BigRational, p: u64) -> i64 {
    vp(x.numer(), p) as i64 - vp(x.denom(), p) as i64
}

fn group_scales(mut scales: Vec<u32>) -> Vec<(u32, usize)> {
    scales.sort();
    let mut out: Vec<(u32, usize)> = Vec::new();
    for s in scales {
        match out.last_mut() {
            Some(b) if b.0 == s => b.1 += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

/// Element `a + b w` of `F` with rational coordinates.
#[derive(Clone, Debug)]
struct FElem {
    a: BigRational,
    b: BigRational,
}

impl FElem {
    fn from_int(x: &QuadInt) -> Self {
        FElem { a: BigRational::from_integer(x.a.clone()), b: BigRational::from_integer(x.b.clone()) }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn mul(&self, o: &FElem, f: &ImaginaryQuadraticField) -> FElem {
        let t = BigRational::from_integer(f.omega_trace());
        let n = BigRational::from_integer(f.omega_norm());
        let bb = &self.b * &o.b;
        FElem { a: &self.a * &o.a - &bb * &n, b: &self.a * &o.b + &self.b * &o.a + &bb * &t }
    }

    fn sub(&self, o: &FElem) -> FElem {
        FElem { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    fn norm(&self, f: &ImaginaryQuadraticField) -> BigRational {
        let t = BigRational::from_integer(f.omega_trace());
        let n = BigRational::from_integer(f.omega_norm());
        &self.a * &self.a + &self.a * &self.b * &t + &self.b * &self.b * &n
    }

    fn inv(&self, f: &ImaginaryQuadraticField) -> FElem {
        let t = BigRational::from_integer(f.omega_trace());
        let nr = self.norm(f);
        // conj(a + b w) = (a + b t) - b w
        FElem { a: (&self.a + &self.b * &t) / &nr, b: -&self.b / &nr }
    }
}

/// Elementary divisor valuations of `G` over the completion at the unique
/// prime above a ramified `p`, by minimal-valuation pivoting.
fn ramified_scales(l: &HermitianLattice, p: u64) -> Vec<u32> {
    let f = &l.field;
    let mut a: Vec<Vec<FElem>> = l.gram.iter().map(|r| r.iter().map(FElem::from_int).collect()).collect();
    let n = a.len();
    let val = |x: &FElem| -> Option<i64> { if x.is_zero() { None } else { Some(vp_rat(&x.norm(f), p)) } };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = val(&a[i][j]) {
                    if best.map_or(true, |b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else {
            break;
        };
        a.swap(k, bi);
        for row in a.iter_mut() {
            row.swap(k, bj);
        }
        let pinv = a[k][k].inv(f);
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let m = a[i][k].mul(&pinv, f);
            for j in k..n {
                let t = m.mul(&a[k][j], f);
                a[i][j] = a[i][j].sub(&t);
            }
        }
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let m = pinv.mul(&a[k][j], f);
            for i in k..n {
                let t = a[i][k].mul(&m, f);
                a[i][j] = a[i][j].sub(&t);
            }
        }
        out.push(v.max(0) as u32);
    }
    out
}

/// Jordan profile of `L` at `p`.
pub fn jordan_profile(l: &HermitianLattice, p: u64) -> Result<JordanProfile> {
    if p == 2 && l.field.splitting_type(p)? == SplitClass::Ramified {
        return Err(Error::Unsupported(format!(
            "Jordan decomposition at the ramified prime 2 of Q(sqrt(-{}))",
            l.field.d
        )));
    }
    elementary_divisor_profile(l, p)
}

/// Scale/rank multiset from the elementary divisors of the Gram matrix over
/// `O_F ⊗ Z_p`. It agrees with [`jordan_profile`] wherever that is defined and
/// also covers the ramified prime 2, where only the block ranks (not the
/// lattice types) are available.
pub fn elementary_divisor_profile(l: &HermitianLattice, p: u64) -> Result<JordanProfile> {
    let class = l.field.splitting_type(p)?;
    if l.determinant().is_zero() {
        return Err(Error::Input("degenerate lattice".into()));
    }
    let scales = match class {
        SplitClass::Ramified => ramified_scales(l, p),
        SplitClass::Inert | SplitClass::Split => {
            // O_F ⊗ Z_p has two Z_p-directions per O_F-direction, and each
            // elementary divisor p^k over O_F ⊗ Z_p shows up twice over Z_p.
            let inv = smith_invariants(&l.dual_quotient_matrix());
            let mut vals: Vec<u32> = inv.iter().map(|d| vp(d, p)).collect();
            vals.sort();
            let mut halved = Vec::with_capacity(vals.len() / 2);
            let mut i = 0;
            while i < vals.len() {
                if i + 1 >= vals.len() || vals[i] != vals[i + 1] {
                    return Err(Error::Input(format!("p-adic elementary divisors at {p} do not pair up")));
                }
                halved.push(vals[i]);
                i += 2;
            }
            halved
        }
    };
    Ok(JordanProfile { prime: p, split_class: class, blocks: group_scales(scales) })
}

/// All scales lie in `{0, 1}`.
pub fn is_parahoric_shape(profile: &JordanProfile) -> bool {
    profile.blocks.iter().all(|b| b.0 <= 1)
}

/// The sufficient criterion for `SU(L ⊗ Z_v)` to be parahoric at every finite
/// place; places outside `D * det(L)` are unimodular and pass trivially.
pub fn check_star(l: &HermitianLattice) -> Result<StarReport> {
    let mut per_prime = BTreeMap::new();
    let mut profiles = Vec::new();
    let mut notes = Vec::new();
    let mut overall = Verdict::True;
    for p in l.bad_primes()? {
        let v = match jordan_profile(l, p) {
            Ok(prof) => {
                let v = Verdict::from_bool(is_parahoric_shape(&prof));
                profiles.push(prof);
                v
            }
            Err(Error::Unsupported(msg)) => {
                notes.push(msg);
                Verdict::Unknown
            }
            Err(e) => return Err(e),
        };
        overall = overall.and(v);
        per_prime.insert(p, v);
    }
    Ok(StarReport { per_prime, profiles, notes, overall })
}

/// Per-vector form of the principality condition: both `<h(l,l)> ⊕ K_l` and
/// `K_l` must pass [`check_star`].
pub fn check_heart_for_vector(l: &HermitianLattice, v: &[QuadInt]) -> Result<HeartReport> {
    let class = l.classify_reflective(v)?;
    if !class.is_reflective() {
        return Err(Error::Input("vector is not reflective".into()));
    }
    let split = check_star(&l.split_sublattice(v)?)?.overall;
    let comp = check_star(&l.orthogonal_complement(v)?)?.overall;
    Ok(HeartReport { split_sublattice: split, complement: comp, holds: split.and(comp) })
}

/// Conservative check of condition `P(alpha)`: `2(n + 1 - n_{p,j}) >= a_p / alpha`
/// for every `p | D(L)` and every scale `j` present at `p`.
pub fn condition_p(l: &HermitianLattice, alpha: f64) -> Result<bool> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Input(format!("alpha must be positive, got {alpha}")));
    }
    let alpha_q = BigRational::from_float(alpha).expect("finite alpha");
    let dg = l.discriminant_group()?;
    for (&p, &a_p) in &dg.exponent_valuations {
        if l.field.splitting_type(p)? == SplitClass::Ramified {
            return Ok(false);
        }
        let prof = jordan_profile(l, p)?;
        for &(_, n_j) in &prof.blocks {
            let lhs = BigRational::from_integer(BigInt::from(2 * (l.n + 1 - n_j))) * &alpha_q;
            if lhs < BigRational::from_integer(BigInt::from(a_p)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when every Gram entry lies in every prime of `F` above `p`.
fn gram_divisible_at(l: &HermitianLattice, p: u64, class: SplitClass) -> bool {
    let bp = BigInt::from(p);
    l.gram.iter().flatten().all(|x| match class {
        SplitClass::Ramified => l.field.norm(x).is_multiple_of(&bp),
        _ => x.a.is_multiple_of(&bp) && x.b.is_multiple_of(&bp),
    })
}

pub fn recognize_shape(l: &HermitianLattice) -> Result<ShapeFlags> {
    let det = l.determinant();
    let unimodular = det.abs().is_one();
    let f = &l.field;
    let mut primitive = true;
    let mut sqfree = !det.is_zero() && det.is_odd() && f.class() != FieldClass::Eisenstein && f.disc % 4 != 0;
    if !det.is_zero() {
        for (p, e) in factorize(&det)? {
            let class = f.splitting_type(p)?;
            if e > 1 || class == SplitClass::Ramified {
                sqfree = false;
            }
            if gram_divisible_at(l, p, class) {
                primitive = false;
            }
        }
    }
    if unimodular {
        sqfree = false;
    }
    Ok(ShapeFlags { unimodular, unramified_square_free: sqfree, primitive })
}

/// `v_p(h(l, l))`.
pub fn nu(l: &HermitianLattice, v: &[QuadInt], p: u64) -> u32 {
    vp(&l.norm(v), p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalConditionReport {
    pub star: StarReport,
    pub parahoric_shape: bool,
    pub alpha: f64,
    pub p_alpha: bool,
    pub shape: ShapeFlags,
}

pub fn local_report(l: &HermitianLattice, alpha: f64) -> Result<LocalConditionReport> {
    let star = check_star(l)?;
    let parahoric_shape = star.profiles.iter().all(is_parahoric_shape);
    Ok(LocalConditionReport { parahoric_shape, p_alpha: condition_p(l, alpha)?, alpha, shape: recognize_shape(l)?, star })
}

pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}
