//! The bigness criterion `W(L,F,a) < 0`, the assembly weights behind
//! `V(L,F)`, and certified threshold scans.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hlattice::{HermitianLattice, ThetaReading};
use crate::par;
use crate::plocal::{check_star, condition_p, recognize_shape, Verdict};
use crate::qfield::FieldClass;
use crate::specfun::{factorial_real, l_lower_bound, pi, Real};
use crate::volume::{class_polynomial, f_bound, v_upper_bound, Parity, VBoundParams};

/// Extra precision doublings tried when an enclosure straddles zero.
const RETRIES: u32 = 3;

fn class_consts(class: FieldClass) -> (u64, u64) {
    // (k, c) in c * (2a/n) * (1 + k/a)^(1-n)
    match class {
        FieldClass::Generic => (1, 1),
        FieldClass::Gauss => (3, 2),
        FieldClass::Eisenstein => (5, 3),
    }
}

fn check_n(n: u64) -> Result<()> {
    if n <= 2 {
        return Err(Error::Input(format!("n must exceed 2, got {n}")));
    }
    Ok(())
}

/// Right-hand side of the bigness inequality for a rational `a = num/den`.
pub fn bigness_rhs_ratio(class: FieldClass, n: u64, a: (u64, u64), prec: u32) -> Result<Real> {
    check_n(n)?;
    let (num, den) = a;
    if num == 0 || den == 0 {
        return Err(Error::Input("a must be positive".into()));
    }
    let wp = prec + 32;
    let (k, c) = class_consts(class);
    let base = Real::from_ratio(BigInt::from(num) + BigInt::from(k) * den, num, wp);
    let lead = Real::from_ratio(BigInt::from(2 * c) * num, BigInt::from(den) * n, wp);
    Ok((base.powi(1 - n as i64) * lead).with_prec(prec))
}

/// Right-hand side of the bigness inequality: `V(L,F)` below this makes `M(a)` big.
pub fn bigness_rhs(class: FieldClass, n: u64, a: u64, prec: u32) -> Result<Real> {
    bigness_rhs_ratio(class, n, (a, 1), prec)
}

/// `W(L,F,a)` for a given enclosure of `V(L,F)`.
pub fn w_value(v: &Real, class: FieldClass, n: u64, a: u64, prec: u32) -> Result<Real> {
    let rhs = bigness_rhs(class, n, a, prec + 32)?;
    Ok((v.with_prec(prec + 32) - rhs).with_prec(prec))
}

/// One-sided verdict: the criterion is sufficient, never necessary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BigVerdict {
    Big,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct BignessReport {
    pub n: u64,
    pub a: u64,
    pub field_class: FieldClass,
    pub v_bound: Real,
    pub rhs: Real,
    pub w: Real,
    pub verdict: BigVerdict,
    /// Hypotheses the bound relies on that were not confirmed.
    pub conditional: bool,
    pub assumptions: Vec<String>,
}

/// Evaluates the criterion for explicit bound parameters.
pub fn is_big(params: &VBoundParams, a: u64, prec: u32) -> Result<BignessReport> {
    if a == 0 {
        return Err(Error::Input("a must be a positive integer".into()));
    }
    check_n(params.n)?;
    let v = v_upper_bound(params, prec + 32)?;
    let rhs = bigness_rhs(params.field_class, params.n, a, prec + 32)?;
    let w = &v - &rhs;
    let verdict = if w.is_negative() { BigVerdict::Big } else { BigVerdict::Inconclusive };
    let mut assumptions = vec![format!("theta = {}", params.theta)];
    if params.sharp {
        assumptions.push("unramified square-free bound".into());
    }
    if let (Some(dl), Some((p, q))) = (&params.d_l, params.alpha) {
        assumptions.push(format!("P({p}/{q}) with D(L) = {dl}"));
    } else if let Some(dl) = &params.d_l {
        assumptions.push(format!("P(1) with D(L) = {dl}"));
    }
    if params.l_value.is_none() && params.parity() == Parity::OddDim {
        assumptions.push("L(2m+1) >= zeta(4m+2)/zeta(2m+1)".into());
    }
    Ok(BignessReport {
        n: params.n,
        a,
        field_class: params.field_class,
        v_bound: v.with_prec(prec),
        rhs: rhs.with_prec(prec),
        w: w.with_prec(prec),
        verdict,
        conditional: false,
        assumptions,
    })
}

/// Bound parameters extracted from a lattice, plus the hypotheses they rest on.
#[derive(Clone, Debug)]
pub struct LatticeBound {
    pub params: VBoundParams,
    pub star: Verdict,
    pub p_alpha: bool,
    pub notes: Vec<String>,
}

/// Reads `n`, `theta`, `D(L)` and the shape of `l` into bound parameters.
/// `D(L)` is only used when `P(alpha)` holds.
pub fn lattice_bound_params(
    l: &HermitianLattice,
    reading: ThetaReading,
    alpha: Option<(u64, u64)>,
    sharp: bool,
) -> Result<LatticeBound> {
    let n = l.n as u64;
    let mut params = VBoundParams::new(l.field.class(), n);
    params.theta = l.theta(reading)?;
    let mut notes = Vec::new();
    let star = check_star(l)?;
    notes.extend(star.notes.iter().cloned());
    let (an, ad) = alpha.unwrap_or((1, 1));
    if an == 0 || ad == 0 {
        return Err(Error::Input("alpha must be positive".into()));
    }
    let p_alpha = condition_p(l, an as f64 / ad as f64)?;
    if p_alpha {
        params.alpha = Some((an, ad));
        params.d_l = Some(l.discriminant_group()?.exponent);
    } else {
        notes.push(format!("P({an}/{ad}) fails; D(L) not used"));
    }
    if sharp {
        let shape = recognize_shape(l)?;
        if !shape.unramified_square_free && !shape.unimodular {
            return Err(Error::Input("sharp bound needs an unramified square-free or unimodular lattice".into()));
        }
        params.sharp = true;
        params.disc = Some(l.field.disc);
    }
    Ok(LatticeBound { params, star: star.overall, p_alpha, notes })
}

/// Criterion for a lattice; the verdict is conditional unless `(star)` holds.
pub fn is_big_lattice(l: &HermitianLattice, a: u64, reading: ThetaReading, alpha: Option<(u64, u64)>, sharp: bool, prec: u32) -> Result<BignessReport> {
    let lb = lattice_bound_params(l, reading, alpha, sharp)?;
    let mut rep = is_big(&lb.params, a, prec)?;
    rep.conditional = lb.star != Verdict::True;
    rep.assumptions.push(format!("theta reading {reading:?}"));
    rep.assumptions.push(format!("(star) {:?}", lb.star));
    rep.assumptions.extend(lb.notes);
    Ok(rep)
}

/// Coefficients multiplying the reflective-vector volume ratios in `V(L,F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VAssemblyWeights {
    /// Split vectors.
    #[serde(with = "crate::bigser::int")]
    pub type_i: BigInt,
    /// Vectors with `I_l` the ramified prime over 2.
    #[serde(with = "crate::bigser::int")]
    pub type_ii: BigInt,
    /// Remaining reflective classes.
    #[serde(with = "crate::bigser::int")]
    pub type_iii_iv_v: BigInt,
}

impl VAssemblyWeights {
    pub fn new(class: FieldClass, n: u64) -> Self {
        let pw = |b: u64| BigInt::from(b).pow(n as u32);
        let (i, iii) = match class {
            FieldClass::Generic => (BigInt::one(), pw(2)),
            FieldClass::Gauss => (BigInt::from(3), 3 * pw(2)),
            FieldClass::Eisenstein => (BigInt::from(5), 2 * pw(3)),
        };
        VAssemblyWeights { type_i: i, type_ii: pw(4), type_iii_iv_v: iii }
    }
}

/// Leading term `vol * k^n / n!` of the dimension of weight-`k` cusp forms.
pub fn dimension_leading(vol: &Real, n: u64, k: u64) -> Result<Real> {
    if k == 0 {
        return Err(Error::Input("k must be at least 1".into()));
    }
    let wp = vol.prec() + 16;
    Ok((vol.with_prec(wp) * Real::from_int(k, wp).pow(n) / factorial_real(n, wp)).with_prec(vol.prec()))
}

/// Sign of `W` at one point of a scan.
#[derive(Clone, Debug)]
struct Probe {
    x: u64,
    w: Real,
    prec: u32,
}

fn probe<F>(x: u64, prec: u32, eval: &F) -> Result<Probe>
where
    F: Fn(u64, u32) -> Result<Real>,
{
    let mut p = prec;
    for _ in 0..=RETRIES {
        let w = eval(x, p)?;
        if !w.contains_zero() {
            return Ok(Probe { x, w, prec: p });
        }
        p *= 2;
    }
    let w = eval(x, p)?;
    Ok(Probe { x, w, prec: p })
}

struct ScanOutcome {
    /// Last `x` whose `W` is not certified negative.
    last_fail: Option<u64>,
    probes: Vec<Probe>,
}

impl ScanOutcome {
    fn w_at(&self, x: u64) -> Option<&Real> {
        self.probes.iter().find(|p| p.x == x).map(|p| &p.w)
    }

    fn max_prec(&self) -> u32 {
        self.probes.iter().map(|p| p.prec).max().unwrap_or(0)
    }
}

fn scan<F>(lo: u64, hi: u64, prec: u32, eval: F) -> Result<ScanOutcome>
where
    F: Fn(u64, u32) -> Result<Real> + Sync + Send,
{
    let probes: Vec<Probe> = par::map((lo..=hi).collect(), |x| probe(x, prec, &eval)).into_iter().collect::<Result<_>>()?;
    let last_fail = probes.iter().filter(|p| !p.w.is_negative()).map(|p| p.x).max();
    Ok(ScanOutcome { last_fail, probes })
}

/// Fills shared caches before a parallel scan so workers do not contend.
fn warm(max_fact: u64, prec: u32) {
    let _ = factorial_real(max_fact, prec + 64);
    let _ = pi(prec + 64);
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    pub field_class: FieldClass,
    pub parity: Option<Parity>,
    pub a: u64,
    /// Last failing parameter; `W < 0` for every parameter above it up to `cap`.
    pub threshold: u64,
    /// `W` at `threshold + 1`.
    pub margin: Real,
    pub cap: u64,
    pub precision_bits: u32,
    pub bound: String,
}

/// Smallest `m0` with `W(L,F,a) < 0` certified for every `m` in `(m0, cap]`,
/// using the bound `f/theta` with `theta = 1`.
pub fn find_m_threshold(class: FieldClass, parity: Parity, a: u64, cap: u64, prec: u32) -> Result<ThresholdResult> {
    if cap < 3 {
        return Err(Error::Input("search cap must be at least 3".into()));
    }
    if a == 0 {
        return Err(Error::Input("a must be a positive integer".into()));
    }
    warm(2 * cap + 1, prec);
    let out = scan(2, cap, prec, |m, p| {
        let n = parity.n_of(m);
        let v = f_bound(class, m, parity, None, p + 32)?;
        w_value(&v, class, n, a, p)
    })?;
    let m0 = out.last_fail.unwrap_or(1);
    if m0 >= cap {
        return Err(Error::Cap(format!("W not certified negative at m = {cap}; raise the cap")));
    }
    let bound = match parity {
        Parity::OddDim => "f_odd(m) with L(2m+1) >= zeta(4m+2)/zeta(2m+1), theta = 1",
        Parity::EvenDim => "f_even(m), theta = 1",
    };
    Ok(ThresholdResult {
        field_class: class,
        parity: Some(parity),
        a,
        threshold: m0,
        margin: out.w_at(m0 + 1).cloned().expect("probe present"),
        cap,
        precision_bits: out.max_prec(),
        bound: bound.into(),
    })
}

/// Smallest `n0` with `W(L,F,a) < 0` for every `n` in `(n0, cap]` under the
/// general bounds with `theta = 1`, both parities together.
pub fn uniform_n_threshold(class: FieldClass, a: u64, cap: u64, prec: u32) -> Result<ThresholdResult> {
    if cap < 4 {
        return Err(Error::Input("search cap must be at least 4".into()));
    }
    warm(cap + 2, prec);
    let out = scan(3, cap, prec, |n, p| {
        let v = v_upper_bound(&VBoundParams::new(class, n), p + 32)?;
        w_value(&v, class, n, a, p)
    })?;
    let n0 = out.last_fail.unwrap_or(2);
    if n0 >= cap {
        return Err(Error::Cap(format!("W not certified negative at n = {cap}; raise the cap")));
    }
    Ok(ThresholdResult {
        field_class: class,
        parity: None,
        a,
        threshold: n0,
        margin: out.w_at(n0 + 1).cloned().expect("probe present"),
        cap,
        precision_bits: out.max_prec(),
        bound: "f_odd / f_even by parity of n, theta = 1".into(),
    })
}

/// Discriminants `D0` of fields `F0` admitted in the unramified square-free
/// setting: square-free, `D0 = 3 mod 4`, `D0 >= 7`.
pub fn is_admissible_d0(d0: u64) -> bool {
    if d0 < 7 || d0 % 4 != 3 {
        return false;
    }
    let mut k = 3u64;
    while k * k <= d0 {
        if d0 % (k * k) == 0 {
            return false;
        }
        k += 2;
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct UnramSqfreeReport {
    /// Last failing `n` with `D0 = 7`; `W < 0` on `(n_threshold, n_cap]`.
    pub n_threshold: u64,
    pub n_margin: Real,
    /// Last failing even `n` with `D0 = 7`.
    pub even_n_threshold: u64,
    /// Last failing odd `n`; these carry no power of `D0`.
    pub odd_n_threshold: u64,
    /// Largest integer `D0` for which `W < 0` is not certified at some even
    /// `n` in `[4, n_cap]`; every larger `D0` gives `W < 0` for all of them.
    pub d0_threshold: u64,
    /// Even `n` attaining `d0_threshold`.
    pub d0_threshold_at_n: u64,
    /// Approximate supremum of the critical `D0` over even `n`.
    pub d0_sup_approx: f64,
    /// Largest failing integer `D0` at `n = 4`.
    pub d0_at_n4: u64,
    pub largest_failing_admissible_d0: Option<u64>,
    pub n_cap: u64,
    pub precision_bits: u32,
}

/// `Y` with `W < 0` iff `D^(4m+1) > Y` for `n = 2m` in the sharp bound, `D(L) = 1`.
fn critical_d_power(m: u64, a: u64, prec: u32) -> Result<Real> {
    let wp = prec + 32;
    let n = 2 * m;
    let poly = Real::from_int(class_polynomial(FieldClass::Generic, m, Parity::OddDim), wp);
    let x = poly * pi(wp).mul_pow2(1).pow(2 * m + 1).mul_pow2(1) / (factorial_real(2 * m, wp) * l_lower_bound(2 * m + 1, wp));
    let rhs = bigness_rhs(FieldClass::Generic, n, a, wp)?;
    let r = x / rhs;
    Ok((&r * &r).with_prec(prec))
}

/// Largest integer `D >= 1` with `D^e > Y` not certified, and the real root
/// `Y^(1/e)` as a float.
fn max_failing_d(y: &Real, e: u64, prec: u32) -> (u64, f64) {
    let root = (y.log2_mid() / e as f64).exp2();
    let fails = |d: u64| !y.certainly_lt(&Real::from_int(d, prec).pow(e));
    let mut d = (root.floor() as u64).saturating_add(2).max(1);
    while d > 1 && !fails(d) {
        d -= 1;
    }
    while fails(d + 1) {
        d += 1;
    }
    (if fails(d) { d } else { 0 }, root)
}

/// Thresholds in `n` and `D0` for unramified square-free lattices under the
/// sharp bound with `D(L) = 1` and the uniform lower bound for `L(2m+1)`.
pub fn unram_sqfree_thresholds(n_cap: u64, prec: u32) -> Result<UnramSqfreeReport> {
    if n_cap < 5 {
        return Err(Error::Input("n cap must be at least 5".into()));
    }
    warm(n_cap + 2, prec);
    let eval = |n: u64, p: u32| {
        let mut params = VBoundParams::new(FieldClass::Generic, n);
        params.sharp = true;
        params.disc = Some(7);
        let v = v_upper_bound(&params, p + 32)?;
        w_value(&v, FieldClass::Generic, n, 1, p)
    };
    let out = scan(3, n_cap, prec, eval)?;
    let n0 = out.last_fail.unwrap_or(2);
    if n0 >= n_cap {
        return Err(Error::Cap(format!("W not certified negative at n = {n_cap}")));
    }
    let fails = |odd: bool| out.probes.iter().filter(|p| (p.x % 2 == 1) == odd && !p.w.is_negative()).map(|p| p.x).max().unwrap_or(0);

    let ms: Vec<u64> = (2..=n_cap / 2).collect();
    let crit: Vec<(u64, u64, f64)> = par::map(ms, |m| {
        critical_d_power(m, 1, prec).map(|y| {
            let (d, root) = max_failing_d(&y, 4 * m + 1, prec + 32);
            (2 * m, d, root)
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let &(arg, d0_threshold, _) = crit.iter().max_by_key(|c| (c.1, std::cmp::Reverse(c.0))).expect("non-empty range");
    let sup = crit.iter().map(|c| c.2).fold(0.0, f64::max);
    let largest = (7..=d0_threshold).rev().find(|&d| is_admissible_d0(d));
    Ok(UnramSqfreeReport {
        n_threshold: n0,
        n_margin: out.w_at(n0 + 1).cloned().expect("probe present"),
        even_n_threshold: fails(false),
        odd_n_threshold: fails(true),
        d0_threshold,
        d0_threshold_at_n: arg,
        d0_sup_approx: sup,
        d0_at_n4: crit[0].1,
        largest_failing_admissible_d0: largest,
        n_cap,
        precision_bits: out.max_prec(),
    })
}

/// `floor` of the upper endpoint: every integer above it is certainly above the value.
fn floor_hi(x: &Real) -> BigInt {
    x.hi().to_rational().floor().to_integer()
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeFrontierRow {
    pub m: u64,
    pub n: u64,
    /// The value `D(L)` has to exceed.
    pub critical: Real,
    /// Smallest integer `D(L)` certified to push the bound under the slope-`r` right-hand side.
    #[serde(with = "crate::bigser::int")]
    pub cutoff: BigInt,
}

/// For each `m`, the smallest `D(L)` making `f(m) / D(L)^(1/alpha)` fall under
/// the right-hand side with `a` replaced by the slope `r`. This is the
/// computable necessary condition behind finiteness of reflective lattices of
/// bounded slope, not the finiteness statement itself.
pub fn slope_finiteness_bound(
    class: FieldClass,
    parity: Parity,
    alpha: (u64, u64),
    r: (u64, u64),
    ms: &[u64],
    prec: u32,
) -> Result<Vec<SlopeFrontierRow>> {
    let (an, ad) = alpha;
    if an == 0 || ad == 0 || r.0 == 0 || r.1 == 0 {
        return Err(Error::Input("alpha and r must be positive".into()));
    }
    let wp = prec + 64;
    ms.iter()
        .map(|&m| {
            let n = parity.n_of(m);
            let f = f_bound(class, m, parity, None, wp)?;
            let rhs = bigness_rhs_ratio(class, n, r, wp)?;
            let ratio = f / rhs;
            // D(L)^(ad/an) > ratio  <=>  D(L) > ratio^(an/ad)
            let critical = if ratio.is_positive() {
                ratio.pow_ratio(an as i64, ad as u32)
            } else {
                return Err(Error::Precision("ratio enclosure not positive".into()));
            };
            let cutoff: BigInt = floor_hi(&critical) + 1;
            Ok::<_, Error>(SlopeFrontierRow { m, n, critical: critical.with_prec(prec), cutoff: cutoff.max(BigInt::one()) })
        })
        .collect()
}

/// `true` when `x` lies below `y` with both sides certified.
pub fn certified_below(x: &Real, y: &Real) -> bool {
    x.certainly_lt(y)
}

/// Exact rational version of `W < 0`, for testing the two phrasings against
/// each other where the right-hand side is rational.
pub fn w_negative_exact(v: &BigRational, class: FieldClass, n: u64, a: u64) -> Result<bool> {
    check_n(n)?;
    let (k, c) = class_consts(class);
    let base = BigRational::new(BigInt::from(a + k), BigInt::from(a));
    let rhs = num_traits::pow(base.recip(), (n - 1) as usize) * BigRational::new(BigInt::from(2 * c * a), BigInt::from(n));
    Ok((v - rhs).is_negative())
}

/// `gcd`-reduced `(num, den)` for a positive rational `alpha`.
pub fn reduce_ratio(num: u64, den: u64) -> (u64, u64) {
    let g = num.gcd(&den).max(1);
    (num / g, den / g)
}
