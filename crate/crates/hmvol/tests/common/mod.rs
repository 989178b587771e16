//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use hmvol::hlattice::{build_lattice, diagonal, HermitianLattice};
use hmvol::qfield::{make_field, ImaginaryQuadraticField, QuadInt};
use rand::Rng;

/// `F_{q^2}` for prime `q`, elements `a + b t` with `t^2 = c0 + c1 t`.
#[derive(Clone, Copy)]
pub struct Fq2 {
    pub q: u64,
    c0: u64,
    c1: u64,
}

pub type E = (u64, u64);

impl Fq2 {
    pub fn new(q: u64) -> Self {
        // Find an irreducible t^2 - c1 t - c0 by brute force.
        for c0 in 0..q {
            for c1 in 0..q {
                let has_root = (0..q).any(|x| (x * x + q * q - c1 * x % q - c0) % q == 0);
                if !has_root {
                    return Fq2 { q, c0, c1 };
                }
            }
        }
        unreachable!()
    }

    pub fn elements(&self) -> Vec<E> {
        (0..self.q).flat_map(|a| (0..self.q).map(move |b| (a, b))).collect()
    }

    pub fn add(&self, x: E, y: E) -> E {
        ((x.0 + y.0) % self.q, (x.1 + y.1) % self.q)
    }

    pub fn mul(&self, x: E, y: E) -> E {
        let q = self.q;
        let bb = x.1 * y.1 % q;
        let a = (x.0 * y.0 + bb * self.c0) % q;
        let b = (x.0 * y.1 + x.1 * y.0 + bb * self.c1) % q;
        (a, b)
    }

    /// Frobenius `x -> x^q`.
    pub fn conj(&self, x: E) -> E {
        let mut r = (1, 0);
        for _ in 0..self.q {
            r = self.mul(r, x);
        }
        r
    }
}

fn all_matrices<T: Copy>(alphabet: &[T], n: usize) -> Vec<Vec<Vec<T>>> {
    let mut out = vec![vec![]];
    for _ in 0..n * n {
        out = out.into_iter().flat_map(|m: Vec<T>| alphabet.iter().map(move |&x| {
            let mut m = m.clone();
            m.push(x);
            m
        })).collect();
    }
    out.into_iter().map(|flat| flat.chunks(n).map(|r| r.to_vec()).collect()).collect()
}

fn det_mod(m: &[Vec<u64>], q: u64) -> u64 {
    match m.len() {
        1 => m[0][0] % q,
        2 => (m[0][0] * m[1][1] % q + q - m[0][1] * m[1][0] % q) % q,
        _ => unimplemented!("small cases only"),
    }
}

/// `|GL_n(F_q)|` by enumeration.
pub fn brute_gl(n: usize, q: u64) -> u64 {
    let f: Vec<u64> = (0..q).collect();
    all_matrices(&f, n).iter().filter(|m| det_mod(m, q) != 0).count() as u64
}

/// `|U_n(F_q)|`: matrices over `F_{q^2}` with `A^* A = I`.
pub fn brute_u(n: usize, q: u64) -> u64 {
    let f = Fq2::new(q);
    let els = f.elements();
    all_matrices(&els, n)
        .iter()
        .filter(|a| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    let s = (0..n).fold((0, 0), |acc, k| f.add(acc, f.mul(f.conj(a[k][i]), a[k][j])));
                    s == if i == j { (1, 0) } else { (0, 0) }
                })
            })
        })
        .count() as u64
}

/// `|Sp_n(F_q)|`: matrices with `A^T J A = J` for the standard alternating `J`.
pub fn brute_sp(n: usize, q: u64) -> u64 {
    assert!(n % 2 == 0);
    let k = n / 2;
    let j = |r: usize, c: usize| -> u64 {
        if c == r + k {
            1
        } else if r == c + k {
            q - 1
        } else {
            0
        }
    };
    let f: Vec<u64> = (0..q).collect();
    all_matrices(&f, n)
        .iter()
        .filter(|a| {
            (0..n).all(|r| {
                (0..n).all(|c| {
                    let mut s = 0;
                    for x in 0..n {
                        for y in 0..n {
                            s += a[x][r] * j(x, y) % q * a[y][c];
                        }
                    }
                    s % q == j(r, c)
                })
            })
        })
        .count() as u64
}

pub fn qi(a: i64, b: i64) -> QuadInt {
    QuadInt::new(a, b)
}

/// Random element of `GL_r(O_F)` as a product of elementary moves, unit
/// scalings and swaps.
pub fn random_unimodular<R: Rng>(f: &ImaginaryQuadraticField, r: usize, rng: &mut R) -> Vec<Vec<QuadInt>> {
    let mut u: Vec<Vec<QuadInt>> = (0..r).map(|i| (0..r).map(|j| if i == j { QuadInt::one() } else { QuadInt::zero() }).collect()).collect();
    let units = f.units();
    for _ in 0..3 * r {
        match rng.gen_range(0..3) {
            0 => {
                let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
                if i == j {
                    continue;
                }
                let c = qi(rng.gen_range(-2..=2), rng.gen_range(-1..=1));
                // column j += c * column i
                for row in u.iter_mut() {
                    let add = f.mul(&row[i], &c);
                    row[j] = f.add(&row[j], &add);
                }
            }
            1 => {
                let i = rng.gen_range(0..r);
                let e = &units[rng.gen_range(0..units.len())];
                for row in u.iter_mut() {
                    row[i] = f.mul(&row[i], e);
                }
            }
            _ => {
                let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
                for row in u.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
    }
    u
}

fn hyperbolic_plus(f: &ImaginaryQuadraticField, rest: &[i64]) -> HermitianLattice {
    let r = 2 + rest.len();
    let mut g = vec![vec![QuadInt::zero(); r]; r];
    g[0][1] = QuadInt::one();
    g[1][0] = QuadInt::one();
    for (k, &x) in rest.iter().enumerate() {
        g[2 + k][2 + k] = QuadInt::int(x);
    }
    build_lattice(f, g).unwrap()
}

/// Ten lattices over `Q(sqrt(-7))`, `Q(sqrt(-11))` and `Q(sqrt(-1))`.
pub fn jordan_corpus() -> Vec<HermitianLattice> {
    let f7 = make_field(7).unwrap();
    let f11 = make_field(11).unwrap();
    let f1 = make_field(1).unwrap();
    vec![
        diagonal(&f7, &[1, -1, -1, -1]).unwrap(),
        diagonal(&f7, &[1, -3, -5]).unwrap(),
        diagonal(&f7, &[1, -7, -1]).unwrap(),
        diagonal(&f7, &[3, -9, -1, -1]).unwrap(),
        diagonal(&f11, &[1, -1, -3]).unwrap(),
        diagonal(&f11, &[5, -25, -1]).unwrap(),
        hyperbolic_plus(&f11, &[-3, -1]),
        diagonal(&f1, &[1, -1, -2]).unwrap(),
        diagonal(&f1, &[1, -3, -9, -1]).unwrap(),
        hyperbolic_plus(&f1, &[-5]),
    ]
}

/// Lattices over fields `F0` (2 unramified, units `{+-1}`) that are unimodular
/// or unramified square-free, with candidate vectors to test.
pub fn pipeline_corpus() -> Vec<(HermitianLattice, Vec<Vec<QuadInt>>)> {
    let mut out = Vec::new();
    for d in [7i64, 11, 19, 43] {
        let f = make_field(d).unwrap();
        for entries in [vec![1, -1, -1], vec![1, -1, -1, -1, -1], vec![1, -1, -3], vec![1, -1, -1, -15], vec![1, -5, -1, -1], vec![1, -1, -1, -1, -1, -1, -1]] {
            let l = diagonal(&f, &entries).unwrap();
            let r = entries.len();
            let mut vs: Vec<Vec<QuadInt>> = (1..r).map(|i| unit(r, i, QuadInt::one())).collect();
            let mut v = unit(r, 1, QuadInt::one());
            v[2] = QuadInt::one();
            vs.push(v);
            out.push((l, vs));
        }
        out.push((hyperbolic_plus(&f, &[-1, -1]), vec![unit(4, 2, QuadInt::one()), unit(4, 3, QuadInt::one())]));
    }
    out
}

pub fn unit(r: usize, i: usize, x: QuadInt) -> Vec<QuadInt> {
    let mut v = vec![QuadInt::zero(); r];
    v[i] = x;
    v
}

use hmvol::criteria::{bigness_rhs, certified_below, w_value};
use hmvol::plocal::{check_heart_for_vector, check_star, condition_p, elementary_divisor_profile, recognize_shape, Verdict};
use hmvol::qfield::{FieldClass, SplitClass};
use hmvol::specfun::Real;
use hmvol::volume::{lambda_ratio_upper, ratio_exact_candidates, ChoCase, RatioCase};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub struct Audit {
    pub rows: usize,
    pub violations: Vec<String>,
    /// Rows where some exact value meets the table bound.
    pub tight: usize,
}

/// Compares group-order ratios against the table upper bounds.
pub fn ratio_audit(prec: u32) -> Audit {
    let mut cases = Vec::new();
    for q in [2u64, 3, 5] {
        for class in [SplitClass::Inert, SplitClass::Split] {
            cases.push((q, RatioCase { class, nu_even: None, p_is_2: false, cho: ChoCase::NotApplicable }));
        }
        if q != 2 {
            for nu_even in [true, false] {
                cases.push((q, RatioCase { class: SplitClass::Ramified, nu_even: Some(nu_even), p_is_2: false, cho: ChoCase::NotApplicable }));
            }
        }
    }
    let mut audit = Audit { rows: 0, violations: Vec::new(), tight: 0 };
    for (q, case) in cases {
        for n in 2..=8u64 {
            for r in 1..=n + 1 {
                let up = lambda_ratio_upper(case, q, n, r, prec).unwrap();
                let exact = ratio_exact_candidates(case, q, n, r, prec).unwrap();
                audit.rows += 1;
                let mut tight = false;
                for e in &exact {
                    if up.certainly_lt(e) {
                        audit.violations.push(format!("{case:?} q={q} n={n} r={r}: {} > {}", e.to_sci(12), up.to_sci(12)));
                    }
                    tight |= e.overlaps(&up);
                }
                audit.tight += tight as usize;
            }
        }
    }
    audit
}

pub type Multiset = Vec<(u64, Vec<(u32, usize)>)>;

pub fn profiles(l: &HermitianLattice) -> Multiset {
    l.bad_primes()
        .unwrap()
        .into_iter()
        .map(|p| {
            let mut b = elementary_divisor_profile(l, p).unwrap().blocks;
            b.sort();
            (p, b)
        })
        .collect()
}

/// Applies `trials` random base changes to each corpus lattice; returns the
/// number of checks and any mismatches.
pub fn jordan_invariance(trials: usize, seed: u64) -> (usize, Vec<String>) {
    let mut checks = 0;
    let mut bad = Vec::new();
    for k in 0..jordan_corpus().len() {
        let (c, b) = jordan_invariance_one(k, trials, seed.wrapping_add(k as u64));
        checks += c;
        bad.extend(b);
    }
    (checks, bad)
}

/// Same check for corpus lattice `k` alone.
pub fn jordan_invariance_one(k: usize, trials: usize, seed: u64) -> (usize, Vec<String>) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let l = &jordan_corpus()[k];
    let mut checks = 0;
    let mut bad = Vec::new();
    let base = profiles(l);
    for (p, b) in &base {
        let total: usize = b.iter().map(|x| x.1).sum();
        if total != l.rank() {
            bad.push(format!("lattice {k} p={p}: ranks sum to {total}"));
        }
    }
    for t in 0..trials {
        let u = random_unimodular(&l.field, l.rank(), &mut rng);
        let l2 = l.change_basis(&u);
        assert_eq!(l2.determinant().abs(), l.determinant().abs());
        checks += 1;
        if profiles(&l2) != base {
            bad.push(format!("lattice {k} trial {t}: {:?} vs {:?}", profiles(&l2), base));
        }
    }
    (checks, bad)
}

pub struct PipelineOutcome {
    pub lattices: usize,
    pub vectors: usize,
    pub failures: Vec<String>,
}

pub fn pipeline() -> PipelineOutcome {
    let mut out = PipelineOutcome { lattices: 0, vectors: 0, failures: Vec::new() };
    for (l, vs) in pipeline_corpus() {
        let shape = recognize_shape(&l).unwrap();
        if !(shape.unimodular || shape.unramified_square_free) {
            continue;
        }
        out.lattices += 1;
        let tag = format!("d={} det={}", l.field.d, l.determinant());
        if check_star(&l).unwrap().overall != Verdict::True {
            out.failures.push(format!("{tag}: star"));
        }
        if !condition_p(&l, 1.0).unwrap() {
            out.failures.push(format!("{tag}: P(1)"));
        }
        for v in vs {
            if !l.classify_reflective(&v).unwrap().is_reflective() {
                continue;
            }
            out.vectors += 1;
            if check_heart_for_vector(&l, &v).unwrap().holds != Verdict::True {
                out.failures.push(format!("{tag}: heart at {v:?}"));
            }
        }
    }
    out
}

/// Independent rational evaluation of the right-hand side.
pub fn rhs_exact(class: FieldClass, n: u64, a: u64) -> BigRational {
    let (k, c) = match class {
        FieldClass::Generic => (1u64, 1u64),
        FieldClass::Gauss => (3, 2),
        FieldClass::Eisenstein => (5, 3),
    };
    let mut r = BigRational::new(BigInt::from(2 * c * a), BigInt::from(n));
    let f = BigRational::new(BigInt::from(a), BigInt::from(a + k));
    for _ in 0..n - 1 {
        r *= &f;
    }
    r
}

/// `W < 0` against `V < rhs` on random tuples; returns mismatches.
pub fn identity_check(count: usize, seed: u64, prec: u32) -> Vec<String> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let classes = [FieldClass::Generic, FieldClass::Gauss, FieldClass::Eisenstein];
    let mut bad = Vec::new();
    for i in 0..count {
        let class = classes[rng.gen_range(0..3)];
        let n = rng.gen_range(3..=120u64);
        let a = rng.gen_range(1..=10u64);
        let exact = rhs_exact(class, n, a);
        let scale = BigRational::new(BigInt::from(rng.gen_range(1..=2000i64)), BigInt::from(1000));
        let v = &exact * scale;
        let vr = Real::from_rational(&v, prec);
        let w = w_value(&vr, class, n, a, prec).unwrap();
        let rhs = bigness_rhs(class, n, a, prec).unwrap();
        let truth = v < exact;
        let w_neg = w.is_negative();
        let below = certified_below(&vr, &rhs);
        if v == exact {
            if w_neg || below || !w.contains_zero() {
                bad.push(format!("tuple {i}: equality case misreported"));
            }
            continue;
        }
        if w_neg != truth || below != truth {
            bad.push(format!("tuple {i}: {class:?} n={n} a={a} truth={truth} w<0={w_neg} V<rhs={below}"));
        }
    }
    bad
}

/// `sum_{k<=N} k^(-s)` plus the integral tail with its half-term correction.
pub fn zeta_series(s: u32, terms: u64) -> f64 {
    let sf = s as f64;
    let mut acc = 0.0;
    for k in (1..=terms).rev() {
        acc += (k as f64).powf(-sf);
    }
    let nf = terms as f64;
    acc + nf.powf(1.0 - sf) / (sf - 1.0) - 0.5 * nf.powf(-sf)
}

pub fn positive(x: &Real) -> bool {
    x.is_positive()
}

pub fn one() -> BigRational {
    BigRational::one()
}

pub fn abs_rat(x: &BigRational) -> BigRational {
    x.abs()
}

// Log-space f64 model of the threshold scans, written from the formulas and
// sharing no code with the library. Margins near the thresholds are O(1) in
// log scale, far above f64 error.

fn ln_fact(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn zeta_f64(s: u64) -> f64 {
    let sf = s as f64;
    let mut acc = 0.0;
    for k in (1..=2000u64).rev() {
        acc += (k as f64).powf(-sf);
    }
    acc + 2000f64.powf(1.0 - sf) / (sf - 1.0) - 0.5 * 2000f64.powf(-sf)
}

/// `ln` of the class polynomial.
fn ln_poly(class: FieldClass, m: u64, odd_dim: bool) -> f64 {
    let ln2 = 2f64.ln();
    let (e1, e2) = if odd_dim { (4 * m + 1, 8 * m + 2) } else { (4 * m - 1, 8 * m - 2) };
    let top = e2 as f64 * ln2;
    let r = |e: u64| (-(e as f64) * ln2).exp();
    match class {
        FieldClass::Generic => top + (1.0 + r(e2 - e1) + r(e2)).ln(),
        FieldClass::Gauss => {
            let lead = if odd_dim { ln2 } else { 0.0 };
            lead + top + (1.0 + 3.0 * r(e2 - e1) + 3.0 * r(e2)).ln()
        }
        FieldClass::Eisenstein => {
            let lead = if odd_dim { 3f64.ln() } else { 0.0 };
            let t = (0.75f64).powi(e1 as i32);
            lead + top + (1.0 + 2.0 * t + 5.0 * r(e2)).ln()
        }
    }
}

fn ln_rhs(class: FieldClass, n: u64) -> f64 {
    let (k, c) = match class {
        FieldClass::Generic => (1.0, 1.0),
        FieldClass::Gauss => (3.0, 2.0),
        FieldClass::Eisenstein => (5.0, 3.0),
    };
    (2.0 * c / n as f64).ln() + (1.0 - n as f64) * (1.0f64 + k).ln()
}

/// `ln f_F(m) - ln rhs(n)` with `a = 1`, `theta = 1`.
pub fn ln_gap(class: FieldClass, m: u64, odd_dim: bool) -> f64 {
    let l2pi = (2.0 * std::f64::consts::PI).ln();
    let ln_f = if odd_dim {
        let l_low = zeta_f64(4 * m + 2) / zeta_f64(2 * m + 1);
        96f64.ln() + (2 * m + 1) as f64 * l2pi - ln_fact(2 * m) - l_low.ln()
    } else {
        (2.0 * m as f64 + 2.5) * 2f64.ln() + 3f64.ln() + (2 * m) as f64 * l2pi - ln_fact(2 * m - 1) - zeta_f64(2 * m).ln()
    };
    let n = if odd_dim { 2 * m } else { 2 * m - 1 };
    ln_f + ln_poly(class, m, odd_dim) - ln_rhs(class, n)
}

pub fn oracle_m_threshold(class: FieldClass, odd_dim: bool, cap: u64) -> u64 {
    (2..=cap).filter(|&m| ln_gap(class, m, odd_dim) >= 0.0).max().unwrap_or(1)
}

pub fn oracle_uniform_n(class: FieldClass, cap: u64) -> u64 {
    (3..=cap)
        .filter(|&n| {
            if n % 2 == 0 {
                ln_gap(class, n / 2, true) >= 0.0
            } else {
                ln_gap(class, (n + 1) / 2, false) >= 0.0
            }
        })
        .max()
        .unwrap_or(2)
}

/// Sharp unramified square-free display with `D(L) = 1`, generic class:
/// `ln V - ln rhs` before the `D^(2m+1/2)` division (even `n = 2m`), or the
/// whole gap (odd `n = 2m - 1`).
pub fn ln_sharp_gap(n: u64) -> f64 {
    let l2pi = (2.0 * std::f64::consts::PI).ln();
    if n % 2 == 0 {
        let m = n / 2;
        let l_low = zeta_f64(4 * m + 2) / zeta_f64(2 * m + 1);
        ln_poly(FieldClass::Generic, m, true) + 2f64.ln() + (2 * m + 1) as f64 * l2pi - ln_fact(2 * m) - l_low.ln()
            - ln_rhs(FieldClass::Generic, n)
    } else {
        let m = (n + 1) / 2;
        ln_poly(FieldClass::Generic, m, true) + (2 * m) as f64 * l2pi - ln_fact(2 * m - 1) - zeta_f64(2 * m).ln()
            - ln_rhs(FieldClass::Generic, n)
    }
}

/// Largest `D` (real) for which the even-`n` sharp bound still fails.
pub fn sharp_d_sup(n: u64) -> f64 {
    let m = n / 2;
    (ln_sharp_gap(n) / (2.0 * m as f64 + 0.5)).exp()
}
