//! Hermitian lattices given by an exact Gram matrix over `O_F`.
//!
//! The form is `h(x, y) = x^T G conj(y)`, linear in the first argument, with
//! `G[i][j] = h(e_i, e_j)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inertia, smith_invariants, IntMatrix};
use crate::qfield::{factorize, FieldClass, ImaginaryQuadraticField, QuadInt, SplitClass};

pub type Vector = Vec<QuadInt>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianLattice {
    pub field: ImaginaryQuadraticField,
    pub gram: Vec<Vec<QuadInt>>,
    /// Number of positive and negative directions of the complex form.
    pub signature: (usize, usize),
    /// `n` in signature `(1, n)`; equals `rank - 1` regardless of validity.
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGroupData {
    /// Abelian invariants of `A_L` as a Z-module, each > 1.
    #[serde(with = "crate::bigser::vec_int")]
    pub invariant_factors: Vec<BigInt>,
    /// `D(L)`, the largest invariant factor (1 for trivial `A_L`).
    #[serde(with = "crate::bigser::int")]
    pub exponent: BigInt,
    /// `p -> length of (A_L)_p` as an `O_F`-module.
    pub p_lengths: BTreeMap<u64, u32>,
    /// `p -> v_p(D(L))`.
    pub exponent_valuations: BTreeMap<u64, u32>,
}

impl DiscriminantGroupData {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaReading {
    /// Product of primes dividing `D * det(L)`.
    Union,
    /// Product of primes dividing both `D` and `det(L)`.
    Intersection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subtype {
    I,
    II,
    III,
    IV,
    V,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReflectiveClass {
    /// Branch index, `None` when the vector is not reflective.
    pub index: Option<u8>,
    pub subtype: Subtype,
    pub split: bool,
}

impl ReflectiveClass {
    fn of(index: u8, subtype: Subtype, split: bool) -> Self {
        ReflectiveClass { index: Some(index), subtype, split }
    }

    pub fn not_reflective() -> Self {
        ReflectiveClass { index: None, subtype: Subtype::None, split: false }
    }

    pub fn is_reflective(&self) -> bool {
        self.index.is_some()
    }
}

fn is_hermitian(f: &ImaginaryQuadraticField, g: &[Vec<QuadInt>]) -> Result<()> {
    let r = g.len();
    for (i, row) in g.iter().enumerate() {
        if row.len() != r {
            return Err(Error::Input(format!("row {i} has {} entries, expected {r}", row.len())));
        }
    }
    for i in 0..r {
        for j in 0..r {
            if g[j][i] != f.conj(&g[i][j]) {
                return Err(Error::Input(format!("gram[{j}][{i}] is not the conjugate of gram[{i}][{j}]")));
            }
        }
    }
    Ok(())
}

/// Builds a lattice and requires signature `(1, n)`.
pub fn validate_lattice(field: &ImaginaryQuadraticField, gram: Vec<Vec<QuadInt>>) -> Result<HermitianLattice> {
    let l = build_lattice(field, gram)?;
    if l.signature != (1, l.n) {
        return Err(Error::Input(format!("signature is {:?}, expected (1, {})", l.signature, l.n)));
    }
    Ok(l)
}

/// Builds a lattice with any nondegenerate-or-not signature, for inspection.
pub fn build_lattice(field: &ImaginaryQuadraticField, gram: Vec<Vec<QuadInt>>) -> Result<HermitianLattice> {
    if gram.is_empty() {
        return Err(Error::Input("empty gram matrix".into()));
    }
    is_hermitian(field, &gram)?;
    let t = trace_form(field, &gram);
    let q: Vec<Vec<BigRational>> =
        t.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let (p, m, _) = inertia(&q);
    let n = gram.len() - 1;
    Ok(HermitianLattice { field: field.clone(), gram, signature: (p / 2, m / 2), n })
}

/// Gram matrix of `Tr_{F/Q} h` on the Z-basis `e_0, w e_0, e_1, w e_1, ...`.
pub fn trace_form(f: &ImaginaryQuadraticField, g: &[Vec<QuadInt>]) -> IntMatrix {
    let r = g.len();
    let basis = [QuadInt::one(), f.omega()];
    let mut t = vec![vec![BigInt::zero(); 2 * r]; 2 * r];
    for i in 0..r {
        for j in 0..r {
            for (s, bs) in basis.iter().enumerate() {
                for (u, bu) in basis.iter().enumerate() {
                    let v = f.mul(&f.mul(bs, &g[i][j]), &f.conj(bu));
                    t[2 * i + s][2 * j + u] = f.trace(&v);
                }
            }
        }
    }
    t
}

/// Z-matrix of multiplication by `x` on `O_F` in the basis `(1, w)`.
fn mult_matrix(f: &ImaginaryQuadraticField, x: &QuadInt) -> [[BigInt; 2]; 2] {
    let c0 = x.clone();
    let c1 = f.mul(x, &f.omega());
    [[c0.a, c1.a], [c0.b, c1.b]]
}

impl HermitianLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_signature_1n(&self) -> bool {
        self.signature == (1, self.n)
    }

    /// `h(x, y)`.
    pub fn inner(&self, x: &[QuadInt], y: &[QuadInt]) -> QuadInt {
        let f = &self.field;
        let mut s = QuadInt::zero();
        for i in 0..self.rank() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.rank() {
                if y[j].is_zero() {
                    continue;
                }
                s = f.add(&s, &f.mul(&f.mul(&x[i], &self.gram[i][j]), &f.conj(&y[j])));
            }
        }
        s
    }

    /// Integer norm `h(x, x)`.
    pub fn norm(&self, x: &[QuadInt]) -> BigInt {
        let v = self.inner(x, x);
        debug_assert!(v.is_rational());
        v.a
    }

    /// Exact determinant of the Gram matrix (an integer).
    pub fn determinant(&self) -> BigInt {
        let d = det_quadint(&self.field, &self.gram);
        debug_assert!(d.is_rational(), "Hermitian determinant must be rational");
        d.a
    }

    /// Gram matrix in the basis `e'_k = sum_i u[i][k] e_i`.
    pub fn change_basis(&self, u: &[Vec<QuadInt>]) -> HermitianLattice {
        let r = self.rank();
        let cols: Vec<Vector> = (0..r).map(|k| (0..r).map(|i| u[i][k].clone()).collect()).collect();
        let gram = (0..r).map(|a| (0..r).map(|b| self.inner(&cols[a], &cols[b])).collect()).collect();
        HermitianLattice { field: self.field.clone(), gram, signature: self.signature, n: self.n }
    }

    /// Z-matrix of `x -> G^T x` on `O_F^(n+1)`; its cokernel is `L^v / L`.
    pub fn dual_quotient_matrix(&self) -> IntMatrix {
        let r = self.rank();
        let mut m = vec![vec![BigInt::zero(); 2 * r]; 2 * r];
        for i in 0..r {
            for j in 0..r {
                let b = mult_matrix(&self.field, &self.gram[j][i]);
                for s in 0..2 {
                    for t in 0..2 {
                        m[2 * i + s][2 * j + t] = b[s][t].clone();
                    }
                }
            }
        }
        m
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroupData> {
        let det = self.determinant();
        if det.is_zero() {
            return Err(Error::Input("degenerate lattice".into()));
        }
        let inv: Vec<BigInt> =
            smith_invariants(&self.dual_quotient_matrix()).into_iter().filter(|d| !d.is_one()).collect();
        let exponent = inv.last().cloned().unwrap_or_else(BigInt::one);
        let mut p_lengths = BTreeMap::new();
        let mut exponent_valuations = BTreeMap::new();
        for (p, _) in factorize(&det)? {
            let bp = BigInt::from(p);
            let mut total = 0u32;
            for d in &inv {
                let mut x = d.clone();
                while (&x % &bp).is_zero() {
                    x /= &bp;
                    total += 1;
                }
            }
            let len = match self.field.splitting_type(p)? {
                SplitClass::Inert => total / 2,
                _ => total,
            };
            p_lengths.insert(p, len);
            let mut e = 0;
            let mut x = exponent.clone();
            while (&x % &bp).is_zero() {
                x /= &bp;
                e += 1;
            }
            if e > 0 {
                exponent_valuations.insert(p, e);
            }
        }
        Ok(DiscriminantGroupData { invariant_factors: inv, exponent, p_lengths, exponent_valuations })
    }

    /// Product of the relevant primes under the chosen reading.
    pub fn theta(&self, reading: ThetaReading) -> Result<BigInt> {
        let det = self.determinant();
        let dp: Vec<u64> = factorize(&BigInt::from(self.field.disc))?.into_iter().map(|(p, _)| p).collect();
        let lp: Vec<u64> = if det.is_zero() { Vec::new() } else { factorize(&det)?.into_iter().map(|(p, _)| p).collect() };
        let mut ps: Vec<u64> = match reading {
            ThetaReading::Union => dp.iter().chain(lp.iter()).copied().collect(),
            ThetaReading::Intersection => dp.iter().copied().filter(|p| lp.contains(p)).collect(),
        };
        ps.sort();
        ps.dedup();
        Ok(ps.into_iter().fold(BigInt::one(), |a, p| a * p))
    }

    /// Primes dividing `D * det(L)`.
    pub fn bad_primes(&self) -> Result<Vec<u64>> {
        let t = self.theta(ThetaReading::Union)?;
        Ok(factorize(&t)?.into_iter().map(|(p, _)| p).collect())
    }

    pub fn is_primitive_vector(&self, v: &[QuadInt]) -> Result<bool> {
        if v.len() != self.rank() {
            return Err(Error::Input(format!("vector has {} coordinates, lattice rank is {}", v.len(), self.rank())));
        }
        let g = self.field.gcd(v)?;
        Ok(!g.is_zero() && self.field.is_unit(&g))
    }

    fn require_reflective_candidate(&self, l: &[QuadInt]) -> Result<()> {
        if !self.field.is_pid() {
            return Err(Error::Unsupported(format!("Q(sqrt(-{})) does not have class number one", self.field.d)));
        }
        if !self.is_primitive_vector(l)? {
            return Err(Error::Input("vector is not primitive".into()));
        }
        if !self.norm(l).is_negative() {
            return Err(Error::Input(format!("vector norm {} is not negative", self.norm(l))));
        }
        Ok(())
    }

    /// Basis of `{v in L : h(v, l) = 0}` as coordinate vectors.
    pub fn complement_basis(&self, l: &[QuadInt]) -> Result<Vec<Vector>> {
        self.require_reflective_candidate(l)?;
        let f = &self.field;
        let r = self.rank();
        // The functional v -> h(v, l) has coefficients c_i = h(e_i, l).
        let mut c: Vec<QuadInt> = (0..r).map(|i| self.inner(&unit_vector(r, i), l)).collect();
        // Columns of u; maintained so that c . u stays the transformed functional.
        let mut u: Vec<Vector> = (0..r).map(|k| unit_vector(r, k)).collect();
        if c[0].is_zero() {
            if let Some(k) = (1..r).find(|&k| !c[k].is_zero()) {
                c.swap(0, k);
                u.swap(0, k);
            }
        }
        for k in 1..r {
            if c[k].is_zero() {
                continue;
            }
            let (g, co) = bezout(f, &[c[0].clone(), c[k].clone()])?;
            let (x, y) = (&co[0], &co[1]);
            let a = f.div_exact(&c[0], &g).expect("gcd divides");
            let b = f.div_exact(&c[k], &g).expect("gcd divides");
            // [x -b; y a] has determinant x a + y b = 1.
            let new0: Vector = (0..r).map(|i| f.add(&f.mul(x, &u[0][i]), &f.mul(y, &u[k][i]))).collect();
            let newk: Vector = (0..r).map(|i| f.sub(&f.mul(&a, &u[k][i]), &f.mul(&b, &u[0][i]))).collect();
            u[0] = new0;
            u[k] = newk;
            c[0] = g;
            c[k] = QuadInt::zero();
        }
        Ok(u.into_iter().skip(1).collect())
    }

    /// `K_l = l^perp ∩ L` with its induced Gram matrix.
    pub fn orthogonal_complement(&self, l: &[QuadInt]) -> Result<HermitianLattice> {
        let basis = self.complement_basis(l)?;
        let gram = basis.iter().map(|a| basis.iter().map(|b| self.inner(a, b)).collect()).collect();
        build_lattice(&self.field, gram)
    }

    /// Generators of `Div(l)` and `I_l = h(l,l) Div(l)^-1`.
    pub fn div_and_i(&self, l: &[QuadInt]) -> Result<(QuadInt, QuadInt)> {
        self.require_reflective_candidate(l)?;
        let f = &self.field;
        let r = self.rank();
        let pairings: Vec<QuadInt> = (0..r).map(|i| self.inner(&unit_vector(r, i), l)).collect();
        let div = f.gcd(&pairings)?;
        let ll = QuadInt::int(self.norm(l));
        let i = f.div_exact(&ll, &div).ok_or_else(|| Error::Input("Div(l) does not divide h(l,l)".into()))?;
        Ok((div, f.canonical_associate(&i)))
    }

    pub fn classify_reflective(&self, l: &[QuadInt]) -> Result<ReflectiveClass> {
        let (_, i) = self.div_and_i(l)?;
        Ok(classify_ideal(&self.field, &i))
    }

    /// Block sum `<h(l,l)> ⊕ K_l`.
    pub fn split_sublattice(&self, l: &[QuadInt]) -> Result<HermitianLattice> {
        let k = self.orthogonal_complement(l)?;
        let r = self.rank();
        let mut gram = vec![vec![QuadInt::zero(); r]; r];
        gram[0][0] = QuadInt::int(self.norm(l));
        for i in 0..r - 1 {
            for j in 0..r - 1 {
                gram[i + 1][j + 1] = k.gram[i][j].clone();
            }
        }
        build_lattice(&self.field, gram)
    }
}

/// Reflective type determined by the generator of `I_l`.
pub fn classify_ideal(f: &ImaginaryQuadraticField, i: &QuadInt) -> ReflectiveClass {
    let two = QuadInt::int(2);
    let nrm = f.norm(i);
    let is_unit = nrm.is_one();
    let is_two = f.associated(i, &two);
    let is_norm_two = nrm == BigInt::from(2);
    match f.class() {
        FieldClass::Gauss => {
            if is_two {
                ReflectiveClass::of(2, Subtype::II, false)
            } else if is_unit {
                ReflectiveClass::of(4, Subtype::I, true)
            } else if is_norm_two {
                ReflectiveClass::of(4, Subtype::II, false)
            } else {
                ReflectiveClass::not_reflective()
            }
        }
        FieldClass::Eisenstein => {
            // sqrt(-3) = 2w - 1
            if is_two {
                ReflectiveClass::of(2, Subtype::II, false)
            } else if f.associated(i, &QuadInt::new(-1, 2)) {
                ReflectiveClass::of(3, Subtype::None, false)
            } else if is_unit {
                ReflectiveClass::of(6, Subtype::I, true)
            } else {
                ReflectiveClass::not_reflective()
            }
        }
        FieldClass::Generic => {
            if is_unit {
                return ReflectiveClass::of(2, Subtype::I, true);
            }
            if is_two {
                return ReflectiveClass::of(2, Subtype::II, false);
            }
            if is_norm_two {
                if f.disc % 4 == 0 {
                    return ReflectiveClass::of(2, Subtype::III, false);
                }
                if f.disc % 8 == 7 {
                    let sub = if f.prime_above_two_index(i) == Some(1) { Subtype::IV } else { Subtype::V };
                    return ReflectiveClass::of(2, sub, false);
                }
            }
            ReflectiveClass::not_reflective()
        }
    }
}

pub fn unit_vector(r: usize, i: usize) -> Vector {
    (0..r).map(|k| if k == i { QuadInt::one() } else { QuadInt::zero() }).collect()
}

/// Fraction-free determinant over `O_F` (Bareiss).
pub fn det_quadint(f: &ImaginaryQuadraticField, m: &[Vec<QuadInt>]) -> QuadInt {
    let n = m.len();
    if n == 0 {
        return QuadInt::one();
    }
    let mut a: Vec<Vec<QuadInt>> = m.to_vec();
    let mut prev = QuadInt::one();
    let mut sign = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return QuadInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = f.sub(&f.mul(&a[i][j], &a[k][k]), &f.mul(&a[i][k], &a[k][j]));
                a[i][j] = f.div_exact(&num, &prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// `g = gcd(xs)` together with coefficients `c` with `sum c_i x_i = g`.
pub fn bezout(f: &ImaginaryQuadraticField, xs: &[QuadInt]) -> Result<(QuadInt, Vec<QuadInt>)> {
    let g = f.gcd(xs)?;
    let m = xs.len();
    if g.is_zero() {
        return Ok((g, vec![QuadInt::zero(); m]));
    }
    // Integer rows (a, b) of x_i and w x_i with their O_F coefficient vectors,
    // reduced to a triangular Z-basis while tracking coefficients.
    let w = f.omega();
    let mut rows: Vec<((BigInt, BigInt), Vec<QuadInt>)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let mut c = vec![QuadInt::zero(); m];
        c[i] = QuadInt::one();
        rows.push(((x.a.clone(), x.b.clone()), c.clone()));
        let y = f.mul(x, &w);
        c[i] = w.clone();
        rows.push(((y.a, y.b), c));
    }
    let comb = |p: &((BigInt, BigInt), Vec<QuadInt>), s: &BigInt, q: &((BigInt, BigInt), Vec<QuadInt>), t: &BigInt| {
        let v = (s * &p.0 .0 + t * &q.0 .0, s * &p.0 .1 + t * &q.0 .1);
        let c: Vec<QuadInt> =
            p.1.iter().zip(q.1.iter()).map(|(a, b)| f.add(&a.scale(s), &b.scale(t))).collect();
        (v, c)
    };
    let mut pivot: Option<((BigInt, BigInt), Vec<QuadInt>)> = None;
    let mut flat: Option<((BigInt, BigInt), Vec<QuadInt>)> = None;
    let add_flat = |flat: &mut Option<((BigInt, BigInt), Vec<QuadInt>)>, r: ((BigInt, BigInt), Vec<QuadInt>)| {
        if r.0 .0.is_zero() {
            return;
        }
        *flat = Some(match flat.take() {
            None => r,
            Some(fl) => {
                let e = fl.0 .0.extended_gcd(&r.0 .0);
                comb(&fl, &e.x, &r, &e.y)
            }
        });
    };
    use num_integer::Integer;
    for r in rows {
        if r.0 .1.is_zero() {
            add_flat(&mut flat, r);
            continue;
        }
        match pivot.take() {
            None => pivot = Some(r),
            Some(p) => {
                let e = p.0 .1.extended_gcd(&r.0 .1);
                let gg = e.gcd.clone();
                let newp = comb(&p, &e.x, &r, &e.y);
                let kill = comb(&p, &(&r.0 .1 / &gg), &r, &-(&p.0 .1 / &gg));
                add_flat(&mut flat, kill);
                pivot = Some(newp);
            }
        }
    }
    let p = pivot.expect("nonzero ideal has a row with w-coordinate");
    let fl = flat.expect("nonzero ideal has full rank");
    // g = s * fl + t * p, solved exactly.
    let t = &g.b / &p.0 .1;
    let rem = &g.a - &t * &p.0 .0;
    let s = &rem / &fl.0 .0;
    let (v, c) = comb(&fl, &s, &p, &t);
    if v != (g.a.clone(), g.b.clone()) {
        return Err(Error::Input("bezout reconstruction failed".into()));
    }
    Ok((g, c))
}

/// Parses `"a+b*w"`, `"a"`, `"b*w"`, `"-w"` and similar.
pub fn parse_quadint(s: &str) -> Result<QuadInt> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Input("empty coordinate".into()));
    }
    let bad = || Error::Input(format!("cannot parse `{s}` as a+b*w"));
    // Split into signed terms.
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in t.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&t[start..i]);
            start = i;
        }
    }
    terms.push(&t[start..]);
    let (mut a, mut b) = (BigInt::zero(), BigInt::zero());
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let (val, is_w) = if let Some(c) = body.strip_suffix("*w") {
            (c.parse::<BigInt>().map_err(|_| bad())?, true)
        } else if body == "w" {
            (BigInt::one(), true)
        } else if let Some(c) = body.strip_suffix('w') {
            (c.parse::<BigInt>().map_err(|_| bad())?, true)
        } else {
            (body.parse::<BigInt>().map_err(|_| bad())?, false)
        };
        let val = if neg { -val } else { val };
        if is_w {
            b += val;
        } else {
            a += val;
        }
    }
    Ok(QuadInt { a, b })
}

pub fn parse_vector(s: &str) -> Result<Vector> {
    s.split(',').map(parse_quadint).collect()
}

/// Convenience constructor for diagonal integer lattices.
pub fn diagonal(field: &ImaginaryQuadraticField, entries: &[i64]) -> Result<HermitianLattice> {
    let r = entries.len();
    let gram = (0..r)
        .map(|i| (0..r).map(|j| if i == j { QuadInt::int(entries[i]) } else { QuadInt::zero() }).collect())
        .collect();
    build_lattice(field, gram)
}

pub fn small_int(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::make_field;

    fn v(xs: &[(i64, i64)]) -> Vector {
        xs.iter().map(|&(a, b)| QuadInt::new(a, b)).collect()
    }

    #[test]
    fn signature_and_det() {
        let f = make_field(11).unwrap();
        let l = diagonal(&f, &[1, -1, -1, -1]).unwrap();
        assert_eq!(l.signature, (1, 3));
        assert_eq!(l.determinant(), BigInt::from(-1));
        let g = make_field(1).unwrap();
        let l = diagonal(&g, &[1, -2, -1]).unwrap();
        assert_eq!(l.signature, (1, 2));
        assert_eq!(l.determinant(), BigInt::from(2));
    }

    #[test]
    fn off_diagonal_det() {
        let f = make_field(1).unwrap();
        let gram = vec![vec![QuadInt::int(1), QuadInt::new(0, 1)], vec![QuadInt::new(0, -1), QuadInt::int(-1)]];
        let l = validate_lattice(&f, gram).unwrap();
        assert_eq!(l.determinant(), BigInt::from(-2));
    }

    #[test]
    fn rejects_non_hermitian() {
        let f = make_field(1).unwrap();
        let gram = vec![vec![QuadInt::int(1), QuadInt::new(0, 1)], vec![QuadInt::new(0, 1), QuadInt::int(-1)]];
        assert!(validate_lattice(&f, gram).is_err());
    }

    #[test]
    fn discriminant_groups() {
        let g = make_field(1).unwrap();
        let a = diagonal(&g, &[1, -2]).unwrap().discriminant_group().unwrap();
        assert_eq!(a.invariant_factors, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(a.exponent, BigInt::from(2));
        let f = make_field(11).unwrap();
        let a = diagonal(&f, &[1, -3]).unwrap().discriminant_group().unwrap();
        assert_eq!(a.order(), BigInt::from(9));
        assert_eq!(a.exponent, BigInt::from(3));
        let u = diagonal(&f, &[1, -1, -1]).unwrap().discriminant_group().unwrap();
        assert!(u.invariant_factors.is_empty());
        assert_eq!(u.exponent, BigInt::one());
    }

    #[test]
    fn theta_readings() {
        let g = make_field(1).unwrap();
        let u = diagonal(&g, &[1, -1, -1]).unwrap();
        assert_eq!(u.theta(ThetaReading::Union).unwrap(), BigInt::from(2));
        let l = diagonal(&g, &[1, -2, -3]).unwrap();
        assert_eq!(l.determinant(), BigInt::from(6));
        assert_eq!(l.theta(ThetaReading::Union).unwrap(), BigInt::from(6));
        assert_eq!(l.theta(ThetaReading::Intersection).unwrap(), BigInt::from(2));
    }

    #[test]
    fn complements() {
        let f = make_field(11).unwrap();
        let l = diagonal(&f, &[1, -1, -1]).unwrap();
        let k = l.orthogonal_complement(&v(&[(0, 0), (1, 0), (0, 0)])).unwrap();
        assert_eq!(k.determinant(), BigInt::from(-1));
        assert_eq!(k.signature, (1, 1));
        let k = l.orthogonal_complement(&v(&[(0, 0), (1, 0), (1, 0)])).unwrap();
        assert_eq!(k.determinant(), BigInt::from(-2));
        assert!(l.orthogonal_complement(&v(&[(0, 0), (2, 0), (0, 0)])).is_err());
        assert!(l.orthogonal_complement(&v(&[(1, 0), (0, 0), (0, 0)])).is_err());
    }

    #[test]
    fn div_and_i_examples() {
        let f = make_field(11).unwrap();
        let l = diagonal(&f, &[1, -1, -1]).unwrap();
        let (d, i) = l.div_and_i(&v(&[(0, 0), (1, 0), (0, 0)])).unwrap();
        assert!(f.is_unit(&d) && f.is_unit(&i));
        let (d, i) = l.div_and_i(&v(&[(0, 0), (1, 0), (1, 0)])).unwrap();
        assert!(f.is_unit(&d));
        assert!(f.associated(&i, &QuadInt::int(2)));
        let l2 = diagonal(&f, &[1, -2, -1]).unwrap();
        let (d, i) = l2.div_and_i(&v(&[(0, 0), (1, 0), (0, 0)])).unwrap();
        assert!(f.associated(&d, &QuadInt::int(2)));
        assert!(f.is_unit(&i));
    }

    #[test]
    fn classification_examples() {
        let f = make_field(11).unwrap();
        let l = diagonal(&f, &[1, -1, -1, -1]).unwrap();
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (0, 0), (0, 0)])).unwrap();
        assert_eq!(c, ReflectiveClass::of(2, Subtype::I, true));
        let l = diagonal(&f, &[1, -1, -1]).unwrap();
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (1, 0)])).unwrap();
        assert_eq!(c, ReflectiveClass::of(2, Subtype::II, false));
        let e = make_field(3).unwrap();
        let l = diagonal(&e, &[1, -1, -1]).unwrap();
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (0, 0)])).unwrap();
        assert_eq!(c, ReflectiveClass::of(6, Subtype::I, true));
    }

    #[test]
    fn gaussian_cases() {
        let g = make_field(1).unwrap();
        let l = diagonal(&g, &[1, -1, -1]).unwrap();
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (1, 0)])).unwrap();
        assert_eq!(c, ReflectiveClass::of(2, Subtype::II, false));
        // norm -3 with unit Div: not reflective
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (1, 1)])).unwrap();
        assert!(!c.is_reflective());
        let l = diagonal(&g, &[1, -2, -1]).unwrap();
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (0, 0)])).unwrap();
        assert_eq!(c, ReflectiveClass::of(4, Subtype::I, true));
        // <1> + [[-2, 1+i], [1-i, -2]]: pairings of e1 are (0, -2, 1-i), so Div = (1+i)
        // and I = (1+i).
        let q = |a, b| QuadInt::new(a, b);
        let gram = vec![
            vec![q(1, 0), q(0, 0), q(0, 0)],
            vec![q(0, 0), q(-2, 0), q(1, 1)],
            vec![q(0, 0), q(1, -1), q(-2, 0)],
        ];
        let l = validate_lattice(&g, gram).unwrap();
        let c = l.classify_reflective(&v(&[(0, 0), (1, 0), (0, 0)])).unwrap();
        assert_eq!(c, ReflectiveClass::of(4, Subtype::II, false));
    }

    #[test]
    fn parse_coordinates() {
        assert_eq!(parse_quadint("3+2*w").unwrap(), QuadInt::new(3, 2));
        assert_eq!(parse_quadint("-w").unwrap(), QuadInt::new(0, -1));
        assert_eq!(parse_quadint("-4").unwrap(), QuadInt::new(-4, 0));
        assert_eq!(parse_quadint("1 - 3*w").unwrap(), QuadInt::new(1, -3));
        assert!(parse_quadint("x").is_err());
        assert_eq!(parse_vector("0,1,1+w").unwrap().len(), 3);
    }

    #[test]
    fn bezout_recovers_gcd() {
        for d in [1i64, 2, 3, 7, 11, 19, 43, 67, 163] {
            let f = make_field(d).unwrap();
            let xs = [QuadInt::new(6, 4), QuadInt::new(-3, 7), QuadInt::new(10, 0)];
            let (g, c) = bezout(&f, &xs).unwrap();
            let s = xs.iter().zip(&c).fold(QuadInt::zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)));
            assert_eq!(s, g, "d = {d}");
        }
    }
}
