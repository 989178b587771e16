//! Exact integer and rational matrix routines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix (nonzero ones
/// only, each positive).
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    // For a nonsingular square matrix the column lattice contains |det| Z^n,
    // so all work can be done modulo |det| and entries stay bounded.
    let modulus = if rows == cols {
        let d = bareiss_det(m).abs();
        (!d.is_zero()).then_some(d)
    } else {
        None
    };
    let mut a = m.clone();
    if let Some(d) = &modulus {
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
    }
    let reduce = |x: &mut BigInt| {
        if let Some(d) = &modulus {
            *x = x.mod_floor(d);
        }
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        if a[t][t].is_zero() {
            let found = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
            let Some((pi, pj)) = found else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (p, x) = (a[t][t].clone(), a[i][t].clone());
                if x.is_multiple_of(&p) {
                    let q = &x / &p;
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                        reduce(&mut a[i][j]);
                    }
                } else {
                    let e = p.extended_gcd(&x);
                    let (pg, xg) = (&p / &e.gcd, &x / &e.gcd);
                    for j in t..cols {
                        let (u, v) = (a[t][j].clone(), a[i][j].clone());
                        a[t][j] = &e.x * &u + &e.y * &v;
                        a[i][j] = &pg * &v - &xg * &u;
                        reduce(&mut a[t][j]);
                        reduce(&mut a[i][j]);
                    }
                }
            }
            let mut mixed = false;
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (p, x) = (a[t][t].clone(), a[t][j].clone());
                if x.is_multiple_of(&p) {
                    let q = &x / &p;
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                        reduce(&mut a[i][j]);
                    }
                } else {
                    let e = p.extended_gcd(&x);
                    let (pg, xg) = (&p / &e.gcd, &x / &e.gcd);
                    for i in t..rows {
                        let (u, v) = (a[i][t].clone(), a[i][j].clone());
                        a[i][t] = &e.x * &u + &e.y * &v;
                        a[i][j] = &pg * &v - &xg * &u;
                        reduce(&mut a[i][t]);
                        reduce(&mut a[i][j]);
                    }
                    mixed = true;
                }
            }
            // Each gcd step strictly shrinks the pivot, so this terminates.
            if !mixed {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    if let Some(d) = &modulus {
        diag.resize(rows, BigInt::zero());
        for x in diag.iter_mut() {
            *x = x.gcd(d);
        }
    }
    // The diagonal is a product of cyclic groups; put it into divisor-chain form.
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, i);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Signs `(positive, negative, zero)` of a symmetric rational matrix by
/// congruence diagonalisation.
pub fn inertia(m: &[Vec<BigRational>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Replace e_k by e_k + e_j, making the diagonal entry 2 a_kj.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}
