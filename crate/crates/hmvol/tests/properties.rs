mod common;

use hmvol::criteria::{bigness_rhs, is_big, w_negative_exact, w_value, BigVerdict};
use hmvol::linalg::{bareiss_det, smith_invariants};
use hmvol::plocal::JordanProfile;
use hmvol::qfield::{FieldClass, SplitClass};
use hmvol::specfun::Real;
use hmvol::volume::{lambda_unramified, VBoundParams};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn class_strategy() -> impl Strategy<Value = FieldClass> {
    prop_oneof![Just(FieldClass::Generic), Just(FieldClass::Gauss), Just(FieldClass::Eisenstein)]
}

fn int_matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

/// Upper unitriangular times a permutation: determinant +-1.
fn unimodular(n: usize, upper: &[i64], perm_seed: usize) -> Vec<Vec<BigInt>> {
    let mut u = vec![vec![BigInt::zero(); n]; n];
    let mut it = upper.iter().cycle();
    for i in 0..n {
        u[i][i] = BigInt::one();
        for j in i + 1..n {
            u[i][j] = BigInt::from(*it.next().unwrap());
        }
    }
    u.rotate_left(perm_seed % n);
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rhs_is_the_exact_rational(class in class_strategy(), n in 3u64..150, a in 1u64..12) {
        let r = bigness_rhs(class, n, a, 160).unwrap();
        prop_assert!(r.contains_rational(&common::rhs_exact(class, n, a)));
    }

    #[test]
    fn rhs_increases_in_a(class in class_strategy(), n in 3u64..400, a in 1u64..30) {
        let lo = bigness_rhs(class, n, a, 160).unwrap();
        let hi = bigness_rhs(class, n, a + 1, 160).unwrap();
        prop_assert!(lo.certainly_lt(&hi));
    }

    #[test]
    fn w_sign_matches_exact_comparison(class in class_strategy(), n in 3u64..80, a in 1u64..8, num in 1i64..4000) {
        let exact = common::rhs_exact(class, n, a);
        let v = &exact * BigRational::new(num.into(), 2000.into());
        let w = w_value(&Real::from_rational(&v, 200), class, n, a, 200).unwrap();
        let truth = v < exact;
        prop_assert_eq!(w_negative_exact(&v, class, n, a).unwrap(), truth);
        if v != exact {
            prop_assert_eq!(w.is_negative(), truth);
            prop_assert_eq!(w.is_positive(), !truth);
        } else {
            prop_assert!(w.contains_zero());
        }
    }

    #[test]
    fn hyperspecial_factor_is_one(p in prop_oneof![Just(3u64), Just(5), Just(7), Just(13)], rank in 2usize..9, scale in 0u32..3, split in any::<bool>()) {
        let prof = JordanProfile {
            prime: p,
            split_class: if split { SplitClass::Split } else { SplitClass::Inert },
            blocks: vec![(scale, rank)],
        };
        let f = lambda_unramified(&prof, p, 128).unwrap();
        prop_assert!(f.value.contains_rational(&BigRational::one()));
        prop_assert_eq!(f.exact, Some(BigRational::one()));
    }

    #[test]
    fn nonhyperspecial_factor_exceeds_one(p in prop_oneof![Just(3u64), Just(5)], r1 in 1usize..4, r2 in 1usize..4, split in any::<bool>()) {
        let prof = JordanProfile {
            prime: p,
            split_class: if split { SplitClass::Split } else { SplitClass::Inert },
            blocks: vec![(0, r1), (1, r2)],
        };
        let f = lambda_unramified(&prof, p, 128).unwrap();
        prop_assert!(f.exact.unwrap() > BigRational::one());
    }

    #[test]
    fn bigness_monotone_in_theta(class in class_strategy(), n in 40u64..1200, t in 1u64..50) {
        let mut p = VBoundParams::new(class, n);
        p.theta = BigInt::from(t);
        let base = is_big(&p, 1, 128).unwrap();
        p.theta = BigInt::from(2 * t);
        let more = is_big(&p, 1, 128).unwrap();
        prop_assert!(more.v_bound.certainly_lt(&base.v_bound));
        if base.verdict == BigVerdict::Big {
            prop_assert_eq!(more.verdict, BigVerdict::Big);
        }
    }

    #[test]
    fn smith_invariants_are_a_divisor_chain(n in 1usize..6, cells in prop::collection::vec(-60i64..60, 36)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| cells[i * n..(i + 1) * n].to_vec()).collect();
        let m = int_matrix(&rows);
        let d = smith_invariants(&m);
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let det = bareiss_det(&m).abs();
        if det.is_zero() {
            prop_assert!(d.len() < n);
        } else {
            prop_assert_eq!(d.len(), n);
            prop_assert_eq!(d.iter().product::<BigInt>(), det);
        }
    }

    #[test]
    fn smith_invariants_survive_unimodular_changes(
        n in 2usize..6,
        cells in prop::collection::vec(-40i64..40, 25),
        left in prop::collection::vec(-5i64..5, 10),
        right in prop::collection::vec(-5i64..5, 10),
        s in 0usize..5,
    ) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| cells[i * n..(i + 1) * n].to_vec()).collect();
        let m = int_matrix(&rows);
        let changed = matmul(&matmul(&unimodular(n, &left, s), &m), &unimodular(n, &right, s + 1));
        prop_assert_eq!(smith_invariants(&changed), smith_invariants(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jordan_profiles_survive_base_change(k in 0usize..10, seed in any::<u64>()) {
        let (checks, bad) = common::jordan_invariance_one(k, 3, seed);
        prop_assert_eq!(checks, 3);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }
}
