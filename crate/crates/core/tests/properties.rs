use proptest::prelude::*;

use qacodes_core::bounds::{binomial_ball, entropy, gv};
use qacodes_core::codes::{encode, sample_matrix, EnsembleParams, MessageVector};
use qacodes_core::{AbelianGroup, AlgebraElem, Field, GroupAlgebra};

const FIELDS: [u32; 6] = [2, 3, 4, 5, 8, 9];

fn algebra(q: u32, orders: &[u32]) -> GroupAlgebra {
    GroupAlgebra::new(Field::with_size(q).unwrap(), AbelianGroup::new(orders).unwrap())
}

fn element(alg: &GroupAlgebra, raw: &[u32]) -> AlgebraElem {
    let q = alg.q();
    alg.element_from_indices(&raw.iter().take(alg.m()).map(|x| x % q).collect::<Vec<_>>()).unwrap()
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_distributive(
        qi in 0usize..FIELDS.len(),
        m1 in 1u32..5,
        m2 in 1u32..4,
        raw in proptest::collection::vec(0u32..256, 36),
    ) {
        let alg = algebra(FIELDS[qi], &[m1, m2]);
        let m = alg.m();
        let (a, b, c) = (element(&alg, &raw), element(&alg, &raw[m..]), element(&alg, &raw[2 * m..]));
        prop_assert_eq!(alg.mul(&a, &b).unwrap(), alg.mul(&b, &a).unwrap());
        let lhs = alg.mul(&a, &alg.add(&b, &c).unwrap()).unwrap();
        let rhs = alg.add(&alg.mul(&a, &b).unwrap(), &alg.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn encoding_is_linear(
        qi in 0usize..FIELDS.len(),
        m in 1u32..5,
        k in 1usize..3,
        n in 1usize..4,
        seed in any::<u64>(),
        raw in proptest::collection::vec(0u32..256, 16),
    ) {
        let alg = algebra(FIELDS[qi], &[m]);
        let params = EnsembleParams::with_k(alg.clone(), k, n, 0.5).unwrap();
        let a = sample_matrix(&params, seed, 0);
        let mm = alg.m();
        let b1 = MessageVector::new((0..k).map(|i| element(&alg, &raw[i * mm..])).collect());
        let b2 = MessageVector::new((0..k).map(|i| element(&alg, &raw[(i + 2) * mm..])).collect());
        let sum = MessageVector::new(
            b1.entries().iter().zip(b2.entries()).map(|(x, y)| alg.add(x, y).unwrap()).collect(),
        );
        let lhs = encode(&alg, &sum, &a).unwrap();
        let (e1, e2) = (encode(&alg, &b1, &a).unwrap(), encode(&alg, &b2, &a).unwrap());
        let rhs: Vec<_> = e1.blocks().iter().zip(e2.blocks()).map(|(x, y)| alg.add(x, y).unwrap()).collect();
        prop_assert_eq!(lhs.blocks(), &rhs[..]);
    }

    #[test]
    fn gv_decreases_and_entropy_is_bounded(qi in 0usize..FIELDS.len(), x in 0.0f64..1.0, dx in 1e-4f64..0.1) {
        let q = FIELDS[qi];
        let h = entropy(q, x).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&h));
        let zero = 1.0 - 1.0 / q as f64;
        if x + dx <= zero {
            prop_assert!(gv(q, x + dx).unwrap() < gv(q, x).unwrap());
        }
    }

    #[test]
    fn ball_is_monotone_in_radius(q in 2u32..6, n in 1usize..30, k in 0usize..30) {
        let k = k.min(n - 1);
        prop_assert!(binomial_ball(q, n, k).unwrap() < binomial_ball(q, n, k + 1).unwrap());
    }
}
