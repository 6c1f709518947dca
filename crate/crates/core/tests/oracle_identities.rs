use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use qacodes_core::codes::{
    encode, flinear_expansion, full_rank_bound, group_code_system, is_full_rank, message_at, min_nonzero_weight,
    product_system, verify_balanced, weight_profile,
};
use qacodes_core::oracle::{
    brute_force_ensemble, brute_force_generating_count, enumerate_ideals, exact_expectation, full_rank_count,
    generating_counts, matrix_at, micro_instances, second_moment_inequality_check,
};
use qacodes_core::{AbelianGroup, Field, FieldElem, GroupAlgebra};

fn alg(q: u32, orders: &[u32]) -> GroupAlgebra {
    GroupAlgebra::new(Field::with_size(q).unwrap(), AbelianGroup::new(orders).unwrap())
}

#[test]
fn generating_tuples_closed_form_matches_brute_force() {
    for (q, g, k) in [(2, &[3][..], 1), (2, &[3], 2), (2, &[2], 3), (3, &[3], 2), (2, &[4], 1), (3, &[2, 2], 1)] {
        let a = alg(q, g);
        assert_eq!(
            a.count_generating_tuples(k),
            BigUint::from(brute_force_generating_count(&a, k).unwrap()),
            "q={q} G={g:?} k={k}"
        );
    }
}

#[test]
fn lattice_counts_partition_the_tuples() {
    for (q, g) in [(2, &[2][..]), (2, &[3]), (2, &[4]), (2, &[6]), (3, &[3]), (3, &[4]), (4, &[3]), (2, &[2, 2])] {
        let a = alg(q, g);
        let lattice = enumerate_ideals(&a).unwrap();
        assert_eq!(lattice.ideals()[0].dim(), 0);
        assert_eq!(lattice.ideals().last().unwrap().dim(), a.m());
        for k in 1..=3 {
            let counts = generating_counts(&a, &lattice, k);
            for i in 0..lattice.len() {
                let below: BigUint = (0..lattice.len()).filter(|&j| lattice.contains(i, j)).map(|j| &counts[j]).sum();
                let expected = BigUint::from(q).pow((lattice.ideals()[i].dim() * k) as u32);
                assert_eq!(below, expected, "q={q} G={g:?} k={k} ideal {i}");
            }
            assert_eq!(counts.last().unwrap(), &a.count_generating_tuples(k));
        }
    }
}

#[test]
fn lattice_sizes() {
    // F_2[Z_6] = F_2[Z_2] x F_2[Z_3] with F_2[Z_2] local of length 2 in each block:
    // F_2[x]/(x+1)^2 x F_4[x]/(x+1)^2, three ideals in each factor.
    assert_eq!(enumerate_ideals(&alg(2, &[6])).unwrap().len(), 9);
    // F_3[Z_4] = F_3 x F_3 x F_9
    assert_eq!(enumerate_ideals(&alg(3, &[4])).unwrap().len(), 8);
    // F_2[Z_4] = F_2[x]/(x+1)^4 is a chain
    assert_eq!(enumerate_ideals(&alg(2, &[4])).unwrap().len(), 5);
}

#[test]
fn expectation_agrees_with_enumeration() {
    for p in micro_instances(1 << 12) {
        let lattice = exact_expectation(&p).unwrap();
        let brute = brute_force_ensemble(&p).unwrap();
        assert_eq!(lattice, brute.mean_enum, "{p:?}");
        assert!(brute.markov_holds());
        // Pr(N_hat >= 1)^2 <= E(N_hat)^2 <= E(N_hat^2) times Pr(N_hat >= 1) by Cauchy-Schwarz
        assert!(&brute.mean_enum * &brute.mean_enum <= &brute.second_moment * brute.pr_at_least_one());
        if p.cutoff() == 0 {
            assert!(lattice.is_zero() && brute.pr_exceeds.is_one());
        }
    }
}

#[test]
fn second_moment_and_full_rank_on_small_instances() {
    for p in micro_instances(1 << 12) {
        let r = second_moment_inequality_check(&p).unwrap();
        assert!(r.holds(), "{p:?}");
        assert_eq!(r.pr_at_least_one, brute_force_ensemble(&p).unwrap().pr_at_least_one());
        let c = full_rank_count(&p).unwrap();
        assert!(c.two_method_agree, "{p:?}");
        let bound = full_rank_bound(p.algebra(), p.k(), p.n()).unwrap();
        assert!(c.not_full_rank_frequency().to_f64().unwrap() <= bound + 1e-12, "{p:?}");
    }
}

#[test]
fn encoding_is_the_expanded_matrix_product() {
    for (q, g, k, n) in [(2, &[3][..], 1, 2), (3, &[2], 2, 2), (4, &[2], 1, 2), (2, &[2, 2], 1, 2)] {
        let a = alg(q, g);
        let f = a.field();
        let p = qacodes_core::codes::EnsembleParams::with_k(a.clone(), k, n, 0.5).unwrap();
        let messages = p.message_count().unwrap();
        for mi in (0..p.matrix_count().unwrap()).step_by(37) {
            let mat = matrix_at(&p, mi);
            let gen = flinear_expansion(&a, &mat);
            for bi in 0..messages {
                let b = message_at(&a, k, bi);
                let direct = encode(&a, &b, &mat).unwrap().word();
                assert_eq!(direct, gen.vec_mul(f, &b.word()));
            }
        }
    }
}

#[test]
fn enumerator_vanishes_exactly_above_min_weight() {
    for p in micro_instances(1 << 10) {
        let a = p.algebra();
        for mi in 0..p.matrix_count().unwrap() {
            let mat = matrix_at(&p, mi);
            let profile = weight_profile(a, &mat, 1 << 20).unwrap();
            let enumerator = profile.enumerator(p.cutoff());
            let min = min_nonzero_weight(a, &mat, 1 << 20).unwrap();
            let exceeds = match min {
                None => true,
                Some(w) => w > p.cutoff(),
            };
            assert_eq!(enumerator.is_zero(), exceeds);
            // full rank iff only the zero message maps to zero
            assert_eq!(is_full_rank(a, &mat), profile.histogram()[0] == 1);
        }
    }
}

#[test]
fn every_small_ideal_is_balanced() {
    for (q, g) in [(2, &[2][..]), (2, &[3]), (2, &[4]), (3, &[2]), (2, &[5]), (2, &[6]), (2, &[2, 2]), (3, &[4])] {
        let a = alg(q, g);
        let lattice = enumerate_ideals(&a).unwrap();
        for ideal in lattice.ideals().iter().filter(|i| i.dim() > 0) {
            let words: Vec<Vec<FieldElem>> =
                ideal.elements(&a, 1 << 20).unwrap().into_iter().map(|e| e.into_coeffs()).collect();
            let sys = group_code_system(&a, ideal).unwrap();
            assert!(verify_balanced(&sys, a.field(), &words).unwrap());
            for n_prime in 2..=3 {
                if ideal.dim() * n_prime > 8 {
                    continue;
                }
                let prod = product_system(&sys, n_prime).unwrap();
                assert_eq!(prod.t() * prod.len(), prod.s() * prod.d());
                let mut code = vec![Vec::new()];
                for _ in 0..n_prime {
                    code = code
                        .iter()
                        .flat_map(|prefix: &Vec<FieldElem>| {
                            words.iter().map(move |w| prefix.iter().chain(w).copied().collect())
                        })
                        .collect();
                }
                assert!(verify_balanced(&prod, a.field(), &code).unwrap());
            }
        }
    }
}

#[test]
fn generating_ratio_matches_count() {
    for (q, g) in [(2, &[3][..]), (3, &[6]), (4, &[5]), (2, &[2, 2])] {
        let a = alg(q, g);
        for k in 1..=3 {
            let space = BigUint::from(q).pow((a.m() * k) as u32);
            let exact = a.generating_ratio_exact(k);
            assert_eq!(
                exact.clone() * BigRational::from_integer(space.into()),
                BigRational::from_integer(a.count_generating_tuples(k).into())
            );
            assert!((exact.to_f64().unwrap() - a.generating_ratio(k)).abs() < 1e-12);
        }
    }
}
