//! Algebraic machinery against brute-force oracles: tensor dimensions by
//! element counting, embeddings by injective-homomorphism search, quotient
//! enumeration by self-duality, and Smith normal form invariants under
//! random unimodular changes of basis.

mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grs_core::abelian::{
    embeds_power, enumerate_quotients, is_direct_double, tensor_zp, FgAbelianGroup,
};
use grs_core::intmat::{smith_normal_form, IntMatrix};

fn all_groups_up_to(max_order: u64) -> Vec<FgAbelianGroup> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.extend(common::abelian_groups_of_order(n));
    }
    out
}

#[test]
fn tensor_dimension_matches_element_count() {
    for g in all_groups_up_to(64) {
        let order = g.order().unwrap();
        for p in [2u64, 3, 5, 7] {
            if (&order % BigInt::from(p)) != BigInt::from(0u32) && order != BigInt::one() {
                continue;
            }
            assert_eq!(
                tensor_zp(&g, p).unwrap(),
                common::tensor_dim_oracle(&g, p),
                "tensor dim mismatch for {g} at p={p}"
            );
        }
    }
}

#[test]
fn direct_double_matches_oracle() {
    for g in all_groups_up_to(100) {
        let fast = is_direct_double(&g).unwrap();
        let slow = common::direct_double_oracle(&g);
        assert_eq!(fast, slow, "direct-double disagreement on {g}");
    }
}

#[test]
fn embeds_matches_injective_hom_search() {
    let groups = all_groups_up_to(24);
    for a in &groups {
        for b in &groups {
            let fast = embeds_power(a, 1, b).unwrap();
            let slow = common::injective_hom_exists(
                &common::BruteGroup::from_fg(a),
                &common::BruteGroup::from_fg(b),
            );
            assert_eq!(fast, slow, "embedding disagreement: {a} into {b}");
        }
    }
}

#[test]
fn quotients_match_subgroup_duality() {
    // a finite abelian Q is a quotient of G iff Q embeds in G
    for g in all_groups_up_to(36) {
        let order = g.factors_u64().iter().product::<u64>().max(1);
        let mut expected: Vec<FgAbelianGroup> = Vec::new();
        for d in 1..=order {
            if order % d != 0 {
                continue;
            }
            for q in common::abelian_groups_of_order(d) {
                if common::injective_hom_exists(
                    &common::BruteGroup::from_fg(&q),
                    &common::BruteGroup::from_fg(&g),
                ) {
                    expected.push(q);
                }
            }
        }
        expected.sort();
        let got = enumerate_quotients(&g, 1 << 20).unwrap();
        assert_eq!(got, expected, "quotient set mismatch for {g}");
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_i64(&entries)
}

/// Random unimodular matrix: product of elementary row operations.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if n > 1 {
            while j == i {
                j = rng.gen_range(0..n);
            }
            let c = BigInt::from(rng.gen_range(-3i64..=3));
            for col in 0..n {
                let x = m.get(i, col) + &c * m.get(j, col);
                m.set(i, col, x);
            }
        }
    }
    m
}

#[test]
fn snf_stable_under_unimodular_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = random_matrix(&mut rng, rows, cols, 9);
        let d1 = smith_normal_form(&m).diagonal();
        let l = random_unimodular(&mut rng, rows);
        let r = random_unimodular(&mut rng, cols);
        let d2 = smith_normal_form(&l.mul(&m).mul(&r)).diagonal();
        assert_eq!(d1, d2, "SNF diagonal changed under unimodular equivalence");
    }
}

#[test]
fn snf_factorization_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let m = random_matrix(&mut rng, rows, cols, 9);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert_eq!(&w[1] % &w[0], BigInt::from(0u32), "divisibility chain broken");
        }
    }
}
