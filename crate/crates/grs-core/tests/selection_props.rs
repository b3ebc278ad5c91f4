//! Property tests for point selection: every certificate verifies, chain
//! lengths respect the iteration bound, and selection is covariant under
//! simultaneous rescaling of lengths and field.

mod common;

use proptest::prelude::*;

use grs_core::gen::{generate_space, GenKind};
use grs_core::metric::{load_space, ScalarField};
use grs_core::selection::{
    iteration_bound, select_point, select_sequence, verify_certificate, SelectionParams,
};

fn space_and_field(seed: u64, n: usize) -> (grs_core::metric::LoadedSpace, ScalarField) {
    let doc = generate_space(
        &GenKind::RandomGeometric {
            n,
            radius: 0.35,
        },
        seed,
    )
    .unwrap();
    let loaded = load_space(&doc).unwrap();
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let field = ScalarField::new((0..n).map(|_| rng.gen_range(0.01..100.0)).collect());
    (loaded, field)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_always_verify(seed in 0u64..1000, y0 in 0usize..30, a0 in 0.1f64..10.0) {
        let (loaded, field) = space_and_field(seed, 30);
        let params = SelectionParams { y0, a0 };
        let cert = select_point(&loaded.space, &field, &params).unwrap();
        let rep = verify_certificate(&loaded.space, &field, &params, &cert);
        prop_assert!(rep.all_pass(), "{rep:?}");
        let bound = iteration_bound(field.value(y0), field.max()).unwrap();
        prop_assert!(cert.chain.len() <= bound, "chain {} > bound {}", cert.chain.len(), bound);
    }

    #[test]
    fn selection_is_scale_covariant(seed in 0u64..500, y0 in 0usize..25, lambda in 0.1f64..10.0) {
        let (loaded, field) = space_and_field(seed, 25);
        let params = SelectionParams { y0, a0: 1.5 };
        let cert = select_point(&loaded.space, &field, &params).unwrap();

        // metric g -> lambda^2 g: lengths scale by lambda, curvature-like
        // fields by lambda^-2; A0 is scale-free, so the chain is unchanged
        let scaled_space = loaded.space.scaled_lengths(lambda);
        let scaled_field = field.scaled(lambda.powi(-2));
        let scaled = select_point(&scaled_space, &scaled_field, &params).unwrap();
        let points: Vec<usize> = cert.chain.iter().map(|&(p, _)| p).collect();
        let scaled_points: Vec<usize> = scaled.chain.iter().map(|&(p, _)| p).collect();
        prop_assert_eq!(points, scaled_points);
        prop_assert_eq!(cert.x0, scaled.x0);
    }

    #[test]
    fn canonical_sequence_constants(seed in 0u64..300) {
        let (loaded, field) = space_and_field(seed, 25);
        let starts: Vec<usize> = (0..loaded.space.len()).collect();
        let certs = select_sequence(&loaded.space, &field, &starts).unwrap();
        for (y0, cert) in starts.iter().zip(&certs) {
            // with A = (1/3)P^(1/2): base-to-selected distance < 2/3 and
            // controlled radius <= 1/3
            prop_assert!(loaded.space.dist(*y0, cert.x0) < 2.0 / 3.0);
            prop_assert!(cert.radius <= 1.0 / 3.0 + 1e-12);
        }
    }
}

#[test]
fn tampered_certificates_fail() {
    let (loaded, field) = space_and_field(11, 30);
    let params = SelectionParams { y0: 0, a0: 2.0 };
    let mut cert = select_point(&loaded.space, &field, &params).unwrap();
    cert.q0 *= 2.0;
    let rep = verify_certificate(&loaded.space, &field, &params, &cert);
    assert!(!rep.all_pass());
}
