//! Metric-space properties against an independent Floyd-Warshall oracle.

mod common;

use grs_core::gen::{generate_space, GenKind};
use grs_core::metric::{load_space, load_space_with, serialize_space};

fn sample_docs() -> Vec<grs_core::metric::SpaceDocument> {
    let mut docs = Vec::new();
    for seed in 0..5u64 {
        docs.push(generate_space(&GenKind::RandomGeometric { n: 40, radius: 0.3 }, seed).unwrap());
    }
    docs.push(generate_space(&GenKind::Path { n: 12 }, 0).unwrap());
    docs.push(generate_space(&GenKind::Grid2 { side: 5 }, 0).unwrap());
    docs.push(generate_space(&GenKind::Grid4 { side: 2 }, 0).unwrap());
    docs.push(generate_space(&GenKind::ConeField { side: 5, c: 2.0 }, 0).unwrap());
    docs
}

#[test]
fn distances_match_floyd_warshall() {
    for doc in sample_docs() {
        let loaded = load_space(&doc).unwrap();
        let (ids, oracle) = common::floyd_warshall(&doc);
        assert_eq!(loaded.space.ids(), ids.as_slice());
        let n = ids.len();
        for i in 0..n {
            for j in 0..n {
                let d = loaded.space.dist(i, j);
                let o = oracle[i][j];
                assert!(
                    (d - o).abs() <= 1e-9 * o.max(1.0),
                    "dist({},{}) = {} but oracle says {}",
                    ids[i],
                    ids[j],
                    d,
                    o
                );
            }
        }
    }
}

#[test]
fn parallel_and_sequential_tables_agree() {
    for doc in sample_docs() {
        let a = load_space_with(&doc, true).unwrap();
        let b = load_space_with(&doc, false).unwrap();
        let n = a.space.len();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(a.space.dist(i, j).to_bits(), b.space.dist(i, j).to_bits());
            }
        }
    }
}

#[test]
fn triangle_inequality() {
    for doc in sample_docs() {
        let loaded = load_space(&doc).unwrap();
        let s = &loaded.space;
        let n = s.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert!(s.dist(i, j) <= s.dist(i, k) + s.dist(k, j) + 1e-9);
                }
            }
        }
    }
}

#[test]
fn balls_grow_with_radius() {
    let doc = generate_space(&GenKind::Grid2 { side: 6 }, 3).unwrap();
    let loaded = load_space(&doc).unwrap();
    let s = &loaded.space;
    for x in 0..s.len() {
        let mut prev = 0usize;
        for r in [0.5, 1.0, 2.0, 4.0, 100.0] {
            let ball = s.ball(x, r);
            assert!(ball.len() >= prev);
            assert!(ball.contains(&x), "open balls contain their center");
            prev = ball.len();
        }
        assert_eq!(prev, s.len());
    }
}

#[test]
fn round_trip_preserves_document() {
    for doc in sample_docs() {
        let loaded = load_space(&doc).unwrap();
        let back = serialize_space(&loaded);
        let reloaded = load_space(&back).unwrap();
        assert_eq!(loaded.space.ids(), reloaded.space.ids());
        for i in 0..loaded.space.len() {
            assert_eq!(loaded.field.value(i), reloaded.field.value(i));
            for j in 0..loaded.space.len() {
                assert_eq!(
                    loaded.space.dist(i, j).to_bits(),
                    reloaded.space.dist(i, j).to_bits()
                );
            }
        }
    }
}
