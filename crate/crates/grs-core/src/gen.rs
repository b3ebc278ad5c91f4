//! Deterministic test-instance synthesis.
//!
//! Every generator is a pure function of (kind, params, seed); the same seed
//! yields a byte-identical document.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{EdgeDoc, NodeDoc, SpaceDocument};

#[derive(Debug, Clone)]
pub enum GenKind {
    /// Path graph on `n` nodes with unit edges.
    Path { n: usize },
    /// 2-dimensional side x side grid with unit edges.
    Grid2 { side: usize },
    /// 4-dimensional side^4 grid with unit edges.
    Grid4 { side: usize },
    /// `n` points uniform in the unit square; edges within `radius`,
    /// plus a chain that guarantees connectivity.
    RandomGeometric { n: usize, radius: f64 },
    /// 2-d grid carrying the field P(x) = c*(d(x,o)+1)^2 from the corner base.
    ConeField { side: usize, c: f64 },
}

fn node(id: String, rm: f64) -> NodeDoc {
    NodeDoc {
        id,
        rm,
        f: None,
        r_scal: None,
        gradf: None,
        vol: None,
    }
}

fn pad_width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len().max(1)
}

pub fn generate_space(kind: &GenKind, seed: u64) -> Result<SpaceDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        GenKind::Path { n } => {
            if n == 0 {
                return Err(Error::InvalidParams("path needs n >= 1".into()));
            }
            let w = pad_width(n);
            let nodes = (0..n)
                .map(|i| node(format!("p{i:0w$}"), rng.gen_range(0.01..=100.0)))
                .collect();
            let edges = (0..n.saturating_sub(1))
                .map(|i| EdgeDoc {
                    a: format!("p{i:0w$}"),
                    b: format!("p{:0w$}", i + 1),
                    len: 1.0,
                })
                .collect();
            Ok(SpaceDocument {
                nodes,
                edges,
                base: Some(format!("p{:0w$}", 0usize)),
                kind: None,
            })
        }
        GenKind::Grid2 { side } => grid(&mut rng, side, 2, None),
        GenKind::Grid4 { side } => grid(&mut rng, side, 4, None),
        GenKind::ConeField { side, c } => {
            if c < 0.0 {
                return Err(Error::InvalidParams("cone-field needs c >= 0".into()));
            }
            grid(&mut rng, side, 2, Some(c))
        }
        GenKind::RandomGeometric { n, radius } => {
            if n == 0 || !(radius > 0.0) {
                return Err(Error::InvalidParams(
                    "random-geometric needs n >= 1 and radius > 0".into(),
                ));
            }
            let w = pad_width(n);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
                .collect();
            let nodes = (0..n)
                .map(|i| node(format!("p{i:0w$}"), rng.gen_range(0.01..=100.0)))
                .collect();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt();
                    if d > 0.0 && d <= radius {
                        edges.push(EdgeDoc {
                            a: format!("p{i:0w$}"),
                            b: format!("p{j:0w$}"),
                            len: d,
                        });
                    }
                }
            }
            // connectivity chain
            for i in 0..n.saturating_sub(1) {
                let d = ((pts[i].0 - pts[i + 1].0).powi(2) + (pts[i].1 - pts[i + 1].1).powi(2))
                    .sqrt()
                    .max(1e-6);
                if d > radius {
                    edges.push(EdgeDoc {
                        a: format!("p{i:0w$}"),
                        b: format!("p{:0w$}", i + 1),
                        len: d,
                    });
                }
            }
            Ok(SpaceDocument {
                nodes,
                edges,
                base: Some(format!("p{:0w$}", 0usize)),
                kind: None,
            })
        }
    }
}

/// side^dim grid with unit edges. With `cone` set, rm = c*(manhattan+1)^2
/// from the all-zero corner (grid shortest-path distance is Manhattan).
fn grid(rng: &mut ChaCha8Rng, side: usize, dim: usize, cone: Option<f64>) -> Result<SpaceDocument> {
    if side == 0 {
        return Err(Error::InvalidParams("grid needs side >= 1".into()));
    }
    let total = side.pow(dim as u32);
    if total > 200_000 {
        return Err(Error::InvalidParams(format!("grid too large: {total} nodes")));
    }
    let w = pad_width(side);
    let coords = |mut i: usize| -> Vec<usize> {
        let mut c = vec![0; dim];
        for slot in c.iter_mut() {
            *slot = i % side;
            i /= side;
        }
        c
    };
    let name = |c: &[usize]| -> String {
        let parts: Vec<String> = c.iter().map(|v| format!("{v:0w$}")).collect();
        format!("g{}", parts.join("_"))
    };
    let mut nodes = Vec::with_capacity(total);
    let mut edges = Vec::new();
    for i in 0..total {
        let c = coords(i);
        let rm = match cone {
            Some(cc) => {
                let manhattan: usize = c.iter().sum();
                cc * ((manhattan as f64) + 1.0).powi(2)
            }
            None => rng.gen_range(0.01..=100.0),
        };
        nodes.push(node(name(&c), rm));
        for d in 0..dim {
            if c[d] + 1 < side {
                let mut c2 = c.clone();
                c2[d] += 1;
                edges.push(EdgeDoc {
                    a: name(&c),
                    b: name(&c2),
                    len: 1.0,
                });
            }
        }
    }
    let base = name(&vec![0; dim]);
    Ok(SpaceDocument {
        nodes,
        edges,
        base: Some(base),
        kind: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::load_space;

    #[test]
    fn path3_shape() {
        let doc = generate_space(&GenKind::Path { n: 3 }, 0).unwrap();
        assert_eq!(doc.nodes.len(), 3);
        assert_eq!(doc.edges.len(), 2);
        assert!(doc.edges.iter().all(|e| e.len == 1.0));
    }

    #[test]
    fn cone_field_value_at_base() {
        let doc = generate_space(&GenKind::ConeField { side: 4, c: 4.0 }, 0).unwrap();
        let loaded = load_space(&doc).unwrap();
        let o = loaded.base.unwrap();
        assert_eq!(loaded.field.value(o), 4.0);
    }

    #[test]
    fn deterministic_in_seed() {
        let k = GenKind::RandomGeometric { n: 30, radius: 0.4 };
        let a = generate_space(&k, 7).unwrap().to_json();
        let b = generate_space(&k, 7).unwrap().to_json();
        assert_eq!(a, b);
        let c = generate_space(&k, 8).unwrap().to_json();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_spaces_load() {
        for kind in [
            GenKind::Path { n: 5 },
            GenKind::Grid2 { side: 4 },
            GenKind::Grid4 { side: 3 },
            GenKind::RandomGeometric { n: 40, radius: 0.3 },
            GenKind::ConeField { side: 5, c: 0.5 },
        ] {
            let doc = generate_space(&kind, 1).unwrap();
            load_space(&doc).unwrap();
        }
    }
}
