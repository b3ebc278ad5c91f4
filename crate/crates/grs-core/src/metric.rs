//! Finite pointed metric spaces with scalar fields.
//!
//! A space is a connected weighted graph with positive edge lengths; the
//! metric is the all-pairs shortest-path distance. Balls are open: `d(.,x) < r`.

use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{self, lt_strict};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    pub rm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_scal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub a: String,
    pub b: String,
    pub len: f64,
}

/// The space document wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDocument {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

impl SpaceDocument {
    pub fn to_json(&self) -> String {
        // Canonical rendering: identical documents serialize byte-identically.
        serde_json::to_string_pretty(self).expect("space document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolitonKind {
    Steady,
    Shrinking,
}

/// Per-point soliton data: potential f, scalar curvature R, |grad f|, volume weight.
#[derive(Debug, Clone)]
pub struct SolitonSample {
    pub kind: SolitonKind,
    pub f: Vec<f64>,
    pub r_scal: Vec<f64>,
    pub gradf: Vec<f64>,
    pub vol: Vec<f64>,
}

/// Nonnegative per-point scalar field (curvature proxy standing in for |Rm|).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Self {
        ScalarField { values }
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scaled(&self, lambda: f64) -> ScalarField {
        ScalarField::new(self.values.iter().map(|v| v * lambda).collect())
    }
}

/// Finite metric space: points sorted lexicographically by id, shortest-path
/// distance table derived from the edge list.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
    dist: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct LoadedSpace {
    pub space: MetricSpace,
    pub field: ScalarField,
    pub sample: Option<SolitonSample>,
    pub base: Option<usize>,
}

/// A space with a distinguished base point o.
#[derive(Debug, Clone)]
pub struct PointedSpace<'a> {
    pub space: &'a MetricSpace,
    pub base: usize,
}

impl MetricSpace {
    /// Dijkstra from one source over an adjacency list; shared by the
    /// sequential and parallel distance-table builders.
    fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
        let n = adj.len();
        let mut dist = vec![f64::INFINITY; n];
        dist[src] = 0.0;
        // Max-heap on reversed ordering; f64 keys are finite and nonnegative.
        let mut heap: BinaryHeap<(std::cmp::Reverse<ordered::F64>, usize)> = BinaryHeap::new();
        heap.push((std::cmp::Reverse(ordered::F64(0.0)), src));
        while let Some((std::cmp::Reverse(ordered::F64(d)), u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push((std::cmp::Reverse(ordered::F64(nd)), v));
                }
            }
        }
        dist
    }

    fn build(ids: Vec<String>, edges: Vec<(usize, usize, f64)>, parallel: bool) -> Result<Self> {
        let n = ids.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b, len) in &edges {
            adj[a].push((b, len));
            adj[b].push((a, len));
        }
        let dist = if parallel {
            num::maybe_par_map(n, |i| Self::dijkstra(&adj, i))
        } else {
            (0..n).map(|i| Self::dijkstra(&adj, i)).collect()
        };
        // Connectivity: every point reachable from the first.
        if n > 0 {
            for (i, &d) in dist[0].iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::Disconnected(ids[i].clone(), ids[0].clone()));
                }
            }
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(MetricSpace {
            ids,
            index,
            edges,
            adj,
            dist,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.ids[idx]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, idx: usize) -> &[(usize, f64)] {
        &self.adj[idx]
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.dist[a][b]
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for row in &self.dist {
            for &v in row {
                d = d.max(v);
            }
        }
        d
    }

    /// Open ball { y : dist(y, x) < r }, as sorted point indices.
    pub fn ball(&self, x: usize, r: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| lt_strict(self.dist[x][y], r))
            .collect()
    }

    /// Max of `field` over the open ball of radius `r` at `x`.
    pub fn sup_on_ball(&self, field: &ScalarField, x: usize, r: f64) -> Result<f64> {
        let ball = self.ball(x, r);
        if ball.is_empty() {
            return Err(Error::EmptyBall {
                point: self.ids[x].clone(),
                radius: r,
            });
        }
        Ok(ball
            .into_iter()
            .map(|y| field.value(y))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Rescale every edge length by `lambda` (distance table recomputed by scaling).
    pub fn scaled_lengths(&self, lambda: f64) -> MetricSpace {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.2 *= lambda;
        }
        for row in &mut out.adj {
            for e in row {
                e.1 *= lambda;
            }
        }
        for row in &mut out.dist {
            for d in row {
                *d *= lambda;
            }
        }
        out
    }
}

/// Validate a space document and build the derived distance table.
pub fn load_space(doc: &SpaceDocument) -> Result<LoadedSpace> {
    load_space_with(doc, cfg!(feature = "parallel"))
}

/// Like [`load_space`] with explicit control over parallel distance computation.
pub fn load_space_with(doc: &SpaceDocument, parallel: bool) -> Result<LoadedSpace> {
    if doc.nodes.is_empty() {
        return Err(Error::InvalidParams("document has no nodes".into()));
    }
    let mut order: Vec<usize> = (0..doc.nodes.len()).collect();
    order.sort_by(|&a, &b| doc.nodes[a].id.cmp(&doc.nodes[b].id));
    let ids: Vec<String> = order.iter().map(|&i| doc.nodes[i].id.clone()).collect();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidParams(format!("duplicate node id `{}`", w[0])));
        }
    }
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let a = *index
            .get(e.a.as_str())
            .ok_or_else(|| Error::UnknownPoint(e.a.clone()))?;
        let b = *index
            .get(e.b.as_str())
            .ok_or_else(|| Error::UnknownPoint(e.b.clone()))?;
        if !(e.len > 0.0) {
            return Err(Error::NonpositiveEdgeLength {
                a: e.a.clone(),
                b: e.b.clone(),
                len: e.len,
            });
        }
        edges.push((a, b, e.len));
    }

    let mut rm = vec![0.0; ids.len()];
    for node in &doc.nodes {
        let idx = index[node.id.as_str()];
        if node.rm < 0.0 || !node.rm.is_finite() {
            return Err(Error::NegativeFieldValue {
                point: node.id.clone(),
                field: "rm",
                value: node.rm,
            });
        }
        rm[idx] = node.rm;
    }

    let sample = load_sample(doc, &index)?;
    let base = match &doc.base {
        Some(b) => Some(
            *index
                .get(b.as_str())
                .ok_or_else(|| Error::UnknownPoint(b.clone()))?,
        ),
        None => None,
    };

    let space = MetricSpace::build(ids, edges, parallel)?;
    Ok(LoadedSpace {
        space,
        field: ScalarField::new(rm),
        sample,
        base,
    })
}

fn load_sample(doc: &SpaceDocument, index: &HashMap<&str, usize>) -> Result<Option<SolitonSample>> {
    let any = doc
        .nodes
        .iter()
        .any(|n| n.f.is_some() || n.r_scal.is_some() || n.gradf.is_some() || n.vol.is_some());
    if !any {
        return Ok(None);
    }
    let kind = match doc.kind.as_deref() {
        Some("steady") => SolitonKind::Steady,
        Some("shrinking") => SolitonKind::Shrinking,
        Some(other) => return Err(Error::UnknownKind(other.to_string())),
        None => return Err(Error::MissingKind),
    };
    let n = doc.nodes.len();
    let mut f = vec![0.0; n];
    let mut r_scal = vec![0.0; n];
    let mut gradf = vec![0.0; n];
    let mut vol = vec![0.0; n];
    for node in &doc.nodes {
        let idx = index[node.id.as_str()];
        f[idx] = req(node.f, "f", &node.id)?;
        r_scal[idx] = req(node.r_scal, "r_scal", &node.id)?;
        gradf[idx] = req(node.gradf, "gradf", &node.id)?;
        vol[idx] = req(node.vol, "vol", &node.id)?;
        if gradf[idx] < 0.0 {
            return Err(Error::NegativeFieldValue {
                point: node.id.clone(),
                field: "gradf",
                value: gradf[idx],
            });
        }
        if !(vol[idx] > 0.0) {
            return Err(Error::NegativeFieldValue {
                point: node.id.clone(),
                field: "vol",
                value: vol[idx],
            });
        }
    }
    Ok(Some(SolitonSample {
        kind,
        f,
        r_scal,
        gradf,
        vol,
    }))
}

fn req(v: Option<f64>, field: &'static str, id: &str) -> Result<f64> {
    v.ok_or_else(|| Error::PartialSolitonField {
        point: id.to_string(),
        field,
    })
}

/// Render a loaded space back into a document (inverse of [`load_space`]).
pub fn serialize_space(loaded: &LoadedSpace) -> SpaceDocument {
    let space = &loaded.space;
    let nodes = (0..space.len())
        .map(|i| NodeDoc {
            id: space.id(i).to_string(),
            rm: loaded.field.value(i),
            f: loaded.sample.as_ref().map(|s| s.f[i]),
            r_scal: loaded.sample.as_ref().map(|s| s.r_scal[i]),
            gradf: loaded.sample.as_ref().map(|s| s.gradf[i]),
            vol: loaded.sample.as_ref().map(|s| s.vol[i]),
        })
        .collect();
    let edges = space
        .edges()
        .iter()
        .map(|&(a, b, len)| EdgeDoc {
            a: space.id(a).to_string(),
            b: space.id(b).to_string(),
            len,
        })
        .collect();
    SpaceDocument {
        nodes,
        edges,
        base: loaded.base.map(|b| space.id(b).to_string()),
        kind: loaded.sample.as_ref().map(|s| match s.kind {
            SolitonKind::Steady => "steady".to_string(),
            SolitonKind::Shrinking => "shrinking".to_string(),
        }),
    }
}

mod ordered {
    /// Finite-only f64 with total order, for the Dijkstra heap.
    #[derive(PartialEq, Clone, Copy)]
    pub struct F64(pub f64);
    impl Eq for F64 {}
    impl PartialOrd for F64 {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for F64 {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.partial_cmp(&other.0).expect("finite distance")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> SpaceDocument {
        SpaceDocument {
            nodes: vec![
                NodeDoc { id: "p0".into(), rm: 1.0, f: None, r_scal: None, gradf: None, vol: None },
                NodeDoc { id: "p1".into(), rm: 10.0, f: None, r_scal: None, gradf: None, vol: None },
                NodeDoc { id: "p2".into(), rm: 100.0, f: None, r_scal: None, gradf: None, vol: None },
            ],
            edges: vec![
                EdgeDoc { a: "p0".into(), b: "p1".into(), len: 1.0 },
                EdgeDoc { a: "p1".into(), b: "p2".into(), len: 1.0 },
            ],
            base: None,
            kind: None,
        }
    }

    #[test]
    fn path_distances() {
        let loaded = load_space(&path3()).unwrap();
        let s = &loaded.space;
        assert_eq!(s.dist(s.index_of("p0").unwrap(), s.index_of("p2").unwrap()), 2.0);
    }

    #[test]
    fn zero_length_edge_rejected() {
        let mut doc = path3();
        doc.edges[0].len = 0.0;
        match load_space(&doc) {
            Err(Error::NonpositiveEdgeLength { len, .. }) => assert_eq!(len, 0.0),
            other => panic!("expected nonpositive edge length error, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_rejected() {
        let mut doc = path3();
        doc.edges.pop();
        assert!(matches!(load_space(&doc), Err(Error::Disconnected(_, _))));
    }

    #[test]
    fn unknown_edge_endpoint_rejected() {
        let mut doc = path3();
        doc.edges[0].b = "zz".into();
        assert!(matches!(load_space(&doc), Err(Error::UnknownPoint(p)) if p == "zz"));
    }

    #[test]
    fn negative_field_rejected() {
        let mut doc = path3();
        doc.nodes[1].rm = -1.0;
        assert!(matches!(
            load_space(&doc),
            Err(Error::NegativeFieldValue { field: "rm", .. })
        ));
    }

    #[test]
    fn open_ball_conventions() {
        let loaded = load_space(&path3()).unwrap();
        let s = &loaded.space;
        let p0 = s.index_of("p0").unwrap();
        assert!(s.ball(p0, 0.0).is_empty());
        let b = s.ball(p0, 1.5);
        let names: Vec<&str> = b.iter().map(|&i| s.id(i)).collect();
        assert_eq!(names, vec!["p0", "p1"]);
    }

    #[test]
    fn sup_on_ball_excludes_far_spike() {
        let loaded = load_space(&path3()).unwrap();
        let s = &loaded.space;
        let p0 = s.index_of("p0").unwrap();
        // spike at p2 is outside ball(p0, 1.5)
        assert_eq!(s.sup_on_ball(&loaded.field, p0, 1.5).unwrap(), 10.0);
        assert_eq!(s.sup_on_ball(&loaded.field, p0, 2.5).unwrap(), 100.0);
        assert!(matches!(
            s.sup_on_ball(&loaded.field, p0, 0.0),
            Err(Error::EmptyBall { .. })
        ));
    }

    #[test]
    fn sup_constant_field() {
        let loaded = load_space(&path3()).unwrap();
        let s = &loaded.space;
        let c = ScalarField::new(vec![7.0; 3]);
        assert_eq!(s.sup_on_ball(&c, 0, 10.0).unwrap(), 7.0);
    }

    #[test]
    fn serialize_round_trip() {
        let doc = path3();
        let loaded = load_space(&doc).unwrap();
        let doc2 = serialize_space(&loaded);
        let loaded2 = load_space(&doc2).unwrap();
        assert_eq!(loaded.space.ids(), loaded2.space.ids());
        assert_eq!(loaded.field, loaded2.field);
        assert_eq!(doc2.to_json(), serialize_space(&loaded2).to_json());
    }
}
