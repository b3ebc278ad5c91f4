//! Curvature growth fitting, blow-up candidate ranking, admissible radii for
//! derivative estimates, soliton identity audits, and noncollapsing checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, PointedSpace, ScalarField, SolitonKind, SolitonSample};
use crate::num::{le_tol, lt_strict, maybe_par_map};
use crate::selection::{select_sequence, SelectionCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModel {
    Bounded,
    Quadratic,
}

/// Best constant C for the chosen growth model, with the point attaining it.
#[derive(Debug, Clone)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub c: f64,
    pub witness: usize,
}

/// C = max of the field; witness is the argmax (first in id order).
pub fn fit_bounded(field: &ScalarField) -> GrowthFit {
    let mut best = 0usize;
    for (i, &v) in field.values().iter().enumerate() {
        if v > field.value(best) {
            best = i;
        }
    }
    GrowthFit {
        model: GrowthModel::Bounded,
        c: field.value(best),
        witness: best,
    }
}

/// C = max over x of field(x) / (d(x,o)+1)^2; witness is the argmax.
pub fn fit_quadratic(pointed: &PointedSpace, field: &ScalarField) -> GrowthFit {
    let o = pointed.base;
    let ratio = |x: usize| field.value(x) / (pointed.space.dist(x, o) + 1.0).powi(2);
    let mut best = 0usize;
    for x in 0..pointed.space.len() {
        if ratio(x) > ratio(best) {
            best = x;
        }
    }
    GrowthFit {
        model: GrowthModel::Quadratic,
        c: ratio(best),
        witness: best,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowupMode {
    ScaleInvariant,
    Absolute,
}

#[derive(Debug, Clone)]
pub struct BlowupEntry {
    pub point: usize,
    pub p: f64,
    /// P * (d(y,o)+1)^(-2)
    pub ratio: f64,
    pub certificate: SelectionCertificate,
}

#[derive(Debug, Clone)]
pub struct BlowupCandidates {
    pub mode: BlowupMode,
    pub entries: Vec<BlowupEntry>,
}

/// Top-k blow-up candidate points. Scale-invariant mode ranks by the ratio
/// P*(d+1)^(-2); absolute mode ranks by raw field value among points at
/// distance >= the median distance from o. Each entry carries the selection
/// certificate started at it (A = (1/3)P^(1/2)).
pub fn blowup_candidates(
    pointed: &PointedSpace,
    field: &ScalarField,
    mode: BlowupMode,
    k: usize,
) -> Result<BlowupCandidates> {
    let space = pointed.space;
    if k == 0 {
        return Err(Error::InvalidParams("k must be >= 1".into()));
    }
    if k > space.len() {
        return Err(Error::InvalidParams(format!(
            "k = {k} exceeds point count {}",
            space.len()
        )));
    }
    let o = pointed.base;
    let ratio = |x: usize| field.value(x) / (space.dist(x, o) + 1.0).powi(2);

    let mut pts: Vec<usize> = (0..space.len()).filter(|&x| field.value(x) > 0.0).collect();
    match mode {
        BlowupMode::ScaleInvariant => {
            pts.sort_by(|&a, &b| ratio(b).partial_cmp(&ratio(a)).unwrap().then(a.cmp(&b)));
        }
        BlowupMode::Absolute => {
            let mut dists: Vec<f64> = (0..space.len()).map(|x| space.dist(x, o)).collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = dists[dists.len() / 2];
            pts.retain(|&x| le_tol(median, space.dist(x, o)));
            pts.sort_by(|&a, &b| {
                field
                    .value(b)
                    .partial_cmp(&field.value(a))
                    .unwrap()
                    .then(a.cmp(&b))
            });
        }
    }
    pts.truncate(k);
    let certs = select_sequence(space, field, &pts)?;
    let entries = pts
        .into_iter()
        .zip(certs)
        .map(|(point, certificate)| BlowupEntry {
            point,
            p: field.value(point),
            ratio: ratio(point),
            certificate,
        })
        .collect();
    Ok(BlowupCandidates { mode, entries })
}

/// Largest candidate radius r with sup of |grad f| over the open ball of
/// radius 2r at p bounded by 1/r. Steady samples are capped at r = 1;
/// shrinking samples may reach the diameter.
pub fn shi_admissible_radius(
    sample: &SolitonSample,
    space: &MetricSpace,
    p: usize,
) -> Result<f64> {
    let mut candidates: Vec<f64> = Vec::new();
    for a in 0..space.len() {
        for b in (a + 1)..space.len() {
            let d = space.dist(a, b);
            if d > 0.0 {
                candidates.push(d / 2.0);
            }
        }
    }
    candidates.push(1.0);
    if sample.kind == SolitonKind::Shrinking {
        candidates.push(space.diameter());
    }
    candidates.retain(|&r| r > 0.0);
    if sample.kind == SolitonKind::Steady {
        candidates.retain(|&r| le_tol(r, 1.0));
    }
    candidates.sort_by(|a, b| b.partial_cmp(a).unwrap());
    candidates.dedup();
    for &r in &candidates {
        let sup = space
            .ball(p, 2.0 * r)
            .into_iter()
            .map(|y| sample.gradf[y])
            .fold(sample.gradf[p], f64::max);
        if le_tol(sup, 1.0 / r) {
            return Ok(r);
        }
    }
    Err(Error::NoAdmissibleRadius(space.id(p).to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub kind: SolitonKind,
    pub tol: f64,
    pub checks: Vec<IdentityCheck>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Audit the pointwise soliton identities at tolerance `tol`.
///
/// Steady: |grad f|^2 + R = 1 (normalized form) and constancy of
/// |grad f|^2 + R (the gauge-free form). Shrinking: |grad f|^2 <= f - R and
/// the edge Lipschitz bound |sqrt(f(x)) - sqrt(f(y))| <= len(x,y).
pub fn audit_soliton_identities(
    sample: &SolitonSample,
    space: &MetricSpace,
    tol: f64,
) -> Result<AuditReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tol must be positive, got {tol}")));
    }
    let n = space.len();
    let mut checks = Vec::new();
    let energy: Vec<f64> = (0..n)
        .map(|i| sample.gradf[i] * sample.gradf[i] + sample.r_scal[i])
        .collect();
    match sample.kind {
        SolitonKind::Steady => {
            let normalized = energy.iter().map(|e| (e - 1.0).abs()).fold(0.0, f64::max);
            checks.push(IdentityCheck {
                name: "steady_normalized".into(),
                max_residual: normalized,
                pass: normalized <= tol,
            });
            let lo = energy.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = energy.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let spread = hi - lo;
            checks.push(IdentityCheck {
                name: "steady_constant".into(),
                max_residual: spread,
                pass: spread <= tol,
            });
        }
        SolitonKind::Shrinking => {
            let mut bound = 0.0f64;
            for i in 0..n {
                let slack = sample.gradf[i] * sample.gradf[i] - (sample.f[i] - sample.r_scal[i]);
                bound = bound.max(slack);
            }
            checks.push(IdentityCheck {
                name: "shrinking_gradient_bound".into(),
                max_residual: bound.max(0.0),
                pass: bound <= tol,
            });
            for i in 0..n {
                if sample.f[i] < 0.0 {
                    return Err(Error::NegativeSqrt {
                        point: space.id(i).to_string(),
                        value: sample.f[i],
                    });
                }
            }
            let mut lip = 0.0f64;
            for &(a, b, len) in space.edges() {
                let r = (sample.f[a].sqrt() - sample.f[b].sqrt()).abs() - len;
                lip = lip.max(r);
            }
            checks.push(IdentityCheck {
                name: "lipschitz_sqrt_f".into(),
                max_residual: lip.max(0.0),
                pass: lip <= tol,
            });
        }
    }
    Ok(AuditReport {
        kind: sample.kind,
        tol,
        checks,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoncollapsingReport {
    pub kappa: f64,
    /// largest kappa with no violations over the scanned (point, radius) set
    pub kappa_max: f64,
    pub violations: Vec<(String, f64)>,
}

/// Volume lower bound checks: Vol B_{Q^{-1/2}}(x) >= kappa * Q^{-2} at each
/// point with Q = field(x) > 0, plus Vol B_r(x) >= kappa * r^4 over the
/// finite set of candidate radii (pairwise distances and their halves).
pub fn check_noncollapsing(
    sample: &SolitonSample,
    space: &MetricSpace,
    field: &ScalarField,
    kappa: f64,
) -> Result<NoncollapsingReport> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParams(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let n = space.len();
    let mut radii: Vec<f64> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let d = space.dist(a, b);
            if d > 0.0 {
                radii.push(d);
                radii.push(d / 2.0);
            }
        }
    }
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();

    let ball_vol = |x: usize, r: f64| -> f64 {
        (0..n)
            .filter(|&y| lt_strict(space.dist(x, y), r))
            .map(|y| sample.vol[y])
            .sum::<f64>()
    };

    let per_point: Vec<(Vec<(usize, f64)>, f64)> = maybe_par_map(n, |x| {
        let mut violations = Vec::new();
        let mut kmax = f64::INFINITY;
        let q = field.value(x);
        if q > 0.0 {
            let r = q.powf(-0.5);
            let v = ball_vol(x, r);
            kmax = kmax.min(v * q * q);
            if lt_strict(v, kappa * q.powi(-2)) {
                violations.push((x, r));
            }
        }
        for &r in &radii {
            let v = ball_vol(x, r);
            kmax = kmax.min(v / r.powi(4));
            if lt_strict(v, kappa * r.powi(4)) {
                violations.push((x, r));
            }
        }
        (violations, kmax)
    });

    let mut violations = Vec::new();
    let mut kappa_max = f64::INFINITY;
    for (vs, kmax) in per_point {
        for (x, r) in vs {
            violations.push((space.id(x).to_string(), r));
        }
        kappa_max = kappa_max.min(kmax);
    }
    Ok(NoncollapsingReport {
        kappa,
        kappa_max,
        violations,
    })
}
