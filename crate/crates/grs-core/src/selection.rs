//! Point selection with machine-checkable certificates.
//!
//! Starting from y0 with P0 = field(y0) > 0, repeatedly jump to a point whose
//! field value more than quadruples, staying inside the shrinking ball of
//! radius A0 * O_k^(-1/2). The chain terminates at a point x0 whose field
//! value controls the whole ball of radius A0 * Q0^(-1/2) by a factor of 4,
//! and the total travel stays below 2 * A0 * P0^(-1/2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, ScalarField};
use crate::num::{eq_tol, gt_strict, le_tol, lt_strict, maybe_par_map};

#[derive(Debug, Clone, Copy)]
pub struct SelectionParams {
    pub y0: usize,
    pub a0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guarantees {
    pub q_ge_p: bool,
    pub dist_ok: bool,
    pub ball_ok: bool,
}

#[derive(Debug, Clone)]
pub struct SelectionCertificate {
    /// (point index, field value O_k) along the selection chain; the first
    /// entry is (y0, P0), the last is (x0, Q0).
    pub chain: Vec<(usize, f64)>,
    pub x0: usize,
    pub q0: f64,
    /// A0 * Q0^(-1/2)
    pub radius: f64,
    pub a0: f64,
    pub guarantees: Guarantees,
}

/// Wire format for a certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub chain: Vec<(String, f64)>,
    pub x0: String,
    pub q0: f64,
    pub radius: f64,
    pub a0: f64,
    pub guarantees: Guarantees,
}

impl SelectionCertificate {
    pub fn to_doc(&self, space: &MetricSpace) -> CertificateDoc {
        CertificateDoc {
            chain: self
                .chain
                .iter()
                .map(|&(p, o)| (space.id(p).to_string(), o))
                .collect(),
            x0: space.id(self.x0).to_string(),
            q0: self.q0,
            radius: self.radius,
            a0: self.a0,
            guarantees: self.guarantees,
        }
    }

    pub fn from_doc(doc: &CertificateDoc, space: &MetricSpace) -> Result<Self> {
        let mut chain = Vec::with_capacity(doc.chain.len());
        for (id, o) in &doc.chain {
            chain.push((space.index_of(id)?, *o));
        }
        Ok(SelectionCertificate {
            chain,
            x0: space.index_of(&doc.x0)?,
            q0: doc.q0,
            radius: doc.radius,
            a0: doc.a0,
            guarantees: doc.guarantees,
        })
    }
}

/// Run the selection chain from params.y0 with scale parameter params.a0.
pub fn select_point(
    space: &MetricSpace,
    field: &ScalarField,
    params: &SelectionParams,
) -> Result<SelectionCertificate> {
    let p0 = field.value(params.y0);
    if !(p0 > 0.0) {
        return Err(Error::ZeroStart(space.id(params.y0).to_string()));
    }
    if !(params.a0 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "A0 must be positive, got {}",
            params.a0
        )));
    }
    let mut chain = vec![(params.y0, p0)];
    let (mut y, mut o) = (params.y0, p0);
    loop {
        let r = params.a0 * o.powf(-0.5);
        // Candidates violating the ball bound: field > 4*O_k inside the open ball.
        let mut best: Option<usize> = None;
        for z in 0..space.len() {
            if lt_strict(space.dist(y, z), r) && gt_strict(field.value(z), 4.0 * o) {
                // maximal field value, then lexicographically least id
                // (ids are sorted, so smaller index wins ties)
                best = match best {
                    None => Some(z),
                    Some(b) if field.value(z) > field.value(b) => Some(z),
                    Some(b) => Some(b),
                };
            }
        }
        match best {
            None => break,
            Some(z) => {
                y = z;
                o = field.value(z);
                chain.push((y, o));
            }
        }
    }
    let (x0, q0) = (y, o);
    let radius = params.a0 * q0.powf(-0.5);
    let dist_bound = 2.0 * params.a0 * p0.powf(-0.5);
    let sup = space.sup_on_ball(field, x0, radius)?;
    let guarantees = Guarantees {
        q_ge_p: le_tol(p0, q0),
        dist_ok: lt_strict(space.dist(x0, params.y0), dist_bound),
        ball_ok: le_tol(sup, 4.0 * q0),
    };
    Ok(SelectionCertificate {
        chain,
        x0,
        q0,
        radius,
        a0: params.a0,
        guarantees,
    })
}

/// Per-clause result of independently re-checking a certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// chain values match the field and O_{k+1} > 4*O_k
    pub chain_growth: bool,
    /// O_k >= 4^k * O_0
    pub chain_geometric: bool,
    /// d(y_{k+1}, y_k) < A0 * O_k^(-1/2)
    pub chain_steps: bool,
    /// x0 is the last chain point and Q0 = field(x0) >= P0
    pub q_ge_p: bool,
    /// d(x0, y0) < 2 * A0 * P0^(-1/2)
    pub dist_ok: bool,
    /// radius = A0 * Q0^(-1/2)
    pub radius_ok: bool,
    /// field <= 4*Q0 on the open ball of the stated radius around x0
    pub ball_ok: bool,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.chain_growth
            && self.chain_geometric
            && self.chain_steps
            && self.q_ge_p
            && self.dist_ok
            && self.radius_ok
            && self.ball_ok
    }
}

/// Re-check every clause of a certificate by exhaustive scan. This shares no
/// selection logic with [`select_point`]; it only reads the distance table
/// and the field.
pub fn verify_certificate(
    space: &MetricSpace,
    field: &ScalarField,
    params: &SelectionParams,
    cert: &SelectionCertificate,
) -> VerificationReport {
    let p0 = field.value(params.y0);
    let n = cert.chain.len();

    let mut chain_growth = n >= 1
        && cert.chain[0].0 == params.y0
        && cert.chain.iter().all(|&(p, o)| field.value(p) == o);
    for w in cert.chain.windows(2) {
        if !gt_strict(w[1].1, 4.0 * w[0].1) {
            chain_growth = false;
        }
    }

    let mut chain_geometric = true;
    for (k, &(_, o)) in cert.chain.iter().enumerate() {
        if !le_tol(4.0f64.powi(k as i32) * cert.chain[0].1, o) {
            chain_geometric = false;
        }
    }

    let mut chain_steps = true;
    for w in cert.chain.windows(2) {
        let step_bound = cert.a0 * w[0].1.powf(-0.5);
        if !lt_strict(space.dist(w[1].0, w[0].0), step_bound) {
            chain_steps = false;
        }
    }

    let q_ge_p = n >= 1
        && cert.chain[n - 1].0 == cert.x0
        && field.value(cert.x0) == cert.q0
        && le_tol(p0, cert.q0);

    let dist_ok = p0 > 0.0 && lt_strict(space.dist(cert.x0, params.y0), 2.0 * cert.a0 * p0.powf(-0.5));

    let radius_ok = cert.q0 > 0.0 && eq_tol(cert.radius, cert.a0 * cert.q0.powf(-0.5));

    let mut ball_ok = true;
    for z in 0..space.len() {
        if lt_strict(space.dist(z, cert.x0), cert.radius) && !le_tol(field.value(z), 4.0 * cert.q0) {
            ball_ok = false;
        }
    }

    VerificationReport {
        chain_growth,
        chain_geometric,
        chain_steps,
        q_ge_p,
        dist_ok,
        radius_ok,
        ball_ok,
    }
}

/// Run the chain from y0 with the canonical scale A0 = (1/3) * P0^(1/2).
/// With that choice d(x0, y0) < 2/3 and the ball radius is at most 1/3.
///
/// The radius A0 * Q0^(-1/2) is evaluated as (1/3) * (P0/Q0)^(1/2):
/// algebraically identical, but exact in floating point at the boundary — a
/// stationary chain (Q0 = P0) yields radius exactly 1/3 instead of 1/3 plus
/// a rounding ulp.
pub fn select_point_canonical(
    space: &MetricSpace,
    field: &ScalarField,
    y0: usize,
) -> Result<SelectionCertificate> {
    let p0 = field.value(y0);
    if !(p0 > 0.0) {
        return Err(Error::ZeroStart(space.id(y0).to_string()));
    }
    let a0 = p0.sqrt() / 3.0;
    let mut cert = select_point(space, field, &SelectionParams { y0, a0 })?;
    cert.radius = (p0 / cert.q0).sqrt() / 3.0;
    let sup = space.sup_on_ball(field, cert.x0, cert.radius)?;
    cert.guarantees.ball_ok = le_tol(sup, 4.0 * cert.q0);
    Ok(cert)
}

/// One certificate per start, with A_i = (1/3) * P_i^(1/2). With that choice
/// every selected point lies in the open ball of radius 2/3 around its start.
pub fn select_sequence(
    space: &MetricSpace,
    field: &ScalarField,
    starts: &[usize],
) -> Result<Vec<SelectionCertificate>> {
    let results = maybe_par_map(starts.len(), |i| select_point_canonical(space, field, starts[i]));
    results.into_iter().collect()
}

/// Upper bound on chain length: floor(log4(Pmax/P0)) + 1.
pub fn iteration_bound(p0: f64, pmax: f64) -> Result<usize> {
    if !(p0 > 0.0) {
        return Err(Error::InvalidParams(format!("P0 must be positive, got {p0}")));
    }
    if !le_tol(p0, pmax) {
        return Err(Error::InvalidParams(format!(
            "need P0 <= Pmax, got P0={p0}, Pmax={pmax}"
        )));
    }
    let mut k = 0usize;
    let mut thresh = 4.0 * p0;
    while le_tol(thresh, pmax) {
        k += 1;
        thresh *= 4.0;
    }
    Ok(k + 1)
}
