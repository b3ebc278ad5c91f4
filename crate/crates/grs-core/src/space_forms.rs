//! Catalog of the fundamental groups of three-dimensional spherical space
//! forms realized in the unit quaternions: cyclic Z_n, binary dihedral D*_n,
//! and the three binary polyhedral groups 2T, 2O, 2I. Each entry carries an
//! abelianized relation matrix (feeding the Smith-normal-form path) and an
//! exact quaternion generator pair (feeding an independent brute-force
//! oracle). The remaining space-form families (index-3 metacyclic extensions
//! and friends) are deliberately outside the catalog.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{group_from_relations, ElementaryDivisors, FgAbelianGroup};
use crate::cyclotomic::CycCtx;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::quaternion::{closure, Quat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cyclic,
    BinaryDihedral,
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::BinaryDihedral => "binary-dihedral",
            Family::BinaryTetrahedral => "binary-tetrahedral",
            Family::BinaryOctahedral => "binary-octahedral",
            Family::BinaryIcosahedral => "binary-icosahedral",
        }
    }
}

/// An imported fact carried with its literature citation, so downstream
/// verdict traces can distinguish computed steps from cited ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactTag {
    pub claim: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations {
    /// For nontrivial groups: second Betti number of the filling is >= 1
    /// (imported fact, not derived here).
    pub b2_lower_bound: Option<FactTag>,
    /// True only for the binary icosahedral group: its space form is the
    /// Poincare homology sphere and Rochlin's theorem applies to fillings.
    pub rochlin: bool,
    /// True only for the trivial group: the end is flat rather than a
    /// genuine spherical space form, outside the main argument.
    pub flat_end: bool,
}

#[derive(Debug, Clone)]
pub struct SpaceFormGroup {
    pub family: Family,
    /// Parameter n for the cyclic and binary dihedral families.
    pub param: Option<u64>,
    pub order: u64,
    /// Relation matrix of the abelianized presentation (rows are relations
    /// over the generator columns).
    pub relations: IntMatrix,
    pub annotations: Annotations,
}

fn annotations_for(order: u64, family: Family) -> Annotations {
    let trivial = order == 1;
    Annotations {
        b2_lower_bound: if trivial {
            None
        } else {
            Some(FactTag {
                claim: "b_2 of any negative-definite filling is at least 1".into(),
                citation: "Zhang, Lemma 6.5".into(),
            })
        },
        rochlin: family == Family::BinaryIcosahedral,
        flat_end: trivial,
    }
}

pub fn cyclic_group(n: u64) -> Result<SpaceFormGroup> {
    if n == 0 {
        return Err(Error::InvalidParams("cyclic parameter must be >= 1".into()));
    }
    Ok(SpaceFormGroup {
        family: Family::Cyclic,
        param: Some(n),
        order: n,
        relations: IntMatrix::from_i64(&[vec![n as i64]]),
        annotations: annotations_for(n, Family::Cyclic),
    })
}

pub fn binary_dihedral_group(n: u64) -> Result<SpaceFormGroup> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "binary dihedral parameter must be >= 1".into(),
        ));
    }
    // Generators x, y with x^{2n} = 1, y^2 = x^n, y x y^{-1} = x^{-1};
    // abelianized relations over (x, y).
    let n_i = n as i64;
    Ok(SpaceFormGroup {
        family: Family::BinaryDihedral,
        param: Some(n),
        order: 4 * n,
        relations: IntMatrix::from_i64(&[vec![2 * n_i, 0], vec![-n_i, 2], vec![2, 0]]),
        annotations: annotations_for(4 * n, Family::BinaryDihedral),
    })
}

fn binary_polyhedral(family: Family, q: i64, order: u64) -> SpaceFormGroup {
    // <a, b | (ab)^2 = a^3 = b^q>; abelianized over (a, b):
    // 2(a+b) = 3a  ->  -a + 2b = 0,   3a = qb  ->  3a - qb = 0.
    SpaceFormGroup {
        family,
        param: None,
        order,
        relations: IntMatrix::from_i64(&[vec![-1, 2], vec![3, -q]]),
        annotations: annotations_for(order, family),
    }
}

pub fn binary_tetrahedral_group() -> SpaceFormGroup {
    binary_polyhedral(Family::BinaryTetrahedral, 3, 24)
}

pub fn binary_octahedral_group() -> SpaceFormGroup {
    binary_polyhedral(Family::BinaryOctahedral, 4, 48)
}

pub fn binary_icosahedral_group() -> SpaceFormGroup {
    binary_polyhedral(Family::BinaryIcosahedral, 5, 120)
}

/// Parse a group spec string: "Z:5", "Dstar:4", "2T", "2O", "2I".
pub fn parse_space_form_spec(spec: &str) -> Result<SpaceFormGroup> {
    match spec {
        "2T" => return Ok(binary_tetrahedral_group()),
        "2O" => return Ok(binary_octahedral_group()),
        "2I" => return Ok(binary_icosahedral_group()),
        _ => {}
    }
    if let Some(n) = spec.strip_prefix("Z:") {
        let n: u64 = n
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad cyclic parameter in {spec:?}")))?;
        return cyclic_group(n);
    }
    if let Some(n) = spec.strip_prefix("Dstar:") {
        let n: u64 = n
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad dihedral parameter in {spec:?}")))?;
        return binary_dihedral_group(n);
    }
    Err(Error::InvalidParams(format!(
        "unrecognized group spec {spec:?} (expected Z:n, Dstar:n, 2T, 2O, 2I)"
    )))
}

/// Enumerate the catalog: Z_n and D*_n for n <= max_param, plus the three
/// binary polyhedral groups. Deterministic order.
pub fn catalog(family: Option<Family>, max_param: u64) -> Result<Vec<SpaceFormGroup>> {
    if max_param < 1 {
        return Err(Error::InvalidParams("max_param must be >= 1".into()));
    }
    let mut out = Vec::new();
    let want = |f: Family| family.is_none_or(|sel| sel == f);
    if want(Family::Cyclic) {
        for n in 1..=max_param {
            out.push(cyclic_group(n)?);
        }
    }
    if want(Family::BinaryDihedral) {
        for n in 1..=max_param {
            out.push(binary_dihedral_group(n)?);
        }
    }
    if want(Family::BinaryTetrahedral) {
        out.push(binary_tetrahedral_group());
    }
    if want(Family::BinaryOctahedral) {
        out.push(binary_octahedral_group());
    }
    if want(Family::BinaryIcosahedral) {
        out.push(binary_icosahedral_group());
    }
    Ok(out)
}

/// First homology of the space form S^3/Gamma: the abelianization of Gamma,
/// computed from the stored relation matrix via Smith normal form.
pub fn abelianization(g: &SpaceFormGroup) -> FgAbelianGroup {
    group_from_relations(&g.relations)
}

fn quaternion_generators(g: &SpaceFormGroup) -> (CycCtx, Vec<Quat>) {
    match g.family {
        Family::Cyclic => {
            let n = g.param.expect("cyclic param") as usize;
            let ctx = CycCtx::new(n.max(1));
            let z = Quat {
                a: ctx.root_pow(1),
                b: ctx.zero(),
            };
            (ctx, vec![z])
        }
        Family::BinaryDihedral => {
            let n = g.param.expect("dihedral param") as usize;
            let ctx = CycCtx::new(2 * n);
            let x = Quat {
                a: ctx.root_pow(1),
                b: ctx.zero(),
            };
            let j = Quat {
                a: ctx.zero(),
                b: ctx.from_i64(1),
            };
            (ctx, vec![x, j])
        }
        Family::BinaryTetrahedral => {
            // i and omega = (1 + i + j + k)/2.
            let ctx = CycCtx::new(4);
            let i = Quat {
                a: ctx.root_pow(1),
                b: ctx.zero(),
            };
            let half_1pi = ctx.mul(
                &ctx.ratio(1, 2),
                &ctx.add(&ctx.from_i64(1), &ctx.root_pow(1)),
            );
            let omega = Quat {
                a: half_1pi.clone(),
                b: half_1pi,
            };
            (ctx, vec![i, omega])
        }
        Family::BinaryOctahedral => {
            // e^{i pi/4} and omega, with i = zeta_8^2.
            let ctx = CycCtx::new(8);
            let s = Quat {
                a: ctx.root_pow(1),
                b: ctx.zero(),
            };
            let half_1pi = ctx.mul(
                &ctx.ratio(1, 2),
                &ctx.add(&ctx.from_i64(1), &ctx.root_pow(2)),
            );
            let omega = Quat {
                a: half_1pi.clone(),
                b: half_1pi,
            };
            (ctx, vec![s, omega])
        }
        Family::BinaryIcosahedral => {
            // omega = (1 + i + j + k)/2 and sigma = (phi + phi^{-1} i + j)/2,
            // with phi = (1 + sqrt 5)/2 and i = zeta_20^5.
            let ctx = CycCtx::new(20);
            let i = ctx.root_pow(5);
            let half = ctx.ratio(1, 2);
            let half_1pi = ctx.mul(&half, &ctx.add(&ctx.from_i64(1), &i));
            let omega = Quat {
                a: half_1pi.clone(),
                b: half_1pi,
            };
            let sqrt5 = ctx.sqrt5();
            let phi = ctx.mul(&half, &ctx.add(&ctx.from_i64(1), &sqrt5));
            let phi_inv = ctx.mul(&half, &ctx.sub(&sqrt5, &ctx.from_i64(1)));
            let sigma = Quat {
                a: ctx.mul(&half, &ctx.add(&phi, &ctx.mul(&phi_inv, &i))),
                b: half.clone(),
            };
            (ctx, vec![omega, sigma])
        }
    }
}

/// Reconstruct a finite abelian group from the multiset of its element
/// orders: for each prime p, the count of elements of order dividing p^e is
/// p^{sum_i min(lambda_i, e)}, which pins down the exponent partition lambda.
fn group_from_order_census(orders: &[usize]) -> FgAbelianGroup {
    let n = orders.len();
    let mut primes: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let mut rem = n as u64;
    let mut p = 2u64;
    let mut prime_list = Vec::new();
    while rem > 1 {
        if rem.is_multiple_of(p) {
            prime_list.push(p);
            while rem.is_multiple_of(p) {
                rem /= p;
            }
        }
        p += 1;
    }
    for &p in &prime_list {
        // s_e = log_p #{x : order(x) divides p^e}
        let mut partition: Vec<u32> = Vec::new();
        let mut prev_s = 0u32;
        let mut e = 1u32;
        loop {
            let pe = (p as u128).pow(e);
            let count = orders
                .iter()
                .filter(|&&o| pe.is_multiple_of(o as u128))
                .count() as u64;
            let mut s = 0u32;
            let mut c = count;
            while c > 1 {
                debug_assert_eq!(c % p, 0);
                c /= p;
                s += 1;
            }
            let parts_ge_e = s - prev_s;
            if parts_ge_e == 0 {
                break;
            }
            // parts_ge_e many parts of the partition are >= e
            for i in 0..parts_ge_e as usize {
                if partition.len() <= i {
                    partition.push(0);
                }
                partition[i] = e;
            }
            prev_s = s;
            e += 1;
        }
        if !partition.is_empty() {
            primes.insert(p, partition);
        }
    }
    FgAbelianGroup::from_elementary(&ElementaryDivisors { rank: 0, primes })
}

/// Independent brute-force oracle: generate the group in the unit
/// quaternions, find its commutator subgroup by element enumeration, and
/// read off the structure of the abelian quotient from its element-order
/// census. Shares no code with the Smith-normal-form path.
pub fn quaternion_oracle(g: &SpaceFormGroup) -> Result<FgAbelianGroup> {
    let (ctx, gens) = quaternion_generators(g);
    let table = closure(ctx, &gens, g.order as usize)?;
    if table.order() != g.order as usize {
        return Err(Error::PresentationMismatch(format!(
            "quaternion closure has {} elements, expected {}",
            table.order(),
            g.order
        )));
    }
    if !table.all_units() {
        return Err(Error::PresentationMismatch(
            "closure contains a non-unit quaternion".into(),
        ));
    }
    let commutators = table.commutator_subgroup();
    let orders = table.quotient_orders(&commutators);
    Ok(group_from_order_census(&orders))
}

/// Partition of a catalog by whether the abelianization is of the form
/// A + A for some finite abelian A.
#[derive(Debug, Clone)]
pub struct DoublePartition {
    pub positive: Vec<(SpaceFormGroup, FgAbelianGroup)>,
    pub negative: Vec<(SpaceFormGroup, FgAbelianGroup)>,
}

pub fn classify_direct_double(groups: &[SpaceFormGroup]) -> Result<DoublePartition> {
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for g in groups {
        let ab = abelianization(g);
        match crate::abelian::is_direct_double(&ab)? {
            Some(_) => positive.push((g.clone(), ab)),
            None => negative.push((g.clone(), ab)),
        }
    }
    Ok(DoublePartition { positive, negative })
}
