//! Finitely generated abelian groups in canonical form: free rank plus
//! invariant factors d1 | d2 | ... with each di >= 2. Two groups are
//! isomorphic iff their canonical forms are equal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbelianGroup {
    rank: usize,
    factors: Vec<BigInt>,
}

/// Wire format: either canonical {rank, factors} or a relation presentation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Canonical {
        rank: usize,
        factors: Vec<u64>,
    },
    Presented {
        generators: usize,
        relations: Vec<Vec<i64>>,
    },
}

/// Multiset of prime powers p^e, kept per prime as exponent partitions
/// sorted descending. A derived view of the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryDivisors {
    pub rank: usize,
    pub primes: BTreeMap<u64, Vec<u32>>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, factors: Vec<BigInt>) -> Result<Self> {
        for f in &factors {
            if *f < BigInt::from(2) {
                return Err(Error::InvalidParams(format!(
                    "invariant factor {f} must be >= 2"
                )));
            }
        }
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvalidParams(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbelianGroup { rank, factors })
    }

    pub fn from_invariants_u64(rank: usize, factors: &[u64]) -> Result<Self> {
        Self::new(rank, factors.iter().map(|&f| BigInt::from(f)).collect())
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            rank: 0,
            factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            factors: Vec::new(),
        }
    }

    /// Z_n; n = 1 gives the trivial group.
    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FgAbelianGroup {
                rank: 0,
                factors: vec![BigInt::from(n)],
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn factors_u64(&self) -> Vec<u64> {
        self.factors
            .iter()
            .map(|f| f.to_u64().expect("factor fits in u64"))
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Product of the invariant factors; None when the rank is positive.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        Some(self.factors.iter().product::<BigInt>().max(BigInt::one()))
    }

    /// The torsion subgroup: same factors, rank zero.
    pub fn torsion(&self) -> FgAbelianGroup {
        FgAbelianGroup {
            rank: 0,
            factors: self.factors.clone(),
        }
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> Result<FgAbelianGroup> {
        let a = self.elementary_divisors()?;
        let b = other.elementary_divisors()?;
        let mut primes = a.primes;
        for (p, exps) in b.primes {
            primes.entry(p).or_default().extend(exps);
        }
        for exps in primes.values_mut() {
            exps.sort_unstable_by(|x, y| y.cmp(x));
        }
        Ok(FgAbelianGroup::from_elementary(&ElementaryDivisors {
            rank: a.rank + b.rank,
            primes,
        }))
    }

    /// Primary decomposition. Errors if an invariant factor exceeds u64.
    pub fn elementary_divisors(&self) -> Result<ElementaryDivisors> {
        let mut primes: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for f in &self.factors {
            let mut n = f.to_u64().ok_or_else(|| Error::InvalidParams(format!(
                "invariant factor {f} too large for primary decomposition"
            )))?;
            let mut p = 2u64;
            while p * p <= n {
                if n % p == 0 {
                    let mut e = 0u32;
                    while n % p == 0 {
                        n /= p;
                        e += 1;
                    }
                    primes.entry(p).or_default().push(e);
                }
                p += 1;
            }
            if n > 1 {
                primes.entry(n).or_default().push(1);
            }
        }
        for exps in primes.values_mut() {
            exps.sort_unstable_by(|x, y| y.cmp(x));
        }
        Ok(ElementaryDivisors {
            rank: self.rank,
            primes,
        })
    }

    /// Rebuild canonical invariant factors from a primary decomposition.
    pub fn from_elementary(ed: &ElementaryDivisors) -> FgAbelianGroup {
        let depth = ed.primes.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = Vec::new();
        for i in 0..depth {
            let mut f = BigInt::one();
            for (&p, exps) in &ed.primes {
                if let Some(&e) = exps.get(i) {
                    f *= BigInt::from(p).pow(e);
                }
            }
            factors.push(f);
        }
        factors.reverse(); // ascending divisibility chain
        FgAbelianGroup {
            rank: ed.rank,
            factors,
        }
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            if self.rank == 1 {
                parts.push("Z".to_string());
            } else {
                parts.push(format!("Z^{}", self.rank));
            }
        }
        for d in &self.factors {
            parts.push(format!("Z{d}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Cokernel Z^g / image(rel), where `rel` has one relation per row over g
/// generator columns.
pub fn group_from_relations(rel: &IntMatrix) -> FgAbelianGroup {
    let g = rel.cols;
    let diag = smith_normal_form(rel).diagonal();
    let nonzero = diag.len();
    let factors = diag
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .collect::<Vec<_>>();
    FgAbelianGroup {
        rank: g - nonzero,
        factors,
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// dim_Zp (G tensor Z_p) = rank + #{invariant factors divisible by p}.
pub fn tensor_zp(g: &FgAbelianGroup, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pb = BigInt::from(p);
    Ok(g.rank() + g.factors().iter().filter(|f| (*f % &pb).is_zero()).count())
}

/// Ext^1(G, Z) is the torsion subgroup of G.
pub fn ext1_torsion(g: &FgAbelianGroup) -> FgAbelianGroup {
    g.torsion()
}

/// (dim Hom(G, Z_p), dim Ext^1(G, Z_p)): the torsion part contributes to
/// both, the free part only to Hom.
pub fn hom_ext_zp(g: &FgAbelianGroup, p: u64) -> Result<(usize, usize)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let t = g.factors().iter().filter(|f| (*f % &pb).is_zero()).count();
    Ok((g.rank() + t, t))
}

/// If G is isomorphic to A + A, return the canonical halving A.
/// Needs even rank and even multiplicity of every elementary divisor.
pub fn is_direct_double(g: &FgAbelianGroup) -> Result<Option<FgAbelianGroup>> {
    if !g.rank().is_multiple_of(2) {
        return Ok(None);
    }
    let ed = g.elementary_divisors()?;
    let mut half: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (&p, exps) in &ed.primes {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &e in exps {
            *counts.entry(e).or_default() += 1;
        }
        let mut h = Vec::new();
        for (&e, &c) in &counts {
            if c % 2 != 0 {
                return Ok(None);
            }
            for _ in 0..c / 2 {
                h.push(e);
            }
        }
        h.sort_unstable_by(|x, y| y.cmp(x));
        half.insert(p, h);
    }
    Ok(Some(FgAbelianGroup::from_elementary(&ElementaryDivisors {
        rank: g.rank() / 2,
        primes: half,
    })))
}

/// Does A^(+I) embed in B? Both finite. Per prime p and every exponent
/// e >= 1, I copies need I * #{cyclic p-factors of A of order >= p^e}
/// slots among the cyclic p-factors of B of order >= p^e.
pub fn embeds_power(a: &FgAbelianGroup, copies: usize, b: &FgAbelianGroup) -> Result<bool> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InfiniteGroup);
    }
    if copies == 0 || a.is_trivial() {
        return Ok(true);
    }
    let ea = a.elementary_divisors()?;
    let eb = b.elementary_divisors()?;
    for (p, exps_a) in &ea.primes {
        let empty = Vec::new();
        let exps_b = eb.primes.get(p).unwrap_or(&empty);
        let max_e = exps_a.iter().copied().max().unwrap_or(0);
        for e in 1..=max_e {
            let need = copies * exps_a.iter().filter(|&&x| x >= e).count();
            let have = exps_b.iter().filter(|&&x| x >= e).count();
            if need > have {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All isomorphism classes of quotients of a finite G (equal to its subgroup
/// classes by duality), deduplicated by canonical form.
pub fn enumerate_quotients(g: &FgAbelianGroup, cap: u128) -> Result<Vec<FgAbelianGroup>> {
    if !g.is_finite() {
        return Err(Error::InfiniteGroup);
    }
    let order = g
        .order()
        .unwrap()
        .to_u128()
        .ok_or(Error::InfiniteGroup)?;
    if order > cap {
        return Err(Error::CapExceeded { order, cap });
    }
    let ed = g.elementary_divisors()?;
    // per prime: all partitions mu with mu_i <= lambda_i componentwise
    let mut per_prime: Vec<(u64, Vec<Vec<u32>>)> = Vec::new();
    for (&p, lambda) in &ed.primes {
        let mut subs = Vec::new();
        sub_partitions(lambda, 0, u32::MAX, &mut Vec::new(), &mut subs);
        per_prime.push((p, subs));
    }
    // cross product over primes
    let mut out: Vec<FgAbelianGroup> = vec![FgAbelianGroup::trivial()];
    for (p, subs) in per_prime {
        let mut next = Vec::new();
        for base in &out {
            for mu in &subs {
                let mut ed2 = base.elementary_divisors()?;
                if !mu.is_empty() {
                    ed2.primes.insert(p, mu.clone());
                }
                next.push(FgAbelianGroup::from_elementary(&ed2));
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn sub_partitions(
    lambda: &[u32],
    idx: usize,
    max_allowed: u32,
    cur: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if idx == lambda.len() {
        out.push(cur.iter().copied().filter(|&e| e > 0).collect());
        return;
    }
    let hi = lambda[idx].min(max_allowed);
    for e in (0..=hi).rev() {
        cur.push(e);
        sub_partitions(lambda, idx + 1, e, cur, out);
        cur.pop();
        if e == 0 {
            break; // once a zero is chosen, the rest are zero (non-increasing)
        }
    }
}

/// Parse a group spec string: "[4,2]" (invariant factors), "Z:5" (cyclic),
/// "Z^2" or "Z^2+[4,2]" (free part), or "trivial"/"0".
pub fn parse_group_spec(spec: &str) -> Result<FgAbelianGroup> {
    let s = spec.trim();
    if s.is_empty() || s == "trivial" || s == "0" {
        return Ok(FgAbelianGroup::trivial());
    }
    if let Some(n) = s.strip_prefix("Z:") {
        let n: u64 = n
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad cyclic spec `{s}`")))?;
        return Ok(FgAbelianGroup::cyclic(n));
    }
    let (rank, rest) = if let Some(r) = s.strip_prefix("Z^") {
        let (num, rest) = match r.split_once('+') {
            Some((a, b)) => (a, Some(b)),
            None => (r, None),
        };
        let rank: usize = num
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad rank in `{s}`")))?;
        (rank, rest)
    } else if s == "Z" {
        (1, None)
    } else {
        (0, Some(s))
    };
    let mut factors: Vec<u64> = Vec::new();
    if let Some(rest) = rest {
        let inner = rest
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidParams(format!("bad group spec `{s}`")))?;
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                let d: u64 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad factor `{part}` in `{s}`")))?;
                if d > 1 {
                    factors.push(d);
                }
            }
        }
    }
    // accept factors in any order; canonicalize through elementary divisors
    let raw = FgAbelianGroup {
        rank,
        factors: factors.iter().map(|&d| BigInt::from(d)).collect(),
    };
    let ed = raw.elementary_divisors()?;
    Ok(FgAbelianGroup::from_elementary(&ed))
}

impl FgAbelianGroup {
    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc::Canonical {
            rank: self.rank,
            factors: self.factors_u64(),
        }
    }

    pub fn from_doc(doc: &GroupDoc) -> Result<Self> {
        match doc {
            GroupDoc::Canonical { rank, factors } => {
                let raw = FgAbelianGroup {
                    rank: *rank,
                    factors: factors.iter().filter(|&&d| d > 1).map(|&d| BigInt::from(d)).collect(),
                };
                let ed = raw.elementary_divisors()?;
                Ok(FgAbelianGroup::from_elementary(&ed))
            }
            GroupDoc::Presented {
                generators,
                relations,
            } => {
                let mut rows = relations.clone();
                if rows.iter().any(|r| r.len() != *generators) {
                    return Err(Error::InvalidParams(
                        "relation width does not match generator count".into(),
                    ));
                }
                if rows.is_empty() {
                    rows.push(vec![0; *generators]);
                }
                Ok(group_from_relations(&IntMatrix::from_i64(&rows)))
            }
        }
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = GroupDoc::deserialize(d)?;
        FgAbelianGroup::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(rank: usize, factors: &[u64]) -> FgAbelianGroup {
        FgAbelianGroup::from_invariants_u64(rank, factors).unwrap()
    }

    #[test]
    fn relations_examples() {
        // {4a = 0, 2a - 2b = 0, 2a = 0} -> Z2 + Z2
        let rel = IntMatrix::from_i64(&[vec![4, 0], vec![2, -2], vec![2, 0]]);
        assert_eq!(group_from_relations(&rel), grp(0, &[2, 2]));
        // empty relations on 2 generators -> Z + Z
        let rel = IntMatrix::from_i64(&[vec![0, 0]]);
        assert_eq!(group_from_relations(&rel), grp(2, &[]));
        // binary icosahedral abelianized: {-s + 2t = 0, 3s - 5t = 0} -> trivial
        let rel = IntMatrix::from_i64(&[vec![-1, 2], vec![3, -5]]);
        assert!(group_from_relations(&rel).is_trivial());
    }

    #[test]
    fn tensor_examples() {
        let g = grp(0, &[2, 4]);
        assert_eq!(tensor_zp(&g, 2).unwrap(), 2);
        assert_eq!(tensor_zp(&g, 3).unwrap(), 0);
        assert!(matches!(tensor_zp(&g, 4), Err(Error::NotPrime(4))));
        // additivity under direct sum
        let h = grp(1, &[3]);
        let s = g.direct_sum(&h).unwrap();
        assert_eq!(
            tensor_zp(&s, 2).unwrap(),
            tensor_zp(&g, 2).unwrap() + tensor_zp(&h, 2).unwrap()
        );
    }

    #[test]
    fn ext_and_hom() {
        assert_eq!(ext1_torsion(&grp(1, &[4])), grp(0, &[4]));
        assert!(ext1_torsion(&grp(3, &[])).is_trivial());
        assert_eq!(hom_ext_zp(&grp(0, &[2, 2]), 2).unwrap(), (2, 2));
        assert_eq!(hom_ext_zp(&grp(1, &[]), 2).unwrap(), (1, 0));
    }

    #[test]
    fn order_examples() {
        assert_eq!(FgAbelianGroup::trivial().order().unwrap(), BigInt::one());
        assert_eq!(grp(0, &[2, 4]).order().unwrap(), BigInt::from(8));
        assert!(grp(1, &[2]).order().is_none());
    }

    #[test]
    fn direct_double_examples() {
        assert_eq!(
            is_direct_double(&grp(0, &[2, 2])).unwrap(),
            Some(grp(0, &[2]))
        );
        assert_eq!(is_direct_double(&grp(0, &[2, 4])).unwrap(), None);
        assert_eq!(
            is_direct_double(&FgAbelianGroup::trivial()).unwrap(),
            Some(FgAbelianGroup::trivial())
        );
        // G + G is always a double, and the halving round-trips
        let g = grp(1, &[3, 6]);
        let gg = g.direct_sum(&g).unwrap();
        let half = is_direct_double(&gg).unwrap().unwrap();
        assert_eq!(half, g);
    }

    #[test]
    fn embeds_power_examples() {
        let z2 = grp(0, &[2]);
        let klein = grp(0, &[2, 2]);
        let z8 = grp(0, &[8]);
        assert!(embeds_power(&z2, 2, &klein).unwrap());
        assert!(!embeds_power(&z2, 3, &klein).unwrap());
        assert!(!embeds_power(&z2, 2, &z8).unwrap()); // unique order-2 subgroup
        assert!(embeds_power(&FgAbelianGroup::trivial(), 100, &z8).unwrap());
        assert!(matches!(
            embeds_power(&grp(1, &[]), 1, &z8),
            Err(Error::InfiniteGroup)
        ));
    }

    #[test]
    fn quotient_enumeration_examples() {
        let q = enumerate_quotients(&grp(0, &[4]), 1024).unwrap();
        assert_eq!(q, vec![FgAbelianGroup::trivial(), grp(0, &[2]), grp(0, &[4])]);
        let q = enumerate_quotients(&grp(0, &[2, 2]), 1024).unwrap();
        assert_eq!(
            q,
            vec![FgAbelianGroup::trivial(), grp(0, &[2]), grp(0, &[2, 2])]
        );
        let q = enumerate_quotients(&grp(0, &[2, 4]), 1024).unwrap();
        assert_eq!(q.len(), 5);
        assert!(q.contains(&grp(0, &[4])));
        assert!(q.contains(&grp(0, &[2, 2])));
        assert!(matches!(
            enumerate_quotients(&grp(0, &[2048]), 1024),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn elementary_round_trip() {
        let g = grp(2, &[2, 6, 12]);
        let ed = g.elementary_divisors().unwrap();
        assert_eq!(FgAbelianGroup::from_elementary(&ed), g);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_group_spec("[4,2]").unwrap(), grp(0, &[2, 4]));
        assert_eq!(parse_group_spec("Z:5").unwrap(), grp(0, &[5]));
        assert_eq!(parse_group_spec("trivial").unwrap(), FgAbelianGroup::trivial());
        assert_eq!(parse_group_spec("Z^2").unwrap(), grp(2, &[]));
        assert_eq!(parse_group_spec("Z^1+[2]").unwrap(), grp(1, &[2]));
        assert_eq!(parse_group_spec("Z").unwrap(), grp(1, &[]));
    }
}
