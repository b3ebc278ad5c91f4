//! Independent oracles shared by the integration tests. Everything here is
//! deliberately naive — different algorithms and different code paths from
//! the library — so agreement is meaningful.

#![allow(dead_code)]

use std::collections::BTreeMap;

use grs_core::abelian::{ElementaryDivisors, FgAbelianGroup};
use grs_core::metric::SpaceDocument;

/// All-pairs shortest paths by Floyd-Warshall over the document's edge list,
/// keyed by the same lexicographic id order the library uses.
pub fn floyd_warshall(doc: &SpaceDocument) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut ids: Vec<String> = doc.nodes.iter().map(|n| n.id.clone()).collect();
    ids.sort();
    let idx = |id: &str| ids.iter().position(|x| x == id).unwrap();
    let n = ids.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in &doc.edges {
        let (a, b) = (idx(&e.a), idx(&e.b));
        if e.len < d[a][b] {
            d[a][b] = e.len;
            d[b][a] = e.len;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    (ids, d)
}

/// A finite abelian group as explicit tuples modulo the invariant factors.
#[derive(Debug, Clone)]
pub struct BruteGroup {
    pub moduli: Vec<u64>,
}

impl BruteGroup {
    pub fn from_fg(g: &FgAbelianGroup) -> BruteGroup {
        assert!(g.is_finite(), "brute-force oracle needs a finite group");
        BruteGroup {
            moduli: g.factors_u64(),
        }
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product::<u64>().max(1)
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &m in &self.moduli {
            let mut next = Vec::new();
            for e in &out {
                for v in 0..m {
                    let mut e2 = e.clone();
                    e2.push(v);
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&m, (&x, &y))| (x + y) % m)
            .collect()
    }

    pub fn scale(&self, k: u64, a: &[u64]) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(a)
            .map(|(&m, &x)| (x as u128 * k as u128 % m as u128) as u64)
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        let mut k = 1u64;
        let mut acc = a.to_vec();
        while acc.iter().any(|&x| x != 0) {
            acc = self.add(&acc, a);
            k += 1;
        }
        k
    }
}

/// dim_Fp(G tensor Z_p) by counting the p-torsion elements: their number is
/// p^dim.
pub fn tensor_dim_oracle(g: &FgAbelianGroup, p: u64) -> usize {
    let bg = BruteGroup::from_fg(g);
    let count = bg
        .elements()
        .iter()
        .filter(|e| bg.scale(p, e).iter().all(|&x| x == 0))
        .count() as u64;
    let mut dim = 0usize;
    let mut c = count;
    while c > 1 {
        assert_eq!(c % p, 0, "p-torsion count must be a power of p");
        c /= p;
        dim += 1;
    }
    dim
}

/// Does an injective homomorphism A -> B exist? Decided per prime (a finite
/// abelian group embeds iff each primary part embeds), with a DFS over the
/// images of the cyclic generators, pruned on partial injectivity. Results
/// are memoized per primary pair, since the oracle sweeps many group pairs
/// with the same primary components.
pub fn injective_hom_exists(a: &BruteGroup, b: &BruteGroup) -> bool {
    let mut a_primary: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &m in &a.moduli {
        for (p, e) in factorize(m) {
            a_primary.entry(p).or_default().push(p.pow(e));
        }
    }
    let mut b_primary: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &m in &b.moduli {
        for (p, e) in factorize(m) {
            b_primary.entry(p).or_default().push(p.pow(e));
        }
    }
    a_primary.into_iter().all(|(p, mut am)| {
        am.sort_unstable();
        let mut bm = b_primary.get(&p).cloned().unwrap_or_default();
        bm.sort_unstable();
        memoized_primary_embeds(&BruteGroup { moduli: am }, &BruteGroup { moduli: bm })
    })
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

type EmbedMemo = std::collections::HashMap<(Vec<u64>, Vec<u64>), bool>;

fn memoized_primary_embeds(a: &BruteGroup, b: &BruteGroup) -> bool {
    use std::cell::RefCell;
    thread_local! {
        static MEMO: RefCell<EmbedMemo> = RefCell::new(EmbedMemo::new());
    }
    let key = (a.moduli.clone(), b.moduli.clone());
    if let Some(&v) = MEMO.with(|m| m.borrow().get(&key).copied()).as_ref() {
        return v;
    }
    let v = injective_hom_search(a, b);
    MEMO.with(|m| m.borrow_mut().insert(key, v));
    v
}

fn injective_hom_search(a: &BruteGroup, b: &BruteGroup) -> bool {
    if a.order() > b.order() {
        return false;
    }
    let b_elems = b.elements();
    // every element of B gets a dense mixed-radix code, so a subgroup can be
    // held as a boolean table indexed by code
    let code = |e: &[u64]| code_of(b, e);
    // candidate images per generator: order divides the generator's modulus;
    // alongside each candidate, the code of its (modulus/p)-th multiple, whose
    // membership in the current image decides injectivity of the extension
    let candidates: Vec<Vec<(usize, usize)>> = a
        .moduli
        .iter()
        .map(|&m| {
            let p = factorize(m)
                .first()
                .map(|&(p, _)| p)
                .expect("primary moduli are prime powers > 1");
            (0..b_elems.len())
                .filter(|&i| b.scale(m, &b_elems[i]).iter().all(|&x| x == 0))
                .map(|i| (i, code(&b.scale(m / p, &b_elems[i]))))
                .collect()
        })
        .collect();

    // span: the image of the subgroup generated by the chosen prefix, as an
    // explicit element list plus a membership table. The partial map on the
    // first k generators is injective iff the span has full order, which holds
    // iff each new generator image has order exactly its modulus modulo the
    // previous span — one membership test per candidate.
    struct Search<'s> {
        a: &'s BruteGroup,
        b: &'s BruteGroup,
        b_elems: Vec<Vec<u64>>,
        candidates: Vec<Vec<(usize, usize)>>,
    }

    impl Search<'_> {
        fn dfs(&self, span: &[Vec<u64>], member: &[bool], k: usize) -> bool {
            if k == self.a.moduli.len() {
                return true;
            }
            let m = self.a.moduli[k];
            for &(c, witness) in &self.candidates[k] {
                if member[witness] {
                    continue;
                }
                // extend the span by the cosets span + j*c, j = 1..m
                let mut span2 = span.to_vec();
                let mut member2 = member.to_vec();
                for j in 1..m {
                    let jc = self.b.scale(j, &self.b_elems[c]);
                    for s in span.iter() {
                        let e = self.b.add(s, &jc);
                        member2[code_of(self.b, &e)] = true;
                        span2.push(e);
                    }
                }
                if self.dfs(&span2, &member2, k + 1) {
                    return true;
                }
            }
            false
        }
    }

    let zero = vec![0u64; b.moduli.len()];
    let mut member = vec![false; b_elems.len().max(1)];
    member[code(&zero)] = true;
    let search = Search {
        a,
        b,
        b_elems,
        candidates,
    };
    search.dfs(&[zero], &member, 0)
}

/// Dense mixed-radix code of an element of `b`, bijective onto 0..|b|.
fn code_of(b: &BruteGroup, e: &[u64]) -> usize {
    let mut c = 0usize;
    for (&m, &x) in b.moduli.iter().zip(e) {
        c = c * m as usize + x as usize;
    }
    c
}

/// Largest I such that A^I embeds in B; None means every I works (A trivial).
pub fn max_copies_oracle(ambient: &FgAbelianGroup, coker: &FgAbelianGroup) -> Option<u64> {
    if coker.is_trivial() {
        return None;
    }
    let b = BruteGroup::from_fg(ambient);
    let mut best = 0u64;
    let mut i = 1u64;
    loop {
        let mut moduli = Vec::new();
        for _ in 0..i {
            moduli.extend(coker.factors_u64());
        }
        let a = BruteGroup { moduli };
        if a.order() > b.order() || !injective_hom_exists(&a, &b) {
            break;
        }
        best = i;
        i += 1;
    }
    Some(best)
}

/// All finite abelian groups of the given order, via partitions of the
/// exponent of each prime.
pub fn abelian_groups_of_order(n: u64) -> Vec<FgAbelianGroup> {
    fn partitions(n: u32) -> Vec<Vec<u32>> {
        fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if n == 0 {
                out.push(cur.clone());
                return;
            }
            let mut k = max.min(n);
            while k >= 1 {
                cur.push(k);
                rec(n - k, k, cur, out);
                cur.pop();
                k -= 1;
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    let mut factorization: Vec<(u64, u32)> = Vec::new();
    let mut rem = n;
    let mut p = 2u64;
    while p * p <= rem {
        if rem.is_multiple_of(p) {
            let mut e = 0u32;
            while rem.is_multiple_of(p) {
                rem /= p;
                e += 1;
            }
            factorization.push((p, e));
        }
        p += 1;
    }
    if rem > 1 {
        factorization.push((rem, 1));
    }

    let mut combos: Vec<BTreeMap<u64, Vec<u32>>> = vec![BTreeMap::new()];
    for &(p, e) in &factorization {
        let parts = partitions(e);
        let mut next = Vec::new();
        for combo in &combos {
            for part in &parts {
                let mut c = combo.clone();
                c.insert(p, part.clone());
                next.push(c);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .map(|primes| FgAbelianGroup::from_elementary(&ElementaryDivisors { rank: 0, primes }))
        .collect()
}

/// Is G isomorphic to A + A for some A? Decided by trying every abelian
/// group of order sqrt(|G|).
pub fn direct_double_oracle(g: &FgAbelianGroup) -> Option<FgAbelianGroup> {
    let order = g.order()?.to_string().parse::<u64>().ok()?;
    let root = (order as f64).sqrt().round() as u64;
    if root * root != order {
        return None;
    }
    for a in abelian_groups_of_order(root) {
        if a.direct_sum(&a).ok()? == *g {
            return Some(a);
        }
    }
    None
}
