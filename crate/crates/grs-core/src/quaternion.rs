//! Finite subgroups of the unit quaternions with exact coefficients.
//!
//! A unit quaternion q = w + xi + yj + zk is stored in Cayley-Dickson form
//! q = a + b*j with a = w + xi and b = y + zi lying in a cyclotomic field;
//! equivalently the SU(2) matrix [[a, -conj(b)], [b, conj(a)]]. Closure
//! detection and the unit-norm check are exact.

use std::collections::HashMap;

use crate::cyclotomic::{Cyc, CycCtx};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quat {
    pub a: Cyc,
    pub b: Cyc,
}

impl Quat {
    pub fn one(ctx: &CycCtx) -> Quat {
        Quat {
            a: ctx.from_i64(1),
            b: ctx.zero(),
        }
    }

    pub fn mul(&self, other: &Quat, ctx: &CycCtx) -> Quat {
        // [[a1,-c(b1)],[b1,c(a1)]] * [[a2,-c(b2)],[b2,c(a2)]]
        let a = ctx.sub(
            &ctx.mul(&self.a, &other.a),
            &ctx.mul(&ctx.conj(&self.b), &other.b),
        );
        let b = ctx.add(
            &ctx.mul(&self.b, &other.a),
            &ctx.mul(&ctx.conj(&self.a), &other.b),
        );
        Quat { a, b }
    }

    /// Inverse of a unit quaternion: (conj(a), -b).
    pub fn inv(&self, ctx: &CycCtx) -> Quat {
        Quat {
            a: ctx.conj(&self.a),
            b: ctx.neg(&self.b),
        }
    }

    /// |a|^2 + |b|^2 == 1, checked exactly.
    pub fn is_unit(&self, ctx: &CycCtx) -> bool {
        let n = ctx.add(
            &ctx.mul(&self.a, &ctx.conj(&self.a)),
            &ctx.mul(&self.b, &ctx.conj(&self.b)),
        );
        ctx.is_one(&n)
    }

    pub fn is_one(&self, ctx: &CycCtx) -> bool {
        ctx.is_one(&self.a) && ctx.is_zero(&self.b)
    }
}

/// A closed finite quaternion group with its multiplication table.
#[derive(Debug)]
pub struct QuaternionGroupTable {
    pub ctx: CycCtx,
    pub elements: Vec<Quat>,
    /// table[i][j] = index of elements[i] * elements[j]
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

/// Generate the subgroup by closure; errors if the closure exceeds
/// 10x the expected order.
pub fn closure(ctx: CycCtx, generators: &[Quat], expected_order: usize) -> Result<QuaternionGroupTable> {
    let limit = expected_order.saturating_mul(10);
    let mut elements: Vec<Quat> = vec![Quat::one(&ctx)];
    let mut index: HashMap<Quat, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    for g in generators {
        if !g.is_unit(&ctx) {
            return Err(Error::InvalidParams(
                "generator is not a unit quaternion".into(),
            ));
        }
        if !index.contains_key(g) {
            index.insert(g.clone(), elements.len());
            elements.push(g.clone());
        }
    }
    let mut frontier: Vec<usize> = (0..elements.len()).collect();
    while let Some(i) = frontier.pop() {
        for g in generators {
            let prod = elements[i].mul(g, &ctx);
            if !index.contains_key(&prod) {
                if elements.len() >= limit {
                    return Err(Error::ClosureOverflow {
                        expected: expected_order,
                        limit,
                    });
                }
                index.insert(prod.clone(), elements.len());
                frontier.push(elements.len());
                elements.push(prod);
            }
        }
    }
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = elements[i].mul(&elements[j], &ctx);
            table[i][j] = *index
                .get(&prod)
                .ok_or_else(|| Error::InvalidParams("set not closed under product".into()))?;
        }
    }
    let identity = (0..n)
        .find(|&i| elements[i].is_one(&ctx))
        .expect("identity in closure");
    Ok(QuaternionGroupTable {
        ctx,
        elements,
        table,
        identity,
    })
}

impl QuaternionGroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        (0..self.order())
            .find(|&j| self.table[i][j] == self.identity)
            .expect("group element has an inverse")
    }

    /// Indices of the commutator subgroup [G, G].
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let n = self.order();
        let mut in_set = vec![false; n];
        in_set[self.identity] = true;
        let mut members = vec![self.identity];
        let mut frontier = Vec::new();
        for g in 0..n {
            for h in 0..n {
                let gi = self.inverse_of(g);
                let hi = self.inverse_of(h);
                let c = self.table[self.table[self.table[gi][hi]][g]][h];
                if !in_set[c] {
                    in_set[c] = true;
                    members.push(c);
                    frontier.push(c);
                }
            }
        }
        // close under multiplication
        while let Some(x) = frontier.pop() {
            let snapshot: Vec<usize> = members.clone();
            for &y in &snapshot {
                for &p in &[self.table[x][y], self.table[y][x]] {
                    if !in_set[p] {
                        in_set[p] = true;
                        members.push(p);
                        frontier.push(p);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Multiplicative order of element i.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1usize;
        let mut acc = i;
        while acc != self.identity {
            acc = self.table[acc][i];
            k += 1;
        }
        k
    }

    /// Orders of the elements of the quotient G / N (N normal), via cosets.
    /// Returns the multiset of coset orders.
    pub fn quotient_orders(&self, normal: &[usize]) -> Vec<usize> {
        let n = self.order();
        let in_normal: Vec<bool> = {
            let mut v = vec![false; n];
            for &x in normal {
                v[x] = true;
            }
            v
        };
        // coset id of element = smallest element index in its coset g*N
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let rep = reps.len();
            reps.push(g);
            for &x in normal {
                coset_of[self.table[g][x]] = rep;
            }
        }
        // order of coset gN = least k with g^k in N
        let mut orders = Vec::with_capacity(reps.len());
        for &g in &reps {
            let mut k = 1usize;
            let mut acc = g;
            while !in_normal[acc] {
                acc = self.table[acc][g];
                k += 1;
            }
            orders.push(k);
        }
        orders
    }

    pub fn all_units(&self) -> bool {
        self.elements.iter().all(|q| q.is_unit(&self.ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q8() -> QuaternionGroupTable {
        let ctx = CycCtx::new(4);
        let i = Quat {
            a: ctx.root_pow(1),
            b: ctx.zero(),
        };
        let j = Quat {
            a: ctx.zero(),
            b: ctx.from_i64(1),
        };
        closure(ctx, &[i, j], 8).unwrap()
    }

    #[test]
    fn q8_closure() {
        let g = q8();
        assert_eq!(g.order(), 8);
        assert!(g.all_units());
        // element orders: 1, one element of order 2 (-1), six of order 4
        let mut orders: Vec<usize> = (0..8).map(|i| g.element_order(i)).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn q8_commutators() {
        let g = q8();
        let c = g.commutator_subgroup();
        assert_eq!(c.len(), 2); // {1, -1}
        let orders = g.quotient_orders(&c);
        // quotient Z2 + Z2: orders {1, 2, 2, 2}
        let mut o = orders.clone();
        o.sort_unstable();
        assert_eq!(o, vec![1, 2, 2, 2]);
    }

    #[test]
    fn cyclic_six() {
        let ctx = CycCtx::new(6);
        let z = Quat {
            a: ctx.root_pow(1),
            b: ctx.zero(),
        };
        let g = closure(ctx, &[z], 6).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.commutator_subgroup().len(), 1);
    }

    #[test]
    fn closure_overflow_detected() {
        let ctx = CycCtx::new(4);
        let i = Quat {
            a: ctx.root_pow(1),
            b: ctx.zero(),
        };
        let j = Quat {
            a: ctx.zero(),
            b: ctx.from_i64(1),
        };
        assert!(matches!(
            closure(ctx, &[i, j], 0),
            Err(Error::ClosureOverflow { .. })
        ));
    }
}
