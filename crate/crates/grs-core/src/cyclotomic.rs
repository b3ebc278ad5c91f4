//! Exact arithmetic in the cyclotomic field Q(zeta_m), elements represented
//! as polynomials in zeta of degree < phi(m), reduced modulo the m-th
//! cyclotomic polynomial. Canonical representatives make equality and
//! hashing structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field context: the modulus Phi_m and a power table for zeta^k.
#[derive(Debug, Clone)]
pub struct CycCtx {
    pub m: usize,
    /// Phi_m as monic integer polynomial, ascending coefficients.
    modulus: Vec<BigInt>,
    deg: usize,
    /// zeta^k reduced mod Phi_m, for k in 0..m.
    powers: Vec<Vec<BigRational>>,
}

/// An element of Q(zeta_m): coefficients of 1, zeta, ..., zeta^(deg-1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyc {
    pub coeffs: Vec<BigRational>,
}

fn cyclotomic_poly(m: usize) -> Vec<BigInt> {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, exact integer division
    let mut num = vec![BigInt::zero(); m + 1];
    num[0] = BigInt::from(-1);
    num[m] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        for i in 0..=dd {
            rem[k + i] -= &c * &den[i];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact poly division");
    quot
}

impl CycCtx {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let modulus = cyclotomic_poly(m);
        let deg = modulus.len() - 1;
        let mut ctx = CycCtx {
            m,
            modulus,
            deg,
            powers: Vec::new(),
        };
        let mut powers = Vec::with_capacity(m);
        for k in 0..m {
            let mut p = vec![BigRational::zero(); k + 1];
            p[k] = BigRational::one();
            powers.push(ctx.reduce(p));
        }
        ctx.powers = powers;
        ctx
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    fn reduce(&self, mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.len() > self.deg {
            let k = p.len() - 1;
            let c = p[k].clone();
            if !c.is_zero() {
                // subtract c * x^(k-deg) * Phi_m
                for i in 0..=self.deg {
                    let idx = k - self.deg + i;
                    let sub = &c * BigRational::from(self.modulus[i].clone());
                    p[idx] -= sub;
                }
            }
            p.pop();
        }
        p.resize(self.deg, BigRational::zero());
        p
    }

    pub fn zero(&self) -> Cyc {
        Cyc {
            coeffs: vec![BigRational::zero(); self.deg],
        }
    }

    pub fn from_rational(&self, r: BigRational) -> Cyc {
        let mut c = self.zero();
        c.coeffs[0] = r;
        c
    }

    pub fn from_i64(&self, n: i64) -> Cyc {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }

    /// n / d as a field element.
    pub fn ratio(&self, n: i64, d: i64) -> Cyc {
        self.from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// zeta^k (k taken mod m).
    pub fn root_pow(&self, k: usize) -> Cyc {
        Cyc {
            coeffs: self.powers[k % self.m].clone(),
        }
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut p = vec![BigRational::zero(); 2 * self.deg];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                p[i + j] += x * y;
            }
        }
        Cyc {
            coeffs: self.reduce(p),
        }
    }

    /// Complex conjugation: zeta -> zeta^(m-1).
    pub fn conj(&self, a: &Cyc) -> Cyc {
        let mut out = self.zero();
        for (k, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pw = &self.powers[(self.m - k % self.m) % self.m];
            for (i, p) in pw.iter().enumerate() {
                out.coeffs[i] += c * p;
            }
        }
        out
    }

    pub fn is_zero(&self, a: &Cyc) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self, a: &Cyc) -> bool {
        a.coeffs[0].is_one() && a.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// sqrt(5) = 1 + 2*(zeta_5 + zeta_5^4); requires 5 | m.
    pub fn sqrt5(&self) -> Cyc {
        assert!(self.m.is_multiple_of(5), "sqrt(5) needs a fifth root of unity");
        let k = self.m / 5;
        let z = self.root_pow(k);
        let z4 = self.root_pow(4 * k);
        let two = self.from_i64(2);
        self.add(
            &self.from_i64(1),
            &self.mul(&two, &self.add(&z, &z4)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_polys() {
        assert_eq!(cyclotomic_poly(1), vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(
            cyclotomic_poly(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        // Phi_8 = x^4 + 1
        let p8 = cyclotomic_poly(8);
        assert_eq!(p8.len(), 5);
        assert!(p8[0].is_one() && p8[4].is_one());
        // phi(20) = 8
        assert_eq!(cyclotomic_poly(20).len(), 9);
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let ctx = CycCtx::new(4);
        let i = ctx.root_pow(1);
        let sq = ctx.mul(&i, &i);
        assert_eq!(sq, ctx.from_i64(-1));
        // conj(i) = -i
        assert_eq!(ctx.conj(&i), ctx.neg(&i));
    }

    #[test]
    fn root_order() {
        let ctx = CycCtx::new(12);
        let z = ctx.root_pow(1);
        let mut acc = z.clone();
        for _ in 1..12 {
            assert!(!ctx.is_one(&acc));
            acc = ctx.mul(&acc, &z);
        }
        assert!(ctx.is_one(&acc));
    }

    #[test]
    fn sqrt5_squares_to_five() {
        let ctx = CycCtx::new(20);
        let r = ctx.sqrt5();
        assert_eq!(ctx.mul(&r, &r), ctx.from_i64(5));
        // sqrt(5) is real: fixed by conjugation
        assert_eq!(ctx.conj(&r), r);
    }
}
