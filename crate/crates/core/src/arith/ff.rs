//! Finite fields: prime fields of word size and small non-prime fields via log tables.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::int::{add_mod, inv_mod, is_prime_u64, mul_mod, sub_mod};
use crate::error::{Error, Result};

pub trait FiniteField: Clone + Debug + Send + Sync {
    type Elem: Copy + Eq + Ord + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree())
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn pow(&self, a: Self::Elem, e: &BigUint) -> Self::Elem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(r, r);
            if e.bit(i) {
                r = self.mul(r, a);
            }
        }
        r
    }

    /// The unique p-th root, a^(q/p).
    fn pth_root(&self, a: Self::Elem) -> Self::Elem {
        let e = self.order() / BigUint::from(self.characteristic());
        self.pow(a, &e)
    }
}

/// The prime field F_p for a word-size prime p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.p as i128) as u64
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn pth_root(&self, a: u64) -> u64 {
        a
    }
}

/// F_q with q = p^k small enough for Zech-style log tables (q <= 2^16).
///
/// Elements are encoded as integers whose base-p digits are the coefficients
/// with respect to the power basis of a primitive modulus.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u64,
    k: u32,
    q: u32,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::CompositeModulus(p));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= 1 << 16)
            .ok_or_else(|| Error::BadInput(format!("GF({p}^{k}) too large for tables")))?
            as u32;
        let k_us = k as usize;
        // Search monic degree-k polynomials for one whose root generates F_q^x.
        for tail in 0..(q as u64) {
            let mut modulus: Vec<u64> = (0..k_us).map(|i| (tail / p.pow(i as u32)) % p).collect();
            modulus.push(1);
            if modulus[0] == 0 && k > 1 {
                continue;
            }
            if let Some((exp, log)) = Self::tables(p, k_us, q, &modulus) {
                return Ok(GaloisField { p, k, q, modulus, exp, log });
            }
        }
        Err(Error::Certification(format!("no primitive polynomial for GF({p}^{k})")))
    }

    fn tables(p: u64, k: usize, q: u32, modulus: &[u64]) -> Option<(Vec<u32>, Vec<u32>)> {
        let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32;
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u64; k];
        cur[0] = 1;
        for i in 0..(q - 1) {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                return None;
            }
            log[code as usize] = i;
            exp[i as usize] = code;
            // cur <- cur * x mod modulus
            let top = cur[k - 1];
            for j in (1..k).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..k {
                cur[j] = (cur[j] + (p - modulus[j]) * top) % p;
            }
        }
        if encode(&cur) != 1 {
            return None;
        }
        Some((exp, log))
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn digits(&self, a: u32) -> Vec<u64> {
        let mut a = a as u64;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u64]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p + c % self.p) as u32
    }

    /// The primitive element x.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }
}

impl FiniteField for GaloisField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> u32 {
        self.k
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, x: i64) -> u32 {
        (x as i128).rem_euclid(self.p as i128) as u32
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u64> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&d)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[l as usize]
    }
    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q as u64 - 1;
        let l = (n - self.log[a as usize] as u64) % n;
        Some(self.exp[l as usize])
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }
    fn pow(&self, a: u32, e: &BigUint) -> u32 {
        if e.is_zero() {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = BigUint::from(self.q - 1);
        let l = (BigUint::from(self.log[a as usize]) * (e % &n)) % &n;
        self.exp[l.to_usize().unwrap()]
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn is_zero(&self, a: u32) -> bool {
        a == 0
    }
}

/// Convenience: `a^e` for a word-size exponent.
pub fn pow_u64<F: FiniteField>(f: &F, a: F::Elem, e: u64) -> F::Elem {
    f.pow(a, &BigUint::from(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn galois_field_axioms() {
        for (p, k) in [(2, 3), (3, 2), (5, 2), (7, 2), (2, 5)] {
            let f = GaloisField::new(p, k).unwrap();
            let q = f.size();
            for a in 0..q {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                // Frobenius is additive
                let b = (a * 7 + 3) % q;
                let fp = |x| pow_u64(&f, x, p);
                assert_eq!(fp(f.add(a, b)), f.add(fp(a), fp(b)));
            }
        }
    }

    #[test]
    fn prime_field_rejects_composite() {
        assert!(PrimeField::new(9).is_err());
        assert!(GaloisField::new(4, 2).is_err());
    }
}
