//! p-th power residue characters at auxiliary degree-one primes.
//!
//! For a prime Q of degree one with N(Q) = q = 1 mod p, x -> res(x)^((q-1)/p) is a
//! character of F^x / (F^x)^p on Q-units. Full rank of the character matrix on a finite
//! set of elements certifies their independence modulo p-th powers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::int::is_prime_u64;
use crate::arith::matmod::MatModM;
use crate::error::{Error, Result};
use crate::numfield::field::{FieldElement, NumberField};
use crate::numfield::prime::{dlog_mu_p, factor_prime, res_pow, residue_unit, PrimeIdeal};

/// Integer whose prime divisors are exactly the primes where some element fails to be a unit.
fn support_integer(nf: &NumberField, elems: &[FieldElement]) -> BigInt {
    let mut acc = BigInt::one();
    for a in elems {
        let n = nf.norm(&FieldElement { num: a.num.clone(), den: BigInt::one() }).to_integer();
        acc *= if n.is_zero() { BigInt::one() } else { n };
        acc *= &a.den;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct CharacterSet {
    pub p: u64,
    /// Each prime with the residue of the chosen primitive p-th root of unity.
    pub primes: Vec<(PrimeIdeal, Vec<u64>)>,
    next_q: u64,
}

impl CharacterSet {
    /// An empty set whose dlog base is the residue of `zeta_p`.
    pub fn empty(p: u64) -> Self {
        CharacterSet { p, primes: Vec::new(), next_q: 2 * p + 1 }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Add `count` further primes at which every element of `avoid` is a unit.
    pub fn extend(&mut self, nf: &NumberField, zeta_p: &FieldElement, avoid: &[FieldElement], count: usize) -> Result<()> {
        let mut bad = support_integer(nf, avoid);
        bad *= &nf.index;
        bad *= support_integer(nf, std::slice::from_ref(zeta_p));
        let target = self.primes.len() + count;
        while self.primes.len() < target {
            let q = self.next_q;
            self.next_q += 1;
            if q % self.p != 1 || !is_prime_u64(q) || (&bad % q).is_zero() {
                continue;
            }
            for pr in factor_prime(nf, &BigInt::from(q))? {
                if pr.f == 1 && pr.e == 1 {
                    let z = residue_unit(nf, &pr, zeta_p)?;
                    self.primes.push((pr, z));
                }
            }
            if self.next_q > 1 << 40 {
                return Err(Error::Certification("ran out of auxiliary primes".into()));
            }
        }
        self.primes.truncate(target);
        Ok(())
    }

    /// Character vector of an element that is a unit at every auxiliary prime.
    pub fn eval(&self, nf: &NumberField, a: &FieldElement) -> Result<Vec<u64>> {
        self.primes
            .iter()
            .map(|(pr, z)| {
                let r = residue_unit(nf, pr, a)?;
                dlog_mu_p(pr, &r, z, self.p)
            })
            .collect()
    }

    pub fn matrix(&self, nf: &NumberField, elems: &[FieldElement]) -> Result<MatModM> {
        let rows: Vec<Vec<u64>> = elems.iter().map(|a| self.eval(nf, a)).collect::<Result<_>>()?;
        Ok(MatModM::from_u64_rows(self.p, &rows, self.primes.len()))
    }
}

/// Characters adequate for `elems`: grows the set until the matrix rank stops moving
/// for `patience` consecutive primes. Returns the set and the rank reached.
pub fn characters_for(
    nf: &NumberField,
    p: u64,
    zeta_p: &FieldElement,
    elems: &[FieldElement],
    patience: usize,
) -> Result<(CharacterSet, usize)> {
    let mut cs = CharacterSet::empty(p);
    let k = elems.len();
    let mut rank = 0;
    let mut stale = 0;
    while rank < k && stale < patience {
        cs.extend(nf, zeta_p, elems, 1)?;
        let r = cs.matrix(nf, elems)?.rank()?;
        if r > rank {
            rank = r;
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Ok((cs, rank))
}

/// True when some degree-one prime q = 1 mod p shows that `a` is not a p-th power.
/// Only looks at `budget` primes; `false` is inconclusive.
pub fn witness_non_power(nf: &NumberField, a: &FieldElement, p: u64, budget: usize) -> Result<bool> {
    let bad = support_integer(nf, std::slice::from_ref(a)) * &nf.index;
    let mut seen = 0;
    let mut q = p + 1;
    while seen < budget {
        q += 1;
        if q % p != 1 || !is_prime_u64(q) || (&bad % q).is_zero() {
            continue;
        }
        for pr in factor_prime(nf, &BigInt::from(q))? {
            if pr.f != 1 || pr.e != 1 {
                continue;
            }
            seen += 1;
            let r = residue_unit(nf, &pr, a)?;
            let e = (pr.norm() - 1u32) / BigUint::from(p);
            if res_pow(&pr, &r, &e) != vec![1] {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_units_of_qzeta9_are_independent() {
        let k = NumberField::cyclotomic(9).unwrap();
        let z = k.theta();
        let zeta3 = k.pow_u(&z, 3);
        let mut elems = vec![k.neg(&z)];
        for a in [1u64, 2, 4] {
            elems.push(k.sub(&k.one(), &k.pow_u(&z, a)));
        }
        let (_, r) = characters_for(&k, 3, &zeta3, &elems, 20).unwrap();
        assert_eq!(r, 4);
        // Adding a cube leaves the rank unchanged.
        elems.push(k.pow_u(&k.elem(&[2, 1]), 3));
        let (_, r) = characters_for(&k, 3, &zeta3, &elems, 20).unwrap();
        assert_eq!(r, 4);
    }

    #[test]
    fn non_powers_are_witnessed() {
        let k = NumberField::cyclotomic(3).unwrap();
        assert!(witness_non_power(&k, &k.theta(), 3, 10).unwrap());
        assert!(witness_non_power(&k, &k.from_int(7), 3, 10).unwrap());
        assert!(!witness_non_power(&k, &k.pow_u(&k.elem(&[1, 1, 0]), 3), 3, 10).unwrap());
    }
}
