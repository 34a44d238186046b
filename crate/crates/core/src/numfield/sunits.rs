//! S-unit generators and their certification.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::int::factor_integer;
use crate::error::{Error, Result};
use crate::numfield::characters::{characters_for, CharacterSet};
use crate::numfield::field::{FieldElement, NumberField};
use crate::numfield::prime::{factor_principal, PrimeIdeal};
use crate::numfield::pthroot::is_pth_power;

#[derive(Clone, Debug)]
pub struct SUnitData {
    /// Generator of the torsion subgroup.
    pub torsion: FieldElement,
    pub torsion_order: u64,
    /// mu_{p^n_F} is the p-power torsion.
    pub n_f: u32,
    pub generators: Vec<FieldElement>,
    pub s: Vec<PrimeIdeal>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum Saturation {
    /// Character matrix of full rank on torsion and generators.
    CertifiedCharacters,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct SUnitReport {
    pub rank: usize,
    pub expected_rank: usize,
    pub n_f: u32,
    pub independent: bool,
    pub saturation: Saturation,
    pub character_primes: Vec<u64>,
}

impl SUnitData {
    /// Torsion followed by the generators: a basis of U^S / (U^S)^p.
    pub fn basis(&self) -> Vec<FieldElement> {
        let mut v = vec![self.torsion.clone()];
        v.extend(self.generators.iter().cloned());
        v
    }

    /// A primitive p-th root of unity, torsion^(order/p).
    pub fn zeta_p(&self, nf: &NumberField, p: u64) -> Result<FieldElement> {
        if self.torsion_order % p != 0 {
            return Err(Error::MuPNotContained);
        }
        Ok(nf.pow_u(&self.torsion, self.torsion_order / p))
    }

    /// Exponent vector of u over (torsion, generators) modulo p, if u lies in U^S (F^x)^p.
    /// Solved on characters; the residual is tested exactly.
    pub fn coordinates_mod_p(&self, nf: &NumberField, p: u64, cs: &CharacterSet, u: &FieldElement) -> Result<Option<Vec<u64>>> {
        let m = cs.matrix(nf, &self.basis())?;
        let target = cs.eval(nf, u)?;
        let Some(c) = m.solve_left(&target)? else { return Ok(None) };
        let mut rest = u.clone();
        for (b, &e) in self.basis().iter().zip(&c) {
            if e != 0 {
                rest = nf.div(&rest, &nf.pow_u(b, e))?;
            }
        }
        Ok(is_pth_power(nf, &rest, p)?.map(|_| c))
    }
}

fn prime_divisors(n: u64) -> Vec<u64> {
    factor_integer(&BigInt::from(n)).into_iter().map(|(q, _)| u64::try_from(&q).unwrap()).collect()
}

/// Certify candidate S-units: support inside S, torsion order, Dirichlet rank, and
/// independence plus p-saturation through a full-rank character matrix.
pub fn validate_sunits(nf: &NumberField, p: u64, data: &SUnitData) -> Result<SUnitReport> {
    for (i, g) in data.generators.iter().enumerate() {
        for (pr, _) in factor_principal(nf, g)? {
            if !data.s.contains(&pr) {
                return Err(Error::NotSUnit(i));
            }
        }
    }
    let w = data.torsion_order;
    if nf.pow_u(&data.torsion, w) != nf.one() || prime_divisors(w).iter().any(|l| nf.pow_u(&data.torsion, w / l) == nf.one()) {
        return Err(Error::Certification(format!("torsion generator does not have order {w}")));
    }
    let mut n_f = 0;
    let mut t = w;
    while t % p == 0 {
        t /= p;
        n_f += 1;
    }
    if n_f != data.n_f {
        return Err(Error::Certification(format!("n_F is {n_f}, bundle says {}", data.n_f)));
    }
    let (r1, r2) = nf.signature;
    let expected = r1 + r2 + data.s.len() - 1;
    let k = data.generators.len();
    if k > expected {
        return Err(Error::DependentUnits);
    }
    if k < expected {
        return Err(Error::Certification(format!("{k} generators for S-unit rank {expected}")));
    }
    let zeta_p = data.zeta_p(nf, p)?;
    let basis = data.basis();
    let (cs, rank) = characters_for(nf, p, &zeta_p, &basis, 24)?;
    if rank < basis.len() {
        // Locate the p-th power that spoils the rank.
        let m = cs.matrix(nf, &basis)?;
        for c in m.left_kernel()? {
            let mut x = nf.one();
            for (b, &e) in basis.iter().zip(&c) {
                x = nf.mul(&x, &nf.pow_u(b, e));
            }
            if is_pth_power(nf, &x, p)?.is_some() {
                return Err(Error::Unsaturated);
            }
        }
        return Err(Error::Certification("character rank deficit without a p-th power witness".into()));
    }
    Ok(SUnitReport {
        rank: k,
        expected_rank: expected,
        n_f,
        independent: true,
        saturation: Saturation::CertifiedCharacters,
        character_primes: cs.primes.iter().map(|(pr, _)| pr.q).collect(),
    })
}

/// The standard cyclotomic S-units of Q(zeta_m), m = p^k: torsion zeta_{2m} and
/// 1 - zeta^a for a in [1, m/2) prime to p, S the prime above p.
pub fn cyclotomic_sunits(nf: &NumberField, m: u64, p: u64) -> Result<SUnitData> {
    let z = nf.theta();
    let torsion = nf.neg(&z);
    let torsion_order = 2 * m;
    let mut n_f = 0;
    let mut t = m;
    while t % p == 0 {
        t /= p;
        n_f += 1;
    }
    let generators = (1..m.div_ceil(2)).filter(|a| a % p != 0).map(|a| nf.sub(&nf.one(), &nf.pow_u(&z, a))).collect();
    let s = crate::numfield::prime::factor_prime(nf, &BigInt::from(p))?;
    Ok(SUnitData { torsion, torsion_order, n_f, generators, s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_sunits_certify() {
        for (m, p, rank) in [(3u64, 3u64, 1usize), (9, 3, 3), (5, 5, 2)] {
            let k = NumberField::cyclotomic(m).unwrap();
            let d = cyclotomic_sunits(&k, m, p).unwrap();
            let r = validate_sunits(&k, p, &d).unwrap();
            assert_eq!(r.rank, rank);
            assert_eq!(r.saturation, Saturation::CertifiedCharacters);
        }
    }

    #[test]
    fn bad_sets_are_rejected() {
        let k = NumberField::cyclotomic(3).unwrap();
        let mut d = cyclotomic_sunits(&k, 3, 3).unwrap();
        let u = d.generators[0].clone();
        d.generators.push(k.mul(&u, &u));
        assert!(matches!(validate_sunits(&k, 3, &d), Err(Error::DependentUnits)));
        d.generators = vec![k.pow_u(&u, 3)];
        assert!(matches!(validate_sunits(&k, 3, &d), Err(Error::Unsaturated)));
        d.generators = vec![k.from_int(7)];
        assert!(matches!(validate_sunits(&k, 3, &d), Err(Error::NotSUnit(0))));
    }
}
