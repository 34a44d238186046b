//! Cohomology of a cyclic group G = <sigma> of order g on a finitely generated module
//! M = Z^k / R, with sigma acting on row vectors.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::arith::zlattice::{coordinates, hnf, index, left_kernel, ZMat};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub order: u64,
    pub gens: usize,
    pub relations: ZMat,
    /// x -> x * sigma.
    pub sigma: ZMat,
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicCohomology {
    #[serde(serialize_with = "crate::ser::bigint")]
    pub h1: BigInt,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub h2: BigInt,
}

impl CyclicCohomology {
    /// True when |H^2| / |H^1| = 1.
    pub fn herbrand_trivial(&self) -> bool {
        self.h1 == self.h2
    }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], cols: usize) -> ZMat {
    a.iter()
        .map(|r| (0..cols).map(|j| r.iter().zip(b).fold(BigInt::zero(), |s, (x, br)| s + x * &br[j])).collect())
        .collect()
}

fn identity(k: usize) -> ZMat {
    (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl CyclicModule {
    /// Checks that R is sigma-stable and sigma^g acts trivially on M.
    pub fn new(order: u64, gens: usize, relations: ZMat, sigma: ZMat) -> Result<Self> {
        if sigma.len() != gens || sigma.iter().any(|r| r.len() != gens) || relations.iter().any(|r| r.len() != gens) {
            return Err(Error::DimensionMismatch("cyclic module presentation".into()));
        }
        let m = CyclicModule { order, gens, relations, sigma };
        let h = m.rel_hnf();
        for r in mat_mul(&m.relations, &m.sigma, gens) {
            if coordinates(&h, &r).is_none() {
                return Err(Error::Certification("relations are not sigma-stable".into()));
            }
        }
        let mut pw = identity(gens);
        for _ in 0..order {
            pw = mat_mul(&pw, &m.sigma, gens);
        }
        for (i, r) in pw.iter().enumerate() {
            let mut d = r.clone();
            d[i] -= 1;
            if d.iter().any(|x| !x.is_zero()) && coordinates(&h, &d).is_none() {
                return Err(Error::Certification("sigma^g is not the identity on the module".into()));
            }
        }
        Ok(m)
    }

    fn rel_hnf(&self) -> ZMat {
        hnf(&self.relations, self.gens)
    }

    fn sigma_minus_one(&self) -> ZMat {
        let mut s = self.sigma.clone();
        for (i, r) in s.iter_mut().enumerate() {
            r[i] -= 1;
        }
        s
    }

    fn norm(&self) -> ZMat {
        let k = self.gens;
        let mut acc = identity(k);
        let mut pw = identity(k);
        for _ in 1..self.order {
            pw = mat_mul(&pw, &self.sigma, k);
            for (a, r) in acc.iter_mut().zip(&pw) {
                for (x, y) in a.iter_mut().zip(r) {
                    *x += y;
                }
            }
        }
        acc
    }

    /// {x in Z^k : x A in R}.
    fn preimage(&self, a: &[Vec<BigInt>]) -> ZMat {
        let k = self.gens;
        let mut stacked: ZMat = a.to_vec();
        stacked.extend(self.relations.iter().cloned());
        left_kernel(&stacked, k).into_iter().map(|r| r[..k].to_vec()).collect()
    }

    fn quotient(&self, sup: ZMat, sub_image: &[Vec<BigInt>]) -> Result<BigInt> {
        let mut sub: ZMat = sub_image.to_vec();
        sub.extend(self.relations.iter().cloned());
        let mut sup = sup;
        sup.extend(self.relations.iter().cloned());
        index(&sub, &sup, self.gens)?.ok_or_else(|| Error::Certification("cohomology group is infinite".into()))
    }

    /// |H^1| = [ker N : (sigma-1)M] and |H^2| = [M^G : NM].
    pub fn cohomology(&self) -> Result<CyclicCohomology> {
        let s1 = self.sigma_minus_one();
        let n = self.norm();
        let h1 = self.quotient(self.preimage(&n), &s1)?;
        let h2 = self.quotient(self.preimage(&s1), &n)?;
        Ok(CyclicCohomology { h1, h2 })
    }

    /// A random finite module: Z[G]^blocks modulo p^a and the G-orbits of a few random vectors.
    pub fn random_finite<R: Rng>(rng: &mut R, order: u64, blocks: usize, p: u64, a: u32) -> Result<Self> {
        let g = order as usize;
        let k = g * blocks;
        let sigma: ZMat = (0..k)
            .map(|i| {
                let (b, j) = (i / g, i % g);
                let t = b * g + (j + 1) % g;
                (0..k).map(|c| if c == t { BigInt::one() } else { BigInt::zero() }).collect()
            })
            .collect();
        let pa = BigInt::from(p).pow(a);
        let mut rels: ZMat = (0..k).map(|i| (0..k).map(|c| if c == i { pa.clone() } else { BigInt::zero() }).collect()).collect();
        for _ in 0..rng.gen_range(0..=blocks + 1) {
            let mut v: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
            for _ in 0..g {
                rels.push(v.clone());
                v = mat_mul(&[v], &sigma, k).pop().unwrap();
            }
        }
        Self::new(order, k, rels, sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zlattice::zmat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_and_induced_modules() {
        // Z with trivial action: H^1 = Hom(G, Z) = 0, H^2 = Z/g.
        let m = CyclicModule::new(3, 1, vec![], zmat(&[vec![1]])).unwrap();
        let c = m.cohomology().unwrap();
        assert_eq!((c.h1, c.h2), (BigInt::from(1), BigInt::from(3)));
        // Z[G] is cohomologically trivial.
        let m = CyclicModule::new(3, 3, vec![], zmat(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]])).unwrap();
        let c = m.cohomology().unwrap();
        assert_eq!((c.h1, c.h2), (BigInt::from(1), BigInt::from(1)));
        // Z/9 with sigma = 4: N = 3 and sigma - 1 = 3 have the same kernel and image.
        let m = CyclicModule::new(3, 1, zmat(&[vec![9]]), zmat(&[vec![4]])).unwrap();
        let c = m.cohomology().unwrap();
        assert_eq!((c.h1, c.h2), (BigInt::from(1), BigInt::from(1)));
        // Z/9 with trivial action: Hom(G, Z/9) and M/3M.
        let m = CyclicModule::new(3, 1, zmat(&[vec![9]]), zmat(&[vec![1]])).unwrap();
        let c = m.cohomology().unwrap();
        assert_eq!((c.h1, c.h2), (BigInt::from(3), BigInt::from(3)));
    }

    #[test]
    fn bad_presentations_are_rejected() {
        assert!(CyclicModule::new(3, 1, vec![], zmat(&[vec![2]])).is_err());
        assert!(CyclicModule::new(2, 2, zmat(&[vec![2, 0]]), zmat(&[vec![0, 1], vec![1, 0]])).is_err());
    }

    #[test]
    fn random_finite_modules_have_trivial_herbrand_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = CyclicModule::random_finite(&mut rng, 3, 2, 3, 2).unwrap();
            assert!(m.cohomology().unwrap().herbrand_trivial());
        }
    }
}
